//! Model files: native JSON and Matrix Market directories.
//!
//! `cargo run --example load_models -- path/to/model.json` or a directory
//! holding A.mtx, B.mtx, C.mtx (and optionally D.mtx). Without an argument
//! the fixture is written to a temporary file and read back.

use ffmor::model::{load_model, save_model, ModelFormat};
use ffmor::{bt, fixtures};

fn main() -> ffmor::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("ffmor_example2.json");
            save_model(&fixtures::example2(), &p)?;
            p
        }
    };
    let m = load_model(&path, ModelFormat::detect(&path))?;
    println!("{}: n = {}, m = {}, p = {}, {:?}, {:?}", path.display(), m.n(), m.m(), m.p(), m.time_domain(), m.scalar_field());
    println!("stability margin {:.4e}", bt::stability_margin(&m)?);
    Ok(())
}
