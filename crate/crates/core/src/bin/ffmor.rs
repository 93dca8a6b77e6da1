fn main() {
    std::process::exit(ffmor::cli::run(std::env::args_os()));
}
