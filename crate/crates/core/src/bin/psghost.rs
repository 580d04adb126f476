fn main() {
    std::process::exit(psghost::cli::run(std::env::args_os()));
}
