fn main() {
    std::process::exit(trapcat::cli::run(std::env::args_os()));
}
