fn main() {
    std::process::exit(bezitrace::cli::run(std::env::args_os()));
}
