fn main() {
    std::process::exit(qaoa_girth::cli::run_from(std::env::args_os()));
}
