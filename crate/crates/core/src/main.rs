fn main() {
    std::process::exit(cinf_core::cli::main_with_args(std::env::args_os()));
}
