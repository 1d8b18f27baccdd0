fn main() {
    std::process::exit(ptp::cli::main_with_args(std::env::args_os()));
}
