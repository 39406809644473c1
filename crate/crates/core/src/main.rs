fn main() {
    std::process::exit(bgw_core::cli::run(std::env::args_os()));
}
