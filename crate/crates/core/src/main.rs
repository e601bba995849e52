fn main() {
    std::process::exit(qloc::harness::cli::cli_main(std::env::args_os()));
}
