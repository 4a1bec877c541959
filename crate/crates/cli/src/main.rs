fn main() {
    std::process::exit(glt_cli::run_from(std::env::args_os()));
}
