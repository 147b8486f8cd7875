fn main() {
    std::process::exit(latori::cli::run_command(std::env::args_os()));
}
