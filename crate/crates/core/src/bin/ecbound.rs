fn main() {
    std::process::exit(ecbound::cli::run(std::env::args_os()));
}
