fn main() {
    std::process::exit(spinshift::cli::run(std::env::args_os()));
}
