fn main() {
    std::process::exit(uscode_cli::run(std::env::args_os()));
}
