fn main() {
    std::process::exit(quermass_cli::run(std::env::args_os()));
}
