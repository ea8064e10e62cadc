fn main() {
    std::process::exit(covlab_cli::run(std::env::args_os()));
}
