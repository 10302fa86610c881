fn main() {
    std::process::exit(hk::cli::run(std::env::args_os()));
}
