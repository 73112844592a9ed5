fn main() {
    std::process::exit(chanlab::cli::run(std::env::args_os()));
}
