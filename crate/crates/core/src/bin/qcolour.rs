fn main() {
    std::process::exit(qcolour::cli::run(std::env::args_os()));
}
