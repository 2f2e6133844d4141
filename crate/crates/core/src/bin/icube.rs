fn main() {
    std::process::exit(icube::cli::run(std::env::args_os()));
}
