fn main() {
    std::process::exit(emzv::cli::run(std::env::args_os()));
}
