fn main() {
    std::process::exit(oslo::cli::run(std::env::args_os()));
}
