fn main() {
    std::process::exit(railcount::cli::run(std::env::args_os()));
}
