fn main() {
    std::process::exit(prsfam::cli::run(std::env::args_os()));
}
