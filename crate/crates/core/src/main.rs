fn main() {
    std::process::exit(ionti::cli::run(std::env::args_os()));
}
