fn main() {
    std::process::exit(lesionroi::cli::run(std::env::args_os()));
}
