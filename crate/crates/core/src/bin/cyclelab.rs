fn main() {
    std::process::exit(cyclelab::cli::run(std::env::args_os()));
}
