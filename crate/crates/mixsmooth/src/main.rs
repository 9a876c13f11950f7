fn main() {
    std::process::exit(mixsmooth::cli::run(std::env::args_os()));
}
