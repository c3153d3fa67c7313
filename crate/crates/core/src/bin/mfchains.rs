fn main() {
    std::process::exit(mfchains::cli::run(std::env::args_os()));
}
