fn main() {
    std::process::exit(fgv::cli::run(std::env::args_os()));
}
