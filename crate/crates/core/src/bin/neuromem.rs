fn main() {
    std::process::exit(neuromem::cli::run(std::env::args_os()));
}
