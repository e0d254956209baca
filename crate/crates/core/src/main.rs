fn main() {
    std::process::exit(spectral_tail::cli::run(std::env::args_os()));
}
