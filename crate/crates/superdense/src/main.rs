fn main() {
    std::process::exit(superdense::cli::run());
}
