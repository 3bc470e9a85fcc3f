fn main() {
    std::process::exit(twistfuse::cli::run());
}
