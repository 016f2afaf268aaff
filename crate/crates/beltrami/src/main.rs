fn main() {
    std::process::exit(beltrami::cli::run());
}
