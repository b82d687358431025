fn main() {
    std::process::exit(orforge::cli::run());
}
