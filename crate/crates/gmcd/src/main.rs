fn main() {
    std::process::exit(gmcd::cli::run());
}
