fn main() {
    std::process::exit(dmfprep::cli::run());
}
