fn main() {
    std::process::exit(gadgetc::cli::run());
}
