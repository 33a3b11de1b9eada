fn main() {
    std::process::exit(stance_tools::cli::run());
}
