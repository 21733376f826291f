fn main() {
    std::process::exit(diastasis::cli::run());
}
