fn main() {
    std::process::exit(dvac::cli::run());
}
