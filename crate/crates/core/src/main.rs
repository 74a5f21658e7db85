fn main() {
    std::process::exit(biuniv::cli::run());
}
