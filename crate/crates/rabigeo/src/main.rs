fn main() {
    std::process::exit(rabigeo::cli::run());
}
