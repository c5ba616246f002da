fn main() {
    std::process::exit(quadclass::report::run());
}
