fn main() {
    std::process::exit(cklogic::cli::run());
}
