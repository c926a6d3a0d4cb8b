fn main() {
    std::process::exit(mpclp::cli::run_from_env());
}
