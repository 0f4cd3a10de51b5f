fn main() {
    std::process::exit(casimir_stress::cli::run_from_env());
}
