fn main() {
    std::process::exit(privrand::cli::main_from_env());
}
