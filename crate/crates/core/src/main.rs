fn main() {
    std::process::exit(fuzzint::cli::main_with_args(std::env::args_os()));
}
