fn main() {
    std::process::exit(genericase::cli::main_with_args(std::env::args_os()));
}
