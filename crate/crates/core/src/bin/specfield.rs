fn main() {
    std::process::exit(specfield::cli::main_with_args(std::env::args_os()));
}
