fn main() {
    std::process::exit(addforms::cli::main_with_args(std::env::args_os()));
}
