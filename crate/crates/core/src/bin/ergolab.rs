fn main() {
    std::process::exit(ergolab::cli::main_with_args(std::env::args_os()));
}
