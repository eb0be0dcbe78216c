fn main() {
    std::process::exit(menger::cli::main_with_args(std::env::args_os()));
}
