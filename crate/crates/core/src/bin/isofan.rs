fn main() {
    std::process::exit(isofan::cli::main_with_args(std::env::args_os()));
}
