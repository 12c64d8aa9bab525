fn main() {
    std::process::exit(conformal_heat::cli::main_with_args(std::env::args_os()));
}
