fn main() {
    std::process::exit(zeta_stokes::cli::main_with_args(std::env::args_os()));
}
