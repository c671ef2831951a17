fn main() {
    std::process::exit(prodspace::cli::main_from(std::env::args_os()));
}
