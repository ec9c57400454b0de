fn main() {
    std::process::exit(colombeau::cli::main_from(std::env::args_os()));
}
