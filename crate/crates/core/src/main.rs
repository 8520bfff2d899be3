fn main() {
    std::process::exit(eit_disting::cli::run(std::env::args_os()));
}
