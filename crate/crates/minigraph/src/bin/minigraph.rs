fn main() {
    std::process::exit(minigraph::cli::main_with_args(std::env::args_os()));
}
