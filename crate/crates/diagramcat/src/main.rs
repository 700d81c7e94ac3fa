fn main() {
    std::process::exit(diagramcat::cli::run(std::env::args_os()));
}
