fn main() {
    std::process::exit(corpuslab::cli::main_with(std::env::args_os()));
}
