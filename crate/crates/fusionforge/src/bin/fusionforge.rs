fn main() {
    std::process::exit(fusionforge::corpus_cli::main_entry());
}
