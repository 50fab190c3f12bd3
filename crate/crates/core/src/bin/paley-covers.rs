fn main() {
    std::process::exit(paley_covers::cli::main());
}
