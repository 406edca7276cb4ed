fn main() {
    std::process::exit(rftwirl::cli::run(std::env::args_os()));
}
