fn main() {
    std::process::exit(gaborpr_cli::run(std::env::args().skip(1)));
}
