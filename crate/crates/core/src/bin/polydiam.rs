fn main() {
    std::process::exit(polydiam::harness::run(std::env::args_os()));
}
