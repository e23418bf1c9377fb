fn main() {
    std::process::exit(copse_cli::run(std::env::args()) as i32);
}
