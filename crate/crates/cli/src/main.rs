fn main() {
    std::process::exit(dfsq_cli::run(std::env::args_os()));
}
