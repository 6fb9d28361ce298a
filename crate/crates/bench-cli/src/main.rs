fn main() {
    std::process::exit(bench_cli::run(std::env::args_os()));
}
