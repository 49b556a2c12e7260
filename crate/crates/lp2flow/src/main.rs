fn main() {
    std::process::exit(lp2flow::cli::run(std::env::args_os()));
}
