fn main() {
    std::process::exit(lqhopf::cli::run(std::env::args_os()));
}
