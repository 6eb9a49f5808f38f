fn main() {
    std::process::exit(msnlab::cli::run(std::env::args_os()));
}
