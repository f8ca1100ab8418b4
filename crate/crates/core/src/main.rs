fn main() {
    std::process::exit(ctxsim::cli::run(std::env::args_os()));
}
