fn main() {
    std::process::exit(glv_dynamics::cli::run(std::env::args_os()));
}
