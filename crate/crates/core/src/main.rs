fn main() {
    std::process::exit(dirichlet_forge::cli::run(std::env::args_os()));
}
