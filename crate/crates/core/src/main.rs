fn main() {
    std::process::exit(omega_degrees::cli::run(std::env::args_os()));
}
