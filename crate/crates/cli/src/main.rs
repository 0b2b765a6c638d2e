fn main() {
    std::process::exit(latcomb_cli::run(std::env::args_os()));
}
