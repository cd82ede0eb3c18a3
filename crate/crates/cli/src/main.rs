fn main() {
    std::process::exit(prg_cli::run(std::env::args_os()));
}
