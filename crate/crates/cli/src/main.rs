fn main() {
    std::process::exit(depchoice_cli::run_cli(std::env::args_os()));
}
