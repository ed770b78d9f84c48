fn main() {
    std::process::exit(besicovitch_cli::main_with(std::env::args_os()));
}
