fn main() {
    let code = pchaos_cli::main_with(std::env::args_os(), &mut std::io::stderr());
    std::process::exit(code);
}
