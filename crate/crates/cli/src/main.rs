fn main() {
    let code = qarrow_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
