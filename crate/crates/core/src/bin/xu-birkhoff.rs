fn main() {
    let status = xu_birkhoff::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(status);
}
