fn main() {
    if let Err(e) = stabilis_cli::cli::run(std::env::args_os()) {
        eprintln!("stabilis: {e}");
        std::process::exit(e.exit_code());
    }
}
