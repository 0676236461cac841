use contact_lab::experiments::run_cli;

fn main() {
    let code = run_cli(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
