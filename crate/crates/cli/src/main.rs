use std::io;

fn main() {
    let stdout = io::stdout();
    let stdin = io::stdin();
    let code = cookie_cli::main_with(std::env::args(), &mut stdout.lock(), &mut stdin.lock());
    std::process::exit(code);
}
