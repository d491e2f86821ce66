use std::io;

fn main() {
    let code = nabla_green_cli::run(
        std::env::args_os(),
        std::env::var(nabla_green_cli::TOLERANCE_ENV).ok(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
