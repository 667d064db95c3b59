use std::io::Write;

fn main() {
    let mut stdout = std::io::stdout().lock();
    let code = modsm::cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut stdout,
        &mut std::io::stderr().lock(),
    );
    let _ = stdout.flush();
    std::process::exit(code);
}
