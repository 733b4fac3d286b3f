use std::io::Write;

fn main() {
    let code = {
        let stdout = std::io::stdout();
        let stderr = std::io::stderr();
        let code =
            colorsieve::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
        let _ = stdout.lock().flush();
        code
    };
    std::process::exit(code);
}
