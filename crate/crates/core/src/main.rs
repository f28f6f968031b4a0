fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = binmat::cli::run(&args, &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
