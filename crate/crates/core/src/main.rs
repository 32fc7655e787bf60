fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let (code, output) = cotree_lab::cli::run_command(&argv);
    if code == 2 {
        eprint!("{output}");
    } else {
        print!("{output}");
    }
    std::process::exit(code);
}
