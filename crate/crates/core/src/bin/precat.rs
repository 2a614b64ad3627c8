fn main() {
    let (code, out) = precat::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
