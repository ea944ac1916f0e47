fn main() {
    let code = mlcomp::cli::dispatch(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
