use std::io::BufWriter;

fn main() {
    let mut out = BufWriter::new(std::io::stdout());
    let code = hyperpolygon::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    std::process::exit(code);
}
