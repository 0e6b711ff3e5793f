fn main() {
    let out = unidec_cli::run(std::env::args());
    if out.code == 0 {
        print!("{}", out.rendered);
    } else {
        eprint!("{}", out.rendered);
    }
    std::process::exit(out.code);
}
