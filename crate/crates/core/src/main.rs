use std::io;

fn main() {
    acyclic_rewriter::cli::init_logging();
    let code = acyclic_rewriter::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
