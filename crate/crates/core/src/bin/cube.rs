fn main() {
    cube_core::cli::init_threads();
    let code = cube_core::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
