fn main() {
    std::process::exit(reslab_cli::dispatch(std::env::args_os()));
}
