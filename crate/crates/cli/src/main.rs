fn main() {
    std::process::exit(bubblewave_cli::dispatch(std::env::args_os()));
}
