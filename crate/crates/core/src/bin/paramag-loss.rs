fn main() {
    std::process::exit(paramag_loss::cli::run(std::env::args_os()));
}
