fn main() {
    std::process::exit(dilate_lab::cli::run(std::env::args_os()));
}
