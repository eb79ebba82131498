fn main() {
    std::process::exit(wristsketch::cli::run(std::env::args_os()));
}
