fn main() {
    std::process::exit(qbe::cli::run(std::env::args_os()));
}
