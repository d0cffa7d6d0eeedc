fn main() {
    std::process::exit(turan_forge::run(std::env::args_os()));
}
