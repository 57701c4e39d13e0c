fn main() {
    std::process::exit(advseq::run(std::env::args_os()));
}
