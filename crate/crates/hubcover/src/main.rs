fn main() {
    std::process::exit(hubcover::cli::run(std::env::args()));
}
