fn main() {
    std::process::exit(hcl::cli::run(std::env::args_os()));
}
