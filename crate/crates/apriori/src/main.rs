fn main() {
    std::process::exit(apriori::cli::main_with(std::env::args_os()));
}
