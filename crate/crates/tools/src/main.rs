fn main() {
    std::process::exit(chm6_tools::cli::main());
}
