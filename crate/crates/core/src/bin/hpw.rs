fn main() {
    std::process::exit(hpw::cli::main());
}
