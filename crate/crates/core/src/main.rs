fn main() {
    std::process::exit(spectral_rff::cli::main());
}
