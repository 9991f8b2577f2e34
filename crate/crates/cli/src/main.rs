fn main() {
    std::process::exit(kem_ldlc_cli::run(std::env::args_os()));
}
