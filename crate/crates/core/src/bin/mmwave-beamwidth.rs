fn main() {
    std::process::exit(mmwave_beamwidth::cli::main_with_args(std::env::args_os()));
}
