fn main() {
    std::process::exit(partition_complex::cli::main_with_args(std::env::args_os()));
}
