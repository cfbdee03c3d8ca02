fn main() {
    std::process::exit(partition_rank::cli::run(std::env::args_os()));
}
