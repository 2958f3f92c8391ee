fn main() { std::process::exit(grasslp::cli::main()); }
