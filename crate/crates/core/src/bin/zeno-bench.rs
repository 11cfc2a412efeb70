fn main() -> std::process::ExitCode {
    zeno_bench::cli::main()
}
