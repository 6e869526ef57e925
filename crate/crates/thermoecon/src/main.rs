fn main() -> std::process::ExitCode {
    thermoecon::cli::main()
}
