fn main() -> std::process::ExitCode {
    effectus::cli::main()
}
