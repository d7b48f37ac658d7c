fn main() -> std::process::ExitCode {
    intent_rrs::cli::main()
}
