fn main() -> std::process::ExitCode {
    pgraphon::cli::main()
}
