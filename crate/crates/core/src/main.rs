fn main() -> std::process::ExitCode {
    sfcurve::cli::main()
}
