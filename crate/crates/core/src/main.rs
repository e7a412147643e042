fn main() -> std::process::ExitCode {
    tubekit::cli::main_entry()
}
