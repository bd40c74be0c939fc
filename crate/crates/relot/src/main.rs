//! `relot` binary: parses the command line, delegates to the library's
//! CLI module, and exits with its status code (0 success, 2 input error,
//! 3 solver failure).

fn main() {
    std::process::exit(relot::cli::run());
}
