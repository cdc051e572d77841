use std::process::ExitCode;

fn main() -> ExitCode {
    spark_forge::cli::run(std::env::args_os())
}
