use router_core::cli_io::run_command;

fn main() {
    std::process::exit(run_command(std::env::args_os()));
}
