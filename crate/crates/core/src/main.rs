use clap::Parser;

fn main() {
    // Die quietly on closed pipes instead of panicking mid-print.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = toric_deform::cli::Cli::parse();
    std::process::exit(toric_deform::cli::run(cli));
}
