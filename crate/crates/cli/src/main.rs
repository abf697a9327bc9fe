use std::io;
use std::process::ExitCode;
use std::thread;

// Deep recursions (large n over small coefficients) need more than the
// default main-thread stack.
const STACK_BYTES: usize = 512 << 20;

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let status = thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || {
            let stdout = io::stdout();
            let stderr = io::stderr();
            finpart_cli::run(args, &mut stdout.lock(), &mut stderr.lock())
        })
        .expect("spawn worker thread")
        .join()
        .unwrap_or(finpart_cli::EXIT_DOMAIN);
    ExitCode::from(status as u8)
}
