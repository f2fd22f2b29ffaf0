fn main() {
    if let Ok(v) = std::env::var("HOURGLASS_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("thread pool is configured once");
            }
            _ => {
                eprintln!("error: HOURGLASS_THREADS must be an integer >= 1, got {v:?}");
                std::process::exit(hourglass::cli::EXIT_USAGE);
            }
        }
    }
    let code = hourglass::cli::run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
