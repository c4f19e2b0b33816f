use std::alloc::{GlobalAlloc, Layout, System};
use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use clap::{Parser, Subcommand};

use minireduce::check;
use minireduce::lisp::{Interp, DEFAULT_STORAGE};
use minireduce::session::{Session, Stream};

/// Tracks live heap bytes so the interpreter can enforce its storage budget.
struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            LIVE.fetch_add(layout.size(), Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
            LIVE.fetch_add(new_size, Ordering::Relaxed);
        }
        p
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

fn live_bytes() -> usize {
    LIVE.load(Ordering::Relaxed)
}

const STACK_BYTES: usize = 512 * 1024 * 1024;

#[derive(Parser, Debug)]
#[command(name = "minireduce", version, about = "A small REDUCE-style algebra system")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,

    /// Prelude manifest to load instead of the built-in prelude.
    #[arg(long, global = true)]
    prelude: Option<PathBuf>,

    /// Output line width (at least 16).
    #[arg(long, global = true, default_value_t = 80)]
    width: usize,

    /// Storage budget in bytes.
    #[arg(long, global = true, default_value_t = DEFAULT_STORAGE)]
    mem: usize,

    /// Random seed, recorded in bench reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Benchmark repetitions.
    #[arg(long, global = true, default_value_t = 5)]
    reps: usize,

    /// Do not echo statements.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Mode {
    /// Run a source file.
    Run { path: PathBuf },
    /// Interactive session reading standard input.
    Repl,
    /// Run a source file and compare its transcript with a golden one.
    Check { path: PathBuf, golden: PathBuf },
    /// Time repeated runs of a source file.
    Bench { path: PathBuf },
}

/// A usage or configuration problem (exit status 2).
struct ConfigError(String);

fn make_session(cli: &Cli) -> Result<Session, ConfigError> {
    if cli.width < 16 {
        return Err(ConfigError(format!("width {} is below the minimum of 16", cli.width)));
    }
    let mut interp = match &cli.prelude {
        Some(path) => {
            let mut i = Interp::bare();
            minireduce::prelude::load_manifest(&mut i, path)
                .map_err(|e| ConfigError(format!("cannot load prelude {}: {e}", path.display())))?;
            i
        }
        None => Interp::new().map_err(|e| ConfigError(format!("prelude failed to load: {e}")))?,
    };
    interp.set_width(cli.width);
    interp.set_storage_limit(live_bytes() + cli.mem, live_bytes);
    let mut s = Session::with_interp(interp);
    s.set_echo(!cli.quiet);
    Ok(s)
}

fn read_source(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))
}

fn print_stream(stream: Stream, text: &str) {
    match stream {
        Stream::Out => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
        }
        Stream::Err => {
            let mut err = std::io::stderr().lock();
            let _ = err.write_all(text.as_bytes());
        }
    }
}

fn run(cli: &Cli, path: &Path) -> Result<u8, ConfigError> {
    let src = read_source(path)?;
    let mut s = make_session(cli)?;
    let (errors, _) = s.run_source_with(&src, &mut print_stream);
    Ok(if errors > 0 { 1 } else { 0 })
}

fn repl(cli: &Cli) -> Result<u8, ConfigError> {
    let mut s = make_session(cli)?;
    let interactive = std::io::stdin().is_terminal();
    let stdin = std::io::stdin();
    let mut buf = String::new();
    let mut count = 1;
    let mut errors = 0;
    loop {
        if interactive {
            let prompt = if buf.is_empty() { format!("{count}: ") } else { "   ".into() };
            print_stream(Stream::Out, &prompt);
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        buf.push_str(&line);
        if !statement_complete(&buf) {
            continue;
        }
        let (e, ended) = s.run_source_with(&buf, &mut print_stream);
        errors += e;
        buf.clear();
        count += 1;
        if ended {
            break;
        }
    }
    Ok(if errors > 0 { 1 } else { 0 })
}

// Whether the buffered text ends with a finished statement.
fn statement_complete(buf: &str) -> bool {
    let t = buf.trim_end();
    if t.is_empty() {
        return false;
    }
    minireduce::rlisp::parse_program(t)
        .iter()
        .all(|r| !matches!(r, Err(e) if e.incomplete))
}

fn check_mode(cli: &Cli, path: &Path, golden: &Path) -> Result<u8, ConfigError> {
    let src = read_source(path)?;
    let expected = read_source(golden)?;
    let mut s = make_session(cli)?;
    let t = s.run_source(&src);
    print_stream(Stream::Err, &t.stderr);
    let mut judge = make_session(cli)?;
    let mismatches = check::compare(&mut judge, &expected, &t.stdout);
    for m in &mismatches {
        print_stream(
            Stream::Out,
            &format!(
                "MISMATCH in chunk {}\n--- expected\n{}\n--- actual\n{}\n\n",
                m.chunk + 1,
                m.expected,
                m.actual
            ),
        );
    }
    let total = check::chunks(&expected).len();
    print_stream(
        Stream::Out,
        &format!("{} of {} chunks match\n", total.saturating_sub(mismatches.len()), total),
    );
    Ok(if mismatches.is_empty() && t.errors == 0 { 0 } else { 1 })
}

fn bench(cli: &Cli, path: &Path) -> Result<u8, ConfigError> {
    let src = read_source(path)?;
    if cli.reps == 0 {
        return Err(ConfigError("--reps must be at least 1".into()));
    }
    let once = |cli: &Cli| -> Result<(f64, usize), ConfigError> {
        let start = Instant::now();
        let mut s = make_session(cli)?;
        let t = s.run_source(&src);
        Ok((start.elapsed().as_secs_f64() * 1000.0, t.errors))
    };
    let (_, errors) = once(cli)?;
    if errors > 0 {
        print_stream(Stream::Err, "benchmark aborted: the source has statement errors\n");
        return Ok(1);
    }
    let mut times = Vec::with_capacity(cli.reps);
    for _ in 0..cli.reps {
        let (ms, errors) = once(cli)?;
        if errors > 0 {
            print_stream(Stream::Err, "benchmark aborted: a run had statement errors\n");
            return Ok(1);
        }
        times.push(ms);
    }
    let min = times.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let mut report = format!("benchmark {} (seed {})\n", path.display(), cli.seed);
    report.push_str("run        ms\n");
    for (i, t) in times.iter().enumerate() {
        report.push_str(&format!("{:>3} {:>9.1}\n", i + 1, t));
    }
    report.push_str(&format!("min {min:>9.1}\nmean{mean:>9.1}\n"));
    print_stream(Stream::Out, &report);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || {
            let r = match &cli.mode {
                Mode::Run { path } => run(&cli, path),
                Mode::Repl => repl(&cli),
                Mode::Check { path, golden } => check_mode(&cli, path, golden),
                Mode::Bench { path } => bench(&cli, path),
            };
            match r {
                Ok(code) => code,
                Err(ConfigError(msg)) => {
                    eprintln!("minireduce: {msg}");
                    2
                }
            }
        });
    match worker.map(|h| h.join()) {
        Ok(Ok(code)) => ExitCode::from(code),
        _ => {
            eprintln!("minireduce: internal failure");
            ExitCode::from(2)
        }
    }
}
