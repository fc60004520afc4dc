//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails (an invalid layer, a
//! failing certificate, a counter at or above its bound), 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::atam::{
    assemble, bit_text, check_layer, compile_to_railway, iterate_layers, state_to_bits, GlueCurve, LayerSystem,
};
use crate::counterlab::{certify_theorem_main, monoid_closure_max_counter, sample_max_counter, SectionShape};
use crate::exemplars::{build_copy, build_ibc, build_zigzag, build_zigzig, tuned_ibc6, IbcSpec, Interpretation};
use crate::io;
use crate::permfn::{FiniteFunction, FunctionClass};
use crate::railway::RailwayCircuit;
use crate::render::{render_assembly, render_circuit, Format};

#[derive(Debug, Parser)]
#[command(name = "railcount", version, about = "Railway circuits, counters and layer-computing tile sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate and analyse railway circuits.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Exhaustive and sampled counter searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Simulate, check and compile tile systems.
    #[command(subcommand)]
    Tiles(TilesCmd),
    /// Write a reference tile system.
    #[command(subcommand)]
    Exemplar(ExemplarCmd),
    /// Inspect finite functions given as `m t0 t1 ...` or a JSON array.
    #[command(subcommand)]
    Perm(PermCmd),
}

#[derive(Debug, Args)]
struct CircuitIn {
    /// Circuit JSON file.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Subcommand)]
enum CircuitCmd {
    /// Apply the circuit to one input state.
    Eval {
        #[command(flatten)]
        c: CircuitIn,
        #[arg(long)]
        x: u32,
    },
    /// Print the first 2^n iterates of an input.
    Trace {
        #[command(flatten)]
        c: CircuitIn,
        #[arg(long)]
        x: u32,
    },
    /// Classify the circuit function.
    Classify(CircuitIn),
    /// Check every atomic component.
    Components(CircuitIn),
    /// Report the counter value and a witness input.
    Counter(CircuitIn),
    /// Draw the circuit.
    Render {
        #[command(flatten)]
        c: CircuitIn,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SearchCmd {
    /// Close all local gates under composition (n <= 2).
    Closure {
        #[arg(long)]
        n: usize,
    },
    /// Check every lifted local gate, one JSON line per gate.
    Certify {
        #[arg(long)]
        n: usize,
        /// Largest gate width; defaults to min(n - 1, 2).
        #[arg(long)]
        max_width: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random local circuits and report the largest counter.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        sections: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Largest gate width for random placement; defaults to n - 1.
        #[arg(long)]
        max_width: Option<usize>,
        /// Use the fixed section layout of a 6-bit IBC layer.
        #[arg(long)]
        ibc6: bool,
    },
}

#[derive(Debug, Args)]
struct SystemIn {
    /// Tile system JSON file.
    #[arg(long, alias = "in")]
    tileset: PathBuf,
    /// Curve JSON file, overriding the one in the system file.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Translation vector `x,y`, overriding the one in the system file.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(Debug, Subcommand)]
enum TilesCmd {
    /// Grow the seed for one input through several layers and list the
    /// attachments.
    Simulate {
        #[command(flatten)]
        sys: SystemIn,
        #[arg(long, default_value_t = 0)]
        x: u32,
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
    /// Check that the system computes a function between the curve and its
    /// translate and that every position is a clean gate.
    CheckLayer {
        #[command(flatten)]
        sys: SystemIn,
    },
    /// Compile the layer into a railway circuit (JSON).
    Compile {
        #[command(flatten)]
        sys: SystemIn,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the bits along successive translates of the curve.
    Iterate {
        #[command(flatten)]
        sys: SystemIn,
        #[arg(long, default_value_t = 0)]
        x: u32,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        /// Compare each reading with the iterates of the layer function.
        #[arg(long)]
        check: bool,
    },
    /// Draw the assembly grown from one seed.
    Render {
        #[command(flatten)]
        sys: SystemIn,
        #[arg(long, default_value_t = 0)]
        x: u32,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Emit {
    /// Write the system here instead of stdout.
    #[arg(long, alias = "out")]
    emit: Option<PathBuf>,
    /// Also write the curve to this file.
    #[arg(long)]
    curve_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ExemplarCmd {
    /// A layer copying its input.
    Copy {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        emit: Emit,
    },
    /// An iterated Boolean circuit tile set.
    Ibc {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        /// identity, tuned (6 bits, one layer) or random.
        #[arg(long, default_value = "identity")]
        gates: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Column-by-column increment.
    Zigzig {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        emit: Emit,
    },
    /// Alternating increment and copy columns.
    Zigzag {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "all-bits")]
        interp: String,
        #[command(flatten)]
        emit: Emit,
    },
}

#[derive(Debug, Args)]
struct FunctionIn {
    /// File holding the function.
    #[arg(long = "in", conflicts_with = "f")]
    input: Option<PathBuf>,
    /// The function inline, e.g. "4 1 0 3 2".
    #[arg(long)]
    f: Option<String>,
}

#[derive(Debug, Subcommand)]
enum PermCmd {
    /// Bijection with parity, quasi-bijection or neither.
    Classify(FunctionIn),
    /// Parity of a permutation.
    Parity(FunctionIn),
    /// Ramification degree and image size.
    Ram(FunctionIn),
}

struct Failure {
    code: i32,
    message: String,
}

type Outcome = Result<i32, Failure>;

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn failed(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI, writing reports to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Circuit(c) => circuit(c, out),
        Command::Search(c) => search(c, out, err),
        Command::Tiles(c) => tiles(c, out),
        Command::Exemplar(c) => exemplar(c, out),
        Command::Perm(c) => perm(c, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(e)),
    }
}

fn load_circuit(c: &CircuitIn) -> Result<RailwayCircuit, Failure> {
    io::parse_circuit(&read(&c.input)?).map_err(usage)
}

fn check_input(x: u32, states: usize) -> Result<(), Failure> {
    if x as usize >= states {
        return Err(usage(format!("input {x} is out of range for {states} states")));
    }
    Ok(())
}

fn circuit(cmd: CircuitCmd, out: &mut dyn Write) -> Outcome {
    let print = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(usage);
    match cmd {
        CircuitCmd::Eval { c, x } => {
            let circ = load_circuit(&c)?;
            check_input(x, circ.states())?;
            let y = circ.eval(x).map_err(usage)?;
            print(out, bit_text(&state_to_bits(y, circ.n())))?;
        }
        CircuitCmd::Trace { c, x } => {
            let circ = load_circuit(&c)?;
            check_input(x, circ.states())?;
            for y in circ.trace(x).map_err(usage)? {
                print(out, bit_text(&state_to_bits(y, circ.n())))?;
            }
        }
        CircuitCmd::Classify(c) => print(out, load_circuit(&c)?.function().classify().to_string())?,
        CircuitCmd::Components(c) => {
            let report = load_circuit(&c)?.verify_atomic_restrictions().map_err(usage)?;
            for v in &report.verdicts {
                let verdict = if v.pass { "ok" } else { "VIOLATION" };
                print(out, format!("section {} {} r={} {verdict}", v.section, v.class, v.ramification))?;
            }
            if !report.pass {
                return Err(failed("an atomic component is an odd bijection or a quasi-bijection"));
            }
        }
        CircuitCmd::Counter(c) => {
            let circ = load_circuit(&c)?;
            let r = circ.counter_value();
            let witness = bit_text(&state_to_bits(r.witness_input, circ.n()));
            print(out, format!("counter_value={} witness={witness} class={}", r.counter_value, r.class))?;
        }
        CircuitCmd::Render { c, format, out: path } => {
            let format: Format = format.parse().map_err(usage)?;
            write_or_print(path.as_deref(), &render_circuit(&load_circuit(&c)?, format), out)?;
        }
    }
    Ok(0)
}

fn search(cmd: SearchCmd, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        SearchCmd::Closure { n } => {
            let r = monoid_closure_max_counter(n).map_err(usage)?;
            let bound = 1usize << n;
            let pass = r.max_counter < bound && r.closure_respects_restrictions();
            let verdict = if pass { "PASS" } else { "FAIL" };
            writeln!(out, "max_counter={} bound={bound} {verdict}", r.max_counter).map_err(usage)?;
            Ok(if pass { 0 } else { 1 })
        }
        SearchCmd::Certify { n, max_width, out: path } => {
            let width = max_width.unwrap_or_else(|| n.saturating_sub(1).clamp(1, 2));
            let cert = certify_theorem_main(n, width).map_err(usage)?;
            write_or_print(path.as_deref(), &cert.to_json_lines(), out)?;
            let verdict = if cert.pass() { "PASS" } else { "FAIL" };
            let _ = writeln!(err, "n={n} max_width={width} generators={} {verdict}", cert.verdicts.len());
            Ok(if cert.pass() { 0 } else { 1 })
        }
        SearchCmd::Sample { n, sections, count, seed, max_width, ibc6 } => {
            let shape = if ibc6 {
                SectionShape::ibc6()
            } else {
                SectionShape::Random { max_width: max_width.unwrap_or(n.saturating_sub(1)) }
            };
            let r = sample_max_counter(n, sections, count, seed, &shape).map_err(usage)?;
            let bound = 1usize << n;
            let pass = r.max_counter < bound;
            let verdict = if pass { "PASS" } else { "FAIL" };
            writeln!(out, "max_counter={} bound={bound} samples={} seed={} {verdict}", r.max_counter, r.samples, r.seed)
                .map_err(usage)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn load_system(s: &SystemIn) -> Result<LayerSystem, Failure> {
    let record = io::parse_system_record(&read(&s.tileset)?).map_err(usage)?;
    let curve: Option<GlueCurve> = match &s.curve {
        Some(p) => Some(io::parse_curve(&read(p)?).map_err(usage)?),
        None => None,
    };
    let v = s.v.as_deref().map(io::parse_vector).transpose().map_err(usage)?;
    record.build(curve, v).map_err(usage)
}

fn grow(sys: &LayerSystem, x: u32, layers: usize) -> Result<crate::atam::AssemblyRun, Failure> {
    check_input(x, sys.seeds.len())?;
    let region = sys.auto_region(x, layers).confined(sys.translated(layers));
    assemble(&sys.tileset, sys.temperature, &sys.seeds[x as usize], &region).map_err(failed)
}

fn tiles(cmd: TilesCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        TilesCmd::Simulate { sys, x, layers } => {
            let sys = load_system(&sys)?;
            let run = grow(&sys, x, layers)?;
            for (i, p) in run.sequence.iter().enumerate() {
                let inputs: String = p.inputs.iter().map(|d| d.letter()).collect();
                let name = &sys.tileset.tile(p.tile).name;
                writeln!(out, "{i} ({}, {}) {name} via {inputs}", p.pos.0, p.pos.1).map_err(usage)?;
            }
            writeln!(out, "attached={} deterministic={}", run.sequence.len(), run.deterministic).map_err(usage)?;
            Ok(if run.deterministic { 0 } else { 1 })
        }
        TilesCmd::CheckLayer { sys } => {
            let sys = load_system(&sys)?;
            let report = check_layer(&sys).map_err(failed)?;
            writeln!(out, "positions={} n={}", report.positions.len(), report.n).map_err(usage)?;
            for s in &report.unclean {
                writeln!(out, "unclean z_{} ({}, {}): {}", s.index, s.pos.0, s.pos.1, s.reason).map_err(usage)?;
            }
            let verdict = if report.valid { "VALID" } else { "UNCLEAN" };
            writeln!(out, "{verdict}").map_err(usage)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        TilesCmd::Compile { sys, out: path } => {
            let sys = load_system(&sys)?;
            let report = check_layer(&sys).map_err(failed)?;
            let circuit = compile_to_railway(&report).map_err(failed)?;
            write_or_print(path.as_deref(), &io::emit_circuit(&circuit), out)?;
            Ok(0)
        }
        TilesCmd::Iterate { sys, x, layers, check } => {
            let sys = load_system(&sys)?;
            check_input(x, sys.seeds.len())?;
            let f: Option<FiniteFunction> = if check {
                Some(check_layer(&sys).map_err(failed)?.f)
            } else {
                None
            };
            let reads = iterate_layers(&sys, x, layers, f.as_ref()).map_err(failed)?;
            for r in reads {
                writeln!(out, "{}", bit_text(&r)).map_err(usage)?;
            }
            Ok(0)
        }
        TilesCmd::Render { sys, x, layers, format, out: path } => {
            let format: Format = format.parse().map_err(usage)?;
            let sys = load_system(&sys)?;
            let run = grow(&sys, x, layers)?;
            let text = render_assembly(&sys.tileset, &run.assembly, Some(&sys.seeds[x as usize]), format);
            write_or_print(path.as_deref(), &text, out)?;
            Ok(0)
        }
    }
}

fn emit_system(sys: &LayerSystem, emit: &Emit, out: &mut dyn Write) -> Outcome {
    if let Some(p) = &emit.curve_out {
        write_or_print(Some(p), &io::emit_curve(&sys.curve), out)?;
    }
    write_or_print(emit.emit.as_deref(), &io::emit_system(sys), out)?;
    Ok(0)
}

fn exemplar(cmd: ExemplarCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        ExemplarCmd::Copy { n, emit } => emit_system(&build_copy(n).map_err(usage)?, &emit, out),
        ExemplarCmd::Ibc { n, layers, gates, seed, emit } => {
            let spec = match gates.as_str() {
                "identity" => IbcSpec::identity(n, layers).map_err(usage)?,
                "tuned" if n == 6 && layers == 1 => tuned_ibc6(),
                "tuned" => return Err(usage("tuned gates exist only for --n 6 --layers 1")),
                "random" => {
                    use rand::SeedableRng;
                    let Some(seed) = seed else {
                        return Err(usage("random gates need --seed"));
                    };
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    IbcSpec::random(&mut rng, n, layers).map_err(usage)?
                }
                other => return Err(usage(format!("unknown gate choice {other:?}"))),
            };
            emit_system(&build_ibc(&spec).map_err(usage)?, &emit, out)
        }
        ExemplarCmd::Zigzig { n, emit } => emit_system(&build_zigzig(n).map_err(usage)?, &emit, out),
        ExemplarCmd::Zigzag { n, interp, emit } => {
            let interp: Interpretation = interp.parse().map_err(usage)?;
            emit_system(&build_zigzag(n, interp).map_err(usage)?, &emit, out)
        }
    }
}

fn load_function(f: &FunctionIn) -> Result<FiniteFunction, Failure> {
    let text = match (&f.input, &f.f) {
        (Some(p), _) => read(p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(usage("give the function with --in or --f")),
    };
    io::parse_function(&text).map_err(usage)
}

fn perm(cmd: PermCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        PermCmd::Classify(f) => {
            writeln!(out, "{}", load_function(&f)?.classify()).map_err(usage)?;
        }
        PermCmd::Parity(f) => match load_function(&f)?.classify() {
            FunctionClass::Bijection(p) => writeln!(out, "{p}").map_err(usage)?,
            _ => return Err(failed("not a bijection, so it has no parity")),
        },
        PermCmd::Ram(f) => {
            let f = load_function(&f)?;
            writeln!(out, "r={} image={}", f.ramification_degree(), f.image_size()).map_err(usage)?;
        }
    }
    Ok(0)
}
