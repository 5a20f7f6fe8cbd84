use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ocltl::backend::{
    check_sat, export_tlsf, read_machine, realize, write_machine, MachineFile, RealizeOptions, SatResult, Strategy,
    Verdict,
};
use ocltl::fixpoint::eliminate_fixpoints;
use ocltl::parse::{parse_fo, parse_spec, parse_struct_expr, SurfaceSpec};
use ocltl::runtime::{check_prefix, check_trace, read_inputs, simulate, Transducer};
use ocltl::structure::{Caps, Structure};
use ocltl::translate::{
    reduce_to_kernel, translate, translate_sat, write_propspec, Encoding, GuardDepth, GuardMode, KernelSpec, PropSpec,
};

#[derive(Parser)]
#[command(name = "ocltl", version, about = "Synthesis and satisfiability for temporal specifications over data")]
struct Cli {
    /// Print pipeline stages and timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the complete types of a structure at an arity.
    Types {
        /// Structure expression, e.g. `dlo` or `product(eq, dlo)`.
        structure: String,
        arity: usize,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Translate a specification into propositional form.
    Translate {
        spec: PathBuf,
        #[command(flatten)]
        cfg: Config,
        /// Write the proposition file here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide realizability and write the strategy.
    Synth {
        spec: PathBuf,
        #[command(flatten)]
        cfg: Config,
        #[arg(long, default_value_t = 6)]
        cap: usize,
        /// Machine file to write (a Mealy machine or a counter-strategy).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide realizability, or satisfiability with `--sat`.
    Check {
        spec: PathBuf,
        #[arg(long)]
        sat: bool,
        #[command(flatten)]
        cfg: Config,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Run a synthesized machine on concrete inputs.
    Simulate {
        machine: PathBuf,
        spec: PathBuf,
        /// One input tuple per line; components separated by `;`.
        inputs: PathBuf,
        /// Number of steps (defaults to the number of input lines).
        #[arg(long)]
        steps: Option<usize>,
        /// Repeat the inputs forever and judge the resulting lasso.
        #[arg(long = "loop")]
        looping: bool,
        #[arg(long, value_enum, default_value_t = DepthArg::Atom)]
        guard_depth: DepthArg,
    },
    /// Eliminate fixpoint operators from a data formula.
    Elimfix {
        formula: String,
        #[arg(long, default_value = "dlo")]
        structure: String,
        /// `NAME` or `NAME=VALUE`; repeatable.
        #[arg(long = "constant")]
        constants: Vec<String>,
    },
    /// Export a specification as TLSF.
    ExportTlsf {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Naive)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = GuardArg::Counter)]
        guard: GuardArg,
        #[arg(long, value_enum, default_value_t = DepthArg::Atom)]
        guard_depth: DepthArg,
        #[arg(long)]
        title: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest type arity to enumerate.
    #[arg(long)]
    max_arity: Option<usize>,
    /// Largest type space to enumerate.
    #[arg(long)]
    max_types: Option<usize>,
}

impl CapArgs {
    fn apply(self, s: Structure) -> Result<Structure> {
        let mut caps = Caps::default();
        if let Some(a) = self.max_arity {
            caps.max_arity = Some(a);
        }
        if let Some(t) = self.max_types {
            if t == 0 {
                bail!("--max-types must be positive");
            }
            caps.max_types = t;
        }
        Ok(s.with_caps(caps))
    }
}

#[derive(Args, Clone, Copy)]
struct Config {
    #[arg(long, value_enum, default_value_t = ModeArg::Naive)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = GuardArg::Past)]
    guard: GuardArg,
    #[arg(long, value_enum, default_value_t = DepthArg::Atom)]
    guard_depth: DepthArg,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Naive,
    Binary,
    Minterm,
}

impl From<ModeArg> for Encoding {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Naive => Encoding::Naive,
            ModeArg::Binary => Encoding::Binary,
            ModeArg::Minterm => Encoding::Minterm,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum GuardArg {
    Past,
    Counter,
}

impl From<GuardArg> for GuardMode {
    fn from(g: GuardArg) -> Self {
        match g {
            GuardArg::Past => GuardMode::Past,
            GuardArg::Counter => GuardMode::Counter,
        }
    }
}

/// How long atoms stay false at the start of a run.
#[derive(ValueEnum, Clone, Copy)]
enum DepthArg {
    /// The largest lag the atom mentions.
    Atom,
    /// The declared lookback, for every atom.
    Lookback,
}

impl From<DepthArg> for GuardDepth {
    fn from(d: DepthArg) -> Self {
        match d {
            DepthArg::Atom => GuardDepth::AtomLag,
            DepthArg::Lookback => GuardDepth::Lookback,
        }
    }
}

struct Ctx {
    verbose: bool,
    start: Instant,
}

impl Ctx {
    fn note(&self, what: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[{:>8.2?}] {}", self.start.elapsed(), what.as_ref());
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path, caps: CapArgs) -> Result<SurfaceSpec> {
    let text = read_text(path)?;
    let mut spec = parse_spec(&text).with_context(|| format!("parsing {}", path.display()))?;
    spec.structure = caps.apply(spec.structure)?;
    Ok(spec)
}

fn kernel(ctx: &Ctx, path: &Path, cfg: &Config) -> Result<(SurfaceSpec, KernelSpec)> {
    let spec = load_spec(path, cfg.caps)?;
    let k = reduce_to_kernel(&spec, cfg.guard_depth.into())?;
    ctx.note(format!("kernel: widths m={} x={} y={}, {} atoms", k.w_m, k.w_x, k.w_y, k.atoms.len()));
    Ok((spec, k))
}

fn propositional(ctx: &Ctx, path: &Path, cfg: &Config) -> Result<(KernelSpec, PropSpec)> {
    let (_, k) = kernel(ctx, path, cfg)?;
    let p = translate(&k, cfg.mode.into(), cfg.guard.into())?;
    ctx.note(format!("translated: {} inputs, {} outputs", p.inputs.len(), p.outputs.len()));
    Ok((k, p))
}

fn counts(p: &PropSpec) -> String {
    let m = &p.meta;
    let n = |entries: &[ocltl::translate::TypeEntry]| entries.iter().filter(|e| e.prop.is_some()).count();
    let counters = if m.counters.is_empty() {
        String::new()
    } else {
        format!(", {} counters", m.counters.len())
    };
    match p.encoding() {
        Encoding::Binary => format!("{}+{} bits{counters}", m.input_bits.len(), m.output_bits.len()),
        Encoding::Minterm => format!(
            "{} P, {} R, {} D{counters}",
            n(&m.partial),
            n(&m.memory),
            m.atoms.iter().filter(|a| a.prop.is_some()).count()
        ),
        _ => format!(
            "{} input, {} output propositions{counters}",
            p.inputs.len(),
            p.outputs.len() - m.counters.len()
        ),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn states(n: usize) -> String {
    if n == 1 {
        "1 state".into()
    } else {
        format!("{n} states")
    }
}

fn show_verdict(v: &Verdict) -> u8 {
    match v {
        Verdict::Realizable(m) => {
            println!("REALIZABLE ({})", states(m.len()));
            0
        }
        Verdict::Unrealizable(c) => {
            println!("UNREALIZABLE (counter-strategy with {})", states(c.len()));
            1
        }
        Verdict::Unknown(why) => {
            println!("UNKNOWN ({why})");
            2
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx {
        verbose: cli.verbose,
        start: Instant::now(),
    };
    match cli.cmd {
        Cmd::Types { structure, arity, caps } => {
            let s = caps.apply(parse_struct_expr(&structure)?.build())?;
            let types = s.enumerate_types(arity)?;
            for t in &types {
                println!("{}", s.render_type(t));
            }
            println!("{} types", types.len());
            Ok(0)
        }
        Cmd::Translate { spec, cfg, output } => {
            let (_, p) = propositional(&ctx, &spec, &cfg)?;
            write_out(output.as_deref(), &write_propspec(&p))?;
            if output.is_some() {
                println!("{}", counts(&p));
            } else {
                eprintln!("{}", counts(&p));
            }
            Ok(0)
        }
        Cmd::Synth { spec, cfg, cap, output } => {
            let (_, p) = propositional(&ctx, &spec, &cfg)?;
            let opts = RealizeOptions {
                cap,
                ..RealizeOptions::default()
            };
            let v = realize(&p.formula(), &p.inputs, &p.outputs, &opts)?;
            ctx.note("game solved");
            let code = show_verdict(&v);
            let strategy = match v {
                Verdict::Realizable(m) => Some(Strategy::Mealy(m)),
                Verdict::Unrealizable(c) => Some(Strategy::Moore(c)),
                Verdict::Unknown(_) => None,
            };
            if let (Some(strategy), Some(path)) = (strategy, output) {
                let file = MachineFile {
                    strategy,
                    meta: Some(p.meta.clone()),
                };
                fs::write(&path, write_machine(&file)).with_context(|| format!("writing {}", path.display()))?;
                ctx.note(format!("wrote {}", path.display()));
            }
            Ok(code)
        }
        Cmd::Check { spec, sat, cfg, cap } => {
            if !sat {
                let (_, p) = propositional(&ctx, &spec, &cfg)?;
                let opts = RealizeOptions {
                    cap,
                    ..RealizeOptions::default()
                };
                return Ok(show_verdict(&realize(&p.formula(), &p.inputs, &p.outputs, &opts)?));
            }
            let (_, k) = kernel(&ctx, &spec, &cfg)?;
            let p = translate_sat(&k, cfg.guard.into())?;
            ctx.note(format!("translated: {} propositions", p.outputs.len()));
            match check_sat(&p.formula())? {
                SatResult::Sat(lasso) => {
                    println!("SAT");
                    let letter = |v: &Vec<bool>| {
                        let on: Vec<&str> =
                            lasso.props.iter().zip(v).filter(|(_, &b)| b).map(|(n, _)| n.as_str()).collect();
                        format!("{{{}}}", on.join(", "))
                    };
                    for (t, l) in lasso.prefix.iter().enumerate() {
                        println!("prefix {t}: {}", letter(l));
                    }
                    for (t, l) in lasso.period.iter().enumerate() {
                        println!("period {t}: {}", letter(l));
                    }
                    Ok(0)
                }
                SatResult::Unsat => {
                    println!("UNSAT");
                    Ok(1)
                }
            }
        }
        Cmd::Simulate {
            machine,
            spec,
            inputs,
            steps,
            looping,
            guard_depth,
        } => {
            let surface = load_spec(&spec, CapArgs {
                max_arity: None,
                max_types: None,
            })?;
            let k = reduce_to_kernel(&surface, guard_depth.into())?;
            let file = read_machine(&read_text(&machine)?)?;
            let Strategy::Mealy(m) = file.strategy else {
                bail!("{} holds a counter-strategy, not a system machine", machine.display());
            };
            let meta = file.meta.context("machine file has no decode metadata")?;
            let mut t = Transducer::new(m, &meta, &k)?;
            let ins = read_inputs(&k.structure, &read_text(&inputs)?, k.streams)?;
            if ins.is_empty() {
                bail!("{} has no input tuples", inputs.display());
            }
            let steps = steps.unwrap_or(ins.len());
            if !looping && steps > ins.len() {
                bail!("{steps} steps requested but only {} inputs given (use --loop to repeat them)", ins.len());
            }
            let sim = if looping {
                simulate(&mut t, &[], &ins, steps, 1000)?
            } else {
                simulate(&mut t, &ins[..steps], &[], steps, 0)?
            };
            for r in &sim.records {
                println!("{}", t.log_line(r));
            }
            let verdict = match (&sim.lasso, looping) {
                (Some(tr), true) => {
                    if check_trace(&surface, tr, guard_depth.into())? {
                        "TRACE SAT".to_string()
                    } else {
                        "TRACE UNSAT".to_string()
                    }
                }
                (_, looping) => match check_prefix(&surface, &sim.steps, guard_depth.into())? {
                    Some(true) => "TRACE SAT".into(),
                    Some(false) => "TRACE UNSAT".into(),
                    None if looping => "PREFIX OK (no repeating configuration found)".into(),
                    None => "PREFIX OK".into(),
                },
            };
            println!("{verdict}");
            Ok(0)
        }
        Cmd::Elimfix {
            formula,
            structure,
            constants,
        } => {
            let base = parse_struct_expr(&structure)?.build();
            let mut decls = Vec::new();
            for c in &constants {
                let (name, value) = match c.split_once('=') {
                    Some((n, v)) => (n.trim(), Some(base.parse_element(v.trim())?)),
                    None => (c.trim(), None),
                };
                decls.push((name.to_string(), value));
            }
            let names: Vec<String> = decls.iter().map(|(n, _)| n.clone()).collect();
            let s = if decls.is_empty() { base } else { base.with_constants(decls)? };
            let f = parse_fo(&formula, &names)?;
            let out = eliminate_fixpoints(&s, &f)?;
            for tr in &out.traces {
                ctx.note(format!(
                    "{} {}: {} iterates, fixed at {:?}",
                    tr.op.keyword(),
                    tr.rel,
                    tr.sets.len(),
                    tr.fixed_at
                ));
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", out.formula);
            Ok(0)
        }
        Cmd::ExportTlsf {
            spec,
            mode,
            guard,
            guard_depth,
            title,
            output,
        } => {
            let cfg = Config {
                mode,
                guard,
                guard_depth,
                caps: CapArgs {
                    max_arity: None,
                    max_types: None,
                },
            };
            let (_, p) = propositional(&ctx, &spec, &cfg)?;
            let title = title.unwrap_or_else(|| {
                spec.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            });
            write_out(output.as_deref(), &export_tlsf(&p, &title)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
