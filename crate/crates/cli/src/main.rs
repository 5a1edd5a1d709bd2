use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use closefields::hecke::{sigma_act, HeckeAlgebra, HeckeElement, HeckeJson};
use closefields::kazhdan::{
    check_galois_equivariance, check_kaz_hom, check_lemma_conv, check_main_diagram, CaseKind, Diagram, PairMode,
    Report, RunConfig,
};
use closefields::lattice::{enumerate_labels, Window};
use closefields::tate::{linkage_check, tate_cohomology, CyclicModule, ModuleJson, DEFAULT_DIM_BOUND};
use closefields::{Error, Result};
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "closefields", version, about = "Hecke algebras of GL_n over close local fields, mod l")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated rings and their extensions.
    #[command(subcommand)]
    Fields(FieldsCmd),
    /// Double cosets at the congruence level.
    #[command(subcommand)]
    Cosets(CosetsCmd),
    /// Hecke algebra operations on element JSON files.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// The Kazhdan transfer.
    #[command(subcommand)]
    Kaz(KazCmd),
    /// Verification suites; exit code 1 when a sample fails.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Tate cohomology of a module.
    #[command(subcommand)]
    Tate(TateCmd),
    /// The linkage predicate.
    #[command(subcommand)]
    Linkage(LinkageCmd),
}

#[derive(Subcommand)]
enum FieldsCmd {
    Build(ConfigArgs),
}

#[derive(Subcommand)]
enum CosetsCmd {
    Enumerate {
        #[command(flatten)]
        config: ConfigArgs,
        /// One of F, F', E, E'.
        #[arg(long, default_value = "F")]
        side: String,
    },
}

#[derive(Subcommand)]
enum HeckeCmd {
    Convolve {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Brauer restriction from E to F (or E' to F').
    Brauer {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        input: PathBuf,
    },
    /// The Galois generator acting on an E or E' element.
    Sigma {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum KazCmd {
    /// F -> F', E -> E', or back with --inverse.
    Map {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    KazHom(ConfigArgs),
    GaloisEquivariance(ConfigArgs),
    MainDiagram(ConfigArgs),
    LemmaConv(ConfigArgs),
}

#[derive(Subcommand)]
enum TateCmd {
    Cohomology {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        i: u8,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum LinkageCmd {
    Check {
        #[arg(long)]
        xi: PathBuf,
        #[arg(long)]
        rho: PathBuf,
        /// JSON object from generator names of xi to generator names of rho.
        #[arg(long)]
        br: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIM_BOUND)]
        bound: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Unramified,
    Ramified,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    MixedEqual,
    EqualEqual,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    #[arg(long = "case", value_enum, default_value = "unramified")]
    case_kind: CaseArg,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 3)]
    l: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Matrix rank.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Defaults to mixed-equal for m = 1 and equal-equal otherwise.
    #[arg(long, value_enum)]
    pair_mode: Option<PairArg>,
    /// Cocharacters with entries in [0, window].
    #[arg(long, default_value_t = 2)]
    window: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    precision_cap: Option<u32>,
    #[arg(long)]
    budget: Option<u64>,
    /// Degree of the coefficient field over F_l.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Seeded random samples added to the structured families.
    #[arg(long, default_value_t = 25)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON document to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stream the JSON document to standard output.
    #[arg(long)]
    json: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let case = match self.case_kind {
            CaseArg::Unramified => CaseKind::Unramified,
            CaseArg::Ramified => CaseKind::Ramified,
        };
        let mut c = RunConfig::new(self.p, self.l, self.m, case);
        c.n = self.n;
        if let Some(mode) = self.pair_mode {
            c.pair_mode = match mode {
                PairArg::MixedEqual => PairMode::MixedEqual,
                PairArg::EqualEqual => PairMode::EqualEqual,
            };
        }
        c.window = self.window;
        c.seed = self.seed;
        c.precision_cap = self.precision_cap;
        if let Some(b) = self.budget {
            c.budget = b;
        }
        c.k = self.k;
        c.samples = self.samples;
        c.validate()?;
        Ok(c)
    }
}

/// A finished command: the document to emit and whether it counts as a pass.
struct Outcome {
    doc: Value,
    pass: bool,
}

fn envelope(command: &str, config: Value, result: Value) -> Outcome {
    Outcome { doc: json!({"command": command, "config": config, "library_version": VERSION, "result": result}), pass: true }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn algebra_by_name<'a>(d: &'a Diagram, name: &str) -> Result<&'a Arc<HeckeAlgebra>> {
    match name {
        "F" => Ok(&d.f),
        "F'" => Ok(&d.f2),
        "E" => Ok(&d.e),
        "E'" => Ok(&d.e2),
        _ => Err(Error::ConfigInvalid(format!("unknown side {name}; expected F, F', E or E'"))),
    }
}

fn read_element(d: &Diagram, path: &Path) -> Result<HeckeElement> {
    let json: HeckeJson = read_json(path)?;
    HeckeElement::from_json(algebra_by_name(d, &json.side.name)?, &json)
}

fn config_value(c: &RunConfig) -> Value {
    serde_json::to_value(c).expect("config serializes")
}

fn report_outcome(report: Report) -> Outcome {
    for (idx, s) in report.samples.iter().enumerate().filter(|(_, s)| !s.equal) {
        eprintln!("sample {idx} failed: input {}", s.input);
        for (side, h) in [("lhs", &s.lhs), ("rhs", &s.rhs)] {
            let support: Vec<Value> = h.terms.iter().map(|t| json!({"label": t.label, "coeff": t.coeff})).collect();
            eprintln!("  {side} support: {}", Value::Array(support));
        }
    }
    let pass = report.pass;
    Outcome { doc: serde_json::to_value(&report).expect("report serializes"), pass }
}

fn run(command: Command) -> Result<(Outcome, OutputArgs)> {
    Ok(match command {
        Command::Fields(FieldsCmd::Build(args)) => {
            let c = args.resolve()?;
            let d = c.diagram()?;
            let pair = &d.pair;
            let result = json!({
                "F": pair.base.f.spec(),
                "F'": pair.base.f2.spec(),
                "E": pair.ext.spec(),
                "E'": pair.ext2.spec(),
                "m": pair.base.m,
                "l": pair.l,
                "e": pair.e,
                "f": pair.l / pair.e,
                "sigma": pair.sigma.rule(),
                "sigma'": pair.sigma2.rule(),
            });
            (envelope("fields build", config_value(&c), result), args.output)
        }
        Command::Cosets(CosetsCmd::Enumerate { config, side }) => {
            let c = config.resolve()?;
            let d = c.diagram()?;
            let s = algebra_by_name(&d, &side)?.side().clone();
            let mut labels = enumerate_labels(&s, &Window::spread(c.window).cochars(c.n), c.budget)?;
            labels.sort();
            let out: Vec<Value> = labels.iter().map(|l| serde_json::to_value(s.label_to_json(l)).unwrap()).collect();
            let result = json!({"side": side, "count": out.len(), "labels": out});
            (envelope("cosets enumerate", config_value(&c), result), config.output)
        }
        Command::Hecke(HeckeCmd::Convolve { config, a, b }) => {
            let c = config.resolve()?;
            let d = c.diagram()?;
            let prod = read_element(&d, &a)?.convolve(&read_element(&d, &b)?)?;
            (envelope("hecke convolve", config_value(&c), serde_json::to_value(prod.to_json()?)?), config.output)
        }
        Command::Hecke(HeckeCmd::Brauer { config, input }) => {
            let c = config.resolve()?;
            let d = c.diagram()?;
            let h = read_element(&d, &input)?;
            let br = match h.side().name() {
                "E" => &d.br,
                "E'" => &d.br2,
                other => return Err(Error::SideMismatch(format!("Brauer restriction starts on E or E', not {other}"))),
            };
            let img = br.restrict(&h, Some(&Window::spread(c.window)))?;
            (envelope("hecke brauer", config_value(&c), serde_json::to_value(img.to_json()?)?), config.output)
        }
        Command::Hecke(HeckeCmd::Sigma { config, input }) => {
            let c = config.resolve()?;
            let d = c.diagram()?;
            let h = read_element(&d, &input)?;
            let gen = match h.side().name() {
                "E" => &d.pair.sigma,
                "E'" => &d.pair.sigma2,
                other => return Err(Error::SideMismatch(format!("the Galois action lives on E or E', not {other}"))),
            };
            let img = sigma_act(gen, &h)?;
            (envelope("hecke sigma", config_value(&c), serde_json::to_value(img.to_json()?)?), config.output)
        }
        Command::Kaz(KazCmd::Map { config, input, inverse }) => {
            let c = config.resolve()?;
            let d = c.diagram()?;
            let h = read_element(&d, &input)?;
            let (fwd, bwd) = match h.side().name() {
                "F" | "F'" => (&d.kaz_f, d.kaz_f.inverse()),
                _ => (&d.kaz_e, d.kaz_e.inverse()),
            };
            let img = if inverse { bwd.apply(&h)? } else { fwd.apply(&h)? };
            (envelope("kaz map", config_value(&c), serde_json::to_value(img.to_json()?)?), config.output)
        }
        Command::Check(cmd) => {
            let (args, run): (ConfigArgs, fn(&RunConfig) -> Result<Report>) = match cmd {
                CheckCmd::KazHom(a) => (a, check_kaz_hom),
                CheckCmd::GaloisEquivariance(a) => (a, check_galois_equivariance),
                CheckCmd::MainDiagram(a) => (a, check_main_diagram),
                CheckCmd::LemmaConv(a) => (a, check_lemma_conv),
            };
            let c = args.resolve()?;
            (report_outcome(run(&c)?), args.output)
        }
        Command::Tate(TateCmd::Cohomology { module, i, output }) => {
            let m = CyclicModule::from_json(&read_json::<ModuleJson>(&module)?)?;
            let r = tate_cohomology(&m, i)?;
            let config = json!({"l": m.field.characteristic(), "k": m.field.degree(), "dim": m.dim, "i": i});
            (envelope("tate cohomology", config, serde_json::to_value(r.to_json(&m))?), output)
        }
        Command::Linkage(LinkageCmd::Check { xi, rho, br, bound, output }) => {
            let xi = CyclicModule::from_json(&read_json::<ModuleJson>(&xi)?)?;
            let rho = CyclicModule::from_json(&read_json::<ModuleJson>(&rho)?)?;
            let br: BTreeMap<String, String> = read_json(&br)?;
            let verdicts = linkage_check(&xi, &rho, &br, bound)?;
            let config = json!({
                "l": xi.field.characteristic(),
                "k": xi.field.degree(),
                "xiDim": xi.dim,
                "rhoDim": rho.dim,
                "bound": bound,
            });
            (envelope("linkage check", config, serde_json::to_value(&verdicts)?), output)
        }
    })
}

fn emit(outcome: &Outcome, output: &OutputArgs) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(&outcome.doc).expect("document serializes") + "\n";
    if let Some(path) = &output.out {
        fs::write(path, &text)?;
    }
    if output.json || output.out.is_none() {
        // a closed pipe downstream is not an error of ours
        match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((outcome, output)) => {
            if let Err(e) = emit(&outcome, &output) {
                eprintln!("error: CONFIG_INVALID: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
