use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use raag_coherence::calculus::{derive_facts, load_expr, AnalysisBudget, Derivation, Polarity};
use raag_coherence::chordal::{is_chordal, Chordality};
use raag_coherence::connectivity::Tri;
use raag_coherence::homology::{homology, Coefficients, HomologySummary};
use raag_coherence::input::load_complex;
use raag_coherence::obstruction::{scan_obstructions, ScanLimits, ScanReport};
use raag_coherence::pi1::DEFAULT_TIETZE_BUDGET;
use raag_coherence::report::{analyze, AnalysisOptions};
use raag_coherence::t1::{t1_certify, T1Node, T1Outcome};
use raag_coherence::tn::{certify_tn, verify_tn_certificate, SearchBudget, TnNode, TnOutcome, TnSearch};
use raag_coherence::{Error, ExtNat, SimplicialComplex, MAX_VERTICES};

#[derive(Parser)]
#[command(name = "raagcoh")]
#[command(about = "Coherence analysis for right-angled Artin groups of flag complexes")]
#[command(version)]
struct Cli {
    /// Also write the JSON result to this path ("-" prints JSON instead of text)
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Largest n examined (default: dimension + 1)
    #[arg(long, global = true)]
    max_n: Option<u32>,

    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for randomised tooling; the analyses themselves are deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TnArgs {
    /// Try every chordal separating full subcomplex, not only minimal separators
    #[arg(long)]
    exhaustive_separators: bool,

    /// Maximum recursion depth of the certificate search
    #[arg(long, default_value_t = MAX_VERTICES + 1)]
    max_depth: usize,

    /// Maximum separators tried per node
    #[arg(long, default_value_t = 256)]
    max_separators: usize,
}

impl TnArgs {
    fn budget(self) -> SearchBudget {
        SearchBudget {
            max_depth: self.max_depth,
            max_separators: self.max_separators,
            exhaustive_separators: self.exhaustive_separators,
            memoise: true,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ScanArgs {
    /// Maximum number of full subcomplexes examined
    #[arg(long, default_value_t = 1 << 20)]
    max_subsets: u64,

    /// Cost budget for simplifying fundamental group presentations
    #[arg(long, default_value_t = DEFAULT_TIETZE_BUDGET)]
    pi1_budget: usize,
}

impl ScanArgs {
    fn limits(self) -> ScanLimits {
        ScanLimits {
            max_subsets: self.max_subsets,
            pi1_budget: self.pi1_budget,
            prune: true,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Q,
    Z,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis and report the coherence status of A_L for n = 1..max-n
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        tn: TnArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Decide chordality of the 1-skeleton with a checkable witness
    Chordal { input: PathBuf },
    /// Certify membership in T1 (clique-separator decomposition) or refute it
    T1 { input: PathBuf },
    /// Simplicial homology
    Homology {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        coeff: Coeff,
        /// Print unreduced Betti numbers
        #[arg(long)]
        unreduced: bool,
    },
    /// Search for a certificate of membership in T_n
    Tn {
        input: PathBuf,
        /// Level n (1 delegates to the T1 certifier)
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        tn: TnArgs,
    },
    /// Scan full subcomplexes for (n-1)-connected, not n-connected ones
    Bb {
        input: PathBuf,
        /// Level n ≥ 1
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Derive coherence facts for a group expression
    Calculus {
        expr: PathBuf,
        #[command(flatten)]
        tn: TnArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

struct Outcome {
    text: String,
    json: String,
    partial: bool,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

fn names(complex: &SimplicialComplex, vs: impl IntoIterator<Item = usize>) -> String {
    let labels: Vec<&str> = vs.into_iter().map(|i| complex.labels()[i].as_str()).collect();
    format!("{{{}}}", labels.join(", "))
}

#[derive(Serialize)]
struct ChordalJson<'a> {
    vertices: &'a [String],
    #[serde(flatten)]
    chordality: &'a Chordality,
}

fn chordal(complex: &SimplicialComplex) -> Outcome {
    let result = is_chordal(&complex.one_skeleton());
    let text = match &result {
        Chordality::Yes { order } => format!(
            "chordal\nperfect elimination order: {}\n",
            order
                .0
                .iter()
                .map(|&i| complex.labels()[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        ),
        Chordality::No { cycle } => format!(
            "not chordal\ninduced cycle: {}\n",
            cycle
                .0
                .iter()
                .map(|&i| complex.labels()[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        ),
    };
    Outcome {
        text,
        json: to_json(&ChordalJson {
            vertices: complex.labels(),
            chordality: &result,
        }),
        partial: false,
    }
}

fn render_t1(complex: &SimplicialComplex, node: &T1Node, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match node {
        T1Node::Simplex { vertices } => {
            let _ = writeln!(out, "{pad}simplex {}", names(complex, vertices.iter()));
        }
        T1Node::Gluing {
            separator, left, right, ..
        } => {
            let _ = writeln!(out, "{pad}glue along {}", names(complex, separator.iter()));
            render_t1(complex, left, depth + 1, out);
            render_t1(complex, right, depth + 1, out);
        }
    }
}

#[derive(Serialize)]
struct T1Json<'a> {
    vertices: &'a [String],
    #[serde(flatten)]
    outcome: &'a T1Outcome,
}

fn t1(complex: &SimplicialComplex) -> Result<Outcome, Error> {
    let outcome = t1_certify(complex)?;
    let mut text = String::new();
    match &outcome {
        T1Outcome::Certified { certificate } => {
            text.push_str("in T1\n");
            render_t1(complex, certificate, 1, &mut text);
        }
        T1Outcome::Refuted { cycle } => {
            let _ = writeln!(
                text,
                "not in T1: induced cycle {}",
                names(complex, cycle.0.iter().copied())
            );
        }
    }
    Ok(Outcome {
        text,
        json: to_json(&T1Json {
            vertices: complex.labels(),
            outcome: &outcome,
        }),
        partial: false,
    })
}

fn homology_text(h: &HomologySummary, unreduced: bool) -> String {
    let mut text = String::new();
    let coeff = match h.coefficients {
        Coefficients::Q => "Q",
        Coefficients::Z => "Z",
    };
    let betti = if unreduced { h.betti() } else { h.reduced_betti() };
    let kind = if unreduced { "Betti" } else { "reduced Betti" };
    let _ = writeln!(text, "{kind} numbers over {coeff}: {betti:?}");
    for d in &h.degrees {
        if let Some(t) = d.torsion.as_ref().filter(|t| !t.is_empty()) {
            let _ = writeln!(text, "torsion in H_{}: {}", d.degree, t.join(", "));
        }
    }
    let _ = writeln!(text, "Euler characteristic: {}", h.euler_characteristic);
    text
}

fn render_tn(complex: &SimplicialComplex, node: &TnNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let vs = names(complex, node.vertices().iter());
    let _ = match node {
        TnNode::Simplex { .. } => writeln!(out, "{pad}simplex {vs}"),
        TnNode::LowDim { dimension, .. } => writeln!(out, "{pad}dimension {dimension} on {vs}"),
        TnNode::TopBettiZero { dimension, .. } => {
            writeln!(
                out,
                "{pad}dimension {dimension} with vanishing top rational homology on {vs}"
            )
        }
        TnNode::Cone { apex, base, .. } => {
            let _ = writeln!(out, "{pad}cone with apex {}", complex.labels()[*apex]);
            render_tn(complex, base, depth + 1, out);
            Ok(())
        }
        TnNode::Gluing {
            separator, left, right, ..
        } => {
            let _ = writeln!(out, "{pad}glue along {}", names(complex, separator.iter()));
            render_tn(complex, left, depth + 1, out);
            render_tn(complex, right, depth + 1, out);
            Ok(())
        }
    };
}

#[derive(Serialize)]
struct TnJson<'a> {
    vertices: &'a [String],
    #[serde(flatten)]
    search: &'a TnSearch,
    verified: bool,
}

fn tn(complex: &SimplicialComplex, n: u32, args: TnArgs) -> Result<Outcome, Error> {
    if n == 1 {
        return t1(complex);
    }
    let search = certify_tn(complex, ExtNat::Fin(n), args.budget())?;
    let mut text = String::new();
    let mut verified = false;
    match &search.outcome {
        TnOutcome::Certified { certificate } => {
            verified = verify_tn_certificate(certificate, complex, ExtNat::Fin(n)).is_ok();
            let _ = writeln!(
                text,
                "in T{n} (certificate {})",
                if verified { "verified" } else { "FAILED verification" }
            );
            render_tn(complex, &certificate.root, 1, &mut text);
        }
        TnOutcome::Exhausted => {
            let strategy = if args.exhaustive_separators {
                "exhaustive separators"
            } else {
                "minimal separators"
            };
            let _ = writeln!(text, "no T{n} certificate found by this strategy ({strategy})");
        }
        TnOutcome::BudgetExceeded => {
            let _ = writeln!(text, "search budget exceeded before a T{n} certificate was found");
        }
    }
    let _ = writeln!(
        text,
        "nodes explored: {}, memo hits: {}",
        search.stats.nodes, search.stats.memo_hits
    );
    Ok(Outcome {
        text,
        json: to_json(&TnJson {
            vertices: complex.labels(),
            search: &search,
            verified,
        }),
        partial: search.outcome == TnOutcome::BudgetExceeded,
    })
}

fn bb_text(report: &ScanReport) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "scanned {} subsets ({}), {} pruned",
        report.scanned,
        if report.exhaustive { "exhaustive" } else { "partial" },
        report.pruned
    );
    if report.obstructions.is_empty() {
        let _ = writeln!(text, "no obstruction found at n = {}", report.n);
    }
    for o in &report.obstructions {
        let _ = writeln!(
            text,
            "obstruction: {{{}}} is {}-connected but not {}-connected",
            o.labels.join(", "),
            report.n as i64 - 1,
            report.n
        );
    }
    for c in &report.candidates {
        let word = |t: Tri| match t {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        };
        let _ = writeln!(
            text,
            "undecided: {{{}}} (lower {}, upper {})",
            c.labels.join(", "),
            word(c.lower.status),
            word(c.upper.status)
        );
    }
    text
}

fn calculus_text(d: &Derivation) -> String {
    let mut text = String::new();
    let list =
        |ps: &[raag_coherence::calculus::CoherencePair]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(text, "group: {}", d.group);
    let _ = writeln!(text, "type F_n for n <= {}", d.finiteness);
    let _ = writeln!(text, "coherent: {}", list(&d.positive));
    let _ = writeln!(text, "not coherent: {}", list(&d.negative));
    let _ = writeln!(text, "derivation:");
    for t in &d.traces {
        let sign = match t.polarity {
            Polarity::Positive => "",
            Polarity::Negative => "not ",
        };
        let premises = if t.premises.is_empty() {
            String::new()
        } else {
            format!(" from {:?}", t.premises)
        };
        let rule = serde_json::to_value(t.rule)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = writeln!(
            text,
            "  [{}] {} is {sign}{}-coherent by {rule}{premises}",
            t.id, t.group, t.pair
        );
    }
    if d.incomplete {
        for n in &d.notes {
            let _ = writeln!(text, "note: {n}");
        }
    }
    text
}

fn load(input: &Path) -> Result<SimplicialComplex, Error> {
    load_complex(input)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Analyze { input, tn, scan } => {
            let complex = load(input)?;
            let options = AnalysisOptions {
                max_n: cli.max_n,
                tn: tn.budget(),
                scan: scan.limits(),
            };
            let report = analyze(&complex, &options)?;
            Ok(Outcome {
                text: report.render_text(),
                json: report.to_json(),
                partial: report.partial,
            })
        }
        Command::Chordal { input } => Ok(chordal(&load(input)?)),
        Command::T1 { input } => t1(&load(input)?),
        Command::Homology {
            input,
            coeff,
            unreduced,
        } => {
            let complex = load(input)?;
            let coeff = match coeff {
                Coeff::Q => Coefficients::Q,
                Coeff::Z => Coefficients::Z,
            };
            let h = homology(&complex, coeff);
            Ok(Outcome {
                text: homology_text(&h, *unreduced),
                json: to_json(&h),
                partial: false,
            })
        }
        Command::Tn { input, n, tn: args } => tn(&load(input)?, *n, *args),
        Command::Bb { input, n, scan } => {
            let complex = load(input)?;
            let report = scan_obstructions(&complex, *n, scan.limits())?;
            Ok(Outcome {
                text: bb_text(&report),
                json: to_json(&report),
                partial: !report.exhaustive || !report.candidates.is_empty(),
            })
        }
        Command::Calculus { expr, tn, scan } => {
            let e = load_expr(expr)?;
            let budget = AnalysisBudget {
                max_n: cli.max_n,
                tn: tn.budget(),
                scan: scan.limits(),
            };
            let d = derive_facts(&e, &budget);
            if let Err((node, c)) = d.check_consistency() {
                return Err(Error::Inconsistent(format!(
                    "{node}: positive {} (trace {}) against negative {} (trace {})",
                    c.positive, c.positive_trace, c.negative, c.negative_trace
                )));
            }
            Ok(Outcome {
                text: calculus_text(&d),
                json: d.to_json(),
                partial: d.incomplete,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match pool.install(|| run(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match cli.json.as_deref() {
        Some(p) if p == Path::new("-") => print!("{}", outcome.json),
        Some(p) => {
            print!("{}", outcome.text);
            if let Err(e) = std::fs::write(p, &outcome.json) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(if outcome.partial { 2 } else { 0 })
}
