//! Command-line front end for `formal-rings`.
//!
//! Every command produces a [`Report`]; the process exit code is a function
//! of its [`Verdict`] alone.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use formal_rings::finite::{
    central_idempotent_decomposition, ideal_power_sizes, matrix_order, oracle_isomorphic,
    prime_radical, quotient, span_generators, verify_isomorphism, FiniteError, OracleOptions,
    DEFAULT_LIMIT,
};
use formal_rings::format::{
    load_system, read_system_file, Factors, FormatError, LoadedSystem, RingDescriptor, SystemFile,
};
use formal_rings::{
    canonicalize, decide_isomorphism, FactorError, FactorSystem, FiniteRingTable, FormalMatrixRing,
    IsoOutcome, RingElement,
};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "fmr",
    version,
    about = "Formal matrix rings: validation, canonical forms, isomorphism"
)]
pub struct Cli {
    /// Print the report as a JSON envelope.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the normalization and cocycle identities of a system file.
    Validate { file: PathBuf },
    /// Canonical relabelling and block descriptor of a binary system.
    Canon {
        file: PathBuf,
        /// The distinguished factor, when the file does not determine it.
        #[arg(long)]
        s: Option<i64>,
    },
    /// Decide whether two binary systems give isomorphic rings.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Ask the finite oracle instead; required when the files use different s.
        #[arg(long)]
        experiment: bool,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Exhaustive isomorphism search on the materialized rings.
    OracleIso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        deterministic: bool,
    },
    /// Prime radical P(K), a generating set, and |K/P(K)|.
    Radical {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Sizes of the indecomposable factors of K/P(K).
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Write a system file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Randomized checks.
    Probe {
        #[command(subcommand)]
        kind: ProbeKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    Binary {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<usize>,
        #[arg(long)]
        s: i64,
        #[arg(long, value_parser = parse_ring)]
        ring: RingDescriptor,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Coboundary {
        #[arg(long)]
        n: usize,
        /// Exponent matrix, rows separated by `;`, e.g. `0,1;0,0`.
        #[arg(long)]
        g: String,
        #[arg(long)]
        s: i64,
        #[arg(long, value_parser = parse_ring)]
        ring: RingDescriptor,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Trivial {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_ring)]
        ring: RingDescriptor,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeKind {
    /// Test (AB)C = A(BC) on all matrix-unit triples and on seeded random triples.
    Assoc {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// `mod:M` or `Z`.
pub fn parse_ring(text: &str) -> Result<RingDescriptor, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("z") {
        return Ok(RingDescriptor::Integers);
    }
    let m = t
        .strip_prefix("mod:")
        .ok_or_else(|| format!("expected `mod:M` or `Z`, got `{text}`"))?;
    let m: i64 = m.parse().map_err(|e| format!("bad modulus `{m}`: {e}"))?;
    if m < 2 {
        return Err(format!("modulus must be at least 2, got {m}"));
    }
    Ok(RingDescriptor::Modular { m })
}

fn parse_exponents(text: &str) -> Result<Vec<Vec<u32>>, String> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u32>()
                        .map_err(|e| format!("bad exponent `{v}`: {e}"))
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Valid,
    Invalid,
    True,
    False,
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
    Malformed,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok | Verdict::Valid | Verdict::True | Verdict::Isomorphic => 0,
            Verdict::Invalid | Verdict::False | Verdict::NotIsomorphic => 1,
            Verdict::Malformed => 2,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Isomorphic => "Isomorphic",
            Verdict::NotIsomorphic => "NotIsomorphic",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::Malformed => "malformed",
        }
    }
}

impl From<IsoOutcome> for Verdict {
    fn from(o: IsoOutcome) -> Self {
        match o {
            IsoOutcome::Isomorphic => Verdict::Isomorphic,
            IsoOutcome::NotIsomorphic => Verdict::NotIsomorphic,
            IsoOutcome::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub verdict: Verdict,
    pub hypotheses: Vec<Value>,
    pub data: Value,
    pub seed: Option<u64>,
    pub text: String,
}

impl Report {
    fn new(command: &'static str, verdict: Verdict, data: Value, text: String) -> Self {
        Report {
            command,
            verdict,
            hypotheses: Vec::new(),
            data,
            seed: None,
            text,
        }
    }

    fn malformed(command: &'static str, message: String) -> Self {
        Report::new(
            command,
            Verdict::Malformed,
            json!({ "error": message }),
            format!("error: {message}"),
        )
    }

    pub fn envelope(&self) -> Value {
        json!({
            "command": self.command,
            "verdict": self.verdict.as_str(),
            "hypotheses": self.hypotheses,
            "data": self.data,
            "seed": self.seed,
        })
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.envelope()).expect("reports serialize")
        } else {
            self.text.clone()
        }
    }
}

type Step<T> = Result<T, String>;

fn load(path: &Path) -> Step<LoadedSystem> {
    load_system(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn materialize(sys: &FactorSystem, limit: usize) -> Step<FiniteRingTable> {
    FiniteRingTable::materialize(&FormalMatrixRing::new(sys.clone()), limit)
        .map_err(|e: FiniteError| e.to_string())
}

fn matrix_literal(entries: &[i64], n: usize) -> String {
    let rows: Vec<&[i64]> = entries.chunks(n).collect();
    serde_json::to_string(&rows).expect("matrices serialize")
}

pub fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Canon { file, s } => canon(file, *s),
        Command::Iso {
            a,
            b,
            experiment,
            limit,
        } => iso(a, b, *experiment, *limit),
        Command::OracleIso {
            a,
            b,
            limit,
            deterministic,
        } => oracle_iso(a, b, *limit, *deterministic),
        Command::Radical { file, limit } => radical(file, *limit),
        Command::Decompose { file, limit } => decompose(file, *limit),
        Command::Gen { kind } => generate(kind),
        Command::Probe {
            kind:
                ProbeKind::Assoc {
                    file,
                    samples,
                    seed,
                },
        } => probe(file, *samples, *seed),
    }
}

fn validate(file: &Path) -> Report {
    const CMD: &str = "validate";
    let parsed = match read_system_file(file) {
        Ok(f) => f,
        Err(e) => return Report::malformed(CMD, format!("{}: {e}", file.display())),
    };
    match parsed.build() {
        Ok(loaded) => {
            let sys = &loaded.system;
            let derived = sys.derived_relations_report();
            let text = format!(
                "valid: n = {}, ring {}, {} derived relations checked",
                sys.n(),
                sys.ring(),
                derived.checked
            );
            Report::new(
                CMD,
                Verdict::Valid,
                json!({
                    "n": sys.n(),
                    "ring": sys.ring().to_string(),
                    "s": loaded.s.map(|s| s.value()),
                    "derived_relations_checked": derived.checked,
                }),
                text,
            )
        }
        Err(FormatError::Factor(FactorError::Violation(v))) => Report::new(
            CMD,
            Verdict::Invalid,
            json!({ "violation": v.kind.to_string(), "indices": v.indices }),
            format!("invalid: {v}"),
        ),
        Err(e) => Report::malformed(CMD, format!("{}: {e}", file.display())),
    }
}

fn canon(file: &Path, s: Option<i64>) -> Report {
    const CMD: &str = "canon";
    let step = || -> Step<Report> {
        let loaded = load(file)?;
        let ring = loaded.system.ring();
        let s = match (s, loaded.s) {
            (Some(v), _) => {
                if !ring.contains(v) {
                    return Err(format!("s = {v} is not a canonical element of {ring}"));
                }
                ring.element(v)
            }
            (None, Some(s)) => s,
            (None, None) => return Err("cannot determine s from the file; pass --s".into()),
        };
        let c = canonicalize(&loaded.system, &s).map_err(|e| e.to_string())?;
        let mut text = format!(
            "tau: {}\ndescriptor: {}\ncanonical S:\n",
            c.tau, c.descriptor
        );
        for row in &c.canonical_s {
            let _ = writeln!(text, "  {row:?}");
        }
        Ok(Report::new(
            CMD,
            Verdict::Ok,
            json!({
                "tau": c.tau.images(),
                "s": s.value(),
                "block_sizes": c.descriptor.block_sizes,
                "canonical_s": c.canonical_s,
                "classes": c.partition.classes(),
            }),
            text.trim_end().to_string(),
        ))
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn pick_s(a: &LoadedSystem, b: &LoadedSystem) -> Result<RingElement, (RingElement, RingElement)> {
    match (a.s, b.s) {
        (Some(x), Some(y)) if x != y => Err((x, y)),
        (Some(x), _) | (None, Some(x)) => Ok(x),
        // Both tables are all ones; any nilpotent s describes them.
        (None, None) => Ok(a.system.ring().nilradical_generator()),
    }
}

fn iso(a: &Path, b: &Path, experiment: bool, limit: usize) -> Report {
    const CMD: &str = "iso";
    let step = || -> Step<Report> {
        let (la, lb) = (load(a)?, load(b)?);
        let ring = la.system.ring();
        if lb.system.ring() != ring {
            return Err(format!(
                "base rings differ: {} vs {}",
                ring,
                lb.system.ring()
            ));
        }
        if la.system.n() != lb.system.n() {
            return Err(format!(
                "orders differ: {} vs {}",
                la.system.n(),
                lb.system.n()
            ));
        }
        let s = pick_s(&la, &lb);
        if experiment {
            let (ta, tb) = (
                materialize(&la.system, limit)?,
                materialize(&lb.system, limit)?,
            );
            let r = oracle_isomorphic(
                &ta,
                &tb,
                OracleOptions {
                    limit,
                    deterministic: true,
                },
            )
            .map_err(|e| e.to_string())?;
            let verdict = if r.isomorphic {
                Verdict::Isomorphic
            } else {
                Verdict::NotIsomorphic
            };
            let (sa, sb) = match s {
                Ok(x) => (x, x),
                Err(pair) => pair,
            };
            return Ok(Report::new(
                CMD,
                verdict,
                json!({ "basis": "oracle", "s": [sa.value(), sb.value()], "nodes": r.nodes, "size": ta.size() }),
                format!(
                    "{} (oracle, {} elements, {} nodes)",
                    verdict.as_str(),
                    ta.size(),
                    r.nodes
                ),
            ));
        }
        let s = s.map_err(|(x, y)| {
            format!("the files use different s ({x} and {y}); rerun with --experiment to ask the oracle")
        })?;
        let v = decide_isomorphism(ring, &s, &la.system, &lb.system).map_err(|e| e.to_string())?;
        let verdict = Verdict::from(v.outcome);
        let mut text = format!("{} ({})", v.outcome, v.basis);
        if let Some((da, db)) = &v.descriptors {
            let _ = write!(text, "\n  A: {da}\n  B: {db}");
        }
        for h in &v.hypotheses {
            let mark = if h.passed { "ok" } else { "--" };
            let _ = write!(text, "\n  [{mark}] {}: {}", h.name, h.detail);
        }
        if let Some(w) = &v.witness {
            let _ = write!(text, "\n  witness: {w}");
        }
        let mut report = Report::new(
            CMD,
            verdict,
            json!({
                "basis": v.basis,
                "s": s.value(),
                "witness": v.witness.as_ref().map(|w| w.images()),
                "descriptors": v.descriptors.as_ref().map(|(da, db)| json!([da.block_sizes, db.block_sizes])),
            }),
            text,
        );
        report.hypotheses = v
            .hypotheses
            .iter()
            .map(|h| json!({ "name": h.name, "passed": h.passed, "detail": h.detail }))
            .collect();
        Ok(report)
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn oracle_iso(a: &Path, b: &Path, limit: usize, deterministic: bool) -> Report {
    const CMD: &str = "oracle-iso";
    let step = || -> Step<Report> {
        let (la, lb) = (load(a)?, load(b)?);
        let (ta, tb) = (
            materialize(&la.system, limit)?,
            materialize(&lb.system, limit)?,
        );
        let r = oracle_isomorphic(
            &ta,
            &tb,
            OracleOptions {
                limit,
                deterministic,
            },
        )
        .map_err(|e| e.to_string())?;
        let n = la.system.n();
        let mut text = format!(
            "{} ({} vs {} elements, {} nodes)",
            r.isomorphic,
            ta.size(),
            tb.size(),
            r.nodes
        );
        let images: Option<Vec<Value>> = r.witness.as_ref().map(|w| {
            ta.generators()
                .iter()
                .map(|&g| {
                    json!({
                        "from": matrix_literal(ta.label(g), n),
                        "to": matrix_literal(tb.label(w[g]), lb.system.n()),
                    })
                })
                .collect()
        });
        if let Some(w) = &r.witness {
            verify_isomorphism(&ta, &tb, w)
                .map_err(|e| format!("internal: witness rejected: {e}"))?;
            text.push_str("\n  generator images:");
            for &g in ta.generators() {
                let _ = write!(
                    text,
                    "\n    {} -> {}",
                    matrix_literal(ta.label(g), n),
                    matrix_literal(tb.label(w[g]), lb.system.n())
                );
            }
        }
        Ok(Report::new(
            CMD,
            if r.isomorphic {
                Verdict::True
            } else {
                Verdict::False
            },
            json!({ "size": [ta.size(), tb.size()], "nodes": r.nodes, "generator_images": images }),
            text,
        ))
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn radical(file: &Path, limit: usize) -> Report {
    const CMD: &str = "radical";
    let step = || -> Step<Report> {
        let loaded = load(file)?;
        let n = loaded.system.n();
        let t = materialize(&loaded.system, limit)?;
        let p = prime_radical(&t);
        let gens = span_generators(&t, &p);
        let q = quotient(&t, &p).map_err(|e| e.to_string())?;
        let powers = ideal_power_sizes(&t, &p);
        let gen_literals: Vec<String> = gens
            .iter()
            .map(|&g| matrix_literal(t.label(g), n))
            .collect();
        let mut text = format!(
            "|K| = {}\n|P(K)| = {}\ngenerators of P(K):",
            t.size(),
            p.len()
        );
        for g in &gen_literals {
            let _ = write!(text, "\n  {g}");
        }
        let _ = write!(text, "\n|K/P(K)| = {}\npower sizes: {powers:?}", q.size());
        Ok(Report::new(
            CMD,
            Verdict::Ok,
            json!({
                "size": t.size(),
                "radical_size": p.len(),
                "generators": gen_literals,
                "quotient_size": q.size(),
                "power_sizes": powers,
            }),
            text,
        ))
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn decompose(file: &Path, limit: usize) -> Report {
    const CMD: &str = "decompose";
    let step = || -> Step<Report> {
        let loaded = load(file)?;
        let ring = loaded.system.ring();
        let t = materialize(&loaded.system, limit)?;
        let q = quotient(&t, &prime_radical(&t)).map_err(|e| e.to_string())?;
        let sizes: Vec<usize> = central_idempotent_decomposition(&q)
            .iter()
            .map(FiniteRingTable::size)
            .collect();
        let residue = ring.residue_ring();
        let orders: Option<Vec<usize>> = residue
            .order()
            .and_then(|r| sizes.iter().map(|&f| matrix_order(f, r as usize)).collect());
        let mut text = format!("|K/P(K)| = {}\nfactor sizes: {sizes:?}", q.size());
        if let Some(o) = &orders {
            let _ = write!(text, "\nmatrix orders over {residue}: {o:?}");
        }
        Ok(Report::new(
            CMD,
            Verdict::Ok,
            json!({ "quotient_size": q.size(), "factor_sizes": sizes, "matrix_orders": orders }),
            text,
        ))
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn generate(kind: &GenKind) -> Report {
    const CMD: &str = "gen";
    let step = || -> Step<Report> {
        let (file, output) = match kind {
            GenKind::Binary {
                n,
                classes,
                s,
                ring,
                output,
            } => (
                SystemFile {
                    ring: *ring,
                    n: *n,
                    factors: Factors::Binary {
                        s: *s,
                        classes: classes.clone(),
                    },
                },
                output,
            ),
            GenKind::Coboundary {
                n,
                g,
                s,
                ring,
                output,
            } => (
                SystemFile {
                    ring: *ring,
                    n: *n,
                    factors: Factors::Coboundary {
                        s: *s,
                        g: parse_exponents(g)?,
                    },
                },
                output,
            ),
            GenKind::Trivial { n, ring, output } => {
                let base = ring.to_ring().map_err(|e| e.to_string())?;
                let sys = FactorSystem::trivial(base, *n).map_err(|e| e.to_string())?;
                (SystemFile::explicit(&sys, None), output)
            }
        };
        let loaded = file.build().map_err(|e| e.to_string())?;
        let body = file.to_json();
        let text = match output {
            Some(path) => {
                std::fs::write(path, format!("{body}\n"))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                format!(
                    "wrote {} (n = {}, ring {})",
                    path.display(),
                    loaded.system.n(),
                    loaded.system.ring()
                )
            }
            None => body.clone(),
        };
        let parsed: Value = serde_json::from_str(&body).expect("generated files are JSON");
        Ok(Report::new(
            CMD,
            Verdict::Ok,
            json!({ "file": parsed, "path": output.as_ref().map(|p| p.display().to_string()) }),
            text,
        ))
    };
    step().unwrap_or_else(|e| Report::malformed(CMD, e))
}

fn probe(file: &Path, samples: usize, seed: u64) -> Report {
    const CMD: &str = "probe";
    let step = || -> Step<Report> {
        let sys = read_system_file(file)
            .and_then(|f| f.build_unchecked())
            .map_err(|e| format!("{}: {e}", file.display()))?;
        let rep = FormalMatrixRing::new(sys).associativity_probe(samples, seed);
        let (verdict, text, witness) = match &rep.counterexample {
            None => (
                Verdict::True,
                format!(
                    "associativity holds on {} matrix-unit triples and {} random triples (seed {seed})",
                    rep.unit_triples, rep.samples
                ),
                Value::Null,
            ),
            Some(w) => (
                Verdict::False,
                format!(
                    "associativity fails (seed {seed}, after {} unit triples, {} random triples)\n  A = {}\n  B = {}\n  C = {}\n  (AB)C = {}\n  A(BC) = {}",
                    rep.unit_triples, rep.samples, w.a, w.b, w.c, w.left, w.right
                ),
                json!({
                    "a": w.a.rows(), "b": w.b.rows(), "c": w.c.rows(),
                    "left": w.left.rows(), "right": w.right.rows(),
                }),
            ),
        };
        let mut report = Report::new(
            CMD,
            verdict,
            json!({ "unit_triples": rep.unit_triples, "samples": rep.samples, "counterexample": witness }),
            text,
        );
        report.seed = Some(seed);
        Ok(report)
    };
    let mut report = step().unwrap_or_else(|e| Report::malformed(CMD, e));
    report.seed = Some(seed);
    report
}
