//! The `vknot` command line.
//!
//! Exit codes: 0 success, 1 invariance mismatch, 2 unreadable input, 3 size
//! cap exceeded, 4 invariant not defined for the code's flavor, 5 internal
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::arrow::{arrow_poly_capped, flat_arrow_capped, w_poly_capped};
use crate::bracket::{jones_capped, DEFAULT_MAX_CROSSINGS};
use crate::corpus;
use crate::error::Error;
use crate::gauss::GaussCode;
use crate::homology::{
    arrow_complex_capped, betti_equal_up_to_shift, khovanov_complex_capped, BettiTable,
    DEFAULT_MAX_HOMOLOGY_CROSSINGS,
};
use crate::moves::{scramble_with, Move, ScrambleConfig};
use crate::parity_bracket::{free_knot_invariant_capped, normalized_parity_bracket_capped, parity_bracket_capped};
use crate::poly::MultiPoly;

#[derive(Parser, Debug)]
#[command(name = "vknot", version, about = "Invariants of virtual, flat and long knots from Gauss codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute invariants of one or more codes.
    Invariants(InvariantsArgs),
    /// Apply a seeded sequence of random Reidemeister moves.
    Scramble(ScrambleArgs),
    /// Scramble repeatedly and compare invariants with the input's.
    CheckInvariance(CheckArgs),
    /// List or show the bundled diagrams.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// File of Gauss codes, one per line; `#` starts a comment.
    file: Option<PathBuf>,
    /// A Gauss code given on the command line.
    #[arg(long, conflicts_with_all = ["file", "corpus"])]
    inline: Option<String>,
    /// Name of a bundled corpus entry.
    #[arg(long, conflicts_with = "file")]
    corpus: Option<String>,
}

#[derive(Args, Debug)]
struct Caps {
    #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_HOMOLOGY_CROSSINGS)]
    max_homology_crossings: usize,
}

#[derive(Args, Debug)]
struct InvariantsArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    caps: Caps,
    #[arg(long)]
    odd_writhe: bool,
    #[arg(long)]
    f: bool,
    #[arg(long)]
    jones: bool,
    #[arg(long)]
    arrow: bool,
    #[arg(long)]
    flat_arrow: bool,
    #[arg(long)]
    parity_bracket: bool,
    /// Reduce parity-bracket graphs as free (unsigned) graphs.
    #[arg(long)]
    z_mode: bool,
    #[arg(long)]
    khovanov: bool,
    #[arg(long)]
    arrow_homology: bool,
    #[arg(long)]
    json: bool,
    /// Include per-invariant wall-clock times (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct ScrambleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 20)]
    moves: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    /// Print the applied moves as comments before the code.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Inv {
    J,
    F,
    Arrow,
    FlatArrow,
    Parity,
    Khovanov,
    ArrowHomology,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    moves: usize,
    /// Invariants to compare; defaults to every one defined for the code.
    #[arg(long, value_enum, value_delimiter = ',')]
    invariants: Vec<Inv>,
    /// Crossing cap for the scrambled diagrams.
    #[arg(long, default_value_t = 10)]
    scramble_max_crossings: usize,
    #[command(flatten)]
    caps: Caps,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out<'a> = &'a mut dyn Write;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Invariants(a) => invariants(a, out),
        Command::Scramble(a) => scramble(a, out),
        Command::CheckInvariance(a) => check_invariance(a, out),
        Command::Corpus { action } => corpus_cmd(action, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Mismatch) => 1,
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MalformedToken { .. }
        | Error::CrossingCount { .. }
        | Error::MixedFlat
        | Error::SignMismatch { .. }
        | Error::KindMismatch { .. }
        | Error::UnknownCrossing { .. }
        | Error::PolyParse(_)
        | Error::UnknownEntry(_) => 2,
        Error::SizeCapExceeded { .. } => 3,
        Error::FlatCode | Error::NotFlat | Error::NotLong | Error::NotClosed | Error::AlreadyClosed => 4,
        _ => 5,
    }
}

fn read_codes(input: &Input) -> Result<Vec<GaussCode>, Failure> {
    if let Some(text) = &input.inline {
        return Ok(vec![GaussCode::parse(text)?]);
    }
    if let Some(name) = &input.corpus {
        return Ok(vec![corpus::code(name)?]);
    }
    let Some(path) = &input.file else {
        return Err(Failure::Io("no input: give a file, --inline or --corpus".into()));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let codes = GaussCode::parse_many(&text)?;
    if codes.is_empty() {
        return Err(Failure::Io(format!("{}: no Gauss code found", path.display())));
    }
    Ok(codes)
}

fn read_one(input: &Input) -> Result<GaussCode, Failure> {
    let mut codes = read_codes(input)?;
    if codes.len() != 1 {
        return Err(Failure::Io(format!("expected one code, found {}", codes.len())));
    }
    Ok(codes.remove(0))
}

fn poly_json(p: &MultiPoly) -> Value {
    json!({ "text": p.to_string(), "terms": p.to_json() })
}

fn betti_json(t: &BettiTable) -> Value {
    json!({ "text": t.to_string(), "table": t.to_json() })
}

fn flavor(code: &GaussCode) -> &'static str {
    if code.is_empty() {
        "empty"
    } else if code.is_flat() {
        "flat"
    } else {
        "virtual"
    }
}

fn defaults(code: &GaussCode, caps: &Caps) -> Vec<Inv> {
    let n = code.crossing_count();
    let mut v = Vec::new();
    if code.is_empty() || !code.is_flat() {
        v.extend([Inv::J, Inv::F, Inv::Arrow]);
        if !code.is_long() {
            v.push(Inv::Parity);
            if n <= caps.max_homology_crossings {
                v.extend([Inv::Khovanov, Inv::ArrowHomology]);
            }
        }
    }
    if code.is_empty() || code.is_flat() {
        v.push(Inv::FlatArrow);
        if !code.is_long() {
            v.push(Inv::Parity);
        }
    }
    v.dedup();
    v
}

struct Computed {
    text: Vec<String>,
    json: Map<String, Value>,
}

fn compute(code: &GaussCode, which: &[Inv], jones: bool, z_mode: bool, caps: &Caps, timing: bool) -> Result<Computed, Error> {
    let mut c = Computed { text: Vec::new(), json: Map::new() };
    let cap = caps.max_crossings;
    let flat = !code.is_empty() && code.is_flat();
    let mut times = Map::new();
    for &inv in which {
        let start = Instant::now();
        let key = match inv {
            Inv::J => {
                let j = code.odd_writhe()?;
                c.text.push(format!("J = {j}"));
                c.json.insert("odd_writhe".into(), json!(j));
                "odd_writhe"
            }
            Inv::F => {
                let res = jones_capped(code, cap)?;
                c.text.push(format!("f = {}", res.f));
                c.json.insert("f".into(), poly_json(&res.f));
                if jones {
                    let t = res.t_form.as_ref().map(|l| l.display("t"));
                    c.text.push(format!("V(t) = {}", t.clone().unwrap_or_else(|| "(fractional powers)".into())));
                    c.json.insert("jones".into(), json!(t));
                }
                "f"
            }
            Inv::Arrow => {
                let a = arrow_poly_capped(code, cap)?;
                let w = w_poly_capped(code, cap)?;
                c.text.push(format!("A = {a}"));
                c.text.push(format!("W = {w}"));
                c.text.push(format!("max K index = {}", w.max_k_index()));
                c.json.insert("arrow".into(), json!({ "A": poly_json(&a), "W": poly_json(&w), "max_k_index": w.max_k_index() }));
                "arrow"
            }
            Inv::FlatArrow => {
                let fa = flat_arrow_capped(code, cap)?;
                c.text.push(format!("F = {fa}"));
                c.json.insert("flat_arrow".into(), poly_json(&fa));
                "flat_arrow"
            }
            Inv::Parity => {
                if flat {
                    let v = free_knot_invariant_capped(code, cap)?;
                    c.text.push(format!("free-knot parity bracket = {v}"));
                    c.json.insert("parity_bracket".into(), json!({ "free_knot": { "text": v.to_string(), "terms": v.to_json() } }));
                } else {
                    let raw = parity_bracket_capped(code, z_mode, cap)?;
                    let norm = normalized_parity_bracket_capped(code, z_mode, cap)?;
                    c.text.push(format!("<K>_P = {raw}"));
                    c.text.push(format!("normalized <K>_P = {norm}"));
                    c.json.insert(
                        "parity_bracket".into(),
                        json!({
                            "z_mode": z_mode,
                            "bracket": { "text": raw.to_string(), "terms": raw.to_json() },
                            "normalized": { "text": norm.to_string(), "terms": norm.to_json() },
                        }),
                    );
                }
                "parity_bracket"
            }
            Inv::Khovanov => {
                let cx = khovanov_complex_capped(code, caps.max_homology_crossings)?;
                let (raw, norm) = (cx.betti(), cx.normalized_betti());
                c.text.push(format!("Khovanov mod 2 = {raw}"));
                c.text.push(format!("Khovanov mod 2 normalized = {norm}"));
                c.json.insert("khovanov".into(), json!({ "betti": betti_json(&raw), "normalized": betti_json(&norm) }));
                "khovanov"
            }
            Inv::ArrowHomology => {
                let cx = arrow_complex_capped(code, caps.max_homology_crossings)?;
                let t = cx.betti();
                c.text.push(format!("arrow homology = {t}"));
                c.json.insert("arrow_homology".into(), json!({ "betti": betti_json(&t) }));
                "arrow_homology"
            }
        };
        if timing {
            times.insert(key.into(), json!(start.elapsed().as_secs_f64() * 1000.0));
        }
    }
    if timing {
        c.json.insert("timing_ms".into(), Value::Object(times));
    }
    Ok(c)
}

fn invariants(a: InvariantsArgs, out: Out) -> Result<(), Failure> {
    let codes = read_codes(&a.input)?;
    let mut requested = Vec::new();
    for (flag, inv) in [
        (a.odd_writhe, Inv::J),
        (a.f || a.jones, Inv::F),
        (a.arrow, Inv::Arrow),
        (a.flat_arrow, Inv::FlatArrow),
        (a.parity_bracket, Inv::Parity),
        (a.khovanov, Inv::Khovanov),
        (a.arrow_homology, Inv::ArrowHomology),
    ] {
        if flag {
            requested.push(inv);
        }
    }
    let mut reports = Vec::new();
    let mut text = String::new();
    for code in &codes {
        let which = if requested.is_empty() { defaults(code, &a.caps) } else { requested.clone() };
        let jones = a.jones || requested.is_empty();
        let c = compute(code, &which, jones, a.z_mode, &a.caps, a.timing)?;
        text.push_str(&format!("code: {code}\n"));
        for line in &c.text {
            text.push_str(line);
            text.push('\n');
        }
        reports.push(json!({
            "input": code.to_string(),
            "shape": if code.is_long() { "long" } else { "closed" },
            "flavor": flavor(code),
            "crossings": code.crossing_count(),
            "invariants": Value::Object(c.json),
        }));
    }
    if a.json {
        let doc = json!({ "version": env!("CARGO_PKG_VERSION"), "reports": reports });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(|e| Failure::Io(e.to_string()))?;
    } else {
        write!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn scramble(a: ScrambleArgs, out: Out) -> Result<(), Failure> {
    let code = read_one(&a.input)?;
    let cfg = ScrambleConfig { max_crossings: a.max_crossings, flat: false };
    let s = scramble_with(&code, a.moves, a.seed, &cfg);
    let mut text = String::new();
    if a.trace {
        for m in &s.trace {
            text.push_str(&format!("# {m}\n"));
        }
    }
    text.push_str(&format!("{}\n", s.code));
    write!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))
}

/// Values compared by the invariance check; Betti tables of the arrow
/// complex are compared up to a bidegree shift.
#[derive(PartialEq)]
enum Fingerprint {
    Exact(String),
    UpToShift(BettiTable),
}

fn fingerprint(code: &GaussCode, inv: Inv, caps: &Caps) -> Result<Fingerprint, Error> {
    let cap = caps.max_crossings;
    let hcap = caps.max_homology_crossings;
    Ok(match inv {
        Inv::J => Fingerprint::Exact(code.odd_writhe()?.to_string()),
        Inv::F => Fingerprint::Exact(jones_capped(code, cap)?.f.to_string()),
        Inv::Arrow => Fingerprint::Exact(w_poly_capped(code, cap)?.to_string()),
        Inv::FlatArrow => Fingerprint::Exact(flat_arrow_capped(code, cap)?.to_string()),
        Inv::Parity => {
            if !code.is_empty() && code.is_flat() {
                Fingerprint::Exact(free_knot_invariant_capped(code, cap)?.to_string())
            } else {
                Fingerprint::Exact(normalized_parity_bracket_capped(code, false, cap)?.to_string())
            }
        }
        Inv::Khovanov => Fingerprint::Exact(khovanov_complex_capped(code, hcap)?.normalized_betti().to_string()),
        Inv::ArrowHomology => Fingerprint::UpToShift(arrow_complex_capped(code, hcap)?.betti()),
    })
}

fn same(a: &Fingerprint, b: &Fingerprint) -> bool {
    match (a, b) {
        (Fingerprint::Exact(x), Fingerprint::Exact(y)) => x == y,
        (Fingerprint::UpToShift(x), Fingerprint::UpToShift(y)) => betti_equal_up_to_shift(x, y).is_some(),
        _ => false,
    }
}

fn show(f: &Fingerprint) -> String {
    match f {
        Fingerprint::Exact(s) => s.clone(),
        Fingerprint::UpToShift(t) => t.to_string(),
    }
}

fn inv_name(inv: Inv) -> &'static str {
    match inv {
        Inv::J => "j",
        Inv::F => "f",
        Inv::Arrow => "arrow",
        Inv::FlatArrow => "flat-arrow",
        Inv::Parity => "parity",
        Inv::Khovanov => "khovanov",
        Inv::ArrowHomology => "arrow-homology",
    }
}

fn check_invariance(a: CheckArgs, out: Out) -> Result<(), Failure> {
    let code = read_one(&a.input)?;
    let flat = !code.is_empty() && code.is_flat();
    let mut which = if a.invariants.is_empty() { defaults(&code, &a.caps) } else { a.invariants.clone() };
    which.dedup();
    let base: Vec<Fingerprint> = which.iter().map(|&i| fingerprint(&code, i, &a.caps)).collect::<Result<_, _>>()?;
    let cfg = ScrambleConfig { max_crossings: a.scramble_max_crossings.max(code.crossing_count()), flat };
    let mut mismatch: Option<(usize, Inv, GaussCode, Vec<Move>, String, String)> = None;
    'trials: for t in 0..a.trials {
        let seed = a.seed.wrapping_add(t as u64);
        let s = scramble_with(&code, a.moves, seed, &cfg);
        for (k, &inv) in which.iter().enumerate() {
            let got = fingerprint(&s.code, inv, &a.caps)?;
            if !same(&base[k], &got) {
                mismatch = Some((t, inv, s.code.clone(), s.trace.clone(), show(&base[k]), show(&got)));
                break 'trials;
            }
        }
    }
    let names: Vec<&str> = which.iter().map(|&i| inv_name(i)).collect();
    let text = match &mismatch {
        None => format!("pass: {} trials, invariants {}\n", a.trials, names.join(",")),
        Some((t, inv, sc, trace, want, got)) => {
            let mut s = format!(
                "FAIL: trial {t} (seed {}) changed {}\n  input:     {code}\n  scrambled: {sc}\n  expected:  {want}\n  got:       {got}\n  moves:\n",
                a.seed.wrapping_add(*t as u64),
                inv_name(*inv)
            );
            for m in trace {
                s.push_str(&format!("    {m}\n"));
            }
            s
        }
    };
    if a.json {
        let doc = match &mismatch {
            None => json!({ "input": code.to_string(), "trials": a.trials, "invariants": names, "pass": true }),
            Some((t, inv, sc, trace, want, got)) => json!({
                "input": code.to_string(),
                "trials": a.trials,
                "invariants": names,
                "pass": false,
                "mismatch": {
                    "trial": t,
                    "seed": a.seed.wrapping_add(*t as u64),
                    "invariant": inv_name(*inv),
                    "scrambled": sc.to_string(),
                    "expected": want,
                    "got": got,
                    "moves": trace.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                }
            }),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(|e| Failure::Io(e.to_string()))?;
    } else {
        write!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))?;
    }
    match mismatch {
        None => Ok(()),
        Some(_) => Err(Failure::Mismatch),
    }
}

fn corpus_cmd(action: CorpusAction, out: Out) -> Result<(), Failure> {
    let text = match action {
        CorpusAction::List { json } => {
            let entries = corpus::entries();
            if json {
                serde_json::to_string_pretty(&entries).unwrap() + "\n"
            } else {
                let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
                entries
                    .iter()
                    .map(|e| format!("{:width$}  {:19}  {}\n", e.name, e.provenance.to_string(), e.code))
                    .collect()
            }
        }
        CorpusAction::Show { name, json } => {
            let e = corpus::get(&name)?;
            if json {
                serde_json::to_string_pretty(&e).unwrap() + "\n"
            } else {
                format!("{}\n# name: {}\n# provenance: {}\n# description: {}\n", e.code, e.name, e.provenance, e.description)
            }
        }
    };
    write!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))
}
