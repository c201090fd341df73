//! Command-line front end. Every command builds a serde value; `--json` prints it as JSON,
//! otherwise a short text rendering.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::codes::{color4612_parameters, Code, CodeSpec, Family};
use crate::decoder::Decoder;
use crate::error::{Error, Result};
use crate::oracle::{brute_force_distance, MAX_DISTANCE_N};
use crate::pauli::{logical_operators, PauliString, Syndrome};
use crate::sim::{
    adjudicate, eps_grid, estimate_threshold, read_csv, write_csv, DecoderKind, DecoderSetup,
    RunManifest, StopRule,
};
use crate::tanner::TannerGraph;

#[derive(Parser, Debug)]
#[command(name = "topoqec", version, about = "Topological stabilizer codes and quaternary BP decoding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and inspect codes.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Decode one error or syndrome.
    Decode(DecodeArgs),
    /// Monte-Carlo sweep over sizes and error rates, written as CSV plus a manifest.
    Sweep(SweepArgs),
    /// Threshold estimate from a sweep CSV.
    Threshold(ThresholdArgs),
}

#[derive(Subcommand, Debug)]
pub enum CodeAction {
    /// Print [[N,K,D]], stabilizer weights and efficiency.
    Info {
        #[command(flatten)]
        code: CodeFlags,
        /// Also check rank and compute the distance by search.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write the check matrix.
    Export {
        #[command(flatten)]
        code: CodeFlags,
        #[arg(long, value_enum, default_value_t = ExportFormat::Text)]
        format: ExportFormat,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check commutation, rank, logical pairing and distance.
    Verify {
        #[command(flatten)]
        code: CodeFlags,
        /// Largest weight tried by the distance search.
        #[arg(long, default_value_t = 6)]
        w_limit: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    /// `M N` header then one Pauli string per row.
    Text,
    /// Tanner graph in alist layout.
    Alist,
    /// Metadata JSON.
    Meta,
}

#[derive(Args, Debug, Clone)]
pub struct CodeFlags {
    /// toric, rotated-toric, surface, rotated-surface, color666, color488, color4612,
    /// xzzx-toric, xzzx-surface, twisted-xzzx.
    #[arg(long)]
    pub family: String,
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long = "J")]
    pub j: Option<usize>,
    #[arg(long = "D")]
    pub d: Option<usize>,
}

impl CodeFlags {
    fn spec(&self) -> Result<CodeSpec> {
        let family: Family = self.family.parse()?;
        if family.uses_d() {
            if self.l.is_some() || self.j.is_some() {
                return Err(Error::InvalidParameter(format!("{family} takes --D, not --L/--J")));
            }
            let d = self.d.ok_or_else(|| Error::InvalidParameter(format!("{family} requires --D")))?;
            let spec = CodeSpec { family, l: None, j: None, d: Some(d) };
            spec.validate()?;
            return Ok(spec);
        }
        if self.d.is_some() && family != Family::TwistedXzzx {
            return Err(Error::InvalidParameter(format!("{family} takes --L, not --D")));
        }
        let spec = match (family, self.l, self.d) {
            (Family::TwistedXzzx, None, Some(d)) => CodeSpec::twisted_xzzx_distance(d)?,
            (Family::TwistedXzzx, Some(l), None) => {
                let j = self.j.ok_or_else(|| Error::InvalidParameter("twisted-xzzx requires --J with --L".into()))?;
                CodeSpec::twisted_xzzx(l, j)
            }
            (Family::TwistedXzzx, _, _) => {
                return Err(Error::InvalidParameter("twisted-xzzx takes either --L/--J or --D".into()))
            }
            (_, Some(l), _) => {
                if self.j.is_some() {
                    return Err(Error::InvalidParameter(format!("{family} does not take --J")));
                }
                CodeSpec::with_l(family, l)
            }
            (_, None, _) => return Err(Error::InvalidParameter(format!("{family} requires --L"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn is_4612(&self) -> bool {
        matches!(self.family.to_ascii_lowercase().replace(['-', '_'], "").as_str(), "color4612")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecoderName {
    Bp4,
    Mbp4,
    Ambp4,
}

#[derive(Args, Debug, Clone)]
pub struct DecoderFlags {
    #[arg(long, value_enum, default_value_t = DecoderName::Ambp4)]
    pub decoder: DecoderName,
    /// Normalization for mbp4.
    #[arg(long, default_value_t = 0.7)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
}

impl DecoderFlags {
    fn setup(&self, eps0: Option<f64>) -> Result<DecoderSetup> {
        let kind = match self.decoder {
            DecoderName::Bp4 => DecoderKind::Bp4,
            DecoderName::Mbp4 => {
                if !(self.alpha > 0.0 && self.alpha <= 1.0) {
                    return Err(Error::InvalidParameter(format!("--alpha must lie in (0, 1], got {}", self.alpha)));
                }
                DecoderKind::Mbp4 { alpha: self.alpha }
            }
            DecoderName::Ambp4 => DecoderKind::Ambp4,
        };
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("--max-iters must be at least 1".into()));
        }
        if let Some(e) = eps0 {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!("--eps0 must lie in (0, 1), got {e}")));
            }
        }
        Ok(DecoderSetup { kind, eps0, max_iters: self.max_iters })
    }
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub code: CodeFlags,
    /// Error as a Pauli string, e.g. XIIII.
    #[arg(long, conflicts_with = "syndrome", required_unless_present = "syndrome")]
    pub error: Option<String>,
    /// Syndrome bits, one per check row, e.g. 0001.
    #[arg(long)]
    pub syndrome: Option<String>,
    #[command(flatten)]
    pub decoder: DecoderFlags,
    /// Prior depolarizing rate.
    #[arg(long, default_value_t = 0.1)]
    pub eps0: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Rerun a saved manifest; grid and decoder flags are then ignored.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    pub family: Option<String>,
    /// Comma-separated sizes: D for color and twisted families, L otherwise.
    #[arg(long, value_delimiter = ',', required_unless_present = "manifest")]
    pub sizes: Vec<usize>,
    /// Twist for the twisted family; sizes are then L values.
    #[arg(long = "J")]
    pub j: Option<usize>,
    #[arg(long, required_unless_present = "manifest")]
    pub eps_start: Option<f64>,
    #[arg(long, required_unless_present = "manifest")]
    pub eps_stop: Option<f64>,
    #[arg(long, default_value_t = 0.005)]
    pub eps_step: f64,
    #[command(flatten)]
    pub decoder: DecoderFlags,
    /// Fixed prior rate; the channel rate is used if absent.
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub target_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; all cores if absent.
    #[arg(long)]
    pub threads: Option<usize>,
    /// CSV path; the manifest goes next to it with extension `.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON output path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T, json: bool, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    } else {
        writeln!(out, "{}", text())?;
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Code { action } => run_code(action, out),
        Command::Decode(args) => run_decode(args, out),
        Command::Sweep(args) => run_sweep(args, out),
        Command::Threshold(args) => run_threshold(args, out),
    }
}

fn info_4612(flags: &CodeFlags, out: &mut dyn Write, json: bool) -> Result<()> {
    let d = flags.d.ok_or_else(|| Error::InvalidParameter("color4612 requires --D".into()))?;
    let (n, k, d) = color4612_parameters(d)?;
    let c = (k * d * d) as f64 / n as f64;
    let v = json!({"family": "color4612", "D": d, "N": n, "K": k, "c": c, "constructed": false});
    emit(out, &v, json, || format!("[[{n},{k},{d}]] c={c:.3} (parameters only; no lattice constructor)"))
}

fn run_code(action: CodeAction, out: &mut dyn Write) -> Result<()> {
    match action {
        CodeAction::Info { code, verify, json } => {
            if code.is_4612() {
                return info_4612(&code, out, json);
            }
            let c = Code::build(&code.spec()?)?;
            let mut v = serde_json::to_value(c.meta())?;
            let mut extra = String::new();
            if verify {
                let report = verify_code(&c, 6)?;
                extra = format!("\n{}", verify_text(&report));
                v["verify"] = report;
            }
            emit(out, &v, json, || {
                format!("[[{},{},{}]] w_avg={:.3} w_max={} c={:.3}{extra}", c.n, c.k, c.d, c.w_avg, c.w_max, c.efficiency)
            })
        }
        CodeAction::Export { code, format, out: path } => {
            let c = Code::build(&code.spec()?)?;
            let text = match format {
                ExportFormat::Text => c.checks.to_text(),
                ExportFormat::Alist => TannerGraph::new(&c.checks).to_alist(),
                ExportFormat::Meta => serde_json::to_string_pretty(&c.meta())? + "\n",
            };
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        CodeAction::Verify { code, w_limit, json } => {
            let c = Code::build(&code.spec()?)?;
            let report = verify_code(&c, w_limit)?;
            let ok = report["ok"].as_bool().unwrap_or(false);
            emit(out, &report, json, || verify_text(&report))?;
            if ok {
                Ok(())
            } else {
                Err(Error::Construction(format!("{} failed verification", c.spec)))
            }
        }
    }
}

fn verify_code(c: &Code, w_limit: usize) -> Result<Value> {
    let rows = c.checks.rows();
    let commuting = rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| !a.anticommutes(b)));
    let (n, k, d) = c.spec.table_parameters()?;
    let pairs = logical_operators(&c.checks)?;
    let paired = pairs.len() == c.k
        && pairs.iter().enumerate().all(|(i, (xi, zi))| {
            xi.anticommutes(zi)
                && pairs.iter().enumerate().all(|(j, (xj, zj))| {
                    i == j || (!xi.anticommutes(xj) && !xi.anticommutes(zj) && !zi.anticommutes(zj))
                })
        });
    let distance = if c.n <= MAX_DISTANCE_N {
        match brute_force_distance(c, w_limit) {
            Ok(r) => Some(r.d),
            Err(Error::NoLogical(_)) | Err(Error::Budget(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let distance_ok = distance.map_or(true, |x| x == d);
    let ok = commuting && paired && c.n == n && c.k == k && distance_ok;
    Ok(json!({
        "N": c.n, "K": c.k, "D": d,
        "commuting": commuting,
        "rank": c.n - c.k,
        "logical_pairs": pairs.len(),
        "symplectic_pairs": paired,
        "distance": distance,
        "ok": ok,
    }))
}

fn verify_text(v: &Value) -> String {
    let dist = match v["distance"].as_u64() {
        Some(d) => d.to_string(),
        None => "not searched".into(),
    };
    format!(
        "commuting={} rank={} logical_pairs={} symplectic={} distance={} ok={}",
        v["commuting"], v["rank"], v["logical_pairs"], v["symplectic_pairs"], dist, v["ok"]
    )
}

fn run_decode(args: DecodeArgs, out: &mut dyn Write) -> Result<()> {
    let code = Code::build(&args.code.spec()?)?;
    let setup = args.decoder.setup(Some(args.eps0))?;
    let error = match &args.error {
        Some(s) => {
            let e: PauliString = s.parse()?;
            if e.n() != code.n {
                return Err(Error::LengthMismatch { expected: code.n, found: e.n() });
            }
            Some(e)
        }
        None => None,
    };
    let z = match (&error, &args.syndrome) {
        (Some(e), _) => code.checks.syndrome(e)?,
        (None, Some(s)) => {
            let z: Syndrome = s.parse()?;
            if z.len() != code.checks.m() {
                return Err(Error::LengthMismatch { expected: code.checks.m(), found: z.len() });
            }
            z
        }
        (None, None) => return Err(Error::InvalidParameter("give --error or --syndrome".into())),
    };
    let graph = TannerGraph::new(&code.checks);
    let prior = crate::decoder::ErrorPrior::fixed_eps0(code.n, args.eps0)?;
    let mut dec = Decoder::<f64>::new(&graph);
    let r = setup.decode(&mut dec, &z, &prior)?;
    let outcome = match &error {
        Some(e) => Some(adjudicate(&code, e, &r)?),
        None => None,
    };
    let v = json!({
        "syndrome": z.to_string(),
        "estimate": r.estimate.to_string(),
        "converged": r.converged,
        "iterations": r.iterations,
        "alpha": r.alpha_used,
        "adjudication": outcome,
    });
    emit(out, &v, args.json, || {
        let mut s = format!(
            "syndrome {}\nestimate {}\nconverged {} after {} iterations, alpha {}",
            z, r.estimate, r.converged, r.iterations, r.alpha_used
        );
        if let Some(o) = outcome {
            s.push_str(&format!("\nadjudication {}", serde_json::to_value(o).unwrap_or_default().as_str().unwrap_or("")));
        }
        s
    })
}

/// Code specs for a sweep. Twisted sizes are distances of the `J = L - 1` family unless `j` is set.
pub fn sweep_specs(family: Family, sizes: &[usize], j: Option<usize>) -> Result<Vec<CodeSpec>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("--sizes is empty".into()));
    }
    sizes
        .iter()
        .map(|&s| {
            let spec = match (family, j) {
                (Family::TwistedXzzx, Some(j)) => CodeSpec::twisted_xzzx(s, j),
                (Family::TwistedXzzx, None) => CodeSpec::twisted_xzzx_distance(s)?,
                (f, None) if f.uses_d() => CodeSpec { family: f, l: None, j: None, d: Some(s) },
                (f, None) => CodeSpec::with_l(f, s),
                (f, Some(_)) => return Err(Error::InvalidParameter(format!("{f} does not take --J"))),
            };
            spec.validate()?;
            Ok(spec)
        })
        .collect()
}

fn run_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let threads = args.threads.unwrap_or_else(rayon::current_num_threads);
    if threads == 0 {
        return Err(Error::InvalidParameter("--threads must be at least 1".into()));
    }
    let manifest = match &args.manifest {
        Some(p) => {
            let m: RunManifest = serde_json::from_str(&fs::read_to_string(p)?)?;
            RunManifest { threads, ..m }
        }
        None => {
            let family_name = args.family.as_deref().unwrap_or_default();
            let family: Family = family_name.parse()?;
            let (start, stop) = match (args.eps_start, args.eps_stop) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::InvalidParameter("--eps-start and --eps-stop are required".into())),
            };
            let eps = eps_grid(start, stop, args.eps_step)?;
            if eps[0] <= 0.0 {
                return Err(Error::InvalidParameter("eps values must be positive".into()));
            }
            if args.target_errors == 0 || args.max_trials == 0 {
                return Err(Error::InvalidParameter("--target-errors and --max-trials must be positive".into()));
            }
            let specs = sweep_specs(family, &args.sizes, args.j)?;
            let setup = args.decoder.setup(args.eps0)?;
            let stop = StopRule { target_errors: args.target_errors, max_trials: args.max_trials };
            RunManifest::new(specs, eps, setup, stop, args.seed, threads)
        }
    };
    let rows = manifest.run(threads)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    fs::write(&args.out, buf)?;
    let mpath = manifest_path(&args.out);
    if args.manifest.as_deref() != Some(mpath.as_path()) {
        fs::write(&mpath, serde_json::to_string_pretty(&manifest)? + "\n")?;
    }
    writeln!(out, "wrote {} rows to {} (manifest {})", rows.len(), args.out.display(), mpath.display())?;
    Ok(())
}

fn run_threshold(args: ThresholdArgs, out: &mut dyn Write) -> Result<()> {
    let rows = read_csv(fs::File::open(&args.input)?)?;
    let report = estimate_threshold(&rows)?;
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match args.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
