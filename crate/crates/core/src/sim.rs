//! Pauli channels, Monte-Carlo decoding experiments, threshold crossings and the BDD reference.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{Code, CodeSpec, Family};
use crate::decoder::{AlphaSchedule, DecodeResult, Decoder, DecoderConfig, ErrorPrior};
use crate::error::{check_len, Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::tanner::TannerGraph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Depolarizing { eps: f64 },
    Pauli { px: f64, py: f64, pz: f64 },
}

impl ChannelSpec {
    pub fn depolarizing(eps: f64) -> Result<Self> {
        let c = ChannelSpec::Depolarizing { eps };
        c.validate()?;
        Ok(c)
    }

    pub fn pauli(px: f64, py: f64, pz: f64) -> Result<Self> {
        let c = ChannelSpec::Pauli { px, py, pz };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let [pi, px, py, pz] = self.probs();
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if ok(px) && ok(py) && ok(pz) && pi >= -1e-12 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid channel rates {self:?}")))
        }
    }

    /// `(p_I, p_X, p_Y, p_Z)`.
    pub fn probs(&self) -> [f64; 4] {
        match *self {
            ChannelSpec::Depolarizing { eps } => [1.0 - eps, eps / 3.0, eps / 3.0, eps / 3.0],
            ChannelSpec::Pauli { px, py, pz } => [1.0 - px - py - pz, px, py, pz],
        }
    }

    /// Total error rate `1 - p_I`.
    pub fn rate(&self) -> f64 {
        match *self {
            ChannelSpec::Depolarizing { eps } => eps,
            ChannelSpec::Pauli { px, py, pz } => px + py + pz,
        }
    }

    /// Probability of a given error pattern.
    pub fn probability(&self, e: &PauliString) -> f64 {
        let p = self.probs();
        (0..e.n()).map(|q| p[e.get(q) as usize]).product()
    }
}

/// I.i.d. Pauli noise on `n` qubits.
pub fn sample_error<R: Rng + ?Sized>(n: usize, channel: &ChannelSpec, rng: &mut R) -> PauliString {
    let [_, px, py, pz] = channel.probs();
    let mut e = PauliString::identity(n);
    for q in 0..n {
        let u: f64 = rng.random();
        let p = if u < px {
            Pauli::X
        } else if u < px + py {
            Pauli::Y
        } else if u < px + py + pz {
            Pauli::Z
        } else {
            continue;
        };
        e.set(q, p);
    }
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    LogicalFailure,
    ConvergenceFailure,
}

pub fn adjudicate(code: &Code, e: &PauliString, result: &DecodeResult) -> Result<Outcome> {
    check_len(code.n, e.n())?;
    check_len(code.n, result.estimate.n())?;
    if !result.converged {
        return Ok(Outcome::ConvergenceFailure);
    }
    let residual = e.multiply(&result.estimate)?;
    Ok(if code.is_stabilizer(&residual) { Outcome::Success } else { Outcome::LogicalFailure })
}

/// Decoder used by the simulation harness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecoderKind {
    Bp4,
    Mbp4 { alpha: f64 },
    /// α from 1.00 down to 0.50 in steps of 0.01.
    Ambp4,
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Bp4 => "bp4",
            DecoderKind::Mbp4 { .. } => "mbp4",
            DecoderKind::Ambp4 => "ambp4",
        }
    }

    pub fn alpha_mode(&self) -> String {
        match self {
            DecoderKind::Bp4 => "none".into(),
            DecoderKind::Mbp4 { alpha } => format!("fixed:{alpha}"),
            DecoderKind::Ambp4 => "adaptive:1.00-0.50".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSetup {
    pub kind: DecoderKind,
    /// Fixed prior rate; `None` uses the channel rate.
    pub eps0: Option<f64>,
    pub max_iters: usize,
}

impl Default for DecoderSetup {
    fn default() -> Self {
        Self { kind: DecoderKind::Ambp4, eps0: None, max_iters: 100 }
    }
}

impl DecoderSetup {
    fn prior_rate(&self, channel: &ChannelSpec) -> f64 {
        self.eps0.unwrap_or_else(|| channel.rate())
    }

    fn prior(&self, n: usize, channel: &ChannelSpec) -> Result<ErrorPrior<f64>> {
        match (self.eps0, channel) {
            (Some(e0), _) => ErrorPrior::fixed_eps0(n, e0),
            (None, ChannelSpec::Depolarizing { eps }) => ErrorPrior::depolarizing(n, *eps),
            (None, c) => {
                let p = c.probs();
                ErrorPrior::new(vec![p; n])
            }
        }
    }

    pub fn decode(
        &self,
        dec: &mut Decoder<'_, f64>,
        z: &crate::pauli::Syndrome,
        prior: &ErrorPrior<f64>,
    ) -> Result<DecodeResult> {
        let base = DecoderConfig { max_iters: self.max_iters, ..DecoderConfig::default() };
        match self.kind {
            DecoderKind::Bp4 => dec.decode(z, prior, &DecoderConfig { variant: crate::decoder::Variant::Bp4, ..base }),
            DecoderKind::Mbp4 { alpha } => dec.decode(z, prior, &DecoderConfig { alpha, ..base }),
            DecoderKind::Ambp4 => dec.decode_adaptive(z, prior, &AlphaSchedule::default(), &base),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub target_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { target_errors: 100, max_trials: 10_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub logical_errors: u64,
    pub convergence_failures: u64,
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_iterations: f64,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Deterministic generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

const BATCH: u64 = 512;

/// Runs trials until the stop rule fires. Trial `t` draws from `trial_rng(seed, t)`, and
/// batches are scanned in trial order, so the result does not depend on the pool size.
pub fn run_point(
    code: &Code,
    graph: &TannerGraph,
    channel: &ChannelSpec,
    setup: &DecoderSetup,
    stop: &StopRule,
    seed: u64,
) -> Result<TrialStats> {
    channel.validate()?;
    if stop.max_trials == 0 {
        return Err(Error::InvalidParameter("max_trials must be positive".into()));
    }
    check_len(code.n, graph.n())?;
    let prior = setup.prior(code.n, channel)?;
    let (mut trials, mut errors, mut nonconv, mut iters) = (0u64, 0u64, 0u64, 0u64);
    'outer: while trials < stop.max_trials {
        let end = (trials + BATCH).min(stop.max_trials);
        let batch: Vec<Result<(Outcome, usize)>> = (trials..end)
            .into_par_iter()
            .map_init(
                || Decoder::<f64>::new(graph),
                |dec, t| {
                    let mut rng = trial_rng(seed, t);
                    let e = sample_error(code.n, channel, &mut rng);
                    let z = code.checks.syndrome(&e)?;
                    let r = setup.decode(dec, &z, &prior)?;
                    Ok((adjudicate(code, &e, &r)?, r.iterations))
                },
            )
            .collect();
        for item in batch {
            let (outcome, it) = item?;
            trials += 1;
            iters += it as u64;
            match outcome {
                Outcome::Success => {}
                Outcome::LogicalFailure => errors += 1,
                Outcome::ConvergenceFailure => {
                    errors += 1;
                    nonconv += 1;
                }
            }
            if errors >= stop.target_errors {
                break 'outer;
            }
        }
    }
    let (ci_low, ci_high) = wilson_interval(errors, trials);
    Ok(TrialStats {
        trials,
        logical_errors: errors,
        convergence_failures: nonconv,
        p_l: errors as f64 / trials as f64,
        ci_low,
        ci_high,
        avg_iterations: iters as f64 / trials as f64,
    })
}

/// One CSV line of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub family: Family,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "J")]
    pub j: Option<usize>,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub decoder: String,
    pub alpha_mode: String,
    pub eps: f64,
    pub eps0: f64,
    pub trials: u64,
    pub logical_errors: u64,
    pub convergence_failures: u64,
    #[serde(rename = "p_L")]
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_iters: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "family,L,J,D,N,K,decoder,alpha_mode,eps,eps0,trials,logical_errors,convergence_failures,p_L,ci_low,ci_high,avg_iters,seed";

fn round_eps(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

/// `start, start + step, …, stop` with each value rounded to 1e-9.
pub fn eps_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(Error::InvalidParameter("eps grid needs finite bounds and a positive step".into()));
    }
    if start > stop {
        return Err(Error::InvalidParameter(format!("eps start {start} exceeds stop {stop}")));
    }
    if start < 0.0 || stop > 1.0 {
        return Err(Error::InvalidParameter("eps grid must lie in [0, 1]".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| round_eps(start + i as f64 * step)).collect())
}

/// One row per (code, ε), codes in the given order and ε ascending.
pub fn run_sweep(
    codes: &[Code],
    eps: &[f64],
    setup: &DecoderSetup,
    stop: &StopRule,
    seed: u64,
) -> Result<Vec<CurveRow>> {
    if codes.is_empty() || eps.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one code and one eps value".into()));
    }
    let mut grid: Vec<f64> = eps.iter().map(|e| round_eps(*e)).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut rows = Vec::with_capacity(codes.len() * grid.len());
    for code in codes {
        let graph = TannerGraph::new(&code.checks);
        for &e in &grid {
            let channel = ChannelSpec::depolarizing(e)?;
            let s = run_point(code, &graph, &channel, setup, stop, seed)?;
            rows.push(CurveRow {
                family: code.spec.family,
                l: code.spec.l,
                j: code.spec.j,
                d: code.d,
                n: code.n,
                k: code.k,
                decoder: setup.kind.name().into(),
                alpha_mode: setup.kind.alpha_mode(),
                eps: e,
                eps0: setup.prior_rate(&channel),
                trials: s.trials,
                logical_errors: s.logical_errors,
                convergence_failures: s.convergence_failures,
                p_l: s.p_l,
                ci_low: s.ci_low,
                ci_high: s.ci_high,
                avg_iters: s.avg_iterations,
                seed,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CurveRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header: {}", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Everything needed to regenerate a sweep CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub codes: Vec<CodeSpec>,
    pub eps: Vec<f64>,
    pub decoder: DecoderSetup,
    pub stop: StopRule,
    pub seed: u64,
    pub threads: usize,
}

impl RunManifest {
    pub fn new(codes: Vec<CodeSpec>, eps: Vec<f64>, decoder: DecoderSetup, stop: StopRule, seed: u64, threads: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            codes,
            eps,
            decoder,
            stop,
            seed,
            threads,
        }
    }

    /// Builds the codes and runs the sweep on a pool of `threads` workers.
    pub fn run(&self, threads: usize) -> Result<Vec<CurveRow>> {
        let codes = self.codes.iter().map(Code::build).collect::<Result<Vec<_>>>()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| run_sweep(&codes, &self.eps, &self.decoder, &self.stop, self.seed))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    #[serde(rename = "D_low")]
    pub d_low: usize,
    #[serde(rename = "D_high")]
    pub d_high: usize,
    pub crossing: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub pairs: Vec<Crossing>,
    pub median: f64,
}

/// First point where the smaller code stops beating the larger one, by linear
/// interpolation of `ln p_small - ln p_large` in ε. Points with `p = 0` are skipped.
pub fn pair_crossing(small: &[(f64, f64)], large: &[(f64, f64)]) -> Option<f64> {
    let diffs: Vec<(f64, f64)> = small
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .filter_map(|&(e, ps)| {
            large.iter().find(|(el, pl)| (el - e).abs() < 1e-9 && *pl > 0.0).map(|&(_, pl)| (e, ps.ln() - pl.ln()))
        })
        .collect();
    diffs.windows(2).find_map(|w| {
        let ((e0, d0), (e1, d1)) = (w[0], w[1]);
        if d0 > 0.0 && d1 <= 0.0 {
            Some(if d1 == 0.0 { e1 } else { e0 + (e1 - e0) * d0 / (d0 - d1) })
        } else {
            None
        }
    })
}

pub fn estimate_threshold(rows: &[CurveRow]) -> Result<ThresholdReport> {
    let families: std::collections::BTreeSet<Family> = rows.iter().map(|r| r.family).collect();
    if families.len() > 1 {
        return Err(Error::InvalidParameter("threshold input mixes code families".into()));
    }
    let mut curves: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    let mut ks: BTreeMap<usize, usize> = BTreeMap::new();
    for r in rows {
        curves.entry(r.d).or_default().push((r.eps, r.p_l));
        ks.insert(r.d, r.k);
    }
    if curves.len() < 2 {
        return Err(Error::InvalidParameter(format!("threshold needs at least 2 sizes, got {}", curves.len())));
    }
    for c in curves.values_mut() {
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        if c.len() < 2 {
            return Err(Error::InvalidParameter("threshold needs at least 2 eps points per size".into()));
        }
    }
    // Only codes with the same K are compared (XZZX toric alternates K between 1 and 2 with L).
    let sizes: Vec<usize> = curves.keys().copied().collect();
    let pairs: Vec<Crossing> = sizes
        .iter()
        .filter_map(|&lo| {
            let hi = sizes.iter().copied().find(|&d| d > lo && ks[&d] == ks[&lo])?;
            Some(Crossing { d_low: lo, d_high: hi, crossing: pair_crossing(&curves[&lo], &curves[&hi]) })
        })
        .collect();
    let mut found: Vec<f64> = pairs.iter().filter_map(|p| p.crossing).collect();
    if found.is_empty() {
        return Err(Error::NoCrossing);
    }
    found.sort_by(f64::total_cmp);
    let mid = found.len() / 2;
    let median = if found.len() % 2 == 1 { found[mid] } else { 0.5 * (found[mid - 1] + found[mid]) };
    Ok(ThresholdReport { pairs, median })
}

/// Probability that an i.i.d. error of rate ε on `n` qubits has weight above `⌊(d-1)/2⌋`.
pub fn bdd_reference(n: usize, d: usize, eps: f64) -> Result<f64> {
    if d == 0 || n < d {
        return Err(Error::InvalidParameter(format!("bdd_reference needs N >= D >= 1, got N={n}, D={d}")));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps must lie in [0, 1], got {eps}")));
    }
    let t = (d - 1) / 2;
    let mut binom = 1.0f64;
    let mut tail = 0.0;
    for w in 0..=n {
        if w > 0 {
            binom = binom * (n - w + 1) as f64 / w as f64;
        }
        if w > t {
            tail += binom * eps.powi(w as i32) * (1.0 - eps).powi((n - w) as i32);
        }
    }
    Ok(tail.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn sampling_extremes() {
        let mut rng = trial_rng(1, 0);
        let zero = ChannelSpec::depolarizing(0.0).unwrap();
        let one = ChannelSpec::depolarizing(1.0).unwrap();
        for _ in 0..20 {
            assert!(sample_error(30, &zero, &mut rng).is_identity());
            assert_eq!(sample_error(30, &one, &mut rng).weight(), 30);
        }
        assert!(ChannelSpec::depolarizing(1.5).is_err());
        assert!(ChannelSpec::pauli(0.5, 0.4, 0.3).is_err());
    }

    #[test]
    fn sampling_statistics() {
        let n = 100_000;
        let c = ChannelSpec::depolarizing(0.1).unwrap();
        let e = sample_error(n, &c, &mut trial_rng(7, 3));
        let counts = [Pauli::X, Pauli::Y, Pauli::Z].map(|p| (0..n).filter(|&q| e.get(q) == p).count() as f64);
        let w = counts.iter().sum::<f64>();
        let sd = (n as f64 * 0.1 * 0.9).sqrt();
        assert!((w - 0.1 * n as f64).abs() < 3.0 * sd);
        let each = n as f64 * 0.1 / 3.0;
        let sd1 = (n as f64 * (0.1 / 3.0) * (1.0 - 0.1 / 3.0)).sqrt();
        assert!(counts.iter().all(|c| (c - each).abs() < 3.0 * sd1));
    }

    #[test]
    fn wilson_brackets() {
        let (lo, hi) = wilson_interval(10, 100);
        assert!(lo < 0.1 && 0.1 < hi);
        assert_abs_diff_eq!(lo, 0.0552, epsilon = 1e-3);
        assert_abs_diff_eq!(hi, 0.1744, epsilon = 1e-3);
        let (lo, hi) = wilson_interval(0, 50);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
    }

    #[test]
    fn grid_arithmetic() {
        let g = eps_grid(0.14, 0.20, 0.005).unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], 0.14);
        assert_eq!(*g.last().unwrap(), 0.2);
        assert_eq!(eps_grid(0.11, 0.17, 0.005).unwrap().len(), 13);
        assert!(eps_grid(0.2, 0.1, 0.01).is_err());
        assert!(eps_grid(0.1, 0.2, 0.0).is_err());
    }

    fn line(a: f64, b: f64, eps: &[f64]) -> Vec<(f64, f64)> {
        eps.iter().map(|&e| (e, (a + b * e).exp())).collect()
    }

    #[test]
    fn synthetic_crossing() {
        let eps: Vec<f64> = (0..7).map(|i| 0.14 + 0.01 * i as f64).collect();
        let small = line(-3.0 - 10.0 * 0.175, 10.0, &eps);
        let large = line(-3.0 - 30.0 * 0.175, 30.0, &eps);
        assert_abs_diff_eq!(pair_crossing(&small, &large).unwrap(), 0.175, epsilon = 1e-12);
        assert!(pair_crossing(&small, &small).is_none());
    }

    #[test]
    fn bdd_values() {
        assert_abs_diff_eq!(bdd_reference(5, 3, 0.1).unwrap(), 0.08146, epsilon = 1e-5);
        assert_eq!(bdd_reference(5, 3, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(bdd_reference(9, 1, 0.2).unwrap(), 1.0 - 0.8f64.powi(9), epsilon = 1e-12);
        assert!(bdd_reference(3, 5, 0.1).is_err());
        assert!(bdd_reference(3, 0, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn bdd_monotone(n in 5usize..60, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(bdd_reference(n, 3, lo).unwrap() <= bdd_reference(n, 3, hi).unwrap() + 1e-12);
            prop_assert!(bdd_reference(n, 5, lo).unwrap() <= bdd_reference(n, 3, lo).unwrap() + 1e-12);
        }

        #[test]
        fn wilson_contains_estimate(n in 1u64..10_000, frac in 0.0f64..1.0) {
            let k = (frac * n as f64) as u64;
            let (lo, hi) = wilson_interval(k, n);
            let p = k as f64 / n as f64;
            prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
        }
    }
}
