//! Quaternary belief propagation on a Tanner graph: BP₄, MBP₄ and the adaptive AMBP₄.
//!
//! All kernels work on log-likelihood ratios. Generic over the scalar type; see the
//! aliases at the crate root for the concrete instantiations.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

use crate::error::{check_len, Error, Result};
use crate::pauli::{Pauli, PauliString, Syndrome};
use crate::tanner::TannerGraph;

pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

fn lit<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("finite literal")
}

/// Per-qubit `(p_I, p_X, p_Y, p_Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorPrior<F> {
    probs: Vec<[F; 4]>,
}

impl<F: Real> ErrorPrior<F> {
    /// Smallest probability kept; entries below it are raised and the row renormalised.
    pub fn floor() -> F {
        lit(1e-15)
    }

    pub fn new(probs: Vec<[F; 4]>) -> Result<Self> {
        let tol = lit::<F>(1e-6);
        let mut out = Vec::with_capacity(probs.len());
        for (q, p) in probs.into_iter().enumerate() {
            if p.iter().any(|v| !v.is_finite() || *v < F::zero() || *v > F::one()) {
                return Err(Error::InvalidParameter(format!("qubit {q}: probabilities must lie in [0, 1]")));
            }
            let total = p.iter().fold(F::zero(), |a, b| a + *b);
            if (total - F::one()).abs() > tol {
                return Err(Error::InvalidParameter(format!("qubit {q}: probabilities sum to {total:?}")));
            }
            let raised = p.map(|v| v.max(Self::floor()));
            let s = raised.iter().fold(F::zero(), |a, b| a + *b);
            out.push(raised.map(|v| v / s));
        }
        Ok(Self { probs: out })
    }

    /// Depolarizing prior: `1 - ε` on I and `ε/3` on each of X, Y, Z.
    pub fn depolarizing(n: usize, eps: F) -> Result<Self> {
        if !(eps > F::zero() && eps < F::one()) {
            return Err(Error::InvalidParameter(format!("prior rate must lie in (0, 1), got {eps:?}")));
        }
        let third = eps / lit(3.0);
        Self::new(vec![[F::one() - eps, third, third, third]; n])
    }

    /// Prior fixed at `ε₀` regardless of the channel rate.
    pub fn fixed_eps0(n: usize, eps0: F) -> Result<Self> {
        Self::depolarizing(n, eps0)
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[[F; 4]] {
        &self.probs
    }

    /// `Λ_n^W = ln(p_I / p_W)` for W = X, Y, Z.
    pub fn llr(&self) -> Vec<[F; 3]> {
        self.probs.iter().map(|p| [(p[0] / p[1]).ln(), (p[0] / p[2]).ln(), (p[0] / p[3]).ln()]).collect()
    }
}

/// How the belief combines prior and incoming check messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `B = Λ + Σ Δ`.
    Bp4,
    /// `B = (Λ + Σ Δ) / α`.
    Mbp4,
    /// `B = Λ + (Σ Δ) / α`: only the check messages are scaled.
    Mbp4Messages,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderConfig<F> {
    pub alpha: F,
    pub max_iters: usize,
    pub variant: Variant,
    /// Largest message magnitude.
    pub clamp: F,
}

impl<F: Real> Default for DecoderConfig<F> {
    fn default() -> Self {
        Self { alpha: F::one(), max_iters: 100, variant: Variant::Mbp4, clamp: lit(30.0) }
    }
}

impl<F: Real> DecoderConfig<F> {
    pub fn bp4() -> Self {
        Self { variant: Variant::Bp4, ..Self::default() }
    }

    pub fn mbp4(alpha: F) -> Self {
        Self { alpha, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > F::zero() && self.alpha <= F::one()) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {:?}", self.alpha)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.clamp > F::zero()) {
            return Err(Error::InvalidParameter("clamp must be positive".into()));
        }
        Ok(())
    }
}

/// Descending α values tried by the adaptive decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSchedule<F> {
    alphas: Vec<F>,
}

impl<F: Real> AlphaSchedule<F> {
    pub fn new(alphas: Vec<F>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("alpha schedule is empty".into()));
        }
        if alphas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter("alpha schedule must be strictly descending".into()));
        }
        if alphas.iter().any(|a| !(*a > F::zero() && *a <= F::one())) {
            return Err(Error::InvalidParameter("alpha values must lie in (0, 1]".into()));
        }
        Ok(Self { alphas })
    }

    /// `hi, hi - step, …` down to `lo`, in hundredths.
    pub fn hundredths(hi: u32, lo: u32) -> Result<Self> {
        if lo == 0 || hi > 100 || lo > hi {
            return Err(Error::InvalidParameter(format!("bad alpha range {hi}..{lo} (hundredths)")));
        }
        Self::new((lo..=hi).rev().map(|k| lit::<F>(k as f64) / lit(100.0)).collect())
    }

    pub fn alphas(&self) -> &[F] {
        &self.alphas
    }
}

impl<F: Real> Default for AlphaSchedule<F> {
    /// α ∈ {1.00, 0.99, …, 0.50}.
    fn default() -> Self {
        Self::hundredths(100, 50).expect("static range")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub estimate: PauliString,
    pub converged: bool,
    pub iterations: usize,
    pub alpha_used: f64,
}

/// Messages after an iteration; `gamma` and `delta` are indexed by edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageState<F> {
    pub lambda: Vec<[F; 3]>,
    pub gamma: Vec<[F; 3]>,
    pub delta: Vec<F>,
    pub belief: Vec<[F; 3]>,
}

impl<F: Real> MessageState<F> {
    /// Bit patterns of every message, for exact comparisons.
    pub fn bit_image(&self) -> Vec<u64> {
        let bits = |v: F| v.to_f64().map(f64::to_bits).unwrap_or(u64::MAX);
        self.gamma
            .iter()
            .flatten()
            .chain(self.belief.iter().flatten())
            .copied()
            .chain(self.delta.iter().copied())
            .map(bits)
            .collect()
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus<F: Real>(x: F) -> F {
    x.max(F::zero()) + (-x.abs()).exp().ln_1p()
}

/// `ln(e^a + e^b)`.
#[inline]
fn logaddexp<F: Real>(a: F, b: F) -> F {
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

/// LLR that the error on a qubit commutes with `w`, from its triple `Γ = (Γ^X, Γ^Y, Γ^Z)`.
///
/// `λ_W(Γ) = ln((1 + e^{-Γ_W}) / (e^{-Γ_U} + e^{-Γ_V}))` with U, V the other two Paulis.
pub fn lambda_w<F: Real>(gamma: &[F; 3], w: Pauli) -> F {
    let (iw, iu, iv) = match w {
        Pauli::X => (0, 1, 2),
        Pauli::Y => (1, 0, 2),
        Pauli::Z => (2, 0, 1),
        Pauli::I => return F::infinity(),
    };
    softplus(-gamma[iw]) - logaddexp(-gamma[iu], -gamma[iv])
}

/// `2 atanh(tanh(a/2) tanh(b/2))` in a form that stays finite for large inputs.
#[inline]
pub fn boxplus2<F: Real>(a: F, b: F) -> F {
    let s = if (a < F::zero()) ^ (b < F::zero()) { -F::one() } else { F::one() };
    s * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// `2 atanh(Π tanh(v_i / 2))` over a non-empty list.
pub fn boxplus<F: Real>(values: &[F]) -> Option<F> {
    let (first, rest) = values.split_first()?;
    Some(rest.iter().fold(*first, |acc, v| boxplus2(acc, *v)))
}

#[inline]
fn clamp<F: Real>(v: F, c: F) -> F {
    v.max(-c).min(c)
}

/// A reusable decoder bound to one Tanner graph; owns its message buffers.
pub struct Decoder<'g, F: Real> {
    graph: &'g TannerGraph,
    state: MessageState<F>,
    lam: Vec<F>,
    fwd: Vec<F>,
    bwd: Vec<F>,
    hard: Vec<Pauli>,
}

impl<'g, F: Real> Decoder<'g, F> {
    pub fn new(graph: &'g TannerGraph) -> Self {
        let e = graph.edges().len();
        let max_deg = (0..graph.m()).map(|m| graph.check_edges(m).len()).max().unwrap_or(0);
        Self {
            graph,
            state: MessageState {
                lambda: vec![[F::zero(); 3]; graph.n()],
                gamma: vec![[F::zero(); 3]; e],
                delta: vec![F::zero(); e],
                belief: vec![[F::zero(); 3]; graph.n()],
            },
            lam: vec![F::zero(); e],
            fwd: vec![F::zero(); max_deg],
            bwd: vec![F::zero(); max_deg],
            hard: vec![Pauli::I; graph.n()],
        }
    }

    pub fn graph(&self) -> &TannerGraph {
        self.graph
    }

    pub fn state(&self) -> &MessageState<F> {
        &self.state
    }

    pub fn decode(&mut self, z: &Syndrome, prior: &ErrorPrior<F>, cfg: &DecoderConfig<F>) -> Result<DecodeResult> {
        self.decode_observed(z, prior, cfg, |_, _| {})
    }

    /// Like [`Self::decode`], calling `observe(t, state)` after each iteration `t = 1, 2, …`.
    pub fn decode_observed(
        &mut self,
        z: &Syndrome,
        prior: &ErrorPrior<F>,
        cfg: &DecoderConfig<F>,
        mut observe: impl FnMut(usize, &MessageState<F>),
    ) -> Result<DecodeResult> {
        check_len(self.graph.m(), z.len())?;
        check_len(self.graph.n(), prior.n())?;
        cfg.validate()?;
        let c = cfg.clamp;
        self.state.lambda = prior.llr().into_iter().map(|l| l.map(|v| clamp(v, c))).collect();
        for (id, e) in self.graph.edges().iter().enumerate() {
            self.state.gamma[id] = self.state.lambda[e.var];
        }
        let inv_alpha = F::one() / cfg.alpha;
        for t in 1..=cfg.max_iters {
            self.check_pass(z, c);
            self.variable_pass(cfg.variant, inv_alpha, c);
            observe(t, &self.state);
            if self.matches(z) {
                return Ok(self.result(true, t, cfg.alpha));
            }
        }
        Ok(self.result(false, cfg.max_iters, cfg.alpha))
    }

    /// AMBP₄: MBP₄ for each α in turn, returning the first convergent run.
    pub fn decode_adaptive(
        &mut self,
        z: &Syndrome,
        prior: &ErrorPrior<F>,
        schedule: &AlphaSchedule<F>,
        base: &DecoderConfig<F>,
    ) -> Result<DecodeResult> {
        let mut last = None;
        for &alpha in schedule.alphas() {
            let cfg = DecoderConfig { alpha, ..base.clone() };
            let r = self.decode(z, prior, &cfg)?;
            if r.converged {
                return Ok(r);
            }
            last = Some(r);
        }
        Ok(last.expect("schedule is non-empty"))
    }

    fn check_pass(&mut self, z: &Syndrome, c: F) {
        let g = self.graph;
        let edges = g.edges();
        for (id, e) in edges.iter().enumerate() {
            self.lam[id] = lambda_w(&self.state.gamma[id], e.pauli);
        }
        for m in 0..g.m() {
            let range = g.check_edges(m);
            let (lo, deg) = (range.start, range.len());
            let sign = if z.bits()[m] { -F::one() } else { F::one() };
            if deg == 1 {
                self.state.delta[lo] = sign * c;
                continue;
            }
            let l = &self.lam[range.clone()];
            self.fwd[0] = l[0];
            for i in 1..deg {
                self.fwd[i] = boxplus2(self.fwd[i - 1], l[i]);
            }
            self.bwd[deg - 1] = l[deg - 1];
            for i in (0..deg - 1).rev() {
                self.bwd[i] = boxplus2(l[i], self.bwd[i + 1]);
            }
            for i in 0..deg {
                let excl = if i == 0 {
                    self.bwd[1]
                } else if i == deg - 1 {
                    self.fwd[deg - 2]
                } else {
                    boxplus2(self.fwd[i - 1], self.bwd[i + 1])
                };
                self.state.delta[lo + i] = clamp(sign * excl, c);
            }
        }
    }

    fn variable_pass(&mut self, variant: Variant, inv_alpha: F, c: F) {
        let g = self.graph;
        let edges = g.edges();
        for n in 0..g.n() {
            let lambda = self.state.lambda[n];
            let mut acc = [F::zero(); 3];
            for &id in g.var_edges(n) {
                let d = self.state.delta[id];
                for (k, w) in Pauli::NON_IDENTITY.iter().enumerate() {
                    if w.anticommutes(edges[id].pauli) {
                        acc[k] = acc[k] + d;
                    }
                }
            }
            let mut b = [F::zero(); 3];
            for k in 0..3 {
                b[k] = match variant {
                    Variant::Bp4 => lambda[k] + acc[k],
                    Variant::Mbp4 => (lambda[k] + acc[k]) * inv_alpha,
                    Variant::Mbp4Messages => lambda[k] + acc[k] * inv_alpha,
                };
            }
            self.state.belief[n] = b;
            for &id in g.var_edges(n) {
                let d = self.state.delta[id];
                let p = edges[id].pauli;
                let mut gm = b;
                for (k, w) in Pauli::NON_IDENTITY.iter().enumerate() {
                    if w.anticommutes(p) {
                        gm[k] = gm[k] - d;
                    }
                    gm[k] = clamp(gm[k], c);
                }
                self.state.gamma[id] = gm;
            }
            self.hard[n] = hard_decision(&b);
        }
    }

    fn matches(&self, z: &Syndrome) -> bool {
        let g = self.graph;
        let edges = g.edges();
        (0..g.m()).all(|m| {
            let parity = g.check_edges(m).filter(|&id| self.hard[edges[id].var].anticommutes(edges[id].pauli)).count() % 2;
            (parity == 1) == z.bits()[m]
        })
    }

    fn result(&self, converged: bool, iterations: usize, alpha: F) -> DecodeResult {
        DecodeResult {
            estimate: PauliString::from_paulis(&self.hard),
            converged,
            iterations,
            alpha_used: alpha.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// I if every belief is positive, otherwise the Pauli with the smallest belief.
fn hard_decision<F: Real>(b: &[F; 3]) -> Pauli {
    let mut best = 0;
    for k in 1..3 {
        if b[k] < b[best] {
            best = k;
        }
    }
    if b[best] > F::zero() {
        Pauli::I
    } else {
        Pauli::NON_IDENTITY[best]
    }
}

pub fn mbp4_decode<F: Real>(
    graph: &TannerGraph,
    z: &Syndrome,
    prior: &ErrorPrior<F>,
    cfg: &DecoderConfig<F>,
) -> Result<DecodeResult> {
    Decoder::new(graph).decode(z, prior, cfg)
}

pub fn ambp4_decode<F: Real>(
    graph: &TannerGraph,
    z: &Syndrome,
    prior: &ErrorPrior<F>,
    schedule: &AlphaSchedule<F>,
    max_iters: usize,
) -> Result<DecodeResult> {
    let base = DecoderConfig { max_iters, ..DecoderConfig::default() };
    Decoder::new(graph).decode_adaptive(z, prior, schedule, &base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{Code, CodeSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_w(&[0.0f64; 3], Pauli::X), 0.0);
        let l = 27f64.ln();
        assert_abs_diff_eq!(lambda_w(&[l; 3], Pauli::X), 14f64.ln(), epsilon = 1e-12);
        assert!(lambda_w(&[700.0f64; 3], Pauli::Z) > 600.0);
        assert!(lambda_w(&[-700.0f64, 0.0, 0.0], Pauli::X).is_finite());
    }

    #[test]
    fn boxplus_examples() {
        assert_eq!(boxplus(&[1.7f64]), Some(1.7));
        assert_eq!(boxplus(&[3.0f64, 0.0, -2.0]), Some(0.0));
        assert_abs_diff_eq!(boxplus(&[2.0f64, 2.0]).unwrap(), 1.3250, epsilon = 1e-4);
        let direct = 2.0 * ((1.0f64).tanh() * (1.0f64).tanh()).atanh();
        assert_abs_diff_eq!(boxplus2(2.0f64, 2.0), direct, epsilon = 1e-12);
        assert!(boxplus::<f64>(&[]).is_none());
        assert!(boxplus2(500.0f64, 400.0).is_finite());
    }

    #[test]
    fn priors() {
        let p = ErrorPrior::fixed_eps0(3, 0.042f64).unwrap();
        assert_abs_diff_eq!(p.probs()[0][0], 0.958, epsilon = 1e-12);
        assert_abs_diff_eq!(p.probs()[2][3], 0.014, epsilon = 1e-12);
        let u = ErrorPrior::fixed_eps0(1, 0.75f64).unwrap();
        assert!(u.llr()[0].iter().all(|v| v.abs() < 1e-12));
        let t = ErrorPrior::depolarizing(2, 0.1f64).unwrap();
        assert_abs_diff_eq!(t.llr()[1][1], 27f64.ln(), epsilon = 1e-12);
        assert!(ErrorPrior::fixed_eps0(2, 0.0f64).is_err());
        assert!(ErrorPrior::fixed_eps0(2, 1.0f64).is_err());
        assert!(ErrorPrior::new(vec![[0.5f64, 0.5, 0.5, 0.0]]).is_err());
    }

    #[test]
    fn default_schedule() {
        let s = AlphaSchedule::<f64>::default();
        assert_eq!(s.alphas().len(), 51);
        assert_eq!(s.alphas()[0], 1.0);
        assert_abs_diff_eq!(*s.alphas().last().unwrap(), 0.5);
        assert!(AlphaSchedule::new(vec![0.5f64, 0.7]).is_err());
        assert!(AlphaSchedule::<f64>::new(vec![]).is_err());
    }

    fn five() -> (Code, TannerGraph) {
        let code = Code::build(&CodeSpec::twisted_xzzx(2, 1)).unwrap();
        let g = TannerGraph::new(&code.checks);
        (code, g)
    }

    #[test]
    fn zero_syndrome_gives_identity() {
        let (code, g) = five();
        let prior = ErrorPrior::depolarizing(code.n, 0.1f64).unwrap();
        let r = mbp4_decode(&g, &Syndrome::zeros(code.checks.m()), &prior, &DecoderConfig::default()).unwrap();
        assert!(r.converged && r.estimate.is_identity());
        assert_eq!(r.iterations, 1);
        let r = ambp4_decode(&g, &Syndrome::zeros(code.checks.m()), &prior, &AlphaSchedule::default(), 100).unwrap();
        assert_eq!(r.alpha_used, 1.0);
    }

    #[test]
    fn single_qubit_error_is_corrected() {
        let (code, g) = five();
        let prior = ErrorPrior::depolarizing(code.n, 0.1f64).unwrap();
        let e: PauliString = "XIIII".parse().unwrap();
        let z = code.checks.syndrome(&e).unwrap();
        let r = mbp4_decode(&g, &z, &prior, &DecoderConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(code.checks.syndrome(&r.estimate).unwrap(), z);
        assert!(code.is_stabilizer(&r.estimate.multiply(&e).unwrap()));
    }

    #[test]
    fn dimension_errors() {
        let (code, g) = five();
        let prior = ErrorPrior::depolarizing(code.n, 0.1f64).unwrap();
        assert!(mbp4_decode(&g, &Syndrome::zeros(3), &prior, &DecoderConfig::default()).is_err());
        let short = ErrorPrior::depolarizing(4, 0.1f64).unwrap();
        assert!(mbp4_decode(&g, &Syndrome::zeros(5), &short, &DecoderConfig::default()).is_err());
        let bad = DecoderConfig { alpha: 1.5f64, ..DecoderConfig::default() };
        assert!(mbp4_decode(&g, &Syndrome::zeros(5), &prior, &bad).is_err());
    }

    #[test]
    fn single_precision_runs() {
        let (code, g) = five();
        let prior = ErrorPrior::depolarizing(code.n, 0.1f32).unwrap();
        let e: PauliString = "IIZII".parse().unwrap();
        let z = code.checks.syndrome(&e).unwrap();
        let r = Decoder::<f32>::new(&g).decode(&z, &prior, &DecoderConfig::default()).unwrap();
        assert!(r.converged);
    }

    proptest! {
        #[test]
        fn boxplus_contracts_and_multiplies_signs(v in proptest::collection::vec(-20.0f64..20.0, 1..6)) {
            let r = boxplus(&v).unwrap();
            let min = v.iter().fold(f64::INFINITY, |a, b| a.min(b.abs()));
            prop_assert!(r.abs() <= min + 1e-9);
            let negatives = v.iter().filter(|x| **x < 0.0).count();
            if v.iter().all(|x| x.abs() > 1e-6) {
                prop_assert_eq!(r < 0.0, negatives % 2 == 1);
            }
        }

        #[test]
        fn boxplus_matches_tanh_form(a in -15.0f64..15.0, b in -15.0f64..15.0) {
            let direct = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
            prop_assert!((boxplus2(a, b) - direct).abs() < 1e-8);
        }

        #[test]
        fn lambda_matches_probability_form(x in -8.0f64..8.0, y in -8.0f64..8.0, zz in -8.0f64..8.0) {
            let g = [x, y, zz];
            let direct = ((1.0 + (-x).exp()) / ((-y).exp() + (-zz).exp())).ln();
            prop_assert!((lambda_w(&g, Pauli::X) - direct).abs() < 1e-9);
        }
    }
}
