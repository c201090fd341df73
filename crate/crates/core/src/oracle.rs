//! Exhaustive ground truth for small codes: minimum distance and maximum-likelihood decoding.

use std::collections::HashMap;

use crate::codes::Code;
use crate::error::{check_len, Error, Result};
use crate::pauli::{logical_operators, Pauli, PauliString, Syndrome};
use crate::sim::ChannelSpec;

pub const MAX_DISTANCE_N: usize = 20;
pub const MAX_DISTANCE_WEIGHT: usize = 6;
pub const MAX_COSET_N: usize = 10;
pub const MAX_MIN_WEIGHT_N: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub d: usize,
    /// A minimum-weight logical operator.
    pub witness: PauliString,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlMode {
    /// Most probable logical coset; needs N ≤ 10.
    Coset,
    /// A minimum-weight error with the syndrome; needs N ≤ 20.
    MinWeight,
}

/// Syndrome bits of each single-qubit Pauli, indexed `[q][pauli]`.
struct Tables {
    syn: Vec<[u128; 4]>,
    class: Vec<[u64; 4]>,
}

impl Tables {
    fn new(code: &Code, logicals: &[PauliString]) -> Result<Self> {
        let m = code.checks.m();
        if m > 128 || logicals.len() > 64 {
            return Err(Error::Budget(format!("{m} checks exceed the oracle's table width")));
        }
        let mut syn = vec![[0u128; 4]; code.n];
        let mut class = vec![[0u64; 4]; code.n];
        for q in 0..code.n {
            for p in Pauli::NON_IDENTITY {
                let mut s = 0u128;
                for (i, row) in code.checks.rows().iter().enumerate() {
                    if row.get(q).anticommutes(p) {
                        s |= 1 << i;
                    }
                }
                let mut c = 0u64;
                for (i, l) in logicals.iter().enumerate() {
                    if l.get(q).anticommutes(p) {
                        c |= 1 << i;
                    }
                }
                syn[q][p as usize] = s;
                class[q][p as usize] = c;
            }
        }
        Ok(Self { syn, class })
    }
}

fn pack_syndrome(z: &Syndrome) -> u128 {
    z.bits().iter().enumerate().filter(|(_, b)| **b).fold(0, |acc, (i, _)| acc | 1 << i)
}

fn flat_logicals(code: &Code) -> Result<Vec<PauliString>> {
    Ok(logical_operators(&code.checks)?.into_iter().flat_map(|(x, z)| [x, z]).collect())
}

/// Weight-ordered search for the lightest Pauli that commutes with every check and is not
/// a stabilizer.
pub fn brute_force_distance(code: &Code, w_limit: usize) -> Result<DistanceReport> {
    if code.n > MAX_DISTANCE_N || w_limit > MAX_DISTANCE_WEIGHT {
        return Err(Error::Budget(format!(
            "distance search limited to N <= {MAX_DISTANCE_N} and weight <= {MAX_DISTANCE_WEIGHT}, got N={}, w={w_limit}",
            code.n
        )));
    }
    if code.k == 0 {
        return Err(Error::NoLogical(w_limit));
    }
    let t = Tables::new(code, &[])?;
    let mut stack = Vec::with_capacity(w_limit);
    for w in 1..=w_limit.min(code.n) {
        if let Some(witness) = search(code, &t, w, 0, 0, &mut stack) {
            return Ok(DistanceReport { d: w, witness });
        }
    }
    Err(Error::NoLogical(w_limit))
}

fn search(
    code: &Code,
    t: &Tables,
    remaining: usize,
    start: usize,
    syn: u128,
    stack: &mut Vec<(usize, Pauli)>,
) -> Option<PauliString> {
    if remaining == 0 {
        if syn != 0 {
            return None;
        }
        let mut p = PauliString::identity(code.n);
        for &(q, s) in stack.iter() {
            p.set(q, s);
        }
        return (!code.is_stabilizer(&p)).then_some(p);
    }
    for q in start..=code.n - remaining {
        for p in Pauli::NON_IDENTITY {
            stack.push((q, p));
            let found = search(code, t, remaining - 1, q + 1, syn ^ t.syn[q][p as usize], stack);
            stack.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

fn nth_pauli(n: usize, index: u64) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        let digit = (index >> (2 * (n - 1 - q))) & 3;
        p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][digit as usize]);
    }
    p
}

/// Visits all 4^N errors in lexicographic order as `(index, syndrome, class, probability)`.
fn enumerate_all(code: &Code, t: &Tables, probs: [f64; 4], mut f: impl FnMut(u64, u128, u64, f64)) {
    let n = code.n;
    for index in 0..1u64 << (2 * n) {
        let (mut syn, mut class, mut prob) = (0u128, 0u64, 1.0f64);
        for q in 0..n {
            let digit = ((index >> (2 * (n - 1 - q))) & 3) as usize;
            syn ^= t.syn[q][digit];
            class ^= t.class[q][digit];
            prob *= probs[digit];
        }
        f(index, syn, class, prob);
    }
}

pub fn ml_decode(code: &Code, z: &Syndrome, channel: &ChannelSpec, mode: MlMode) -> Result<PauliString> {
    check_len(code.checks.m(), z.len())?;
    channel.validate()?;
    match mode {
        MlMode::Coset => {
            if code.n > MAX_COSET_N {
                return Err(Error::Budget(format!("coset ML limited to N <= {MAX_COSET_N}, got {}", code.n)));
            }
            let logicals = flat_logicals(code)?;
            let t = Tables::new(code, &logicals)?;
            let target = pack_syndrome(z);
            // class -> (total probability, smallest representative)
            let mut classes: Vec<(u64, f64, u64)> = Vec::new();
            enumerate_all(code, &t, channel.probs(), |index, syn, class, prob| {
                if syn != target {
                    return;
                }
                match classes.iter_mut().find(|c| c.0 == class) {
                    Some(c) => c.1 += prob,
                    None => classes.push((class, prob, index)),
                }
            });
            let best = classes
                .iter()
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.2.cmp(&a.2)))
                .ok_or_else(|| Error::Construction("no error matches the syndrome".into()))?;
            Ok(nth_pauli(code.n, best.2))
        }
        MlMode::MinWeight => {
            if code.n > MAX_MIN_WEIGHT_N {
                return Err(Error::Budget(format!("min-weight ML limited to N <= {MAX_MIN_WEIGHT_N}, got {}", code.n)));
            }
            let t = Tables::new(code, &[])?;
            let target = pack_syndrome(z);
            let mut stack = Vec::new();
            for w in 0..=code.n {
                if let Some(e) = match_weight(code.n, &t, target, w, 0, 0, &mut stack) {
                    return Ok(e);
                }
            }
            Err(Error::Construction("no error matches the syndrome".into()))
        }
    }
}

fn match_weight(
    n: usize,
    t: &Tables,
    target: u128,
    remaining: usize,
    start: usize,
    syn: u128,
    stack: &mut Vec<(usize, Pauli)>,
) -> Option<PauliString> {
    if remaining == 0 {
        if syn != target {
            return None;
        }
        let mut p = PauliString::identity(n);
        for &(q, s) in stack.iter() {
            p.set(q, s);
        }
        return Some(p);
    }
    for q in start..=n - remaining {
        for p in Pauli::NON_IDENTITY {
            stack.push((q, p));
            let found = match_weight(n, t, target, remaining - 1, q + 1, syn ^ t.syn[q][p as usize], stack);
            stack.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Failure probability of the optimal degenerate decoder, `1 - Σ_z max_class P(z, class)`.
pub fn ml_failure_rate(code: &Code, channel: &ChannelSpec) -> Result<f64> {
    if code.n > MAX_COSET_N {
        return Err(Error::Budget(format!("exact ML rate limited to N <= {MAX_COSET_N}, got {}", code.n)));
    }
    channel.validate()?;
    let logicals = flat_logicals(code)?;
    let t = Tables::new(code, &logicals)?;
    let mut mass: HashMap<(u128, u64), f64> = HashMap::new();
    enumerate_all(code, &t, channel.probs(), |_, syn, class, prob| {
        *mass.entry((syn, class)).or_default() += prob;
    });
    let mut best: HashMap<u128, f64> = HashMap::new();
    for ((syn, _), p) in mass {
        let b = best.entry(syn).or_default();
        *b = b.max(p);
    }
    let mut total: Vec<f64> = best.into_values().collect();
    total.sort_by(f64::total_cmp);
    Ok((1.0 - total.iter().sum::<f64>()).max(0.0))
}

/// Every error in lexicographic order, for exhaustive checks on tiny codes.
pub fn all_errors(n: usize) -> Result<impl Iterator<Item = PauliString>> {
    if n > MAX_COSET_N {
        return Err(Error::Budget(format!("exhaustive enumeration limited to N <= {MAX_COSET_N}, got {n}")));
    }
    Ok((0..1u64 << (2 * n)).map(move |i| nth_pauli(n, i)))
}
