//! Phaseless Pauli algebra in the binary symplectic representation.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::gf2::{self, get_bit, word_count, RowSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        (a & d) ^ (b & c)
    }

    /// Index 0, 1, 2 for X, Y, Z.
    pub fn xyz_index(self) -> Option<usize> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(0),
            Pauli::Y => Some(1),
            Pauli::Z => Some(2),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidSymbol(other)),
        }
    }
}

/// An `n`-qubit Pauli operator with phase dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = word_count(n);
        Self { n, x: vec![0; w], z: vec![0; w] }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(qubit, p);
        s
    }

    pub fn from_paulis(ps: &[Pauli]) -> Self {
        let mut s = Self::identity(ps.len());
        for (q, p) in ps.iter().enumerate() {
            s.set(q, *p);
        }
        s
    }

    /// Builds from the concatenated `(x | z)` vector produced by [`Self::to_symplectic`].
    pub fn from_symplectic(n: usize, v: &[u64]) -> Self {
        let w = word_count(n);
        Self { n, x: v[..w].to_vec(), z: v[w..2 * w].to_vec() }
    }

    pub fn to_symplectic(&self) -> Vec<u64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(get_bit(&self.x, q), get_bit(&self.z, q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (bx, bz) = p.bits();
        let mask = 1u64 << (q % 64);
        let w = q / 64;
        self.x[w] = (self.x[w] & !mask) | if bx { mask } else { 0 };
        self.z[w] = (self.z[w] & !mask) | if bz { mask } else { 0 };
    }

    pub fn x_bit(&self, q: usize) -> bool {
        get_bit(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        get_bit(&self.z, q)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| self.x_bit(q) || self.z_bit(q))
    }

    /// Symplectic product; true means the operators anticommute.
    pub fn symplectic(&self, other: &Self) -> Result<bool> {
        check_len(self.n, other.n)?;
        Ok(self.anticommutes(other))
    }

    /// Unchecked form of [`Self::symplectic`]; lengths must agree.
    #[inline]
    pub fn anticommutes(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        acc & 1 == 1
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    /// In-place product; lengths must agree.
    #[inline]
    pub fn mul_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        gf2::xor_into(&mut self.x, &other.x);
        gf2::xor_into(&mut self.z, &other.z);
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let ps = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&ps))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic over per-qubit symbols with I < X < Y < Z.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (0..self.n.min(other.n))
            .map(|q| self.get(q).cmp(&other.get(q)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.n.cmp(&other.n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: Vec<bool>,
}

impl Syndrome {
    pub fn zeros(m: usize) -> Self {
        Self { bits: vec![false; m] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("syndrome bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }
}

/// Measured stabilizer rows; all pairs commute and none is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckMatrix {
    n: usize,
    rows: Vec<PauliString>,
}

impl CheckMatrix {
    pub fn new(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            check_len(n, r.n())?;
            if r.is_identity() {
                return Err(Error::IdentityRow(i));
            }
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i].anticommutes(&rows[j]) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn row_space(&self) -> RowSpace {
        let mut s = RowSpace::new();
        for r in &self.rows {
            s.insert(r.to_symplectic());
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.row_space().rank()
    }

    pub fn in_rowspace(&self, p: &PauliString) -> Result<bool> {
        check_len(self.n, p.n())?;
        Ok(self.row_space().contains(&p.to_symplectic()))
    }

    pub fn syndrome(&self, e: &PauliString) -> Result<Syndrome> {
        check_len(self.n, e.n())?;
        Ok(Syndrome { bits: self.rows.iter().map(|r| r.anticommutes(e)).collect() })
    }

    /// Text form: a header line `M N` followed by one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.m(), self.n);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [m, n] = dims[..] else {
            return Err(Error::Parse(format!("header must be \"M N\", got {header:?}")));
        };
        let rows = lines.map(str::parse).collect::<Result<Vec<PauliString>>>()?;
        check_len(m, rows.len())?;
        Self::new(n, rows)
    }
}

/// Logical pairs `(X̄_k, Z̄_k)` from symplectic Gram–Schmidt on the normalizer modulo the stabilizer.
pub fn logical_operators(s: &CheckMatrix) -> Result<Vec<(PauliString, PauliString)>> {
    let n = s.n();
    let rows: Vec<&PauliString> = s.rows().iter().collect();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].anticommutes(rows[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let w = word_count(n);
    // v ↦ ⟨row, v⟩ is the ordinary dot product with (z | x).
    let swapped: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let v = r.to_symplectic();
            let mut sw = v[w..].to_vec();
            sw.extend_from_slice(&v[..w]);
            sw
        })
        .collect();
    let normalizer = symplectic_nullspace(&swapped, n);

    let mut span = s.row_space();
    let mut pool: Vec<PauliString> = Vec::new();
    for v in normalizer {
        if span.insert(v.clone()) {
            pool.push(PauliString::from_symplectic(n, &v));
        }
    }

    let mut pairs = Vec::new();
    while let Some(a) = pool.pop() {
        let Some(bi) = pool.iter().position(|b| a.anticommutes(b)) else {
            return Err(Error::Construction("logical basis is not symplectic".into()));
        };
        let b = pool.swap_remove(bi);
        for c in pool.iter_mut() {
            let cb = c.anticommutes(&b);
            let ca = c.anticommutes(&a);
            if cb {
                c.mul_assign(&a);
            }
            if ca {
                c.mul_assign(&b);
            }
        }
        pairs.push((a, b));
    }
    pairs.reverse();
    Ok(pairs)
}

/// Nullspace over the 2n symplectic columns laid out as `(x words | z words)`.
fn symplectic_nullspace(rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let w = word_count(n);
    let pack = |v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; word_count(2 * n)];
        for i in 0..2 * n {
            let bit = if i < n { get_bit(&v[..w], i) } else { get_bit(&v[w..], i - n) };
            if bit {
                gf2::flip_bit(&mut out, i);
            }
        }
        out
    };
    let packed: Vec<Vec<u64>> = rows.iter().map(|r| pack(r)).collect();
    gf2::nullspace(&packed, 2 * n)
        .into_iter()
        .map(|v| {
            let mut out = vec![0u64; 2 * w];
            for i in 0..2 * n {
                if get_bit(&v, i) {
                    let pos = if i < n { i } else { w * 64 + i - n };
                    gf2::flip_bit(&mut out, pos);
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn five_qubit() -> CheckMatrix {
        let rows = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| p(s)).collect();
        CheckMatrix::new(5, rows).unwrap()
    }

    #[test]
    fn parses_symbols() {
        assert_eq!(p("IIIII").weight(), 0);
        let g = p("XZZXI");
        assert_eq!(g.weight(), 4);
        assert!(g.x_bit(0) && !g.z_bit(0));
        assert!(!g.x_bit(1) && g.z_bit(1));
        assert!(g.x_bit(3) && !g.x_bit(4) && !g.z_bit(4));
        assert_eq!(p("XYZ").weight(), 3);
        assert!(matches!("".parse::<PauliString>(), Err(Error::EmptyPauli)));
        assert!(matches!("XQ".parse::<PauliString>(), Err(Error::InvalidSymbol('Q'))));
    }

    #[test]
    fn products_and_commutation() {
        assert!(p("X").symplectic(&p("Z")).unwrap());
        assert!(!p("XZZXI").symplectic(&p("IXZZX")).unwrap());
        assert_eq!(p("XI").multiply(&p("ZI")).unwrap(), p("YI"));
        assert_eq!(p("XZZXI").multiply(&p("IXZZX")).unwrap().to_string(), "XYIYX");
        assert!(p("XY").multiply(&p("XY")).unwrap().is_identity());
        assert!(p("XX").multiply(&p("X")).is_err());
        assert!(p("XX").symplectic(&p("X")).is_err());
    }

    #[test]
    fn syndromes() {
        let s = five_qubit();
        assert!(s.syndrome(&PauliString::identity(5)).unwrap().is_zero());
        assert_eq!(s.syndrome(&p("XIIII")).unwrap().to_string(), "0001");
        for r in s.rows() {
            assert!(s.syndrome(r).unwrap().is_zero());
        }
        assert!(s.syndrome(&p("XIII")).is_err());
    }

    #[test]
    fn rejects_bad_check_matrices() {
        assert!(matches!(CheckMatrix::new(1, vec![p("X"), p("Z")]), Err(Error::NonCommuting(0, 1))));
        assert!(matches!(CheckMatrix::new(2, vec![p("II")]), Err(Error::IdentityRow(0))));
    }

    #[test]
    fn rowspace_membership() {
        let s = five_qubit();
        assert!(s.in_rowspace(&PauliString::identity(5)).unwrap());
        let prod = s.rows()[0].multiply(&s.rows()[2]).unwrap();
        assert!(s.in_rowspace(&prod).unwrap());
        assert!(!s.in_rowspace(&p("XXXXX")).unwrap());
    }

    #[test]
    fn five_qubit_logicals() {
        let s = five_qubit();
        let pairs = logical_operators(&s).unwrap();
        assert_eq!(pairs.len(), 1);
        let (x, z) = &pairs[0];
        assert!(x.anticommutes(z));
        for l in [x, z] {
            assert!(s.syndrome(l).unwrap().is_zero());
            assert!(!s.in_rowspace(l).unwrap());
        }
    }

    #[test]
    fn text_round_trip() {
        let s = five_qubit();
        let t = s.to_text();
        assert!(t.starts_with("4 5\n"));
        assert_eq!(CheckMatrix::from_text(&t).unwrap(), s);
        assert!(CheckMatrix::from_text("3 5\nXZZXI\n").is_err());
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let n = 70;
        let a = PauliString::single(n, 65, Pauli::X);
        let b = PauliString::single(n, 65, Pauli::Z);
        assert!(a.anticommutes(&b));
        assert_eq!(a.multiply(&b).unwrap().get(65), Pauli::Y);
        let back = PauliString::from_symplectic(n, &a.to_symplectic());
        assert_eq!(back, a);
    }

    fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        proptest::collection::vec(0u8..4, n).prop_map(|v| {
            let ps: Vec<Pauli> =
                v.into_iter().map(|k| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize]).collect();
            PauliString::from_paulis(&ps)
        })
    }

    proptest! {
        #[test]
        fn symplectic_symmetric_and_bilinear(
            a in pauli_strategy(9), b in pauli_strategy(9), c in pauli_strategy(9)
        ) {
            prop_assert_eq!(a.anticommutes(&b), b.anticommutes(&a));
            prop_assert!(!a.anticommutes(&a));
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(ab.anticommutes(&c), a.anticommutes(&c) ^ b.anticommutes(&c));
        }

        #[test]
        fn syndrome_invariant_under_stabilizers(e in pauli_strategy(5), m in 0usize..4) {
            let s = five_qubit();
            let moved = e.multiply(&s.rows()[m]).unwrap();
            prop_assert_eq!(s.syndrome(&e).unwrap(), s.syndrome(&moved).unwrap());
        }

        #[test]
        fn rowspace_implies_zero_syndrome(mask in 0u8..16) {
            let s = five_qubit();
            let mut r = PauliString::identity(5);
            for (i, row) in s.rows().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    r.mul_assign(row);
                }
            }
            prop_assert!(s.in_rowspace(&r).unwrap());
            prop_assert!(s.syndrome(&r).unwrap().is_zero());
        }

        #[test]
        fn weight_bounded(a in pauli_strategy(12)) {
            prop_assert!(a.weight() <= 12);
            prop_assert_eq!(a.weight(), a.support().count());
        }
    }
}
