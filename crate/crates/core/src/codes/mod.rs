//! Constructors for the 2D topological code families and their parameter table.

mod color;
mod lattice;
mod twisted;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::RowSpace;
use crate::pauli::{CheckMatrix, Pauli, PauliString};

pub use color::{color_faces, ColorFaces};
pub use twisted::{find_sigma, twisted_sigma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Toric,
    RotatedToric,
    Surface,
    RotatedSurface,
    Color666,
    Color488,
    XzzxToric,
    XzzxSurface,
    TwistedXzzx,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Toric,
        Family::RotatedToric,
        Family::Surface,
        Family::RotatedSurface,
        Family::Color666,
        Family::Color488,
        Family::XzzxToric,
        Family::XzzxSurface,
        Family::TwistedXzzx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Toric => "toric",
            Family::RotatedToric => "rotated_toric",
            Family::Surface => "surface",
            Family::RotatedSurface => "rotated_surface",
            Family::Color666 => "color666",
            Family::Color488 => "color488",
            Family::XzzxToric => "xzzx_toric",
            Family::XzzxSurface => "xzzx_surface",
            Family::TwistedXzzx => "twisted_xzzx",
        }
    }

    /// Color families are indexed by odd D, the rest by L.
    pub fn uses_d(self) -> bool {
        matches!(self, Family::Color666 | Family::Color488)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: Family,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "J")]
    pub j: Option<usize>,
    #[serde(rename = "D")]
    pub d: Option<usize>,
}

impl CodeSpec {
    pub fn with_l(family: Family, l: usize) -> Self {
        Self { family, l: Some(l), j: None, d: None }
    }

    pub fn toric(l: usize) -> Self {
        Self::with_l(Family::Toric, l)
    }

    pub fn rotated_toric(l: usize) -> Self {
        Self::with_l(Family::RotatedToric, l)
    }

    pub fn surface(l: usize) -> Self {
        Self::with_l(Family::Surface, l)
    }

    pub fn rotated_surface(l: usize) -> Self {
        Self::with_l(Family::RotatedSurface, l)
    }

    pub fn xzzx_toric(l: usize) -> Self {
        Self::with_l(Family::XzzxToric, l)
    }

    pub fn xzzx_surface(l: usize) -> Self {
        Self::with_l(Family::XzzxSurface, l)
    }

    pub fn twisted_xzzx(l: usize, j: usize) -> Self {
        Self { family: Family::TwistedXzzx, l: Some(l), j: Some(j), d: None }
    }

    /// Member of the `J = L - 1` twisted family with distance `d = 2L - 1`.
    pub fn twisted_xzzx_distance(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidParameter(format!("twisted XZZX distance must be odd and >= 3, got {d}")));
        }
        let l = d.div_ceil(2);
        Ok(Self::twisted_xzzx(l, l - 1))
    }

    pub fn color666(d: usize) -> Self {
        Self { family: Family::Color666, l: None, j: None, d: Some(d) }
    }

    pub fn color488(d: usize) -> Self {
        Self { family: Family::Color488, l: None, j: None, d: Some(d) }
    }

    /// The size a sweep is indexed by: `D` for color families, `L` otherwise.
    pub fn size(&self) -> usize {
        if self.family.uses_d() {
            self.d.unwrap_or(0)
        } else {
            self.l.unwrap_or(0)
        }
    }

    fn need_l(&self) -> Result<usize> {
        self.l.ok_or_else(|| Error::InvalidParameter(format!("{} requires L", self.family)))
    }

    fn need_d(&self) -> Result<usize> {
        self.d.ok_or_else(|| Error::InvalidParameter(format!("{} requires D", self.family)))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self.family {
            Family::Toric | Family::Surface | Family::XzzxToric => {
                let l = self.need_l()?;
                if l < 2 {
                    return bad(format!("{} requires L >= 2, got {l}", self.family));
                }
            }
            Family::RotatedToric => {
                let l = self.need_l()?;
                if l < 2 || l % 2 == 1 {
                    return bad(format!("rotated_toric requires even L >= 2, got {l}"));
                }
            }
            Family::RotatedSurface | Family::XzzxSurface => {
                let l = self.need_l()?;
                if l < 3 || l % 2 == 0 {
                    return bad(format!("{} requires odd L >= 3, got {l}", self.family));
                }
            }
            Family::Color666 | Family::Color488 => {
                let d = self.need_d()?;
                if d < 3 || d % 2 == 0 {
                    return bad(format!("{} requires odd D >= 3, got {d}", self.family));
                }
            }
            Family::TwistedXzzx => {
                let l = self.need_l()?;
                let j = self.j.ok_or_else(|| Error::InvalidParameter("twisted_xzzx requires J".into()))?;
                if l < 2 || j < 1 || j >= l {
                    return bad(format!("twisted_xzzx requires L >= 2 and 1 <= J < L, got L={l}, J={j}"));
                }
                if gcd(l, j) != 1 {
                    return bad(format!("twisted_xzzx requires gcd(L, J) = 1, got L={l}, J={j}"));
                }
            }
        }
        Ok(())
    }

    /// `(N, K, D)` from the closed-form family formulas.
    pub fn table_parameters(&self) -> Result<(usize, usize, usize)> {
        self.validate()?;
        let p = match self.family {
            Family::Toric => {
                let l = self.need_l()?;
                (2 * l * l, 2, l)
            }
            Family::RotatedToric => {
                let l = self.need_l()?;
                (l * l, 2, l)
            }
            Family::Surface => {
                let l = self.need_l()?;
                (2 * l * l - 2 * l + 1, 1, l)
            }
            Family::RotatedSurface | Family::XzzxSurface => {
                let l = self.need_l()?;
                (l * l, 1, l)
            }
            Family::XzzxToric => {
                let l = self.need_l()?;
                (l * l, 2 - l % 2, l)
            }
            Family::Color666 => {
                let d = self.need_d()?;
                ((3 * d * d + 1) / 4, 1, d)
            }
            Family::Color488 => {
                let d = self.need_d()?;
                ((d * d + 2 * d - 1) / 2, 1, d)
            }
            Family::TwistedXzzx => {
                let (l, j) = (self.need_l()?, self.j.unwrap_or(0));
                let n = l * l + j * j;
                if n % 2 == 0 {
                    (n, 2, l)
                } else {
                    (n, 1, l + j)
                }
            }
        };
        Ok(p)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if let Some(l) = self.l {
            write!(f, " L={l}")?;
        }
        if let Some(j) = self.j {
            write!(f, " J={j}")?;
        }
        if let Some(d) = self.d {
            write!(f, " D={d}")?;
        }
        Ok(())
    }
}

/// `(N, K, D)` of the (4,6,12) triangular color code; no constructor exists for this lattice.
pub fn color4612_parameters(d: usize) -> Result<(usize, usize, usize)> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidParameter(format!("(4,6,12) color code requires odd D >= 3, got {d}")));
    }
    Ok(((3 * d * d - 6 * d + 5) / 2, 1, d))
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct Code {
    pub spec: CodeSpec,
    pub checks: CheckMatrix,
    pub n: usize,
    pub k: usize,
    /// Distance from the family formula, not a computed value.
    pub d: usize,
    pub w_avg: f64,
    pub w_max: usize,
    /// BPT efficiency `K·D²/N`.
    pub efficiency: f64,
    /// Generator step of the twisted family.
    pub sigma: Option<usize>,
    stabilizers: RowSpace,
}

/// Metadata block written next to an exported check matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeMeta {
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
    pub w_avg: f64,
    pub w_max: usize,
    pub c: f64,
}

impl Code {
    pub fn build(spec: &CodeSpec) -> Result<Code> {
        let (n, k, d) = spec.table_parameters()?;
        let mut sigma = None;
        let rows = match spec.family {
            Family::Toric => lattice::toric(spec.need_l()?),
            Family::RotatedToric => lattice::rotated_toric(spec.need_l()?),
            Family::Surface => lattice::surface(spec.need_l()?),
            Family::RotatedSurface => lattice::rotated_surface(spec.need_l()?),
            Family::XzzxToric => lattice::xzzx_toric(spec.need_l()?),
            Family::XzzxSurface => lattice::xzzx_surface(spec.need_l()?)?,
            Family::Color666 | Family::Color488 => color::color_code(spec.family, spec.need_d()?)?,
            Family::TwistedXzzx => {
                let (l, j) = (spec.need_l()?, spec.j.unwrap_or(0));
                let s = twisted::find_sigma(l, j)?;
                sigma = Some(s);
                twisted::measured_rows(n, s)
            }
        };
        let checks = CheckMatrix::new(n, rows).map_err(|e| Error::Construction(format!("{spec}: {e}")))?;
        let code = Code::from_checks(*spec, checks, d, sigma);
        if code.n != n || code.k != k {
            return Err(Error::Construction(format!(
                "{spec}: built [[{}, {}]] but the family formula gives [[{n}, {k}]]",
                code.n, code.k
            )));
        }
        Ok(code)
    }

    pub fn from_checks(spec: CodeSpec, checks: CheckMatrix, d: usize, sigma: Option<usize>) -> Code {
        let n = checks.n();
        let stabilizers = checks.row_space();
        let k = n - stabilizers.rank();
        let weights: Vec<usize> = checks.rows().iter().map(PauliString::weight).collect();
        let w_max = weights.iter().copied().max().unwrap_or(0);
        let w_avg = if weights.is_empty() { 0.0 } else { weights.iter().sum::<usize>() as f64 / weights.len() as f64 };
        let efficiency = (k * d * d) as f64 / n as f64;
        Code { spec, checks, n, k, d, w_avg, w_max, efficiency, sigma, stabilizers }
    }

    pub fn stabilizers(&self) -> &RowSpace {
        &self.stabilizers
    }

    pub fn is_stabilizer(&self, p: &PauliString) -> bool {
        self.stabilizers.contains(&p.to_symplectic())
    }

    pub fn meta(&self) -> CodeMeta {
        CodeMeta {
            family: self.spec.family,
            l: self.spec.l,
            j: self.spec.j,
            d: self.d,
            n: self.n,
            k: self.k,
            w_avg: self.w_avg,
            w_max: self.w_max,
            c: self.efficiency,
        }
    }

    /// Rebuilds a code from exported text and metadata, checking that they agree.
    pub fn import(text: &str, meta: &CodeMeta) -> Result<Code> {
        let checks = CheckMatrix::from_text(text)?;
        let spec = CodeSpec {
            family: meta.family,
            l: meta.l,
            j: meta.j,
            d: if meta.family.uses_d() { Some(meta.d) } else { None },
        };
        let sigma = if meta.family == Family::TwistedXzzx { twisted::detect_sigma(&checks) } else { None };
        let code = Code::from_checks(spec, checks, meta.d, sigma);
        if code.n != meta.n || code.k != meta.k {
            return Err(Error::Parse(format!(
                "metadata says [[{}, {}]] but the matrix gives [[{}, {}]]",
                meta.n, meta.k, code.n, code.k
            )));
        }
        Ok(code)
    }
}

pub(crate) fn row_from(n: usize, entries: &[(usize, Pauli)]) -> PauliString {
    let mut p = PauliString::identity(n);
    for &(q, pauli) in entries {
        p.set(q, pauli);
    }
    p
}
