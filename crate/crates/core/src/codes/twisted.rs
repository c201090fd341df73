//! Twisted XZZX codes: N cyclic shifts of X₀ Z₁ Z_σ X_{σ+1} on a helical qubit cycle.

use super::{gcd, row_from};
use crate::error::{Error, Result};
use crate::gf2::RowSpace;
use crate::pauli::{CheckMatrix, Pauli, PauliString};

pub(super) fn cyclic_rows(n: usize, sigma: usize) -> Vec<PauliString> {
    (0..n)
        .map(|s| {
            row_from(
                n,
                &[
                    (s % n, Pauli::X),
                    ((s + 1) % n, Pauli::Z),
                    ((s + sigma) % n, Pauli::Z),
                    ((s + sigma + 1) % n, Pauli::X),
                ],
            )
        })
        .collect()
}

/// The measured rows: cyclic shifts in order, skipping any that depend on earlier ones.
/// This keeps `N - K` rows; the skipped shifts lie in their span.
pub(super) fn measured_rows(n: usize, sigma: usize) -> Vec<PauliString> {
    let mut span = RowSpace::new();
    cyclic_rows(n, sigma).into_iter().filter(|r| span.insert(r.to_symplectic())).collect()
}

/// Down-neighbour step of the twisted lattice, `σ = L·J⁻¹ mod N`.
///
/// Moving L steps right and J steps down, or J steps right and L steps up, returns
/// to the same qubit, so `L ≡ Jσ` and `J ≡ -Lσ (mod N)`.
pub fn twisted_sigma(l: usize, j: usize) -> Option<usize> {
    let n = l * l + j * j;
    (2..n.saturating_sub(1)).find(|&s| (j * s) % n == l % n && (j + l * s) % n == 0)
}

/// Searches σ ∈ {2, …, N-2} consistent with the lattice relations whose shifts commute
/// and give the expected number of logical qubits.
pub fn find_sigma(l: usize, j: usize) -> Result<usize> {
    if gcd(l, j) != 1 {
        return Err(Error::InvalidParameter(format!("gcd(L, J) must be 1, got L={l}, J={j}")));
    }
    let n = l * l + j * j;
    let k_expected = if n % 2 == 0 { 2 } else { 1 };
    for sigma in 2..n.saturating_sub(1) {
        if (j * sigma) % n != l % n || (j + l * sigma) % n != 0 {
            continue;
        }
        let rows = cyclic_rows(n, sigma);
        let Ok(checks) = CheckMatrix::new(n, rows) else {
            continue;
        };
        if n - checks.rank() == k_expected {
            return Ok(sigma);
        }
    }
    Err(Error::Construction(format!("no valid generator step for twisted XZZX L={l}, J={j}")))
}

/// Reads σ back from a cyclic check matrix (row 0 = X₀ Z₁ Z_σ X_{σ+1}).
pub(super) fn detect_sigma(checks: &CheckMatrix) -> Option<usize> {
    let row = checks.rows().first()?;
    let n = checks.n();
    (2..n.saturating_sub(1)).find(|&s| row.get(s) == Pauli::Z && row.get((s + 1) % n) == Pauli::X)
}
