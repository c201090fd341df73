//! Square-lattice families: toric, surface, their rotated forms and the XZZX variants.

use super::row_from;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Edges of an L×L periodic lattice: horizontal edges first, then vertical, row-major.
/// X rows (vertex stars) precede Z rows (faces).
pub(super) fn toric(l: usize) -> Vec<PauliString> {
    let n = 2 * l * l;
    let h = |r: usize, c: usize| (r % l) * l + c % l;
    let v = |r: usize, c: usize| l * l + (r % l) * l + c % l;
    let mut rows = Vec::with_capacity(n);
    for r in 0..l {
        for c in 0..l {
            let star = [h(r, c), h(r, c + l - 1), v(r, c), v(r + l - 1, c)];
            rows.push(row_from(n, &star.map(|q| (q, Pauli::X))));
        }
    }
    for r in 0..l {
        for c in 0..l {
            let face = [h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)];
            rows.push(row_from(n, &face.map(|q| (q, Pauli::Z))));
        }
    }
    rows
}

/// Plaquettes anchored at every site of an L×L torus, X when `i + j` is even.
pub(super) fn rotated_toric(l: usize) -> Vec<PauliString> {
    let n = l * l;
    let q = |i: usize, j: usize| (i % l) * l + j % l;
    let mut rows = Vec::with_capacity(n);
    for i in 0..l {
        for j in 0..l {
            let p = if (i + j) % 2 == 0 { Pauli::X } else { Pauli::Z };
            let mut row = PauliString::identity(n);
            for s in [q(i, j), q(i, j + 1), q(i + 1, j), q(i + 1, j + 1)] {
                row.set(s, p);
            }
            rows.push(row);
        }
    }
    rows
}

/// Planar code on a (2L-1)×(2L-1) grid: qubits where `r + c` is even, X checks at
/// (odd, even) and Z checks at (even, odd), each acting on its in-grid neighbours.
pub(super) fn surface(l: usize) -> Vec<PauliString> {
    let g = 2 * l - 1;
    let mut index = vec![usize::MAX; g * g];
    let mut n = 0;
    for r in 0..g {
        for c in 0..g {
            if (r + c) % 2 == 0 {
                index[r * g + c] = n;
                n += 1;
            }
        }
    }
    let neighbours = |r: usize, c: usize| {
        let mut out = Vec::with_capacity(4);
        if r > 0 {
            out.push(index[(r - 1) * g + c]);
        }
        if c > 0 {
            out.push(index[r * g + c - 1]);
        }
        if c + 1 < g {
            out.push(index[r * g + c + 1]);
        }
        if r + 1 < g {
            out.push(index[(r + 1) * g + c]);
        }
        out
    };
    let mut rows = Vec::new();
    for (p, parity) in [(Pauli::X, 1), (Pauli::Z, 0)] {
        for r in 0..g {
            for c in 0..g {
                if r % 2 == parity && (r + c) % 2 == 1 {
                    let qs: Vec<_> = neighbours(r, c).into_iter().map(|q| (q, p)).collect();
                    rows.push(row_from(n, &qs));
                }
            }
        }
    }
    rows
}

/// Surviving corners of one face of the rotated layout.
struct Face {
    i: isize,
    j: isize,
    /// `(qubit, corner)` with corners numbered LU, RU, LL, RL.
    corners: Vec<(usize, usize)>,
}

/// Faces of the rotated planar layout, in row-major anchor order.
///
/// Interior faces are all kept. A weight-2 face on the top or bottom edge is kept
/// when it is X-type in the CSS colouring (`i + j` odd), one on the left or right
/// edge when it is Z-type (`i + j` even). Corner faces of weight 1 are dropped.
fn rotated_faces(l: usize) -> Vec<Face> {
    let li = l as isize;
    let mut faces = Vec::new();
    for i in -1..li {
        for j in -1..li {
            let cells = [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)];
            let corners: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(_, (r, c))| (0..li).contains(r) && (0..li).contains(c))
                .map(|(k, (r, c))| ((r * li + c) as usize, k))
                .collect();
            let x_type = (i + j).rem_euclid(2) == 1;
            let keep = match corners.len() {
                4 => true,
                2 if i == -1 || i == li - 1 => x_type,
                2 => !x_type,
                _ => false,
            };
            if keep {
                faces.push(Face { i, j, corners });
            }
        }
    }
    faces
}

pub(super) fn rotated_surface(l: usize) -> Vec<PauliString> {
    let n = l * l;
    rotated_faces(l)
        .into_iter()
        .map(|f| {
            let p = if (f.i + f.j).rem_euclid(2) == 1 { Pauli::X } else { Pauli::Z };
            let qs: Vec<_> = f.corners.iter().map(|&(q, _)| (q, p)).collect();
            row_from(n, &qs)
        })
        .collect()
}

const XZZX: [Pauli; 4] = [Pauli::X, Pauli::Z, Pauli::Z, Pauli::X];

/// Plaquette at each anchor (r, c): X at (r, c), Z at (r, c+1), Z at (r+1, c), X at (r+1, c+1).
pub(super) fn xzzx_toric(l: usize) -> Vec<PauliString> {
    let n = l * l;
    let q = |r: usize, c: usize| (r % l) * l + c % l;
    (0..l)
        .flat_map(|r| (0..l).map(move |c| (r, c)))
        .map(|(r, c)| {
            let cs = [q(r, c), q(r, c + 1), q(r + 1, c), q(r + 1, c + 1)];
            row_from(n, &[(cs[0], XZZX[0]), (cs[1], XZZX[1]), (cs[2], XZZX[2]), (cs[3], XZZX[3])])
        })
        .collect()
}

/// Rotated planar layout with the XZZX corner pattern, truncated at the boundary.
///
/// If the truncated boundary rows fail to commute, the X/Z roles on boundary faces are
/// swapped before giving up.
pub(super) fn xzzx_surface(l: usize) -> Result<Vec<PauliString>> {
    let n = l * l;
    let faces = rotated_faces(l);
    for flip_boundary in [false, true] {
        let rows: Vec<PauliString> = faces
            .iter()
            .map(|f| {
                let flip = flip_boundary && f.corners.len() < 4;
                let qs: Vec<_> = f
                    .corners
                    .iter()
                    .map(|&(q, k)| {
                        let p = match (XZZX[k], flip) {
                            (p, false) => p,
                            (Pauli::X, true) => Pauli::Z,
                            (_, true) => Pauli::X,
                        };
                        (q, p)
                    })
                    .collect();
                row_from(n, &qs)
            })
            .collect();
        let commuting = rows.iter().enumerate().all(|(a, ra)| rows[a + 1..].iter().all(|rb| !ra.anticommutes(rb)));
        if commuting {
            return Ok(rows);
        }
    }
    Err(Error::Construction(format!("xzzx_surface L={l}: boundary rows anticommute")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(rows: &[PauliString]) -> Vec<String> {
        rows.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn rotated_surface_golden() {
        let rows = strings(&rotated_surface(3));
        let golden = [
            "XXIIIIIII", "ZZIZZIIII", "IXXIXXIII", "IIZIIZIII", "IIIZIIZII", "IIIXXIXXI", "IIIIZZIZZ",
            "IIIIIIIXX",
        ];
        assert_eq!(rows, golden);
    }

    #[test]
    fn surface_boundary_check() {
        let rows = surface(3);
        assert_eq!(rows[0].to_string(), "XIIXIXIIIIIII");
        let weights: Vec<usize> = rows.iter().map(PauliString::weight).collect();
        assert!(weights.iter().all(|w| *w == 3 || *w == 4));
        assert_eq!(rows.len(), 12);
    }

    #[test]
    fn xzzx_toric_caption_rows() {
        assert_eq!(xzzx_toric(2)[0].to_string(), "XZZX");
        let s9 = &xzzx_toric(3)[8];
        assert_eq!(s9.get(8), Pauli::X);
        assert_eq!(s9.get(6), Pauli::Z);
        assert_eq!(s9.get(2), Pauli::Z);
        assert_eq!(s9.get(0), Pauli::X);
        assert_eq!(s9.weight(), 4);
    }

    #[test]
    fn xzzx_surface_keeps_unflipped_pattern() {
        let rows = xzzx_surface(3).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].to_string(), "ZXIIIIIII");
        assert_eq!(rows[1].to_string(), "XZIZXIIII");
    }

    #[test]
    fn toric_shapes() {
        let rows = toric(3);
        assert_eq!(rows.len(), 18);
        assert!(rows.iter().all(|r| r.weight() == 4));
        assert_eq!(rotated_toric(2).len(), 4);
    }
}
