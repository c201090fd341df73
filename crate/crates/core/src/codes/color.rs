//! Triangular color codes on the (6,6,6) and (4,8,8) tilings.
//!
//! Qubits are numbered row by row starting from the apex; faces follow the same order
//! and each face contributes an X row, with all Z rows after all X rows.

use std::collections::{BTreeMap, VecDeque};

use super::{row_from, Family};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Debug)]
pub struct ColorFaces {
    pub n: usize,
    /// Qubits of each face, ascending.
    pub faces: Vec<Vec<usize>>,
    /// Face colour in {0, 1, 2}.
    pub colors: Vec<u8>,
}

impl ColorFaces {
    /// Checks that faces sharing a vertex share exactly two and carry different colours.
    pub fn check_rules(&self) -> Result<()> {
        for a in 0..self.faces.len() {
            for b in a + 1..self.faces.len() {
                let shared = self.faces[a].iter().filter(|q| self.faces[b].contains(q)).count();
                if shared == 0 {
                    continue;
                }
                if shared != 2 {
                    return Err(Error::Construction(format!("faces {a} and {b} share {shared} vertices")));
                }
                if self.colors[a] == self.colors[b] {
                    return Err(Error::Construction(format!("adjacent faces {a} and {b} have the same colour")));
                }
            }
        }
        Ok(())
    }
}

pub fn color_faces(family: Family, d: usize) -> Result<ColorFaces> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidParameter(format!("color codes need odd D >= 3, got {d}")));
    }
    let faces = match family {
        Family::Color666 => hexagonal(d),
        Family::Color488 => square_octagon(d)?,
        other => return Err(Error::InvalidParameter(format!("{other} is not a color code"))),
    };
    faces.check_rules()?;
    Ok(faces)
}

pub(super) fn color_code(family: Family, d: usize) -> Result<Vec<PauliString>> {
    let cf = color_faces(family, d)?;
    let mut rows = Vec::with_capacity(2 * cf.faces.len());
    for p in [Pauli::X, Pauli::Z] {
        for f in &cf.faces {
            let qs: Vec<_> = f.iter().map(|&q| (q, p)).collect();
            rows.push(row_from(cf.n, &qs));
        }
    }
    Ok(rows)
}

/// Triangle of sites `0 <= c <= r <= 3(D-1)/2` on a triangular lattice. Sites with
/// `(r + c) mod 3 == 1` are face centres, the rest are qubits.
fn hexagonal(d: usize) -> ColorFaces {
    let b = 3 * (d as i64 - 1) / 2;
    let inside = |r: i64, c: i64| 0 <= c && c <= r && r <= b;
    let is_face = |r: i64, c: i64| (r + c).rem_euclid(3) == 1;
    let mut index = BTreeMap::new();
    for r in 0..=b {
        for c in 0..=r {
            if !is_face(r, c) {
                let next = index.len();
                index.insert((r, c), next);
            }
        }
    }
    let mut faces = Vec::new();
    let mut colors = Vec::new();
    for r in 0..=b {
        for c in 0..=r {
            if !is_face(r, c) {
                continue;
            }
            let mut qs: Vec<usize> = [(-1, 0), (1, 0), (0, -1), (0, 1), (1, 1), (-1, -1)]
                .iter()
                .map(|(dr, dc)| (r + dr, c + dc))
                .filter(|&(rr, cc)| inside(rr, cc))
                .map(|p| index[&p])
                .collect();
            qs.sort_unstable();
            faces.push(qs);
            colors.push((r % 3) as u8);
        }
    }
    ColorFaces { n: index.len(), faces, colors }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tile {
    Square,
    Octagon,
}

/// Square-octagon triangle built from alternating rows of qubits and face centres on an
/// integer grid; the narrow end is the apex.
fn square_octagon(d: usize) -> Result<ColorFaces> {
    let d = d as i64;
    let top = d + d / 2;
    let mut qubits: Vec<(i64, i64)> = Vec::new();
    let mut centres: Vec<((i64, i64), Tile)> = Vec::new();

    let data_row = |qubits: &mut Vec<(i64, i64)>, count: i64, y: i64, x0: i64| {
        let mut x = x0;
        for i in 0..count {
            qubits.push((x, y));
            x += if i % 2 == 0 { 2 } else { 4 };
        }
    };
    let centre_row = |centres: &mut Vec<((i64, i64), Tile)>, count: i64, y: i64, x0: i64, first: Tile| {
        let second = if first == Tile::Square { Tile::Octagon } else { Tile::Square };
        for i in 0..count {
            centres.push(((x0 + 3 * i, y), if i % 2 == 0 { first } else { second }));
        }
    };

    let mut x = 4;
    while x < (d / 2) * 6 {
        centres.push(((x, 0), Tile::Octagon));
        x += 6;
    }
    let mut y = 1;
    let mut width = d;
    while y <= top {
        data_row(&mut qubits, width, y, y - 1);
        width -= if y == 1 { 1 } else { 2 };
        y += 1;
        if y <= top {
            data_row(&mut qubits, width, y, y + 1);
            y += 1;
        }
        if y <= top {
            if y % 2 == 0 {
                centre_row(&mut centres, width, y, y + 1, Tile::Square);
            } else {
                centre_row(&mut centres, width, y, y - 2, Tile::Octagon);
            }
            y += 1;
        }
    }

    qubits.sort_by_key(|&(x, y)| (-y, x));
    centres.sort_by_key(|&((x, y), _)| (-y, x));
    let index: BTreeMap<(i64, i64), usize> = qubits.iter().enumerate().map(|(i, p)| (*p, i)).collect();

    const SQUARE: [(i64, i64); 4] = [(-1, -1), (1, -1), (1, 1), (-1, 1)];
    const OCTAGON: [(i64, i64); 8] = [(-2, -1), (-1, -2), (1, -2), (2, -1), (2, 1), (1, 2), (-1, 2), (-2, 1)];
    let mut faces = Vec::new();
    let mut tiles = Vec::new();
    for &((cx, cy), tile) in &centres {
        let offsets: &[(i64, i64)] = if tile == Tile::Square { &SQUARE } else { &OCTAGON };
        let mut qs: Vec<usize> = offsets.iter().filter_map(|(dx, dy)| index.get(&(cx + dx, cy + dy)).copied()).collect();
        if qs.is_empty() {
            continue;
        }
        qs.sort_unstable();
        faces.push(qs);
        tiles.push(tile);
    }

    // Squares take colour 0; octagons are 2-coloured along shared edges.
    let mut colors: Vec<Option<u8>> = tiles.iter().map(|t| (*t == Tile::Square).then_some(0)).collect();
    let touches = |a: &Vec<usize>, b: &Vec<usize>| a.iter().any(|q| b.contains(q));
    for start in 0..faces.len() {
        if colors[start].is_some() {
            continue;
        }
        colors[start] = Some(1);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for g in 0..faces.len() {
                if g == f || tiles[g] == Tile::Square || !touches(&faces[f], &faces[g]) {
                    continue;
                }
                let want = 3 - colors[f].unwrap_or(1);
                match colors[g] {
                    None => {
                        colors[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(c) if c != want => {
                        return Err(Error::Construction("octagons are not 2-colourable".into()));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(ColorFaces { n: qubits.len(), faces, colors: colors.into_iter().map(|c| c.unwrap_or(0)).collect() })
}
