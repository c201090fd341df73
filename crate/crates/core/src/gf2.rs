//! Dense GF(2) linear algebra over packed `u64` words.

pub(crate) fn word_count(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub(crate) fn get_bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Incrementally built row space.
///
/// Rows are stored in insertion order, each reduced against the earlier ones, so
/// reduction in that order clears every pivot.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (p, row) in &self.rows {
            if get_bit(v, *p) {
                xor_into(v, row);
            }
        }
    }

    /// Adds `v` to the span; returns false if it was already contained.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        match lowest_bit(&v) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|w| *w == 0)
    }
}

pub fn rank<V: AsRef<[u64]>>(rows: &[V]) -> usize {
    let mut space = RowSpace::new();
    for r in rows {
        space.insert(r.as_ref().to_vec());
    }
    space.rank()
}

/// Basis of `{v : row · v = 0 for every row}` over `ncols` columns.
pub fn nullspace<V: AsRef<[u64]>>(rows: &[V], ncols: usize) -> Vec<Vec<u64>> {
    let nw = word_count(ncols);
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.as_ref()[..nw].to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..m.len()).find(|&i| get_bit(&m[i], col)) else {
            continue;
        };
        m.swap(r, found);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && get_bit(row, col) {
                xor_into(row, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; nw];
        flip_bit(&mut v, free);
        for (i, &p) in pivots.iter().enumerate() {
            if get_bit(&m[i], free) {
                flip_bit(&mut v, p);
            }
        }
        basis.push(v);
    }
    basis
}
