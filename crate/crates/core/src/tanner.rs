//! Tanner graph of a check matrix with per-edge Pauli labels.

use std::fmt::Write as _;

use crate::error::Result;
use crate::pauli::{CheckMatrix, Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub check: usize,
    pub var: usize,
    pub pauli: Pauli,
}

/// Edges are sorted by `(check, var)`; `var_edges` lists edge ids grouped by variable.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    m: usize,
    n: usize,
    edges: Vec<Edge>,
    check_ptr: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(s: &CheckMatrix) -> Self {
        let (m, n) = (s.m(), s.n());
        let mut edges = Vec::new();
        let mut check_ptr = vec![0];
        for (i, row) in s.rows().iter().enumerate() {
            for q in row.support() {
                edges.push(Edge { check: i, var: q, pauli: row.get(q) });
            }
            check_ptr.push(edges.len());
        }
        let mut deg = vec![0usize; n];
        for e in &edges {
            deg[e.var] += 1;
        }
        let mut var_ptr = vec![0usize; n + 1];
        for v in 0..n {
            var_ptr[v + 1] = var_ptr[v] + deg[v];
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0usize; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            var_edges[fill[e.var]] = id;
            fill[e.var] += 1;
        }
        Self { m, n, edges, check_ptr, var_ptr, var_edges }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge ids `N(m)` of check `m`, a contiguous range.
    pub fn check_edges(&self, m: usize) -> std::ops::Range<usize> {
        self.check_ptr[m]..self.check_ptr[m + 1]
    }

    /// Edge ids `M(n)` of variable `n`.
    pub fn var_edges(&self, n: usize) -> &[usize] {
        &self.var_edges[self.var_ptr[n]..self.var_ptr[n + 1]]
    }

    pub fn degree(&self, n: usize) -> usize {
        self.var_ptr[n + 1] - self.var_ptr[n]
    }

    pub fn to_check_matrix(&self) -> Result<CheckMatrix> {
        let mut rows = vec![PauliString::identity(self.n); self.m];
        for e in &self.edges {
            rows[e.check].set(e.var, e.pauli);
        }
        CheckMatrix::new(self.n, rows)
    }

    /// Alist-style text: sizes, degrees, then 1-based neighbour lists, with each check
    /// neighbour followed by its Pauli label.
    pub fn to_alist(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.m);
        let vdeg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let cdeg: Vec<usize> = (0..self.m).map(|c| self.check_edges(c).len()).collect();
        let _ = writeln!(s, "{} {}", vdeg.iter().max().unwrap_or(&0), cdeg.iter().max().unwrap_or(&0));
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "{}", join(&vdeg));
        let _ = writeln!(s, "{}", join(&cdeg));
        for v in 0..self.n {
            let cs: Vec<usize> = self.var_edges(v).iter().map(|&e| self.edges[e].check + 1).collect();
            let _ = writeln!(s, "{}", join(&cs));
        }
        for c in 0..self.m {
            let line: Vec<String> = self
                .check_edges(c)
                .map(|e| format!("{}{}", self.edges[e].var + 1, self.edges[e].pauli.symbol()))
                .collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{Code, CodeSpec};

    #[test]
    fn golden_edge_count() {
        let code = Code::build(&CodeSpec::rotated_surface(3)).unwrap();
        let g = TannerGraph::new(&code.checks);
        assert_eq!(g.edges().len(), 24);
        let code = Code::build(&CodeSpec::twisted_xzzx(2, 1)).unwrap();
        let g = TannerGraph::new(&code.checks);
        assert_eq!(g.edges().len(), 16);
        let single = CheckMatrix::new(2, vec!["XX".parse().unwrap()]).unwrap();
        let g = TannerGraph::new(&single);
        assert_eq!(g.edges().len(), 2);
        assert!(g.edges().iter().all(|e| e.pauli == Pauli::X));
    }

    #[test]
    fn round_trip_and_degrees() {
        for spec in [CodeSpec::toric(3), CodeSpec::color666(5), CodeSpec::twisted_xzzx(3, 2)] {
            let code = Code::build(&spec).unwrap();
            let g = TannerGraph::new(&code.checks);
            assert_eq!(g.to_check_matrix().unwrap(), code.checks);
            for v in 0..g.n() {
                let col = code.checks.rows().iter().filter(|r| r.get(v) != Pauli::I).count();
                assert_eq!(g.degree(v), col);
                assert!(g.var_edges(v).iter().all(|&e| g.edges()[e].var == v));
            }
        }
    }

    #[test]
    fn alist_layout() {
        let s = CheckMatrix::new(3, vec!["XZI".parse().unwrap(), "IZY".parse().unwrap()]).unwrap();
        let text = TannerGraph::new(&s).to_alist();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "3 2");
        assert_eq!(lines[2], "1 2 1");
        assert_eq!(lines[6], "2");
        assert_eq!(lines[7], "1X 2Z");
        assert_eq!(lines[8], "2Z 3Y");
    }
}
