//! Envelope (skyline) Cholesky factorization with reverse Cuthill–McKee
//! reordering; the direct solver behind the global systems.

use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::sparse::SparseMatrix;

/// Reverse Cuthill–McKee permutation of the (symmetrized) graph of `a`.
///
/// `perm[k]` is the original index placed at position `k`.
pub fn reverse_cuthill_mckee(a: &SparseMatrix) -> Vec<usize> {
    let n = a.dim();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in a.col_indices_of_row(i) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize| -> (usize, usize) {
        // returns (farthest node with minimum degree in last level, eccentricity)
        let mut level = vec![usize::MAX; n];
        level[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            last = v;
            for &w in &adj[v] {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let ecc = level[last];
        let far = (0..n)
            .filter(|&v| level[v] == ecc)
            .min_by_key(|&v| degree[v])
            .unwrap_or(last);
        (far, ecc)
    };

    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (degree[v], v));
    for &seed in &seeds {
        if visited[seed] {
            continue;
        }
        // pseudo-peripheral start node
        let mut start = seed;
        let (mut far, mut ecc) = bfs_levels(start);
        for _ in 0..4 {
            let (next_far, next_ecc) = bfs_levels(far);
            if next_ecc <= ecc {
                break;
            }
            start = far;
            far = next_far;
            ecc = next_ecc;
        }
        let start = if visited[start] { seed } else { start };
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Lower-triangular envelope Cholesky factor `P A Pᵀ = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    row_start: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(a);
        let mut inverse = vec![0usize; n];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let pi = inverse[i];
            for &j in a.col_indices_of_row(i) {
                let pj = inverse[j];
                if pj < pi {
                    first[pi] = first[pi].min(pj);
                } else if pi < pj {
                    first[pj] = first[pj].min(pi);
                }
            }
        }
        let mut row_start = vec![0usize; n + 1];
        for i in 0..n {
            row_start[i + 1] = row_start[i] + (i - first[i] + 1);
        }
        let mut values = vec![0.0; row_start[n]];
        for i in 0..n {
            let pi = inverse[i];
            for (j, v) in a.row(i) {
                let pj = inverse[j];
                if pj <= pi {
                    values[row_start[pi] + pj - first[pi]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let ri = row_start[i];
            for j in fi..i {
                let fj = first[j];
                let rj = row_start[j];
                let k0 = fi.max(fj);
                let mut s = values[ri + j - fi];
                let li = &values[ri + k0 - fi..ri + j - fi];
                let lj = &values[rj + k0 - fj..rj + j - fj];
                s -= li.iter().zip(lj).map(|(a, b)| a * b).sum::<f64>();
                let djj = values[rj + j - fj];
                values[ri + j - fi] = s / djj;
            }
            let row = &values[ri..ri + i - fi];
            let d = values[ri + i - fi] - row.iter().map(|v| v * v).sum::<f64>();
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveDefinite(d));
            }
            values[ri + i - fi] = d.sqrt();
        }
        Ok(Self {
            perm,
            first,
            row_start,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries in the envelope.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.row_start[i];
            let row = &self.values[ri..ri + i - fi];
            let s: f64 = row.iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / self.values[ri + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.row_start[i];
            y[i] /= self.values[ri + i - fi];
            let yi = y[i];
            for (k, l) in self.values[ri..ri + i - fi].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}
