use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Cell, Point, Triangle, EDGE_VERTICES};

/// Sides of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

impl Side {
    /// Whether the side is a line `y = const` (its tangent is `x`).
    pub fn is_horizontal(&self) -> bool {
        matches!(self, Side::Bottom | Side::Top)
    }
}

/// `N × N` squares of the unit square, each split along the diagonal from
/// its lower-left to its upper-right corner.
#[derive(Debug, Clone)]
pub struct StructuredMesh {
    pub n: usize,
    pub vertices: Vec<Point>,
    /// Global vertex ids per cell, counterclockwise.
    pub cells: Vec<[usize; 3]>,
    /// Edges as `(lower, higher)` global vertex ids.
    pub edges: Vec<[usize; 2]>,
    /// Global edge id of local edge `i` (opposite local vertex `i`).
    pub cell_edges: Vec<[usize; 3]>,
}

pub fn build_mesh(n: usize) -> Result<StructuredMesh> {
    if n == 0 {
        return Err(Error::InvalidInput("mesh needs at least one square per side".into()));
    }
    let h = 1.0 / n as f64;
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * h, j as f64 * h]);
        }
    }
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v01, v11) = (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
            cells.push([v00, v10, v11]);
            cells.push([v00, v11, v01]);
        }
    }
    let mut edge_ids: HashMap<[usize; 2], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut cell_edges = Vec::with_capacity(cells.len());
    for c in &cells {
        let mut ids = [0; 3];
        for (i, [a, b]) in EDGE_VERTICES.iter().enumerate() {
            let key = [c[*a].min(c[*b]), c[*a].max(c[*b])];
            ids[i] = *edge_ids.entry(key).or_insert_with(|| {
                edges.push(key);
                edges.len() - 1
            });
        }
        cell_edges.push(ids);
    }
    Ok(StructuredMesh {
        n,
        vertices,
        cells,
        edges,
        cell_edges,
    })
}

impl StructuredMesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Mesh size `1/N`.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn cell(&self, k: usize) -> Result<Cell> {
        let g = self.cells[k];
        let tri = Triangle::with_global([self.vertices[g[0]], self.vertices[g[1]], self.vertices[g[2]]], g)?;
        Cell::new(tri)
    }

    fn grid_index(&self, v: usize) -> (usize, usize) {
        (v % (self.n + 1), v / (self.n + 1))
    }

    /// Sides of the square a vertex lies on (two at corners).
    pub fn vertex_sides(&self, v: usize) -> Vec<Side> {
        let (i, j) = self.grid_index(v);
        let mut s = Vec::new();
        if j == 0 {
            s.push(Side::Bottom);
        }
        if i == self.n {
            s.push(Side::Right);
        }
        if j == self.n {
            s.push(Side::Top);
        }
        if i == 0 {
            s.push(Side::Left);
        }
        s
    }

    /// The side an edge lies on, if it is a boundary edge.
    pub fn edge_side(&self, e: usize) -> Option<Side> {
        let [a, b] = self.edges[e];
        let sa = self.vertex_sides(a);
        self.vertex_sides(b).into_iter().find(|s| sa.contains(s))
    }

    /// Cells containing each edge.
    pub fn edge_cells(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_edges()];
        for (k, ids) in self.cell_edges.iter().enumerate() {
            for &e in ids {
                out[e].push(k);
            }
        }
        out
    }

    /// Average diameter of the cells sharing each vertex.
    pub fn vertex_sizes(&self) -> Result<Vec<f64>> {
        let mut sum = vec![0.0; self.num_vertices()];
        let mut count = vec![0usize; self.num_vertices()];
        for k in 0..self.num_cells() {
            let d = self.cell(k)?.triangle.diameter();
            for &v in &self.cells[k] {
                sum[v] += d;
                count[v] += 1;
            }
        }
        Ok(sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect())
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        crate::geometry::dist(self.vertices[a], self.vertices[b])
    }
}
