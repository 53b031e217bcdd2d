use crate::error::Result;
use crate::geometry::EDGE_VERTICES;
use crate::reference_element::ElementFamily;

use super::mesh::StructuredMesh;

/// What a global degree of freedom measures, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    VertexValue(usize),
    VertexDx(usize),
    VertexDy(usize),
    VertexDxx(usize),
    VertexDxy(usize),
    VertexDyy(usize),
    /// Normal derivative at the midpoint of an edge.
    EdgeNormal(usize),
    /// Point value in the interior of an edge.
    EdgePoint(usize),
    CellInterior(usize),
}

/// DOF counts per vertex, edge and cell.
pub fn entity_dofs(family: ElementFamily) -> (usize, usize, usize) {
    match family {
        ElementFamily::Lagrange(r) => (1, r - 1, (r - 1) * (r.saturating_sub(2)) / 2),
        ElementFamily::Hermite => (3, 0, 1),
        ElementFamily::Morley => (1, 1, 0),
        ElementFamily::Argyris => (6, 1, 0),
        ElementFamily::Bell => (6, 0, 0),
    }
}

/// Global numbering: vertex DOFs first, then edge DOFs, then cell DOFs.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub family: ElementFamily,
    pub counts: (usize, usize, usize),
    pub num_dofs: usize,
    /// Global index of each local node, in the element's canonical order.
    pub cell_dofs: Vec<Vec<usize>>,
    pub kinds: Vec<DofKind>,
}

const VERTEX_KINDS: [fn(usize) -> DofKind; 6] = [
    DofKind::VertexValue,
    DofKind::VertexDx,
    DofKind::VertexDy,
    DofKind::VertexDxx,
    DofKind::VertexDxy,
    DofKind::VertexDyy,
];

pub fn build_dofmap(family: ElementFamily, mesh: &StructuredMesh) -> Result<DofMap> {
    let (nv, ne, nc) = entity_dofs(family);
    let edge_base = nv * mesh.num_vertices();
    let cell_base = edge_base + ne * mesh.num_edges();
    let num_dofs = cell_base + nc * mesh.num_cells();
    let mut kinds = Vec::with_capacity(num_dofs);
    for v in 0..mesh.num_vertices() {
        kinds.extend(VERTEX_KINDS[..nv].iter().map(|k| k(v)));
    }
    for e in 0..mesh.num_edges() {
        let kind = if matches!(family, ElementFamily::Lagrange(_)) {
            DofKind::EdgePoint(e)
        } else {
            DofKind::EdgeNormal(e)
        };
        kinds.extend(std::iter::repeat_n(kind, ne));
    }
    for c in 0..mesh.num_cells() {
        kinds.extend(std::iter::repeat_n(DofKind::CellInterior(c), nc));
    }

    let cell_dofs = (0..mesh.num_cells())
        .map(|k| {
            let g = mesh.cells[k];
            let mut dofs = Vec::with_capacity(family.dimension());
            for &v in &g {
                dofs.extend((0..nv).map(|d| nv * v + d));
            }
            for (i, &e) in mesh.cell_edges[k].iter().enumerate() {
                let [a, b] = EDGE_VERTICES[i];
                // local edge points run from local vertex a to b; global ones
                // from the lower to the higher global id
                let aligned = g[a] < g[b];
                dofs.extend((0..ne).map(|d| {
                    let d = if aligned { d } else { ne - 1 - d };
                    edge_base + ne * e + d
                }));
            }
            dofs.extend((0..nc).map(|d| cell_base + nc * k + d));
            dofs
        })
        .collect();
    Ok(DofMap {
        family,
        counts: (nv, ne, nc),
        num_dofs,
        cell_dofs,
        kinds,
    })
}
