#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use sheaflab_core::{Cell, Complex, CoveringRelation, MapTable, Sheaf};
use sheaflab_testkit::{DiamondInstance, GraphInstance, IntMatrix};

pub fn to_matrix(m: &IntMatrix, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |i, j| m[i][j] as f64)
}

pub fn graph_sheaf(g: &GraphInstance) -> Sheaf {
    let complex = Complex::from_graph(&g.nodes, &g.edges).unwrap();
    let maps: MapTable = g
        .maps
        .iter()
        .map(|(u, l, slot, m)| {
            (
                CoveringRelation::with_slot(u, l, *slot),
                to_matrix(m, g.dims[l], g.dims[u]),
            )
        })
        .collect();
    Sheaf::build(complex, &g.dims, maps).unwrap()
}

pub fn diamond_sheaf(d: &DiamondInstance) -> Sheaf {
    diamond_with(d, |_, m| m)
}

/// Builds the diamond, letting `edit` change the matrix on each relation.
pub fn diamond_with(
    d: &DiamondInstance,
    mut edit: impl FnMut(&str, DMatrix<f64>) -> DMatrix<f64>,
) -> Sheaf {
    let [dc, db1, db2, da] = d.dims;
    let complex = Complex::build(
        vec![
            Cell::new("C", 2),
            Cell::new("B1", 1),
            Cell::new("B2", 1),
            Cell::new("A", 0),
        ],
        vec![
            CoveringRelation::new("C", "B1"),
            CoveringRelation::new("C", "B2"),
            CoveringRelation::new("B1", "A"),
            CoveringRelation::new("B2", "A"),
        ],
    )
    .unwrap();
    let stalks: BTreeMap<String, usize> = [("C", dc), ("B1", db1), ("B2", db2), ("A", da)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let mut maps = MapTable::new();
    maps.insert(
        CoveringRelation::new("C", "B1"),
        edit("p", to_matrix(&d.p, db1, dc)),
    );
    maps.insert(
        CoveringRelation::new("B1", "A"),
        edit("q", to_matrix(&d.q, da, db1)),
    );
    maps.insert(
        CoveringRelation::new("C", "B2"),
        edit("r", to_matrix(&d.r, db2, dc)),
    );
    maps.insert(
        CoveringRelation::new("B2", "A"),
        edit("s", to_matrix(&d.s, da, db2)),
    );
    Sheaf::build(complex, &stalks, maps).unwrap()
}
