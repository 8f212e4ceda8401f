//! Test support for sheaflab: an exact rational elimination oracle and
//! generators for random integer sheaf instances.
//!
//! Nothing here depends on `sheaflab-core`. Instances are plain integer data,
//! and the oracle assembles its own coboundary from them, so tests can compare
//! the floating-point pipeline against an independent exact computation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub type IntMatrix = Vec<Vec<i64>>;

/// Rank over the rationals by fraction-exact Gaussian elimination.
pub fn exact_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &lead;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = &*x - &factor * p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// `ncols - rank`.
pub fn exact_nullity(rows: &[Vec<i64>], ncols: usize) -> usize {
    ncols - exact_rank(rows, ncols)
}

/// Integer matrix product `a * b`.
pub fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// A sheaf on a multigraph with integer restriction matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub nodes: Vec<String>,
    /// `(edge id, endpoint, endpoint)`; equal endpoints make a self-loop.
    pub edges: Vec<(String, String, String)>,
    pub dims: BTreeMap<String, usize>,
    /// `(upper, lower, slot, matrix)`; matrix is `dim(lower) x dim(upper)`.
    pub maps: Vec<(String, String, u32, IntMatrix)>,
}

impl GraphInstance {
    pub fn node_dim_total(&self) -> usize {
        self.nodes.iter().map(|n| self.dims[n]).sum()
    }

    fn map(&self, upper: &str, lower: &str, slot: u32) -> &IntMatrix {
        &self
            .maps
            .iter()
            .find(|(u, l, s, _)| u == upper && l == lower && *s == slot)
            .expect("every incidence has a map")
            .3
    }

    /// Coboundary assembled directly from the incidence data: one row block
    /// per edge holding `+A` for one end and `-B` for the other, columns
    /// ordered by sorted node id.
    pub fn exact_coboundary(&self) -> IntMatrix {
        let mut nodes = self.nodes.clone();
        nodes.sort();
        let mut offset = BTreeMap::new();
        let mut ncols = 0;
        for n in &nodes {
            offset.insert(n.clone(), ncols);
            ncols += self.dims[n];
        }
        let mut edges = self.edges.clone();
        edges.sort();
        let mut rows = Vec::new();
        for (e, a, b) in &edges {
            let de = self.dims[e];
            let (first, second) = if a == b {
                ((a, 0), (a, 1))
            } else if a < b {
                ((a, 0), (b, 0))
            } else {
                ((b, 0), (a, 0))
            };
            let mut block = vec![vec![0i64; ncols]; de];
            for (sign, (node, slot)) in [(1i64, first), (-1, second)] {
                let m = self.map(node, e, slot);
                for (i, row) in m.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        block[i][offset[node] + j] += sign * x;
                    }
                }
            }
            rows.extend(block);
        }
        rows
    }

    /// Number of connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let index: BTreeMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (_, a, b) in &self.edges {
            let (ra, rb) = (
                find(&mut parent, index[a.as_str()]),
                find(&mut parent, index[b.as_str()]),
            );
            parent[ra] = rb;
        }
        (0..self.nodes.len())
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| rng.random_range(-bound..=bound))
                .collect()
        })
        .collect()
}

/// Random multigraph sheaf: up to `max_nodes` nodes, up to `max_edges`
/// edges (self-loops and parallel edges allowed), stalk dims in
/// `0..=max_dim`, entries in `[-bound, bound]`.
pub fn random_graph_sheaf<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_edges: usize,
    max_dim: usize,
    bound: i64,
) -> GraphInstance {
    let n = rng.random_range(1..=max_nodes);
    let m = rng.random_range(0..=max_edges);
    let nodes: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|k| {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            (format!("e{k}"), nodes[a].clone(), nodes[b].clone())
        })
        .collect();
    let mut dims = BTreeMap::new();
    for id in nodes.iter().chain(edges.iter().map(|e| &e.0)) {
        dims.insert(id.clone(), rng.random_range(0..=max_dim));
    }
    let mut maps = Vec::new();
    for (e, a, b) in &edges {
        let slots = if a == b {
            [(a, 0), (a, 1)]
        } else {
            [(a, 0), (b, 0)]
        };
        for (node, slot) in slots {
            let mat = random_matrix(rng, dims[e], dims[node], bound);
            maps.push((node.clone(), e.clone(), slot, mat));
        }
    }
    GraphInstance {
        nodes,
        edges,
        dims,
        maps,
    }
}

/// Random simple-ish graph with exactly `components` connected components
/// (each a random tree plus extra edges), carrying the constant sheaf `R^k`.
pub fn random_constant_sheaf<R: Rng>(rng: &mut R, components: usize, k: usize) -> GraphInstance {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for c in 0..components {
        let size = rng.random_range(1..=4);
        let ids: Vec<String> = (0..size).map(|i| format!("c{c}n{i}")).collect();
        for i in 1..size {
            let j = rng.random_range(0..i);
            edges.push((format!("c{c}t{i}"), ids[j].clone(), ids[i].clone()));
        }
        for x in 0..rng.random_range(0..=2) {
            let a = rng.random_range(0..size);
            let b = rng.random_range(0..size);
            edges.push((format!("c{c}x{x}"), ids[a].clone(), ids[b].clone()));
        }
        nodes.extend(ids);
    }
    let identity: IntMatrix = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut dims = BTreeMap::new();
    for id in nodes.iter().chain(edges.iter().map(|e| &e.0)) {
        dims.insert(id.clone(), k);
    }
    let mut maps = Vec::new();
    for (e, a, b) in &edges {
        let slots = if a == b {
            [(a, 0), (a, 1)]
        } else {
            [(a, 0), (b, 0)]
        };
        for (node, slot) in slots {
            maps.push((node.clone(), e.clone(), slot, identity.clone()));
        }
    }
    GraphInstance {
        nodes,
        edges,
        dims,
        maps,
    }
}

/// Diamond poset `C > B1, B2 > A` whose two composites agree exactly:
/// `q * p == s * r` over the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct DiamondInstance {
    /// Dims of C, B1, B2, A.
    pub dims: [usize; 4],
    /// C -> B1
    pub p: IntMatrix,
    /// B1 -> A
    pub q: IntMatrix,
    /// C -> B2
    pub r: IntMatrix,
    /// B2 -> A
    pub s: IntMatrix,
}

/// Builds `r = K p` and `s = q K^-1` from a random unimodular `K`, so both
/// composites equal `q p` exactly. Every row of `p` is nonzero.
pub fn random_commuting_diamond<R: Rng>(rng: &mut R, bound: i64) -> DiamondInstance {
    let dc = rng.random_range(1..=3);
    let db = rng.random_range(1..=3);
    let da = rng.random_range(1..=3);
    let mut p = random_matrix(rng, db, dc, bound);
    for row in p.iter_mut() {
        if row.iter().all(|&x| x == 0) {
            let j = rng.random_range(0..dc);
            row[j] = if rng.random_bool(0.5) { 1 } else { -1 };
        }
    }
    let q = random_matrix(rng, da, db, bound);

    // K and its inverse as products of elementary row operations.
    let mut k = identity(db);
    let mut k_inv = identity(db);
    if db > 1 {
        for _ in 0..3 {
            let i = rng.random_range(0..db);
            let mut j = rng.random_range(0..db - 1);
            if j >= i {
                j += 1;
            }
            let c = rng.random_range(-2..=2);
            // E = I + c e_i e_j^T, E^-1 = I - c e_i e_j^T.
            let mut e = identity(db);
            e[i][j] = c;
            let mut e_inv = identity(db);
            e_inv[i][j] = -c;
            k = int_mul(&e, &k, db, db);
            k_inv = int_mul(&k_inv, &e_inv, db, db);
        }
    }
    let r = int_mul(&k, &p, db, dc);
    let s = int_mul(&q, &k_inv, db, db);
    DiamondInstance {
        dims: [dc, db, db, da],
        p,
        q,
        r,
        s,
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(exact_rank(&[vec![1, -1]], 2), 1);
        assert_eq!(exact_rank(&[vec![2, 4], vec![1, 2]], 2), 1);
        assert_eq!(exact_rank(&[vec![0, 0], vec![0, 0]], 2), 0);
        assert_eq!(exact_rank(&[], 3), 0);
        assert_eq!(exact_nullity(&[vec![2, -3]], 2), 1);
        assert_eq!(
            exact_rank(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]], 3),
            2
        );
    }

    #[test]
    fn diamonds_commute_exactly() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let d = random_commuting_diamond(&mut rng, 3);
            let [dc, db, _, _] = d.dims;
            assert_eq!(int_mul(&d.q, &d.p, db, dc), int_mul(&d.s, &d.r, db, dc));
        }
    }

    #[test]
    fn constant_sheaf_components() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for c in 1..=3 {
            let g = random_constant_sheaf(&mut rng, c, 2);
            assert_eq!(g.components(), c);
            let delta = g.exact_coboundary();
            assert_eq!(exact_nullity(&delta, g.node_dim_total()), 2 * c);
        }
    }
}
