//! Finite posets of cells.
//!
//! A [`Complex`] stores cells with explicit ranks plus the covering relations
//! of a strict partial order. Graphs are the two-level special case built by
//! [`Complex::from_graph`]: nodes at rank 1, edges at rank 0, and an edge sits
//! *below* each of its endpoints, so restriction runs node → edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub id: String,
    pub rank: u32,
}

impl Cell {
    pub fn new(id: impl Into<String>, rank: u32) -> Self {
        Cell {
            id: id.into(),
            rank,
        }
    }
}

/// `upper` covers `lower`. The slot distinguishes parallel relations, which
/// only arise from graph self-loops (slots 0 and 1 for the two ends).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoveringRelation {
    pub upper: String,
    pub lower: String,
    pub slot: u32,
}

impl CoveringRelation {
    pub fn new(upper: impl Into<String>, lower: impl Into<String>) -> Self {
        Self::with_slot(upper, lower, 0)
    }

    pub fn with_slot(upper: impl Into<String>, lower: impl Into<String>, slot: u32) -> Self {
        CoveringRelation {
            upper: upper.into(),
            lower: lower.into(),
            slot,
        }
    }
}

impl fmt::Display for CoveringRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} > {}", self.upper, self.lower)?;
        if self.slot != 0 {
            write!(f, " #{}", self.slot)?;
        }
        Ok(())
    }
}

/// A descending chain of covering relations, stored as relation indices
/// into [`Complex::relations`].
pub type RelationChain = Vec<usize>;

/// A validated finite poset. Cells and relations are kept sorted so every
/// index-based structure built on top of it is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    cells: Vec<Cell>,
    index: BTreeMap<String, usize>,
    relations: Vec<CoveringRelation>,
    /// Relation indices whose lower end is the cell.
    up: Vec<Vec<usize>>,
    /// Relation indices whose upper end is the cell.
    down: Vec<Vec<usize>>,
}

impl Complex {
    pub fn empty() -> Self {
        Complex {
            cells: Vec::new(),
            index: BTreeMap::new(),
            relations: Vec::new(),
            up: Vec::new(),
            down: Vec::new(),
        }
    }

    pub fn build(cells: Vec<Cell>, relations: Vec<CoveringRelation>) -> Result<Self> {
        let mut cells = cells;
        cells.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = BTreeMap::new();
        for (i, cell) in cells.iter().enumerate() {
            if index.insert(cell.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(cell.id.clone()));
            }
        }

        let mut relations = relations;
        relations.sort();
        for pair in relations.windows(2) {
            if pair[0] == pair[1] {
                let r = &pair[0];
                return Err(Error::DuplicateRelation {
                    upper: r.upper.clone(),
                    lower: r.lower.clone(),
                    slot: r.slot,
                });
            }
        }

        let mut up = vec![Vec::new(); cells.len()];
        let mut down = vec![Vec::new(); cells.len()];
        for (k, r) in relations.iter().enumerate() {
            let (Some(&u), Some(&l)) = (index.get(&r.upper), index.get(&r.lower)) else {
                return Err(Error::DanglingRelation {
                    upper: r.upper.clone(),
                    lower: r.lower.clone(),
                });
            };
            down[u].push(k);
            up[l].push(k);
        }

        let complex = Complex {
            cells,
            index,
            relations,
            up,
            down,
        };
        complex.check_acyclic()?;
        for r in &complex.relations {
            let ur = complex.cells[complex.index[&r.upper]].rank;
            let lr = complex.cells[complex.index[&r.lower]].rank;
            if ur <= lr {
                return Err(Error::RankViolation {
                    upper: r.upper.clone(),
                    lower: r.lower.clone(),
                    upper_rank: ur,
                    lower_rank: lr,
                });
            }
        }
        Ok(complex)
    }

    /// Encodes a (multi)graph: nodes at rank 1, edges at rank 0, one relation
    /// per (endpoint, edge). A self-loop yields slots 0 and 1.
    pub fn from_graph<N, E>(nodes: &[N], edges: &[(E, N, N)]) -> Result<Self>
    where
        N: AsRef<str>,
        E: AsRef<str>,
    {
        let node_set: BTreeSet<&str> = nodes.iter().map(AsRef::as_ref).collect();
        let mut edge_set = BTreeSet::new();
        let mut cells: Vec<Cell> = nodes.iter().map(|n| Cell::new(n.as_ref(), 1)).collect();
        let mut relations = Vec::with_capacity(2 * edges.len());
        for (e, a, b) in edges {
            let (e, a, b) = (e.as_ref(), a.as_ref(), b.as_ref());
            if !edge_set.insert(e) {
                return Err(Error::DuplicateEdgeId(e.to_string()));
            }
            for endpoint in [a, b] {
                if !node_set.contains(endpoint) {
                    return Err(Error::UnknownEndpoint {
                        edge: e.to_string(),
                        endpoint: endpoint.to_string(),
                    });
                }
            }
            cells.push(Cell::new(e, 0));
            if a == b {
                relations.push(CoveringRelation::with_slot(a, e, 0));
                relations.push(CoveringRelation::with_slot(a, e, 1));
            } else {
                relations.push(CoveringRelation::new(a, e));
                relations.push(CoveringRelation::new(b, e));
            }
        }
        Complex::build(cells, relations)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm over upper -> lower edges.
        let n = self.cells.len();
        let mut indegree: Vec<usize> = self.up.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(c) = ready.pop() {
            seen += 1;
            for &k in &self.down[c] {
                let l = self.index[&self.relations[k].lower];
                indegree[l] -= 1;
                if indegree[l] == 0 {
                    ready.push(l);
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            let stuck = (0..n)
                .find(|&i| indegree[i] > 0)
                .expect("cycle leaves a cell");
            Err(Error::CycleDetected(self.cells[stuck].id.clone()))
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn relations(&self) -> &[CoveringRelation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.index.get(id).map(|&i| &self.cells[i])
    }

    pub fn relation_index(&self, relation: &CoveringRelation) -> Option<usize> {
        self.relations.binary_search(relation).ok()
    }

    /// Relations (as indices) whose lower end is `cell`.
    pub fn upper_relations(&self, cell: usize) -> &[usize] {
        &self.up[cell]
    }

    /// Relations (as indices) whose upper end is `cell`.
    pub fn lower_relations(&self, cell: usize) -> &[usize] {
        &self.down[cell]
    }

    pub fn is_maximal(&self, cell: usize) -> bool {
        self.up[cell].is_empty()
    }

    pub fn is_minimal(&self, cell: usize) -> bool {
        self.down[cell].is_empty()
    }

    /// Indices of cells with nothing above them, in id order.
    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.is_maximal(i))
            .collect()
    }

    /// Indices of cells with nothing below them, in id order.
    pub fn minimal_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.is_minimal(i))
            .collect()
    }

    /// Cells in an order where every upper cell precedes the cells it covers.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cells.len()).collect();
        order.sort_by(|&a, &b| {
            self.cells[b]
                .rank
                .cmp(&self.cells[a].rank)
                .then_with(|| a.cmp(&b))
        });
        order
    }

    /// Every descending relation chain from `upper` to `lower`, ordered
    /// lexicographically by (cell ids, slots). `upper == lower` yields the
    /// single empty chain.
    pub fn relation_chains(&self, upper: usize, lower: usize) -> Vec<RelationChain> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_chains(upper, lower, &mut stack, &mut out);
        out.sort_by(|a, b| {
            self.chain_sort_key(upper, a)
                .cmp(&self.chain_sort_key(upper, b))
        });
        out
    }

    fn collect_chains(
        &self,
        at: usize,
        target: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<RelationChain>,
    ) {
        if at == target {
            out.push(stack.clone());
            return;
        }
        let floor = self.cells[target].rank;
        for &k in &self.down[at] {
            let next = self.index[&self.relations[k].lower];
            if next != target && self.cells[next].rank <= floor {
                continue;
            }
            stack.push(k);
            self.collect_chains(next, target, stack, out);
            stack.pop();
        }
    }

    fn chain_sort_key<'a>(&'a self, upper: usize, chain: &[usize]) -> (Vec<&'a str>, Vec<u32>) {
        let mut ids = vec![self.cells[upper].id.as_str()];
        ids.extend(chain.iter().map(|&k| self.relations[k].lower.as_str()));
        (ids, chain.iter().map(|&k| self.relations[k].slot).collect())
    }

    /// Cell ids visited by a relation chain starting at `upper`.
    pub fn chain_cells(&self, upper: usize, chain: &[usize]) -> Vec<String> {
        let mut ids = vec![self.cells[upper].id.clone()];
        ids.extend(chain.iter().map(|&k| self.relations[k].lower.clone()));
        ids
    }

    /// Every maximal descending chain of cells from `upper` to `lower`.
    /// Chains that differ only in the slot of a parallel relation collapse
    /// to one cell sequence.
    pub fn chains_between(&self, upper: &str, lower: &str) -> Result<Vec<Vec<String>>> {
        let u = self.cell_index(upper)?;
        let l = self.cell_index(lower)?;
        let mut chains: Vec<Vec<String>> = self
            .relation_chains(u, l)
            .iter()
            .map(|c| self.chain_cells(u, c))
            .collect();
        chains.dedup();
        Ok(chains)
    }

    /// True if `upper >= lower` in the order.
    pub fn is_above(&self, upper: usize, lower: usize) -> bool {
        if upper == lower {
            return true;
        }
        let floor = self.cells[lower].rank;
        let mut seen = vec![false; self.cells.len()];
        let mut stack = vec![upper];
        while let Some(c) = stack.pop() {
            for &k in &self.down[c] {
                let next = self.index[&self.relations[k].lower];
                if next == lower {
                    return true;
                }
                if !seen[next] && self.cells[next].rank > floor {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        false
    }
}

impl Default for Complex {
    fn default() -> Self {
        Complex::empty()
    }
}
