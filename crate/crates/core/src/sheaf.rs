//! Cellular sheaves of real vector spaces over a [`Complex`].
//!
//! Every cell carries a stalk `R^d` and every covering relation `upper > lower`
//! carries a restriction matrix of shape `dim(lower) x dim(upper)`.
//! [`Sheaf::build`] checks coverage and shapes only. Path independence of
//! composite restrictions is checked separately by [`Sheaf::validate`], so a
//! broken sheaf can still be loaded and diagnosed.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poset::{Complex, CoveringRelation};

/// Restriction matrices keyed by the relation they sit on.
pub type MapTable = BTreeMap<CoveringRelation, DMatrix<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    MissingStalk,
    MissingMap,
    ShapeMismatch,
    CommutativityFailure,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::MissingStalk => "missing-stalk",
            ViolationKind::MissingMap => "missing-map",
            ViolationKind::ShapeMismatch => "shape-mismatch",
            ViolationKind::CommutativityFailure => "commutativity-failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    Cell(String),
    Relation(CoveringRelation),
    ChainPair(Vec<String>, Vec<String>),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Cell(id) => f.write_str(id),
            Location::Relation(r) => write!(f, "{r}"),
            Location::ChainPair(a, b) => write!(f, "{} vs {}", a.join(" > "), b.join(" > ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    /// Largest absolute entry difference; only set for commutativity failures.
    pub magnitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sheaf {
    complex: Complex,
    /// Stalk dimension per cell index.
    stalks: Vec<usize>,
    /// Restriction matrix per relation index.
    maps: Vec<DMatrix<f64>>,
}

impl Sheaf {
    pub fn build(
        complex: Complex,
        stalks: &BTreeMap<String, usize>,
        maps: MapTable,
    ) -> Result<Self> {
        if let Some(v) = structural_violations(&complex, stalks, &maps)?
            .into_iter()
            .next()
        {
            return Err(violation_error(stalks, &maps, v));
        }
        let dims = complex.cells().iter().map(|c| stalks[&c.id]).collect();
        let mut maps = maps;
        let matrices = complex
            .relations()
            .iter()
            .map(|r| maps.remove(r).expect("coverage checked"))
            .collect();
        Ok(Sheaf {
            complex,
            stalks: dims,
            maps: matrices,
        })
    }

    /// Constant sheaf: stalk `R^dim` everywhere, identity restrictions.
    pub fn constant(complex: Complex, dim: usize) -> Self {
        let stalks = vec![dim; complex.len()];
        let maps = vec![DMatrix::identity(dim, dim); complex.relations().len()];
        Sheaf {
            complex,
            stalks,
            maps,
        }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn stalk_dim(&self, cell: usize) -> usize {
        self.stalks[cell]
    }

    pub fn stalk_dim_of(&self, id: &str) -> Result<usize> {
        Ok(self.stalks[self.complex.cell_index(id)?])
    }

    /// Restriction matrix of the relation with the given index.
    pub fn map(&self, relation: usize) -> &DMatrix<f64> {
        &self.maps[relation]
    }

    pub fn map_of(&self, relation: &CoveringRelation) -> Option<&DMatrix<f64>> {
        self.complex.relation_index(relation).map(|k| &self.maps[k])
    }

    /// Restriction maps keyed by relation, in sorted relation order.
    pub fn map_table(&self) -> MapTable {
        self.complex
            .relations()
            .iter()
            .cloned()
            .zip(self.maps.iter().cloned())
            .collect()
    }

    pub fn stalk_table(&self) -> BTreeMap<String, usize> {
        self.complex
            .cells()
            .iter()
            .map(|c| c.id.clone())
            .zip(self.stalks.iter().copied())
            .collect()
    }

    /// `1e-9 * max(1, largest absolute matrix entry)`.
    pub fn default_tol(&self) -> f64 {
        let largest = self
            .maps
            .iter()
            .flat_map(|m| m.iter())
            .fold(0.0_f64, |acc, x| acc.max(x.abs()));
        1e-9 * largest.max(1.0)
    }

    /// Product of the restriction matrices along a relation chain from `upper`.
    pub fn composite(&self, upper: usize, chain: &[usize]) -> DMatrix<f64> {
        let dim = self.stalks[upper];
        chain
            .iter()
            .fold(DMatrix::identity(dim, dim), |acc, &k| &self.maps[k] * acc)
    }

    /// Checks that composites along different refinement chains agree
    /// entrywise within `tol`. Parallel single-step relations (the two ends of
    /// a self-loop) are distinct attachments and are not compared, so every
    /// two-level complex passes.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.complex.len();
        for u in 0..n {
            if self.complex.lower_relations(u).is_empty() {
                continue;
            }
            for l in 0..n {
                if u == l || !self.complex.is_above(u, l) {
                    continue;
                }
                let chains = self.complex.relation_chains(u, l);
                if chains.len() < 2 || chains.iter().all(|c| c.len() < 2) {
                    continue;
                }
                let composites: Vec<_> = chains.iter().map(|c| self.composite(u, c)).collect();
                for i in 0..chains.len() {
                    for j in i + 1..chains.len() {
                        if chains[i].len() < 2 && chains[j].len() < 2 {
                            continue;
                        }
                        let deviation = (&composites[i] - &composites[j])
                            .iter()
                            .fold(0.0_f64, |acc, x| acc.max(x.abs()));
                        if deviation > tol || deviation.is_nan() {
                            violations.push(Violation {
                                kind: ViolationKind::CommutativityFailure,
                                location: Location::ChainPair(
                                    self.complex.chain_cells(u, &chains[i]),
                                    self.complex.chain_cells(u, &chains[j]),
                                ),
                                magnitude: Some(deviation),
                            });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Pushes `x` from the stalk of `upper` down to `lower` along the
    /// lexicographically first chain.
    pub fn restrict(&self, upper: &str, lower: &str, x: &DVector<f64>) -> Result<DVector<f64>> {
        let u = self.complex.cell_index(upper)?;
        let l = self.complex.cell_index(lower)?;
        self.restrict_index(u, l, x)
    }

    pub(crate) fn restrict_index(
        &self,
        upper: usize,
        lower: usize,
        x: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        if x.len() != self.stalks[upper] {
            return Err(Error::DimensionMismatch {
                context: format!("stalk of {}", self.complex.cells()[upper].id),
                expected: self.stalks[upper],
                actual: x.len(),
            });
        }
        let chain = self
            .first_chain(upper, lower)
            .ok_or_else(|| Error::IncomparableCells {
                upper: self.complex.cells()[upper].id.clone(),
                lower: self.complex.cells()[lower].id.clone(),
            })?;
        Ok(chain.iter().fold(x.clone(), |v, &k| &self.maps[k] * v))
    }

    pub(crate) fn first_chain(&self, upper: usize, lower: usize) -> Option<Vec<usize>> {
        if upper == lower {
            return Some(Vec::new());
        }
        if !self.complex.is_above(upper, lower) {
            return None;
        }
        self.complex
            .relation_chains(upper, lower)
            .into_iter()
            .next()
    }
}

/// Coverage and shape problems of raw sheaf data, in deterministic order.
/// References to unknown cells or relations are input errors, not violations.
pub fn structural_violations(
    complex: &Complex,
    stalks: &BTreeMap<String, usize>,
    maps: &MapTable,
) -> Result<Vec<Violation>> {
    for id in stalks.keys() {
        complex.cell_index(id)?;
    }
    for (r, m) in maps {
        complex.cell_index(&r.upper)?;
        complex.cell_index(&r.lower)?;
        if complex.relation_index(r).is_none() {
            return Err(Error::UnknownRelation {
                upper: r.upper.clone(),
                lower: r.lower.clone(),
                slot: r.slot,
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
    }

    let mut violations = Vec::new();
    for cell in complex.cells() {
        if !stalks.contains_key(&cell.id) {
            violations.push(Violation {
                kind: ViolationKind::MissingStalk,
                location: Location::Cell(cell.id.clone()),
                magnitude: None,
            });
        }
    }
    for r in complex.relations() {
        let Some(m) = maps.get(r) else {
            violations.push(Violation {
                kind: ViolationKind::MissingMap,
                location: Location::Relation(r.clone()),
                magnitude: None,
            });
            continue;
        };
        if let (Some(&rows), Some(&cols)) = (stalks.get(&r.lower), stalks.get(&r.upper)) {
            if m.shape() != (rows, cols) {
                violations.push(Violation {
                    kind: ViolationKind::ShapeMismatch,
                    location: Location::Relation(r.clone()),
                    magnitude: None,
                });
            }
        }
    }
    Ok(violations)
}

fn violation_error(stalks: &BTreeMap<String, usize>, maps: &MapTable, v: Violation) -> Error {
    match (v.kind, v.location) {
        (ViolationKind::MissingStalk, Location::Cell(id)) => Error::MissingStalk(id),
        (ViolationKind::MissingMap, Location::Relation(r)) => Error::MissingMap {
            upper: r.upper,
            lower: r.lower,
            slot: r.slot,
        },
        (ViolationKind::ShapeMismatch, Location::Relation(r)) => {
            let (rows, cols) = maps[&r].shape();
            Error::ShapeMismatch {
                expected_rows: stalks[&r.lower],
                expected_cols: stalks[&r.upper],
                upper: r.upper,
                lower: r.lower,
                slot: r.slot,
                rows,
                cols,
            }
        }
        (kind, location) => unreachable!("not a structural violation: {kind} at {location}"),
    }
}
