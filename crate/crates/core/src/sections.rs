//! Sections, global sections and the coboundary operator.
//!
//! The coboundary `δ` maps values on maximal cells (a [`NodeAssignment`]) to
//! signed differences of their images on minimal cells. Its kernel is the
//! space of global sections. Each minimal cell is attached to its maximal
//! ancestors by composite restrictions, ordered by `(upper id, slot)`: the
//! first attachment enters with `+`, the second with `-`. A minimal cell with
//! a single attachment contributes `+M` alone, which forces the upper value
//! into `ker M`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{nullspace_basis, project_onto, TolerancedBasis, DEFAULT_REL_TOL};
use crate::poset::CoveringRelation;
use crate::sheaf::Sheaf;

/// One stalk vector per cell, not necessarily consistent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Section {
    pub values: BTreeMap<String, DVector<f64>>,
}

/// Stalk vectors on maximal cells only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeAssignment {
    pub values: BTreeMap<String, DVector<f64>>,
}

impl Section {
    pub fn get(&self, id: &str) -> Option<&DVector<f64>> {
        self.values.get(id)
    }

    /// All-zero section of the right shape.
    pub fn zero(sheaf: &Sheaf) -> Self {
        let values = sheaf
            .complex()
            .cells()
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), DVector::zeros(sheaf.stalk_dim(i))))
            .collect();
        Section { values }
    }
}

impl NodeAssignment {
    pub fn get(&self, id: &str) -> Option<&DVector<f64>> {
        self.values.get(id)
    }

    pub fn zero(sheaf: &Sheaf) -> Self {
        let values = sheaf
            .complex()
            .maximal_cells()
            .into_iter()
            .map(|i| {
                (
                    sheaf.complex().cells()[i].id.clone(),
                    DVector::zeros(sheaf.stalk_dim(i)),
                )
            })
            .collect();
        NodeAssignment { values }
    }
}

impl<K: Into<String>> FromIterator<(K, Vec<f64>)> for NodeAssignment {
    fn from_iter<I: IntoIterator<Item = (K, Vec<f64>)>>(iter: I) -> Self {
        NodeAssignment {
            values: iter
                .into_iter()
                .map(|(k, v)| (k.into(), DVector::from_vec(v)))
                .collect(),
        }
    }
}

impl<K: Into<String>> FromIterator<(K, Vec<f64>)> for Section {
    fn from_iter<I: IntoIterator<Item = (K, Vec<f64>)>>(iter: I) -> Self {
        Section {
            values: iter
                .into_iter()
                .map(|(k, v)| (k.into(), DVector::from_vec(v)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyViolation {
    pub lower: String,
    pub relation: CoveringRelation,
    /// `restrict(upper, lower, s[upper]) - s[lower]`.
    pub residual: DVector<f64>,
    /// Max-norm of the residual.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConsistencyReport {
    pub violations: Vec<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A contiguous run of rows or columns owned by one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub cell: String,
    pub offset: usize,
    pub dim: usize,
}

/// Composite restriction from a maximal cell into a minimal one.
#[derive(Debug, Clone, PartialEq)]
pub struct Attachment {
    pub upper: String,
    pub slot: u32,
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowBlock {
    pub block: Block,
    /// One or two attachments, in sign order (`+` first).
    pub orientation: Vec<Attachment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoboundaryOperator {
    pub matrix: DMatrix<f64>,
    pub columns: Vec<Block>,
    pub rows: Vec<RowBlock>,
}

impl CoboundaryOperator {
    /// Stacks an assignment into a vector in column order.
    pub fn stack(&self, a: &NodeAssignment) -> Result<DVector<f64>> {
        for id in a.values.keys() {
            if !self.columns.iter().any(|b| &b.cell == id) {
                return Err(Error::NotMaximal(id.clone()));
            }
        }
        let n = self.matrix.ncols();
        let mut x = DVector::zeros(n);
        for b in &self.columns {
            let v = a
                .values
                .get(&b.cell)
                .ok_or_else(|| Error::MissingCellValue(b.cell.clone()))?;
            if v.len() != b.dim {
                return Err(Error::DimensionMismatch {
                    context: format!("stalk of {}", b.cell),
                    expected: b.dim,
                    actual: v.len(),
                });
            }
            x.rows_mut(b.offset, b.dim).copy_from(v);
        }
        Ok(x)
    }

    pub fn unstack(&self, x: &DVector<f64>) -> NodeAssignment {
        NodeAssignment {
            values: self
                .columns
                .iter()
                .map(|b| (b.cell.clone(), x.rows(b.offset, b.dim).into_owned()))
                .collect(),
        }
    }

    fn column_block(&self, cell: &str) -> &Block {
        self.columns
            .iter()
            .find(|b| b.cell == cell)
            .expect("attachments start at maximal cells")
    }
}

/// Orthonormal basis of the global sections, both as stacked vectors over
/// the maximal cells and as full sections.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSectionBasis {
    pub basis: TolerancedBasis,
    pub columns: Vec<Block>,
    pub sections: Vec<Section>,
}

impl GlobalSectionBasis {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Checks every covering relation `(u, l)` for `|F_{u:l}(s[u]) - s[l]|_inf <= tol`.
pub fn is_section_consistent(sheaf: &Sheaf, s: &Section, tol: f64) -> Result<ConsistencyReport> {
    let complex = sheaf.complex();
    for (i, cell) in complex.cells().iter().enumerate() {
        let v = s
            .values
            .get(&cell.id)
            .ok_or_else(|| Error::MissingCellValue(cell.id.clone()))?;
        if v.len() != sheaf.stalk_dim(i) {
            return Err(Error::DimensionMismatch {
                context: format!("stalk of {}", cell.id),
                expected: sheaf.stalk_dim(i),
                actual: v.len(),
            });
        }
    }
    if let Some(extra) = s.values.keys().find(|id| complex.cell(id).is_none()) {
        return Err(Error::UnknownCell(extra.clone()));
    }

    let mut violations = Vec::new();
    for (k, r) in complex.relations().iter().enumerate() {
        let residual = sheaf.map(k) * &s.values[&r.upper] - &s.values[&r.lower];
        let norm = max_norm(&residual);
        if norm.is_nan() || norm > tol {
            violations.push(ConsistencyViolation {
                lower: r.lower.clone(),
                relation: r.clone(),
                residual,
                norm,
            });
        }
    }
    // Relations are sorted by upper id; report by lower cell first.
    violations.sort_by(|a, b| (&a.lower, &a.relation).cmp(&(&b.lower, &b.relation)));
    Ok(ConsistencyReport { violations })
}

/// Composite attachments of every non-maximal minimal cell, in id order.
fn attachments(sheaf: &Sheaf) -> Result<Vec<(usize, Vec<Attachment>)>> {
    let complex = sheaf.complex();
    let maximal = complex.maximal_cells();
    let mut out = Vec::new();
    for l in complex.minimal_cells() {
        if complex.is_maximal(l) {
            continue;
        }
        let mut found = Vec::new();
        for &u in &maximal {
            let direct: Vec<usize> = complex
                .upper_relations(l)
                .iter()
                .copied()
                .filter(|&k| complex.relations()[k].upper == complex.cells()[u].id)
                .collect();
            if !direct.is_empty() {
                for k in direct {
                    found.push(Attachment {
                        upper: complex.cells()[u].id.clone(),
                        slot: complex.relations()[k].slot,
                        matrix: sheaf.map(k).clone(),
                    });
                }
            } else if let Some(chain) = sheaf.first_chain(u, l) {
                found.push(Attachment {
                    upper: complex.cells()[u].id.clone(),
                    slot: complex.relations()[chain[0]].slot,
                    matrix: sheaf.composite(u, &chain),
                });
            }
        }
        if found.len() > 2 {
            return Err(Error::UnsupportedShape {
                cell: complex.cells()[l].id.clone(),
                count: found.len(),
            });
        }
        found.sort_by(|a, b| (&a.upper, a.slot).cmp(&(&b.upper, b.slot)));
        out.push((l, found));
    }
    Ok(out)
}

pub fn assemble_coboundary(sheaf: &Sheaf) -> Result<CoboundaryOperator> {
    let complex = sheaf.complex();
    let mut columns = Vec::new();
    let mut offset = 0;
    for u in complex.maximal_cells() {
        let dim = sheaf.stalk_dim(u);
        columns.push(Block {
            cell: complex.cells()[u].id.clone(),
            offset,
            dim,
        });
        offset += dim;
    }
    let ncols = offset;

    let mut rows = Vec::new();
    let mut offset = 0;
    for (l, orientation) in attachments(sheaf)? {
        let dim = sheaf.stalk_dim(l);
        rows.push(RowBlock {
            block: Block {
                cell: complex.cells()[l].id.clone(),
                offset,
                dim,
            },
            orientation,
        });
        offset += dim;
    }

    let mut op = CoboundaryOperator {
        matrix: DMatrix::zeros(offset, ncols),
        columns,
        rows,
    };
    for row in &op.rows {
        for (i, att) in row.orientation.iter().enumerate() {
            let sign = if i == 0 { 1.0 } else { -1.0 };
            let col = op.column_block(&att.upper);
            let mut target = op
                .matrix
                .view_mut((row.block.offset, col.offset), (row.block.dim, col.dim));
            // A self-loop puts both attachments in the same block.
            target += &att.matrix * sign;
        }
    }
    Ok(op)
}

/// Pushes maximal-cell values down to every cell without checking agreement.
fn push_down(sheaf: &Sheaf, a: &NodeAssignment) -> Section {
    let complex = sheaf.complex();
    let mut values = BTreeMap::new();
    for (c, cell) in complex.cells().iter().enumerate() {
        let v = if complex.is_maximal(c) {
            a.values[&cell.id].clone()
        } else {
            let u = complex
                .maximal_cells()
                .into_iter()
                .find(|&u| complex.is_above(u, c))
                .expect("every cell lies below some maximal cell");
            sheaf
                .restrict_index(u, c, &a.values[&complex.cells()[u].id])
                .expect("dimensions checked by stack")
        };
        values.insert(cell.id.clone(), v);
    }
    Section { values }
}

pub fn global_sections(sheaf: &Sheaf, rel_tol: f64) -> Result<GlobalSectionBasis> {
    let delta = assemble_coboundary(sheaf)?;
    let basis = nullspace_basis(&delta.matrix, rel_tol)?;
    let sections = (0..basis.dim())
        .map(|j| push_down(sheaf, &delta.unstack(&basis.column(j))))
        .collect();
    Ok(GlobalSectionBasis {
        basis,
        columns: delta.columns,
        sections,
    })
}

/// Extends an assignment on maximal cells to a full section, failing if the
/// images on some minimal cell disagree by more than `tol` (max-norm).
pub fn extend_to_section(sheaf: &Sheaf, a: &NodeAssignment, tol: f64) -> Result<Section> {
    let delta = assemble_coboundary(sheaf)?;
    let x = delta.stack(a)?;
    let residual = &delta.matrix * &x;
    for row in &delta.rows {
        let r = max_norm(&residual.rows(row.block.offset, row.block.dim).into_owned());
        if r.is_nan() || r > tol {
            return Err(Error::InconsistentAssignment {
                cell: row.block.cell.clone(),
                residual: r,
            });
        }
    }
    Ok(push_down(sheaf, a))
}

/// `|δ x|_2` for the stacked assignment `x`.
pub fn consistency_radius(sheaf: &Sheaf, a: &NodeAssignment) -> Result<f64> {
    let delta = assemble_coboundary(sheaf)?;
    let x = delta.stack(a)?;
    Ok((&delta.matrix * x).norm())
}

/// Orthogonal projection of the assignment onto the global sections.
pub fn nearest_global_section(sheaf: &Sheaf, a: &NodeAssignment) -> Result<NodeAssignment> {
    let delta = assemble_coboundary(sheaf)?;
    let x = delta.stack(a)?;
    let basis = nullspace_basis(&delta.matrix, DEFAULT_REL_TOL)?;
    Ok(delta.unstack(&project_onto(&basis, &x)?))
}

/// `L = δᵀδ`, indexed by the coboundary's column blocks.
pub fn sheaf_laplacian(sheaf: &Sheaf) -> Result<DMatrix<f64>> {
    let delta = assemble_coboundary(sheaf)?;
    Ok(delta.matrix.tr_mul(&delta.matrix))
}

fn max_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| {
        if x.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(x.abs())
        }
    })
}
