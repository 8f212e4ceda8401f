//! Sampled functions on a finite open cover of an interval.
//!
//! Each open interval of the cover becomes a rank-1 cell whose stalk holds the
//! function's values at the grid points strictly inside it. Every pair of
//! intervals that shares grid points gets a rank-0 cell for the overlap, and
//! restriction is the 0/1 matrix that selects the shared samples. Local data
//! that agree on all overlaps glue to a single vector of global samples.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poset::{Cell, Complex, CoveringRelation};
use crate::sections::NodeAssignment;
use crate::sheaf::{MapTable, Sheaf};

/// Finite open cover of `[a, b]` sampled on the grid `a + k * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCover {
    pub domain: (f64, f64),
    pub step: f64,
    pub intervals: Vec<(f64, f64)>,
}

impl GridCover {
    pub fn new(domain: (f64, f64), step: f64, intervals: Vec<(f64, f64)>) -> Self {
        GridCover {
            domain,
            step,
            intervals,
        }
    }

    fn eps(&self) -> f64 {
        1e-12 * self.domain.0.abs().max(self.domain.1.abs()).max(1.0)
    }

    /// Number of grid steps; the grid has one more point than this.
    fn steps(&self) -> Result<usize> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidCover(format!(
                "domain [{a}, {b}] is not a proper interval"
            )));
        }
        let h = self.step;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidCover(format!("step {h} is not positive")));
        }
        let n = ((b - a) / h).round();
        if (n * h - (b - a)).abs() > 1e-12 * (b - a).abs().max(1.0) {
            return Err(Error::InvalidCover(format!(
                "step {h} does not divide [{a}, {b}] evenly"
            )));
        }
        Ok(n as usize)
    }

    pub fn grid_point(&self, k: usize) -> f64 {
        self.domain.0 + k as f64 * self.step
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        let n = self.steps()?;
        Ok((0..=n)
            .map(|k| {
                if k == n {
                    self.domain.1
                } else {
                    self.grid_point(k)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSheaf {
    pub sheaf: Sheaf,
    pub cover: GridCover,
    pub grid: Vec<f64>,
    /// Cell id of each interval, in cover order.
    pub interval_cells: Vec<String>,
    /// Grid indices sampled by each cell (intervals and overlaps).
    pub samples: BTreeMap<String, Vec<usize>>,
}

/// Samples glued into one vector, over the grid points some interval covers.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedSamples {
    pub indices: Vec<usize>,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn build_interval_sheaf(cover: &GridCover) -> Result<IntervalSheaf> {
    if cover.intervals.is_empty() {
        return Err(Error::EmptyCover);
    }
    let grid = cover.grid()?;
    let eps = cover.eps();
    let (a, b) = cover.domain;

    for (i, &(l, r)) in cover.intervals.iter().enumerate() {
        if !(l.is_finite() && r.is_finite() && l < r && l >= a - eps && r <= b + eps) {
            return Err(Error::InvalidCover(format!(
                "interval ({l}, {r}) is not a proper subinterval of [{a}, {b}]"
            )));
        }
        if cover.intervals[..i].contains(&(l, r)) {
            return Err(Error::InvalidCover(format!(
                "interval ({l}, {r}) is repeated"
            )));
        }
    }
    for &x in &grid {
        if !cover
            .intervals
            .iter()
            .any(|&(l, r)| x >= l - eps && x <= r + eps)
        {
            return Err(Error::InvalidCover(format!(
                "grid point {x} is not covered"
            )));
        }
    }

    let width = (cover.intervals.len() - 1).to_string().len();
    let interval_cells: Vec<String> = (0..cover.intervals.len())
        .map(|i| format!("U{i:0width$}"))
        .collect();

    let mut samples = BTreeMap::new();
    let mut inside = Vec::with_capacity(cover.intervals.len());
    for (i, &(l, r)) in cover.intervals.iter().enumerate() {
        let idx: Vec<usize> = grid
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x > l + eps && x < r - eps)
            .map(|(k, _)| k)
            .collect();
        if idx.is_empty() {
            return Err(Error::DegenerateGrid { left: l, right: r });
        }
        samples.insert(interval_cells[i].clone(), idx.clone());
        inside.push(idx);
    }

    let mut cells: Vec<Cell> = interval_cells.iter().map(|id| Cell::new(id, 1)).collect();
    let mut relations = Vec::new();
    let mut maps = MapTable::new();
    for i in 0..inside.len() {
        for j in i + 1..inside.len() {
            let shared: Vec<usize> = inside[i]
                .iter()
                .copied()
                .filter(|k| inside[j].binary_search(k).is_ok())
                .collect();
            if shared.is_empty() {
                continue;
            }
            let id = format!("{}^{}", interval_cells[i], interval_cells[j]);
            cells.push(Cell::new(&id, 0));
            for parent in [i, j] {
                let rel = CoveringRelation::new(&interval_cells[parent], &id);
                maps.insert(rel.clone(), selection(&shared, &inside[parent]));
                relations.push(rel);
            }
            samples.insert(id, shared);
        }
    }

    let stalks = samples
        .iter()
        .map(|(id, s)| (id.clone(), s.len()))
        .collect();
    let complex = Complex::build(cells, relations)?;
    let sheaf = Sheaf::build(complex, &stalks, maps)?;
    Ok(IntervalSheaf {
        sheaf,
        cover: cover.clone(),
        grid,
        interval_cells,
        samples,
    })
}

/// Rows pick the entries of `from` listed in `picked`.
fn selection(picked: &[usize], from: &[usize]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(picked.len(), from.len());
    for (row, k) in picked.iter().enumerate() {
        let col = from.binary_search(k).expect("picked samples are a subset");
        m[(row, col)] = 1.0;
    }
    m
}

impl IntervalSheaf {
    /// Grid indices inside at least one interval, ascending.
    pub fn covered_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .interval_cells
            .iter()
            .flat_map(|id| self.samples[id].iter().copied())
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }

    /// Local data obtained by sampling `f` on each interval.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> NodeAssignment {
        self.restrict_global(&self.grid.iter().map(|&x| f(x)).collect::<Vec<_>>())
    }

    /// Restricts a vector indexed by grid point to every interval.
    pub fn restrict_global(&self, global: &[f64]) -> NodeAssignment {
        NodeAssignment {
            values: self
                .interval_cells
                .iter()
                .map(|id| {
                    let v = self.samples[id].iter().map(|&k| global[k]);
                    (
                        id.clone(),
                        DVector::from_iterator(self.samples[id].len(), v),
                    )
                })
                .collect(),
        }
    }

    /// Glues local samples into one value per covered grid point. Fails at
    /// the first grid point where the local values spread by more than `tol`.
    pub fn glue(&self, locals: &NodeAssignment, tol: f64) -> Result<GluedSamples> {
        for id in locals.values.keys() {
            if !self.interval_cells.contains(id) {
                return Err(Error::NotMaximal(id.clone()));
            }
        }
        let mut by_point: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for id in &self.interval_cells {
            let v = locals
                .values
                .get(id)
                .ok_or_else(|| Error::MissingCellValue(id.clone()))?;
            let idx = &self.samples[id];
            if v.len() != idx.len() {
                return Err(Error::DimensionMismatch {
                    context: format!("stalk of {id}"),
                    expected: idx.len(),
                    actual: v.len(),
                });
            }
            for (&k, &x) in idx.iter().zip(v.iter()) {
                by_point.entry(k).or_default().push(x);
            }
        }

        let mut glued = GluedSamples {
            indices: Vec::with_capacity(by_point.len()),
            points: Vec::with_capacity(by_point.len()),
            values: Vec::with_capacity(by_point.len()),
        };
        for (k, values) in by_point {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let difference = hi - lo;
            if difference.is_nan() || difference > tol {
                return Err(Error::GlueConflict {
                    index: k,
                    values,
                    difference,
                });
            }
            glued.indices.push(k);
            glued.points.push(self.grid[k]);
            glued.values.push(values[0]);
        }
        Ok(glued)
    }
}
