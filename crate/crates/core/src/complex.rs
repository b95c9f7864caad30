//! Cochain complexes given by a graded space and a degree +1 matrix.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::graded::GradedSpace;
use crate::matrix::Matrix;

fn check_differential(space: &GradedSpace, d: &Matrix) -> Result<()> {
    let n = space.dim();
    if d.shape() != (n, n) {
        return Err(Error::Dimension(format!("differential must be {n}x{n}")));
    }
    for j in 0..n {
        for i in 0..n {
            if !d[(i, j)].is_zero() && space.degree(i) != space.degree(j) + 1 {
                return Err(Error::Degree("differential is not of degree +1".into()));
            }
        }
    }
    if !d.mul(d)?.is_zero() {
        return Err(Error::Axiom("differential does not square to zero".into()));
    }
    Ok(())
}

fn block(space: &GradedSpace, d: &Matrix, k: i32) -> Matrix {
    d.select(&space.indices_in_degree(k + 1), &space.indices_in_degree(k))
}

/// `k -> dim H^k` for every degree occurring in `space`.
pub fn cohomology(space: &GradedSpace, d: &Matrix) -> Result<BTreeMap<i32, usize>> {
    check_differential(space, d)?;
    let mut out = BTreeMap::new();
    for (&k, &dim) in &space.graded_dims() {
        let out_rank = block(space, d, k).rank();
        let in_rank = block(space, d, k - 1).rank();
        out.insert(k, dim - out_rank - in_rank);
    }
    Ok(out)
}

pub fn total_dimension(h: &BTreeMap<i32, usize>) -> usize {
    h.values().sum()
}

/// Per-degree comparison of `f_* : H(C) → H(D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    pub degree: i32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InducedMap {
    pub fn is_iso(&self) -> bool {
        self.source_dim == self.target_dim && self.rank == self.source_dim
    }
}

/// Ranks of the map induced on cohomology by a degree-0 chain map `f : C → D`.
pub fn induced_on_cohomology(
    c: &GradedSpace,
    dc: &Matrix,
    d: &GradedSpace,
    dd: &Matrix,
    f: &Matrix,
) -> Result<Vec<InducedMap>> {
    check_differential(c, dc)?;
    check_differential(d, dd)?;
    if f.shape() != (d.dim(), c.dim()) {
        return Err(Error::Dimension("chain map has the wrong shape".into()));
    }
    if dd.mul(f)? != f.mul(dc)? {
        return Err(Error::Axiom("map does not commute with the differentials".into()));
    }
    let hc = cohomology(c, dc)?;
    let hd = cohomology(d, dd)?;
    let mut degrees: Vec<i32> = hc.keys().chain(hd.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    let field = c.field();
    let mut out = Vec::new();
    for k in degrees {
        let src = c.indices_in_degree(k);
        let tgt = d.indices_in_degree(k);
        let cycles = block(c, dc, k).kernel_basis();
        let bounds = block(d, dd, k - 1);
        let fk = f.select(&tgt, &src);
        let mut cols: Vec<Vec<FieldElement>> = cycles.iter().map(|z| fk.mul_vec(z)).collect::<Result<_>>()?;
        let b_cols: Vec<_> = (0..bounds.cols()).map(|j| bounds.column(j)).collect();
        let b_rank = Matrix::from_columns(field, tgt.len(), &b_cols)?.rank();
        cols.extend(b_cols);
        let joint = Matrix::from_columns(field, tgt.len(), &cols)?.rank();
        out.push(InducedMap {
            degree: k,
            source_dim: hc.get(&k).copied().unwrap_or(0),
            target_dim: hd.get(&k).copied().unwrap_or(0),
            rank: joint - b_rank,
        });
    }
    Ok(out)
}
