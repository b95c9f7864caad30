//! Finite-dimensional curved dg modules over a curved dg algebra.
//!
//! Left modules satisfy `d²(m) = h m` and right modules `d²(m) = -m h`, so
//! that `A` itself is a bimodule for `d² = [h, -]` and right `A`-modules are
//! left modules over the opposite algebra.

use serde::{Deserialize, Serialize};

use crate::algebra::CurvedDga;
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{vector, FieldElement};
use crate::graded::GradedSpace;
use crate::matrix::Matrix;
use crate::mc::{is_mc, twist_algebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A module given by one action matrix per algebra basis vector
/// (`m ↦ a_k m` or `m ↦ m a_k`) and a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    side: Side,
    algebra: CurvedDga,
    space: GradedSpace,
    action: Vec<Matrix>,
    diff: Matrix,
}

impl DgModule {
    pub fn new(side: Side, algebra: CurvedDga, space: GradedSpace, action: Vec<Matrix>, diff: Matrix) -> Result<Self> {
        let n = space.dim();
        if action.len() != algebra.dim() {
            return Err(Error::Dimension("one action matrix per algebra basis vector is required".into()));
        }
        if action.iter().chain(std::iter::once(&diff)).any(|m| m.shape() != (n, n)) {
            return Err(Error::Dimension(format!("module matrices must be {n}x{n}")));
        }
        if space.field() != algebra.field() {
            return Err(Error::FieldMismatch(space.field().name(), algebra.field().name()));
        }
        Ok(DgModule { side, algebra, space, action, diff })
    }

    /// `A` acting on itself by left or right multiplication.
    pub fn regular(algebra: &CurvedDga, side: Side) -> DgModule {
        let action = (0..algebra.dim())
            .map(|k| {
                let e = algebra.basis_vector(k);
                match side {
                    Side::Left => algebra.left_mul_matrix(&e),
                    Side::Right => algebra.right_mul_matrix(&e),
                }
            })
            .collect();
        DgModule {
            side,
            algebra: algebra.clone(),
            space: algebra.space().clone(),
            action,
            diff: algebra.diff().clone(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn algebra(&self) -> &CurvedDga {
        &self.algebra
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Matrix of the action of an arbitrary algebra element.
    pub fn action_of(&self, a: &[FieldElement]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(self.algebra.field(), n, n);
        for (k, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            m = m.add(&self.action[k].scale(c)).expect("same shape");
        }
        m
    }

    pub fn act(&self, a: &[FieldElement], m: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vector::zeros(self.algebra.field(), self.dim());
        for (k, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            vector::axpy(&mut out, c, &self.action[k].mul_vec(m).expect("length"));
        }
        out
    }

    pub fn d(&self, m: &[FieldElement]) -> Vec<FieldElement> {
        self.diff.mul_vec(m).expect("length")
    }

    pub fn with_diff(&self, diff: Matrix) -> Result<DgModule> {
        DgModule::new(self.side, self.algebra.clone(), self.space.clone(), self.action.clone(), diff)
    }

    pub fn with_algebra(&self, algebra: CurvedDga) -> Result<DgModule> {
        if algebra.space() != self.algebra.space() {
            return Err(Error::InvalidSpace("replacement algebra must have the same basis".into()));
        }
        DgModule::new(self.side, algebra, self.space.clone(), self.action.clone(), self.diff.clone())
    }

    /// Checks degrees, unit, associativity, Leibniz and the curvature identity.
    pub fn check_axioms(&self) -> Certificate {
        let mut cert = Certificate::ok();
        let a = &self.algebra;
        let field = a.field();
        let n = self.dim();
        let zero = vector::zeros(field, n);
        let mname = |j: usize| self.space.name(j).to_string();
        let aname = |k: usize| a.space().name(k).to_string();
        let basis: Vec<_> = (0..n).map(|j| vector::unit(field, n, j)).collect();

        for j in 0..n {
            let dj = self.d(&basis[j]);
            if !self.space.is_homogeneous(&dj, self.space.degree(j) + 1) {
                cert.push("module diff has degree +1", vec![mname(j)], &dj, &zero);
            }
            for k in 0..a.dim() {
                let v = self.action[k].mul_vec(&basis[j]).expect("length");
                if !self.space.is_homogeneous(&v, self.space.degree(j) + a.degree(k)) {
                    cert.push("action is degree-additive", vec![aname(k), mname(j)], &v, &zero);
                }
            }
            cert.expect_eq("unit acts as identity", &[&mname(j)], &self.act(a.unit(), &basis[j]), &basis[j]);
        }

        for k in 0..a.dim() {
            for l in 0..a.dim() {
                let prod = self.action_of(&a.dense_product(k, l));
                let composed = match self.side {
                    Side::Left => self.action[k].mul(&self.action[l]),
                    Side::Right => self.action[l].mul(&self.action[k]),
                }
                .expect("square");
                if prod != composed {
                    let j = (0..n).find(|&j| prod.column(j) != composed.column(j)).unwrap_or(0);
                    cert.push(
                        "module associativity",
                        vec![aname(k), aname(l), mname(j)],
                        &prod.column(j),
                        &composed.column(j),
                    );
                }
            }
        }

        for k in 0..a.dim() {
            let dak = a.d(&a.basis_vector(k));
            for j in 0..n {
                let am = self.action[k].mul_vec(&basis[j]).expect("length");
                let lhs = self.d(&am);
                // Left: d(am) = da·m + (-1)^{|a|} a·dm. Right: d(ma) = dm·a + (-1)^{|m|} m·da.
                let da_m = self.act(&dak, &basis[j]);
                let a_dm = self.action[k].mul_vec(&self.d(&basis[j])).expect("length");
                let (mut rhs, sign, tail) = match self.side {
                    Side::Left => (da_m, field.sign(i64::from(a.degree(k))), a_dm),
                    Side::Right => (a_dm, field.sign(i64::from(self.space.degree(j))), da_m),
                };
                vector::axpy(&mut rhs, &sign, &tail);
                cert.expect_eq("module Leibniz", &[&aname(k), &mname(j)], &lhs, &rhs);
            }
        }

        let d2 = self.diff.mul(&self.diff).expect("square");
        let mut rho_h = self.action_of(a.curvature());
        if self.side == Side::Right {
            rho_h = rho_h.scale(&field.from_i64(-1));
        }
        for j in 0..n {
            let expected = match self.side {
                Side::Left => "d^2 = h(-)",
                Side::Right => "d^2 = -(-)h",
            };
            cert.expect_eq(expected, &[&mname(j)], &d2.column(j), &rho_h.column(j));
        }
        cert
    }

    /// The same module over `A^x` with differential `d + x·` (left) or
    /// `d - (-1)^{|m|} ·x` (right). The curvature identity holds over `A^x`
    /// for any degree-1 `x`.
    pub fn twist(&self, x: &[FieldElement]) -> Result<DgModule> {
        let algebra = twist_algebra(&self.algebra, x)?;
        let rx = self.action_of(x);
        let field = self.algebra.field();
        let mut diff = self.diff.clone();
        for j in 0..self.dim() {
            let sign = match self.side {
                Side::Left => field.one(),
                Side::Right => -field.sign(i64::from(self.space.degree(j))),
            };
            for i in 0..self.dim() {
                let c = &rx[(i, j)];
                if !c.is_zero() {
                    diff[(i, j)] += &(&sign * c);
                }
            }
        }
        DgModule::new(self.side, algebra, self.space.clone(), self.action.clone(), diff)
    }

    /// Cohomology by degree; defined when `d² = 0`.
    pub fn cohomology(&self) -> Result<std::collections::BTreeMap<i32, usize>> {
        crate::complex::cohomology(&self.space, &self.diff)
    }
}

/// Twists a left module by a Maurer–Cartan element, after checking the input
/// is a module; the result is a dg module over the uncurved `A^x`.
pub fn twist_left_module(m: &DgModule, x: &[FieldElement]) -> Result<DgModule> {
    if m.side() != Side::Left {
        return Err(Error::Presentation("expected a left module".into()));
    }
    m.check_axioms().into_result(Error::Axiom)?;
    is_mc(m.algebra(), x)?.into_result(Error::Axiom)?;
    m.twist(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DgaBuilder;
    use crate::field::Field;

    fn a0(field: Field) -> CurvedDga {
        DgaBuilder::new(field, &[("1", 0), ("x", 1)]).unit("1").build().unwrap()
    }

    #[test]
    fn regular_modules_certify() {
        let a = a0(Field::prime(3).unwrap());
        assert!(DgModule::regular(&a, Side::Left).check_axioms().is_ok());
        assert!(DgModule::regular(&a, Side::Right).check_axioms().is_ok());
    }

    #[test]
    fn twisted_regular_module() {
        let f = Field::prime(3).unwrap();
        let a = a0(f);
        let m = DgModule::regular(&a, Side::Left);
        let x = vec![f.zero(), f.from_i64(2)];
        let t = twist_left_module(&m, &x).unwrap();
        // d(1) = 2x, d(x) = 2x·x = 0.
        assert_eq!(t.diff(), &Matrix::from_i64(f, &[&[0, 0], &[2, 0]]));
        assert!(t.check_axioms().is_ok());
        assert!(t.cohomology().unwrap().values().all(|&h| h == 0));
        assert_eq!(twist_left_module(&m, &a.zero_vector()).unwrap().diff(), m.diff());
    }

    #[test]
    fn right_twist_certifies() {
        let f = Field::prime(5).unwrap();
        let a = a0(f);
        let m = DgModule::regular(&a, Side::Right);
        let t = m.twist(&[f.zero(), f.from_i64(3)]).unwrap();
        assert!(t.check_axioms().is_ok());
    }
}
