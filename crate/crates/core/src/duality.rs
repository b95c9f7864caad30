//! The functors `F` and `G` at a point `x ∈ MC(A⊗B)`, and the finite-level
//! adjunction check.
//!
//! For a right module `M`, the dual `M*` is a left module with
//! `(a f)(m) = (-1)^{|a|} f(m a)` and `(d f) = -(-1)^{|f|} f∘d`. A left action
//! `ρ` on `M*` carries `x = Σ a⊗b` to `Σ ρ(a)⊗b ∈ End(M*)⊗B`; adding `d_{M*}⊗1`
//! gives the twisting element of `F_x M = (M*⊗B)^{[x]}`, and symmetrically for
//! `G_x N = (N*⊗A)^{[x]}` after the Koszul swap `a⊗b ↦ (-1)^{|a||b|} b⊗a`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{tensor_cdga, CurvedDga};
use crate::certificate::{Certificate, Violation};
use crate::error::{Error, Result};
use crate::field::{vector, FieldElement};
use crate::graded::{koszul_sign, BasisElement, GradedSpace};
use crate::matrix::Matrix;
use crate::mc::is_mc;
use crate::module::{DgModule, Side};
use crate::twisted::{hom_complex_to, TwistedModule};

/// `M*` as a left module, basis `m_i*` in the order of `M`.
pub fn dual_module(m: &DgModule) -> Result<DgModule> {
    if m.side() != Side::Right {
        return Err(Error::Presentation("expected a right module".into()));
    }
    let a = m.algebra();
    let field = a.field();
    let n = m.dim();
    let basis = m
        .space()
        .basis()
        .iter()
        .map(|b| BasisElement { name: format!("{}*", b.name), degree: -b.degree })
        .collect();
    let space = GradedSpace::new(field, basis)?;
    let action = (0..a.dim())
        .map(|k| m.action()[k].transpose().scale(&field.sign(i64::from(a.degree(k)))))
        .collect();
    let mut diff = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            let c = &m.diff()[(j, i)];
            if !c.is_zero() {
                diff[(i, j)] = -(&field.sign(i64::from(m.space().degree(j))) * c);
            }
        }
    }
    DgModule::new(Side::Left, a.clone(), space, action, diff)
}

/// `d_{L}⊗1 + Σ_k ρ(e_k)⊗y_k` in `End(L)⊗C`, where `y_k ∈ C` are the
/// coefficients of a tensor with left factors in the algebra acting on `L`.
fn twisting_element(l: &DgModule, c: &CurvedDga, coefficients: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let field = c.field();
    let (n, nc) = (l.dim(), c.dim());
    let mut x = vector::zeros(field, n * n * nc);
    for i in 0..n {
        for j in 0..n {
            let base = (i * n + j) * nc;
            let d = &l.diff()[(i, j)];
            if !d.is_zero() {
                vector::axpy(&mut x[base..base + nc], d, c.unit());
            }
            for (k, y) in coefficients.iter().enumerate() {
                let r = &l.action()[k][(i, j)];
                if !r.is_zero() {
                    vector::axpy(&mut x[base..base + nc], r, y);
                }
            }
        }
    }
    x
}

fn check_point(a: &CurvedDga, b: &CurvedDga, x: &[FieldElement]) -> Result<()> {
    let host = tensor_cdga(a, b)?;
    is_mc(&host, x)?.into_result(Error::Axiom)
}

/// `F_x M = (M*⊗B)^{[x]}` for a right dg `A`-module `M`.
pub fn functor_f(a: &CurvedDga, b: &CurvedDga, x: &[FieldElement], m: &DgModule) -> Result<TwistedModule> {
    check_point(a, b, x)?;
    if m.algebra() != a {
        return Err(Error::Presentation("M must be a module over A".into()));
    }
    m.check_axioms().into_result(Error::Axiom)?;
    let dual = dual_module(m)?;
    let nb = b.dim();
    let coefficients: Vec<Vec<FieldElement>> = (0..a.dim()).map(|k| x[k * nb..(k + 1) * nb].to_vec()).collect();
    let z = twisting_element(&dual, b, &coefficients);
    TwistedModule::new(b.clone(), dual.space().clone(), z)
        .map_err(|e| Error::Internal(format!("F twisting element is not Maurer–Cartan: {e}")))
}

/// `G_x N = (N*⊗A)^{[x]}` for a right dg `B`-module `N`.
pub fn functor_g(a: &CurvedDga, b: &CurvedDga, x: &[FieldElement], n: &DgModule) -> Result<TwistedModule> {
    check_point(a, b, x)?;
    if n.algebra() != b {
        return Err(Error::Presentation("N must be a module over B".into()));
    }
    n.check_axioms().into_result(Error::Axiom)?;
    let dual = dual_module(n)?;
    let field = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let coefficients: Vec<Vec<FieldElement>> = (0..nb)
        .map(|l| {
            (0..na)
                .map(|k| &koszul_sign(field, a.degree(k), b.degree(l)) * &x[k * nb + l])
                .collect()
        })
        .collect();
    let z = twisting_element(&dual, a, &coefficients);
    TwistedModule::new(a.clone(), dual.space().clone(), z)
        .map_err(|e| Error::Internal(format!("G twisting element is not Maurer–Cartan: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    /// Cohomology of `Hom_A(G_x N, M)`.
    pub hom_g: BTreeMap<i32, usize>,
    /// Cohomology of `Hom_B(F_x M, N)`.
    pub hom_f: BTreeMap<i32, usize>,
    pub certificate: Certificate,
}

fn nonzero(h: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    h.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect()
}

/// Compares `H(Hom_A(G_x N, M))` and `H(Hom_B(F_x M, N))` degree by degree.
pub fn adjunction_check(
    a: &CurvedDga,
    b: &CurvedDga,
    x: &[FieldElement],
    m: &DgModule,
    n: &DgModule,
) -> Result<AdjunctionReport> {
    let g = functor_g(a, b, x, n)?;
    let f = functor_f(a, b, x, m)?;
    let hg = hom_complex_to(&g, m)?;
    let hf = hom_complex_to(&f, n)?;
    let mut certificate = Certificate::ok();
    certificate.merge(hg.certificate.clone());
    certificate.merge(hf.certificate.clone());
    let (hom_g, hom_f) = (nonzero(&hg.cohomology()?), nonzero(&hf.cohomology()?));
    let degrees: std::collections::BTreeSet<i32> = hom_g.keys().chain(hom_f.keys()).copied().collect();
    for d in degrees {
        let (l, r) = (hom_g.get(&d).copied().unwrap_or(0), hom_f.get(&d).copied().unwrap_or(0));
        if l != r {
            certificate.violations.push(Violation {
                identity: "dim H(Hom(Gx N, M)) = dim H(Hom(Fx M, N))".into(),
                witness: vec![format!("degree {d}")],
                lhs: vec![l.to_string()],
                rhs: vec![r.to_string()],
            });
        }
    }
    Ok(AdjunctionReport { hom_g, hom_f, certificate })
}
