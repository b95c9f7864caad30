//! Random certified algebras, retractions and modules for property tests.
//!
//! Algebras come from a small catalog (truncated and quotient polynomial
//! algebras, square-zero extensions, algebras with idempotents), then get a
//! random degree-preserving change of basis and optionally a random twist
//! by a degree-1 element. Every output passes `check_axioms`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{change_of_basis, CurvedDga, DgaBuilder};
use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};
use crate::graded::GradedSpace;
use crate::matrix::Matrix;
use crate::mc::{enumerate_mc_on, twist_algebra, EnumerationOptions};
use crate::module::{DgModule, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomAlgebraOptions {
    pub max_dim: usize,
    /// Allow twists that leave curvature behind.
    pub curved: bool,
    /// Keep only algebras with an augmentation, stored as the retraction.
    pub augmented: bool,
}

impl Default for RandomAlgebraOptions {
    fn default() -> Self {
        RandomAlgebraOptions { max_dim: 3, curved: true, augmented: false }
    }
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> FieldElement {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Rationals => field.from_i64(rng.gen_range(-2..=2)),
    }
}

fn random_nonzero<R: Rng>(rng: &mut R, field: Field) -> FieldElement {
    loop {
        let c = random_scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A random homogeneous element of the given degree (possibly zero).
pub fn random_element<R: Rng>(rng: &mut R, a: &CurvedDga, degree: i32) -> Vec<FieldElement> {
    let mut v = a.zero_vector();
    for i in a.indices_in_degree(degree) {
        v[i] = random_scalar(rng, a.field());
    }
    v
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") }).collect()
}

fn builder(degrees: &[i32]) -> (Vec<String>, Vec<(String, i32)>) {
    let n = names(degrees.len());
    let pairs = n.iter().cloned().zip(degrees.iter().copied()).collect();
    (n, pairs)
}

fn build(field: Field, degrees: &[i32], f: impl FnOnce(DgaBuilder, &[String]) -> DgaBuilder) -> Result<CurvedDga> {
    let (n, pairs) = builder(degrees);
    let refs: Vec<(&str, i32)> = pairs.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    f(DgaBuilder::new(field, &refs).unit("1"), &n).build()
}

/// `k[y]/(y^n - Σ c_i y^i)` with `|y| = 0`.
fn quotient_polynomial<R: Rng>(rng: &mut R, field: Field, n: usize) -> Result<CurvedDga> {
    let c: Vec<FieldElement> = (0..n).map(|_| random_scalar(rng, field)).collect();
    // Reduce y^k for k < 2n - 1 to the basis 1, ..., y^{n-1}.
    let mut powers: Vec<Vec<FieldElement>> = (0..n).map(|k| vector::unit(field, n, k)).collect();
    for _ in n..2 * n - 1 {
        let prev = powers.last().expect("nonempty").clone();
        let mut next = vector::zeros(field, n);
        next[1..].clone_from_slice(&prev[..n - 1]);
        vector::axpy(&mut next, &prev[n - 1], &c);
        powers.push(next);
    }
    let space = GradedSpace::from_pairs(field, &names(n).iter().map(|s| (s.as_str(), 0)).collect::<Vec<_>>())?;
    let products = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| powers[i + j].clone()).collect();
    let eps = roots(field, &c).first().map(|r| (0..n).map(|k| r.pow(k as u64)).collect());
    CurvedDga::new(space, vector::unit(field, n, 0), products, Matrix::zeros(field, n, n), vector::zeros(field, n), eps)
}

/// Roots of `y^n - Σ c_i y^i` in a prime field.
fn roots(field: Field, c: &[FieldElement]) -> Vec<FieldElement> {
    let Some(elements) = field.elements() else { return Vec::new() };
    let n = c.len();
    elements
        .into_iter()
        .filter(|r| {
            let mut v = r.pow(n as u64);
            for (i, ci) in c.iter().enumerate() {
                v -= &(ci * &r.pow(i as u64));
            }
            v.is_zero()
        })
        .collect()
}

fn catalog<R: Rng>(rng: &mut R, field: Field, max_dim: usize) -> Result<CurvedDga> {
    let deg = |rng: &mut R| rng.gen_range(-1..=2);
    let dim = rng.gen_range(1..=max_dim.max(1));
    if dim == 1 {
        return build(field, &[0], |b, _| b.retraction(&[(1, "1")]));
    }
    match rng.gen_range(0..7) {
        0 => quotient_polynomial(rng, field, dim),
        1 => {
            // k[y]/y^dim.
            let g = deg(rng);
            let degrees: Vec<i32> = (0..dim as i32).map(|k| k * g).collect();
            build(field, &degrees, |mut b, n| {
                for i in 1..dim {
                    for j in 1..dim {
                        if i + j < dim {
                            b = b.mul(&n[i], &n[j], &[(1, &n[i + j])]);
                        }
                    }
                }
                b.retraction(&[(1, "1")])
            })
        }
        2 => {
            // Square-zero extension, possibly with d(e1) = c e2.
            let mut degrees = vec![0];
            let g = deg(rng);
            degrees.push(g);
            if dim == 3 {
                degrees.push(if rng.gen_bool(0.5) { g + 1 } else { deg(rng) });
            }
            let c = random_scalar(rng, field);
            let cint = c.residue().map(|r| r as i64).unwrap_or(1);
            build(field, &degrees, |b, n| {
                let b = b.retraction(&[(1, "1")]);
                if dim == 3 && degrees[2] == degrees[1] + 1 {
                    b.diff(&n[1], &[(cint, &n[2])])
                } else {
                    b
                }
            })
        }
        3 => {
            // Orthogonal idempotents: k × k or k × k × k.
            build(field, &vec![0; dim], |mut b, n| {
                for i in 1..dim {
                    b = b.mul(&n[i], &n[i], &[(1, &n[i])]);
                }
                b.retraction(&[(1, "1")])
            })
        }
        4 if dim == 3 => {
            // k × k[e]/e² with e in the second factor.
            let g = deg(rng);
            build(field, &[0, 0, g], |b, n| b.mul(&n[1], &n[1], &[(1, &n[1])]).retraction(&[(1, "1")]))
        }
        5 if dim == 3 => {
            // Upper triangular 2×2: p = E11, e = E12.
            let g = deg(rng);
            build(field, &[0, 0, g], |b, n| {
                b.mul(&n[1], &n[1], &[(1, &n[1])]).mul(&n[1], &n[2], &[(1, &n[2])]).retraction(&[(1, "1"), (1, "e1")])
            })
        }
        6 => {
            // k[y]/y³ with |y| = 1, or k[e]/e² with |e| = 2: room for curvature.
            if dim == 3 {
                build(field, &[0, 1, 2], |b, n| b.mul(&n[1], &n[1], &[(1, &n[2])]).retraction(&[(1, "1")]))
            } else {
                build(field, &[0, 2], |b, _| b.retraction(&[(1, "1")]))
            }
        }
        _ => build(field, &[0, deg(rng)], |b, _| b.retraction(&[(1, "1")])),
    }
}

/// Adds a random closed central element of degree 2 to the curvature.
fn add_curvature<R: Rng>(rng: &mut R, a: &CurvedDga) -> Result<CurvedDga> {
    let h = random_element(rng, a, 2);
    let central = (0..a.dim()).all(|i| vector::is_zero(&a.graded_commutator(&h, 2, &a.basis_vector(i), a.degree(i))));
    if !central || !vector::is_zero(&a.d(&h)) {
        return Ok(a.clone());
    }
    let mut curvature = a.curvature().to_vec();
    vector::axpy(&mut curvature, &a.field().one(), &h);
    a.with_diff_and_curvature(a.diff().clone(), curvature)
}

/// A random invertible degree-preserving change of basis.
fn scramble<R: Rng>(rng: &mut R, a: &CurvedDga) -> Result<CurvedDga> {
    let field = a.field();
    let n = a.dim();
    let mut columns = vec![a.zero_vector(); n];
    for &d in a.space().graded_dims().keys() {
        let idx = a.space().indices_in_degree(d);
        let block = loop {
            let m = Matrix::from_rows(
                field,
                &idx.iter().map(|_| idx.iter().map(|_| random_scalar(rng, field)).collect()).collect::<Vec<_>>(),
                idx.len(),
            )?;
            if m.rank() == idx.len() {
                break m;
            }
        };
        for (c, &j) in idx.iter().enumerate() {
            for (r, &i) in idx.iter().enumerate() {
                columns[j][i] = block[(r, c)].clone();
            }
        }
    }
    let basis: Vec<(String, i32)> =
        (0..n).map(|i| (format!("b{i}"), a.degree(i))).collect();
    let refs: Vec<(&str, i32)> = basis.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    change_of_basis(a, GradedSpace::from_pairs(field, &refs)?, &columns)
}

/// A random certified algebra of dimension at most `opts.max_dim`.
pub fn random_algebra<R: Rng>(rng: &mut R, field: Field, opts: &RandomAlgebraOptions) -> Result<CurvedDga> {
    for _ in 0..1000 {
        let mut a = catalog(rng, field, opts.max_dim)?;
        if opts.augmented && !a.retraction().is_some_and(|e| a.is_augmentation(e)) {
            continue;
        }
        if opts.curved && rng.gen_bool(0.5) {
            a = add_curvature(rng, &a)?;
        }
        a = scramble(rng, &a)?;
        if rng.gen_bool(0.6) {
            let b = random_element(rng, &a, 1);
            let t = twist_algebra(&a, &b)?;
            if opts.curved || !t.is_curved() {
                a = t;
            }
        }
        if !opts.augmented {
            a = a.without_retraction();
        } else if !a.retraction().is_some_and(|e| a.is_augmentation(e)) {
            continue;
        }
        a.check_axioms().into_result(|m| Error::Internal(format!("random algebra failed its axioms: {m}")))?;
        return Ok(a);
    }
    Err(Error::Internal("could not draw a random algebra with the requested properties".into()))
}

/// A random retraction: degree 0 and `ε(1) = 1`.
pub fn random_retraction<R: Rng>(rng: &mut R, a: &CurvedDga) -> Vec<FieldElement> {
    loop {
        let eps = random_element(rng, a, 0);
        let u = vector::dot(&eps, a.unit());
        if !u.is_zero() {
            return vector::scale(&u.inv(), &eps);
        }
    }
}

/// A random Maurer–Cartan element, enumerated on the span of at most
/// `max_coordinates` randomly chosen degree-1 basis vectors.
pub fn random_mc<R: Rng>(rng: &mut R, a: &CurvedDga, max_coordinates: usize) -> Result<Option<Vec<FieldElement>>> {
    let mut idx = a.indices_in_degree(1);
    idx.shuffle(rng);
    idx.truncate(max_coordinates);
    idx.sort_unstable();
    let vectors: Vec<_> = idx.iter().map(|&i| a.basis_vector(i)).collect();
    let opts = EnumerationOptions { max_coordinates, execution: crate::parallel::Execution::Sequential };
    let all = enumerate_mc_on(a, &vectors, &opts)?;
    Ok(all.choose(rng).map(|x| x.coords.clone()))
}

/// A right module on a random complex of dimension `<= max_dim`, with `A`
/// acting through its augmentation.
pub fn random_trivial_module<R: Rng>(rng: &mut R, a: &CurvedDga, max_dim: usize) -> Result<DgModule> {
    let field = a.field();
    let eps = a
        .retraction()
        .filter(|e| a.is_augmentation(e))
        .ok_or_else(|| Error::Retraction("needs an augmentation".into()))?
        .to_vec();
    let n = rng.gen_range(1..=max_dim.max(1));
    let mut degrees: Vec<i32> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    degrees.sort_unstable();
    let names: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let pairs: Vec<(&str, i32)> = names.iter().map(String::as_str).zip(degrees.iter().copied()).collect();
    let space = GradedSpace::from_pairs(field, &pairs)?;
    // A differential with d² = 0: pair off consecutive basis vectors.
    let mut diff = Matrix::zeros(field, n, n);
    let mut j = 0;
    while j + 1 < n {
        if degrees[j + 1] == degrees[j] + 1 && rng.gen_bool(0.5) {
            diff[(j + 1, j)] = random_nonzero(rng, field);
            j += 2;
        } else {
            j += 1;
        }
    }
    let action = (0..a.dim()).map(|k| Matrix::identity(field, n).scale(&eps[k])).collect();
    let m = DgModule::new(Side::Right, a.clone(), space, action, diff)?;
    m.check_axioms().into_result(|s| Error::Internal(format!("random module failed its axioms: {s}")))?;
    Ok(m)
}

/// `A` acting on itself from the right, with differential twisted by a random
/// Maurer–Cartan element of `A`; a rank-one twisted module.
pub fn random_rank_one_module<R: Rng>(rng: &mut R, a: &CurvedDga) -> Result<DgModule> {
    let x = random_mc(rng, a, 6)?.unwrap_or_else(|| a.zero_vector());
    let field = a.field();
    let v = GradedSpace::from_pairs(field, &[("u", 0)])?;
    Ok(crate::twisted::TwistedModule::new(a.clone(), v, x)?.underlying())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_algebras_certify() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            for opts in [
                RandomAlgebraOptions::default(),
                RandomAlgebraOptions { curved: false, augmented: true, max_dim: 3 },
            ] {
                for _ in 0..50 {
                    let a = random_algebra(&mut rng, f, &opts).unwrap();
                    assert!(a.dim() <= 3);
                    assert!(a.check_axioms().is_ok());
                    if opts.augmented {
                        assert!(!a.is_curved());
                        assert!(a.is_augmentation(a.retraction().unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_appears() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let f = Field::prime(3).unwrap();
        let curved = (0..200)
            .filter(|_| random_algebra(&mut rng, f, &RandomAlgebraOptions::default()).unwrap().is_curved())
            .count();
        assert!(curved > 0);
    }

    #[test]
    fn quotient_polynomial_has_root_augmentation() {
        let f = Field::prime(3).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let a = quotient_polynomial(&mut rng, f, 3).unwrap();
            assert!(a.check_axioms().is_ok());
            if let Some(e) = a.retraction() {
                assert!(a.is_augmentation(e));
            }
        }
    }

    #[test]
    fn random_modules_certify() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let f = Field::prime(3).unwrap();
        let opts = RandomAlgebraOptions { curved: false, augmented: true, max_dim: 3 };
        for _ in 0..30 {
            let a = random_algebra(&mut rng, f, &opts).unwrap();
            assert!(random_trivial_module(&mut rng, &a, 3).unwrap().check_axioms().is_ok());
            assert!(random_rank_one_module(&mut rng, &a).unwrap().check_axioms().is_ok());
        }
    }
}
