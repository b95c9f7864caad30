//! Bounded search for weak equivalences of the second kind, the ordinary
//! quasi-isomorphism test, and the interval path object.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::CurvedDga;
use crate::certificate::Certificate;
use crate::complex::{self, InducedMap};
use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};
use crate::graded::{tensor, GradedSpace};
use crate::matrix::Matrix;
use crate::mc::{enumerate_mc, EnumerationOptions};
use crate::module::{DgModule, Side};
use crate::parallel;
use crate::twisted::{block_diagonal, dg_cone, from_twist_images, hom_complex_to, ModuleMap, TwistedModule};

/// Test modules `(U, z)`: `1 <= dim U <= max_dim`, degrees nondecreasing from 0
/// up to `degree_span`, and `z` ranging over all Maurer–Cartan elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TestFamily {
    pub max_dim: usize,
    pub degree_span: i32,
}

impl TestFamily {
    pub fn new(max_dim: usize) -> Self {
        TestFamily { max_dim, degree_span: 1 }
    }
}

fn degree_sequences(len: usize, span: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![0]];
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                let last = *s.last().expect("nonempty");
                (last..=span).map(move |d| {
                    let mut t = s.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

/// All test modules of the family, in canonical order: by dimension, then
/// degree sequence, then Maurer–Cartan element.
pub fn test_modules(a: &CurvedDga, family: &TestFamily, opts: &EnumerationOptions) -> Result<Vec<TwistedModule>> {
    let mut out = Vec::new();
    for dim in 1..=family.max_dim {
        for degrees in degree_sequences(dim, family.degree_span.max(0)) {
            let names: Vec<String> = (0..dim).map(|i| format!("u{i}")).collect();
            let pairs: Vec<(&str, i32)> = names.iter().map(String::as_str).zip(degrees.iter().copied()).collect();
            let u = GradedSpace::from_pairs(a.field(), &pairs)?;
            let conv = crate::algebra::endo_convolution(&u, a)?;
            for z in enumerate_mc(&conv, opts)? {
                out.push(TwistedModule::new(a.clone(), u.clone(), z.coords)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degrees: Vec<i32>,
    pub x: Vec<FieldElement>,
    /// Nonzero cohomology of `Hom(T, cone f)`, by degree.
    pub cohomology: BTreeMap<i32, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Some test module sees the cone; `f` is not a weak equivalence.
    Refuted { field: String, bound: usize, tested: usize, witness: Witness },
    /// Every test module in the family sees an acyclic cone.
    ConfirmedUpTo { field: String, bound: usize, tested: usize },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

/// Checks `Hom(T, cone f)` is acyclic for every `T` in the family; returns the
/// first witness in canonical order otherwise.
pub fn weak_equiv_oracle(f: &ModuleMap, family: &TestFamily, opts: &EnumerationOptions) -> Result<Verdict> {
    let a = f.source.algebra();
    if family.max_dim == 0 {
        return Err(Error::Presentation("bound 0 gives an empty test family".into()));
    }
    if a.field() == Field::Rationals {
        return Err(Error::Unsupported("the test-module search needs a finite field".into()));
    }
    let cone = dg_cone(f)?;
    let tests = test_modules(a, family, opts)?;
    let found = parallel::find_first(tests.len(), opts.execution, |i| {
        match hom_complex_to(&tests[i], &cone).and_then(|h| h.cohomology()) {
            Ok(h) if h.values().all(|&d| d == 0) => None,
            Ok(h) => Some(Ok(h)),
            Err(e) => Some(Err(e)),
        }
    });
    let field = a.field().name();
    let bound = family.max_dim;
    Ok(match found {
        None => Verdict::ConfirmedUpTo { field, bound, tested: tests.len() },
        Some((i, h)) => {
            let t = &tests[i];
            let cohomology = h?.into_iter().filter(|&(_, d)| d > 0).collect();
            Verdict::Refuted {
                field,
                bound,
                tested: i + 1,
                witness: Witness { degrees: t.space().degrees(), x: t.x().to_vec(), cohomology },
            }
        }
    })
}

/// Whether `f` induces an isomorphism on ordinary cohomology.
pub fn quasi_iso_check(f: &ModuleMap) -> Result<bool> {
    Ok(induced_maps(f)?.iter().all(InducedMap::is_iso))
}

pub fn induced_maps(f: &ModuleMap) -> Result<Vec<InducedMap>> {
    if f.source.algebra().is_curved() {
        return Err(Error::Unsupported("modules over a curved algebra are not complexes".into()));
    }
    complex::induced_on_cohomology(f.source.space(), f.source.diff(), f.target.space(), f.target.diff(), &f.matrix)
}

/// `M ⊕ N` with basis names prefixed by `1.` and `2.`.
pub fn direct_sum(m: &DgModule, n: &DgModule) -> Result<DgModule> {
    if m.algebra() != n.algebra() || m.side() != n.side() {
        return Err(Error::Presentation("summands must be modules of the same kind".into()));
    }
    let field = m.algebra().field();
    let space = m.space().prefixed("1.").direct_sum(&n.space().prefixed("2."))?;
    let action = (0..m.algebra().dim()).map(|k| block_diagonal(field, &m.action()[k], &n.action()[k])).collect();
    DgModule::new(m.side(), m.algebra().clone(), space, action, block_diagonal(field, m.diff(), n.diff()))
}

/// The interval `a (0), b (1), c (0)` with `d a = b`, `d c = -b`.
pub fn interval(field: Field) -> (GradedSpace, Matrix) {
    let space = GradedSpace::from_pairs(field, &[("a", 0), ("b", 1), ("c", 0)]).expect("distinct names");
    let d = Matrix::from_i64(field, &[&[0, 0, 0], &[1, 0, -1], &[0, 0, 0]]);
    (space, d)
}

#[derive(Clone, Debug)]
pub struct PathObject {
    /// `I⊗M`, with `d(i⊗m) = di⊗m + (-1)^{|i|} i⊗dm`.
    pub cylinder: DgModule,
    /// `m ↦ a⊗m + c⊗m`.
    pub e: ModuleMap,
    /// `(p₁, p₂) : I⊗M → M ⊕ M`.
    pub p: ModuleMap,
    pub interval_cohomology: BTreeMap<i32, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathObjectReport {
    /// `(p₁, p₂)` is onto in every degree.
    pub surjective: bool,
    /// `p ∘ e` is the diagonal.
    pub factors_diagonal: bool,
    pub e_quasi_iso: Option<bool>,
    pub e_verdict: Option<Verdict>,
    pub certificate: Certificate,
}

pub fn path_object(m: &DgModule) -> Result<PathObject> {
    if m.side() != Side::Right {
        return Err(Error::Presentation("expected a right module".into()));
    }
    let a = m.algebra();
    if a.is_curved() {
        return Err(Error::Unsupported("the path object needs an uncurved algebra".into()));
    }
    let field = a.field();
    let (i_space, i_diff) = interval(field);
    let n = m.dim();
    let space = tensor(&i_space, m.space())?;
    let mut diff = Matrix::zeros(field, 3 * n, 3 * n);
    for i in 0..3 {
        let s = field.sign(i64::from(i_space.degree(i)));
        for p in 0..n {
            for q in 0..n {
                diff[(i * n + p, i * n + q)] = &s * &m.diff()[(p, q)];
            }
        }
        for i2 in 0..3 {
            let c = &i_diff[(i2, i)];
            if !c.is_zero() {
                for p in 0..n {
                    diff[(i2 * n + p, i * n + p)] += c;
                }
            }
        }
    }
    let action = m
        .action()
        .iter()
        .map(|r| block_diagonal(field, &block_diagonal(field, r, r), r))
        .collect();
    let cylinder = DgModule::new(Side::Right, a.clone(), space, action, diff)?;

    let mut e = Matrix::zeros(field, 3 * n, n);
    let mut p = Matrix::zeros(field, 2 * n, 3 * n);
    for j in 0..n {
        e[(j, j)] = field.one();
        e[(2 * n + j, j)] = field.one();
        p[(j, j)] = field.one();
        p[(n + j, 2 * n + j)] = field.one();
    }
    let sum = direct_sum(m, m)?;
    Ok(PathObject {
        e: ModuleMap::new(m.clone(), cylinder.clone(), e)?,
        p: ModuleMap::new(cylinder.clone(), sum, p)?,
        cylinder,
        interval_cohomology: complex::cohomology(&i_space, &i_diff)?,
    })
}

/// The cylinder of a twisted module, again as a twisted module on `I⊗V`.
pub fn twisted_cylinder(m: &TwistedModule) -> Result<TwistedModule> {
    let a = m.algebra();
    let field = a.field();
    let (i_space, i_diff) = interval(field);
    let (nv, na) = (m.space().dim(), a.dim());
    let space = tensor(&i_space, m.space())?;
    let x_images = m.twist_images();
    let mut images = Vec::with_capacity(3 * nv);
    for i in 0..3 {
        let s = field.sign(i64::from(i_space.degree(i)));
        for j in 0..nv {
            let mut img = vector::zeros(field, 3 * nv * na);
            for (q, c) in x_images[j].iter().enumerate() {
                img[i * nv * na + q] = &s * c;
            }
            for i2 in 0..3 {
                let c = &i_diff[(i2, i)];
                if !c.is_zero() {
                    for k in 0..na {
                        img[(i2 * nv + j) * na + k] += &(c * &a.unit()[k]);
                    }
                }
            }
            images.push(img);
        }
    }
    let x = from_twist_images(&space, a, &images);
    TwistedModule::new(a.clone(), space, x)
}

/// Checks the factorization `M → I⊗M → M ⊕ M`; runs the oracle on `e` when a family is given.
pub fn check_path_object(
    path: &PathObject,
    family: Option<&TestFamily>,
    opts: &EnumerationOptions,
) -> Result<PathObjectReport> {
    let mut certificate = Certificate::ok();
    let (src, tgt) = (path.p.source.space(), path.p.target.space());
    let mut surjective = true;
    for (&deg, &dim) in &tgt.graded_dims() {
        let block = path.p.matrix.select(&tgt.indices_in_degree(deg), &src.indices_in_degree(deg));
        if block.rank() != dim {
            surjective = false;
            certificate.violations.push(crate::certificate::Violation {
                identity: "(p1,p2) surjective".into(),
                witness: vec![format!("degree {deg}")],
                lhs: vec![block.rank().to_string()],
                rhs: vec![dim.to_string()],
            });
        }
    }
    let pe = path.p.matrix.mul(&path.e.matrix)?;
    let n = path.e.source.dim();
    let mut diagonal = Matrix::zeros(pe.field(), 2 * n, n);
    for j in 0..n {
        diagonal[(j, j)] = pe.field().one();
        diagonal[(n + j, j)] = pe.field().one();
    }
    let factors_diagonal = pe == diagonal;
    if !factors_diagonal {
        certificate.violations.push(crate::certificate::Violation {
            identity: "p e = diagonal".into(),
            witness: vec![],
            lhs: vec![],
            rhs: vec![],
        });
    }
    let e_quasi_iso = Some(quasi_iso_check(&path.e)?);
    let e_verdict = match family {
        Some(fam) => {
            let v = weak_equiv_oracle(&path.e, fam, opts)?;
            if v.is_refuted() {
                certificate.violations.push(crate::certificate::Violation {
                    identity: "e is a weak equivalence".into(),
                    witness: vec![],
                    lhs: vec!["refuted".into()],
                    rhs: vec!["confirmed".into()],
                });
            }
            Some(v)
        }
        None => None,
    };
    Ok(PathObjectReport { surjective, factors_diagonal, e_quasi_iso, e_verdict, certificate })
}

/// The trivial module `k` in degree 0, where `a` acts through the retraction.
pub fn trivial_module(a: &CurvedDga) -> Result<DgModule> {
    let eps = a
        .retraction()
        .map(<[FieldElement]>::to_vec)
        .or_else(|| crate::bar::default_retraction(a).ok())
        .ok_or_else(|| Error::Retraction("no retraction".into()))?;
    if !a.is_augmentation(&eps) {
        return Err(Error::Retraction("the trivial module needs an augmentation".into()));
    }
    let field = a.field();
    let space = GradedSpace::from_pairs(field, &[("k", 0)])?;
    let action = (0..a.dim())
        .map(|k| Matrix::from_rows(field, &[vec![eps[k].clone()]], 1).expect("1x1"))
        .collect();
    DgModule::new(Side::Right, a.clone(), space, action, Matrix::zeros(field, 1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DgaBuilder;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn a0() -> CurvedDga {
        DgaBuilder::new(f3(), &[("1", 0), ("x", 1)]).unit("1").retraction(&[(1, "1")]).build().unwrap()
    }

    fn rank_one(c: i64) -> TwistedModule {
        let v = GradedSpace::from_pairs(f3(), &[("u", 0)]).unwrap();
        TwistedModule::new(a0(), v, vec![f3().zero(), f3().from_i64(c)]).unwrap()
    }

    #[test]
    fn degree_sequences_are_nondecreasing() {
        assert_eq!(degree_sequences(2, 1), vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(degree_sequences(3, 1).len(), 3);
    }

    #[test]
    fn identity_is_confirmed() {
        let m = rank_one(1).underlying();
        let v = weak_equiv_oracle(&ModuleMap::identity(&m), &TestFamily::new(2), &EnumerationOptions::default()).unwrap();
        assert!(matches!(v, Verdict::ConfirmedUpTo { bound: 2, .. }));
        let empty = weak_equiv_oracle(&ModuleMap::identity(&m), &TestFamily::new(0), &EnumerationOptions::default());
        assert!(matches!(empty, Err(Error::Presentation(_))));
    }

    #[test]
    fn zero_map_between_generators_is_refuted() {
        let (m, n) = (rank_one(1).underlying(), rank_one(2).underlying());
        let f = ModuleMap::zero(&m, &n).unwrap();
        let v = weak_equiv_oracle(&f, &TestFamily::new(1), &EnumerationOptions::default()).unwrap();
        assert!(v.is_refuted());
        // Both underlying complexes are acyclic, so the zero map is a quasi-isomorphism.
        assert!(quasi_iso_check(&f).unwrap());
    }

    #[test]
    fn zero_into_a_generator_is_refuted_by_it() {
        let n = rank_one(1);
        let zero_space = GradedSpace::zero(f3());
        let z = TwistedModule::untwisted(a0(), zero_space).unwrap();
        let f = ModuleMap::zero(&z.underlying(), &n.underlying()).unwrap();
        match weak_equiv_oracle(&f, &TestFamily::new(1), &EnumerationOptions::default()).unwrap() {
            Verdict::Refuted { witness, .. } => {
                assert_eq!(witness.x, vec![f3().zero(), f3().one()]);
                assert_eq!(witness.cohomology.get(&0), Some(&1));
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn witness_is_independent_of_execution() {
        let (m, n) = (rank_one(1).underlying(), rank_one(2).underlying());
        let f = ModuleMap::zero(&m, &n).unwrap();
        let run = |execution| {
            let opts = EnumerationOptions { execution, ..Default::default() };
            weak_equiv_oracle(&f, &TestFamily::new(2), &opts).unwrap()
        };
        assert_eq!(run(parallel::Execution::Sequential), run(parallel::Execution::Parallel));
    }

    #[test]
    fn path_object_of_trivial_module() {
        let k = trivial_module(&a0()).unwrap();
        let path = path_object(&k).unwrap();
        assert_eq!(path.interval_cohomology, BTreeMap::from([(0, 1), (1, 0)]));
        let nonzero = |h: BTreeMap<i32, usize>| h.into_iter().filter(|&(_, d)| d > 0).collect::<Vec<_>>();
        assert_eq!(nonzero(path.cylinder.cohomology().unwrap()), nonzero(k.cohomology().unwrap()));
        let report = check_path_object(&path, Some(&TestFamily::new(1)), &EnumerationOptions::default()).unwrap();
        assert!(report.surjective && report.factors_diagonal && report.certificate.is_ok());
    }

    #[test]
    fn twisted_cylinder_matches_dg_cylinder() {
        let m = rank_one(2);
        let c = twisted_cylinder(&m).unwrap().underlying();
        let d = path_object(&m.underlying()).unwrap().cylinder;
        assert_eq!((c.diff(), c.action()), (d.diff(), d.action()));
    }
}
