//! Scripted scenarios with their expected outcomes: the algebra `k[x]/x²`
//! with `|x| = 1`, an adjunction check, and representability counts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{ground_algebra, CurvedDga, DgaBuilder};
use crate::bar::{bar_points, cobar_maps, reduced_mc, PointConvention};
use crate::duality::adjunction_check;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graded::GradedSpace;
use crate::mc::{enumerate_mc, EnumerationOptions};
use crate::module::{DgModule, Side};
use crate::twisted::{hom_complex, ModuleMap, TwistedModule};
use crate::weq::{trivial_module, weak_equiv_oracle, TestFamily};

pub const NAMES: [&str; 3] = ["kx2", "adjunction", "representability"];

/// `k[x]/x²` with `|x| = 1`, `d = 0`, augmented.
pub fn small_example(field: Field) -> CurvedDga {
    DgaBuilder::new(field, &[("1", 0), ("x", 1)])
        .unit("1")
        .retraction(&[(1, "1")])
        .build()
        .expect("valid presentation")
}

/// `k[t]/t^n` with `|t| = 0`, augmented.
pub fn truncated(field: Field, n: usize) -> CurvedDga {
    let names: Vec<String> = (0..n).map(|i| if i == 0 { "1".into() } else if i == 1 { "t".into() } else { format!("t{i}") }).collect();
    let pairs: Vec<(&str, i32)> = names.iter().map(|s| (s.as_str(), 0)).collect();
    let mut b = DgaBuilder::new(field, &pairs).unit("1").retraction(&[(1, "1")]);
    for i in 1..n {
        for j in 1..n {
            if i + j < n {
                b = b.mul(&names[i], &names[j], &[(1, &names[i + j])]);
            }
        }
    }
    b.build().expect("valid presentation")
}

/// The rank-one twisted module `(k, c·x)` over the small example.
pub fn generator(a: &CurvedDga, c: &FieldElement) -> Result<TwistedModule> {
    let v = GradedSpace::from_pairs(a.field(), &[("u", 0)])?;
    TwistedModule::new(a.clone(), v, vec![a.field().zero(), c.clone()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kx2Report {
    pub field: Field,
    pub mc_count: usize,
    pub mc: Vec<Vec<FieldElement>>,
    /// `hom[a][b]`: nonzero cohomology dimensions of `Hom((k, a x), (k, b x))`.
    pub hom: Vec<Vec<BTreeMap<i32, usize>>>,
    pub bar_points: usize,
    pub bar_points_augmented: usize,
    /// The zero map between distinct generators is refuted with test modules of dimension 1.
    pub pairwise_inequivalent: bool,
    pub ok: bool,
}

pub fn kx2(field: Field, opts: &EnumerationOptions) -> Result<Kx2Report> {
    let elements = field.elements().ok_or_else(|| Error::Unsupported("kx2 needs a finite field".into()))?;
    let p = elements.len();
    let a = small_example(field);
    let mc: Vec<Vec<FieldElement>> = enumerate_mc(&a, opts)?.into_iter().map(|m| m.coords).collect();
    let gens: Vec<TwistedModule> = elements.iter().map(|c| generator(&a, c)).collect::<Result<_>>()?;
    let mut hom = Vec::with_capacity(p);
    let mut table_ok = true;
    for (i, m) in gens.iter().enumerate() {
        let mut row = Vec::with_capacity(p);
        for (j, n) in gens.iter().enumerate() {
            let h: BTreeMap<i32, usize> =
                hom_complex(m, n)?.cohomology()?.into_iter().filter(|&(_, d)| d > 0).collect();
            let expected = if i == j { BTreeMap::from([(0, 1), (1, 1)]) } else { BTreeMap::new() };
            table_ok &= h == expected;
            row.push(h);
        }
        hom.push(row);
    }
    let k = ground_algebra(field);
    let points = bar_points(&a, &k, PointConvention::Curved, opts)?.len();
    let points_aug = bar_points(&a, &k, PointConvention::Augmented, opts)?.len();
    let mut pairwise_inequivalent = true;
    for (i, m) in gens.iter().enumerate() {
        for (j, n) in gens.iter().enumerate() {
            if i != j {
                let f = ModuleMap::zero(&m.underlying(), &n.underlying())?;
                pairwise_inequivalent &= weak_equiv_oracle(&f, &TestFamily::new(1), opts)?.is_refuted();
            }
        }
    }
    let ok = mc.len() == p && table_ok && points == p && pairwise_inequivalent;
    Ok(Kx2Report {
        field,
        mc_count: mc.len(),
        mc,
        hom,
        bar_points: points,
        bar_points_augmented: points_aug,
        pairwise_inequivalent,
        ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCase {
    pub x: Vec<FieldElement>,
    pub m: String,
    pub n: String,
    pub hom_g: BTreeMap<i32, usize>,
    pub hom_f: BTreeMap<i32, usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub field: Field,
    pub cases: Vec<AdjunctionCase>,
    pub ok: bool,
}

/// `A = k[x]/x²`, `B = k[t]/t²`, points `0` and `x⊗t`, modules `k` and the regular ones.
pub fn adjunction(field: Field) -> Result<AdjunctionReport> {
    let a = small_example(field);
    let b = truncated(field, 2);
    let zero = field.zero();
    let mut xt = vec![zero.clone(); 4];
    xt[3] = field.one();
    let ms: Vec<(&str, DgModule)> = vec![("k", trivial_module(&a)?), ("A", DgModule::regular(&a, Side::Right))];
    let ns: Vec<(&str, DgModule)> = vec![("k", trivial_module(&b)?), ("B", DgModule::regular(&b, Side::Right))];
    let mut cases = Vec::new();
    for x in [vec![zero; 4], xt] {
        for (mn, m) in &ms {
            for (nn, n) in &ns {
                let r = adjunction_check(&a, &b, &x, m, n)?;
                cases.push(AdjunctionCase {
                    x: x.clone(),
                    m: (*mn).into(),
                    n: (*nn).into(),
                    ok: r.certificate.is_ok(),
                    hom_g: r.hom_g,
                    hom_f: r.hom_f,
                });
            }
        }
    }
    let ok = cases.iter().all(|c| c.ok);
    Ok(AdjunctionReport { field, cases, ok })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentabilityCase {
    pub c: String,
    pub a: String,
    pub cobar_maps: usize,
    pub reduced_mc: usize,
    pub bar_points: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentabilityReport {
    pub field: Field,
    pub cases: Vec<RepresentabilityCase>,
    pub ok: bool,
}

pub fn representability(field: Field, opts: &EnumerationOptions) -> Result<RepresentabilityReport> {
    let algebras: Vec<(&str, CurvedDga)> = vec![
        ("k", ground_algebra(field)),
        ("k[x]/x^2", small_example(field)),
        ("k[t]/t^2", truncated(field, 2)),
        ("k[t]/t^3", truncated(field, 3)),
    ];
    let mut cases = Vec::new();
    for (cn, c) in &algebras {
        for (an, a) in &algebras {
            let maps = cobar_maps(c, a, opts)?.len();
            let mc = reduced_mc(a, c, opts)?.len();
            let points = bar_points(a, c, PointConvention::Augmented, opts)?.len();
            cases.push(RepresentabilityCase {
                c: (*cn).into(),
                a: (*an).into(),
                cobar_maps: maps,
                reduced_mc: mc,
                bar_points: points,
                ok: maps == mc && mc == points,
            });
        }
    }
    let ok = cases.iter().all(|c| c.ok);
    Ok(RepresentabilityReport { field, cases, ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kx2_over_small_fields() {
        for p in [2, 3, 5] {
            let r = kx2(Field::prime(p).unwrap(), &EnumerationOptions::default()).unwrap();
            assert!(r.ok, "{r:?}");
            assert_eq!(r.mc_count, p as usize);
            assert_eq!(r.bar_points_augmented, 1);
        }
    }

    #[test]
    fn adjunction_scenario() {
        assert!(adjunction(Field::prime(3).unwrap()).unwrap().ok);
    }

    #[test]
    fn representability_scenario() {
        let r = representability(Field::prime(2).unwrap(), &EnumerationOptions::default()).unwrap();
        assert!(r.ok, "{r:?}");
    }
}
