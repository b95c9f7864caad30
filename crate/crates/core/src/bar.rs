//! Bar and cobar constructions on word-length windows, change of retraction,
//! and the finite-dimensional points that represent the extended bar construction.
//!
//! Conventions. For a basis `{e}` of `A` adapted to a retraction (`e_0 = 1`,
//! the rest spanning `ker ε`), let `θ_e` be the dual generators, of degree
//! `1 - |e|`. The canonical element `-Σ e ⊗ θ_e` is Maurer–Cartan exactly when
//!
//! ```text
//! ξ(θ_c) = (-1)^{|c|} ( h_c - Σ_e d_{ce} θ_e + Σ_{e,e'} (-1)^{(1-|e|)|e'|} μ^c_{ee'} θ_e θ_e' ),
//! ```
//!
//! which is the differential used here. Writing `τ = θ_1` and `t_i` for the
//! rest, `ξ(t_k) = [τ, t_k] + ξ₁(t_k)` and `ξ(τ) = τ² + g(t)`; then `ξ² = 0`
//! gives `ξ₁²(t_k) = -[g, t_k]`, so the reduced construction has curvature `-g`.

use serde::Serialize;

use crate::algebra::{change_of_basis, outer, split_by_retraction, tensor_cdga, CurvedDga};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{vector, FieldElement};
use crate::graded::{koszul_sign, BasisElement, GradedSpace};
use crate::mc::{enumerate_mc, enumerate_mc_on, is_mc, EnumerationOptions, McElement, QuadraticSystem};
use crate::tensor_alg::{Derivation, TElement, TruncatedTensorAlgebra};

pub const DEFAULT_WINDOW: usize = 4;

/// `A` rewritten in the basis `{1, ā_1, ..., ā_m}`, with the retraction `(1, 0, ..., 0)`.
fn adapted_algebra(a: &CurvedDga, lifts: &[Vec<FieldElement>]) -> Result<CurvedDga> {
    let field = a.field();
    let n = a.dim();
    let mut columns = vec![a.unit().to_vec()];
    columns.extend(lifts.iter().cloned());
    let mut basis = Vec::with_capacity(n);
    for (i, v) in lifts.iter().enumerate() {
        let degree = a.space().degree_of(v).ok_or_else(|| Error::Degree("lift is not homogeneous".into()))?;
        basis.push(BasisElement { name: bar_name(a, v, i), degree });
    }
    let unit_name = if basis.iter().any(|b| b.name == "1") { "unit" } else { "1" };
    basis.insert(0, BasisElement { name: unit_name.to_string(), degree: 0 });
    let space = GradedSpace::new(field, basis)?;
    let mut eps = vector::zeros(field, n);
    eps[0] = field.one();
    change_of_basis(&a.without_retraction(), space, &columns)
        .map_err(|_| Error::Retraction("lifts do not complete the unit to a basis".into()))?
        .with_retraction(eps)
}

/// Name of a lift: the basis name when the lift is a basis vector plus a
/// multiple of the unit, otherwise a positional name.
fn bar_name(a: &CurvedDga, v: &[FieldElement], i: usize) -> String {
    let support: Vec<usize> = (0..v.len()).filter(|&k| !v[k].is_zero() && a.unit()[k].is_zero()).collect();
    match support.as_slice() {
        [k] if v[*k].is_one() => a.space().name(*k).to_string(),
        _ => format!("abar{}", i + 1),
    }
}

/// Standard lifts: the basis of `ker ε` from the retraction split.
fn standard_lifts(a: &CurvedDga, eps: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    Ok(split_by_retraction(a, Some(eps))?.abar_vectors)
}

/// The bar differential of `A` relative to a retraction, on the τ-extended
/// algebra and on the reduced algebra.
#[derive(Clone, Debug)]
pub struct BarDifferential {
    /// `A` in the adapted basis `{1, ā_i}`.
    pub adapted: CurvedDga,
    /// The lifts `ā_i` as vectors of `A`.
    pub lifts: Vec<Vec<FieldElement>>,
    /// Generators `τ, t_1, ..., t_m`.
    pub extended: TruncatedTensorAlgebra,
    pub xi: Derivation,
    /// Generators `t_1, ..., t_m`.
    pub reduced: TruncatedTensorAlgebra,
    pub xi1: Derivation,
    pub g: TElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarIdentityReport {
    pub window: usize,
    /// `ξ² = 0` on every generator of the τ-extended algebra.
    pub xi_squared_zero: bool,
    /// `ξ₁²(w) = [-g, w]` on all words `w` of length `<= window - 2`.
    pub curvature_identity: bool,
    /// `ξ₁²(t_k) + (-1)^{|t_k|}[g, t_k] = 0` on every generator.
    pub signed_identity: bool,
    /// Generators where the signed form fails.
    pub signed_failures: Vec<String>,
    /// `ξ₁²(t_k) = [-g(-t), t_k]` on every generator.
    pub substituted_identity: bool,
    /// Smallest word length up to which every comparison above was exact.
    pub exact_length: usize,
}

impl BarDifferential {
    pub fn new(a: &CurvedDga, eps: Option<&[FieldElement]>, window: usize) -> Result<Self> {
        let eps = match eps.or(a.retraction()) {
            Some(e) => e.to_vec(),
            None => return Err(Error::Retraction("a retraction is required".into())),
        };
        let lifts = standard_lifts(a, &eps)?;
        BarDifferential::with_lifts(a, lifts, window)
    }

    /// Uses the given lifts of a basis of `A/k` (vectors of `A` that, with the
    /// unit, form a basis); the retraction is the one vanishing on the lifts.
    pub fn with_lifts(a: &CurvedDga, lifts: Vec<Vec<FieldElement>>, window: usize) -> Result<Self> {
        if window < 2 {
            return Err(Error::Window("the window must be at least 2".into()));
        }
        let adapted = adapted_algebra(a, &lifts)?;
        let field = a.field();
        let n = adapted.dim();

        let dual: Vec<BasisElement> = adapted
            .space()
            .basis()
            .iter()
            .map(|b| BasisElement { name: format!("{}*", b.name), degree: -b.degree })
            .collect();
        let gens = GradedSpace::new(field, dual)?.suspend(-1);
        let extended = TruncatedTensorAlgebra::new(gens.clone(), window);
        let reduced_gens = GradedSpace::new(field, gens.basis()[1..].to_vec())?;
        let reduced = TruncatedTensorAlgebra::new(reduced_gens, window);

        let mut values = Vec::with_capacity(n);
        for c in 0..n {
            let mut terms = Vec::new();
            terms.push((Vec::new(), adapted.curvature()[c].clone()));
            for e in 0..n {
                let dce = &adapted.diff()[(c, e)];
                if !dce.is_zero() {
                    terms.push((vec![e], -dce.clone()));
                }
            }
            for e in 0..n {
                for e2 in 0..n {
                    for (k, mu) in adapted.basis_product(e, e2) {
                        if *k == c {
                            let s = koszul_sign(field, 1 - adapted.degree(e), adapted.degree(e2));
                            terms.push((vec![e, e2], &s * mu));
                        }
                    }
                }
            }
            let outer_sign = field.sign(i64::from(adapted.degree(c)));
            values.push(extended.scale(&outer_sign, &extended.from_terms(terms)));
        }
        let xi = Derivation::new(&extended, 1, values)?;

        let drop_tau = |e: &TElement| -> TElement {
            reduced.from_terms(
                e.terms()
                    .iter()
                    .filter(|(w, _)| !w.contains(&0))
                    .map(|(w, c)| (w.iter().map(|i| i - 1).collect(), c.clone())),
            )
        };
        let xi1 = Derivation::new(&reduced, 1, (1..n).map(|c| drop_tau(&xi.values[c])).collect())?;
        let g = drop_tau(&xi.values[0]);
        Ok(BarDifferential { adapted, lifts, extended, xi, reduced, xi1, g })
    }

    pub fn window(&self) -> usize {
        self.reduced.window()
    }

    /// The curvature `-g` of the reduced construction.
    pub fn curvature(&self) -> TElement {
        self.reduced.neg(&self.g)
    }

    /// `-g(-t)`, the curvature after the substitution `t ↦ -t`.
    pub fn curvature_substituted(&self) -> TElement {
        self.reduced.negate_generators(&self.curvature())
    }

    pub fn check_identities(&self) -> BarIdentityReport {
        let r = &self.reduced;
        let x = &self.extended;
        let mut exact = self.window();
        let mut note = |len: usize| exact = exact.min(len);

        let mut xi_squared_zero = true;
        for i in 0..x.ngens() {
            let sq = self.xi.apply_twice(x, &x.generator(i));
            let (ok, len) = x.agree(&sq, &x.zero());
            xi_squared_zero &= ok;
            note(len);
        }

        let c = self.curvature();
        let mut curvature_identity = true;
        for len in 0..=self.window().saturating_sub(2) {
            for w in r.words_of_length(len) {
                let u = r.word(w, r.field().one());
                let lhs = self.xi1.apply_twice(r, &u);
                let rhs = r.commutator(&c, &u);
                let (ok, l) = r.agree(&lhs, &rhs);
                curvature_identity &= ok;
                note(l);
            }
        }

        let mut signed_failures = Vec::new();
        let mut substituted_identity = true;
        let sub = self.curvature_substituted();
        for k in 0..r.ngens() {
            let t = r.generator(k);
            let sq = self.xi1.apply_twice(r, &t);
            let s = r.field().sign(i64::from(r.generators().degree(k)));
            let signed = r.add(&sq, &r.scale(&s, &r.commutator(&self.g, &t)));
            let (ok, l) = r.agree(&signed, &r.zero());
            note(l);
            if !ok {
                signed_failures.push(r.generators().name(k).to_string());
            }
            let (ok, l) = r.agree(&sq, &r.commutator(&sub, &t));
            substituted_identity &= ok;
            note(l);
        }

        BarIdentityReport {
            window: self.window(),
            xi_squared_zero,
            curvature_identity,
            signed_identity: signed_failures.is_empty(),
            signed_failures,
            substituted_identity,
            exact_length: exact,
        }
    }
}

pub fn bar_differential(a: &CurvedDga, eps: Option<&[FieldElement]>, window: usize) -> Result<BarDifferential> {
    BarDifferential::new(a, eps, window)
}

/// Compares the bar constructions for two retractions: the `ε'` one must be
/// the `ε` one twisted by `b = Σ (ε - ε')(ā_i) t_i`.
pub fn change_retraction_check(
    a: &CurvedDga,
    eps: &[FieldElement],
    eps2: &[FieldElement],
    window: usize,
) -> Result<Certificate> {
    let field = a.field();
    let first = BarDifferential::new(a, Some(eps), window)?;
    split_by_retraction(a, Some(eps2))?;
    // Same classes in A/k, lifted into ker ε'.
    let lifts2: Vec<_> = first
        .lifts
        .iter()
        .map(|v| {
            let mut w = v.clone();
            vector::axpy(&mut w, &-vector::dot(eps2, v), a.unit());
            w
        })
        .collect();
    let second = BarDifferential::with_lifts(a, lifts2, window)?;
    let r = &first.reduced;

    let b = r.from_terms(first.lifts.iter().enumerate().map(|(i, v)| {
        (vec![i], vector::dot(eps, v) - vector::dot(eps2, v))
    }));
    let twisted = first.xi1.plus_inner(r, &b);
    let mut cert = Certificate::ok();
    let fmt = |e: &TElement| vec![r.format(e)];
    for len in 0..=window.saturating_sub(2) {
        for w in r.words_of_length(len) {
            let label = w.iter().map(|&i| r.generators().name(i)).collect::<Vec<_>>().join("·");
            let u = r.word(w, field.one());
            let lhs = twisted.apply(r, &u);
            let rhs = second.xi1.apply(r, &u);
            if !r.agree(&lhs, &rhs).0 {
                cert.violations.push(crate::certificate::Violation {
                    identity: "twisted differential".into(),
                    witness: vec![label],
                    lhs: fmt(&lhs),
                    rhs: fmt(&rhs),
                });
            }
        }
    }
    let c = first.curvature();
    let c_twisted = r.add(&r.add(&c, &first.xi1.apply(r, &b)), &r.mul(&b, &b));
    let c2 = second.curvature();
    if !r.agree(&c_twisted, &c2).0 {
        cert.violations.push(crate::certificate::Violation {
            identity: "twisted curvature".into(),
            witness: vec![],
            lhs: fmt(&c_twisted),
            rhs: fmt(&c2),
        });
    }
    Ok(cert)
}

/// The cobar construction `T Σ⁻¹ C̄*` of a finite-dimensional `C` with a retraction.
#[derive(Clone, Debug)]
pub struct Cobar {
    pub bar: BarDifferential,
}

impl Cobar {
    pub fn algebra(&self) -> &TruncatedTensorAlgebra {
        &self.bar.reduced
    }

    pub fn differential(&self) -> &Derivation {
        &self.bar.xi1
    }

    pub fn curvature(&self) -> TElement {
        self.bar.curvature()
    }

    /// `d²(w) = [c, w]` on all words of length `<= window - 2` (with `c = 0`
    /// for an augmentation), returning the certificate and the exact length.
    pub fn check_d_squared(&self) -> (Certificate, usize) {
        let r = self.algebra();
        let c = self.curvature();
        let mut cert = Certificate::ok();
        let mut exact = r.window();
        for len in 0..=r.window().saturating_sub(2) {
            for w in r.words_of_length(len) {
                let label = w.iter().map(|&i| r.generators().name(i)).collect::<Vec<_>>().join("·");
                let u = r.word(w, r.field().one());
                let lhs = self.differential().apply_twice(r, &u);
                let rhs = r.commutator(&c, &u);
                let (ok, l) = r.agree(&lhs, &rhs);
                exact = exact.min(l);
                if !ok {
                    cert.violations.push(crate::certificate::Violation {
                        identity: "d^2 = [c,-]".into(),
                        witness: vec![label],
                        lhs: vec![r.format(&lhs)],
                        rhs: vec![r.format(&rhs)],
                    });
                }
            }
        }
        (cert, exact)
    }
}

/// Builds the cobar construction; the retraction defaults to the one stored
/// with `C`, else the dual of the first degree-0 basis vector where the unit is nonzero.
pub fn cobar(c: &CurvedDga, eps: Option<&[FieldElement]>, window: usize) -> Result<Cobar> {
    if window < 2 {
        return Err(Error::Window("the cobar differential needs a window of at least 2".into()));
    }
    let eps = match eps.or(c.retraction()) {
        Some(e) => e.to_vec(),
        None => default_retraction(c)?,
    };
    Ok(Cobar { bar: BarDifferential::new(c, Some(&eps), window)? })
}

pub fn default_retraction(a: &CurvedDga) -> Result<Vec<FieldElement>> {
    let i = (0..a.dim())
        .find(|&i| a.degree(i) == 0 && !a.unit()[i].is_zero())
        .ok_or_else(|| Error::Retraction("the unit is zero".into()))?;
    let mut eps = a.zero_vector();
    eps[i] = a.unit()[i].inv();
    Ok(eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointConvention {
    /// `MC(A ⊗ B)`.
    Curved,
    /// `MC(Ā ⊗ B̄)` through dg maps of the augmented constructions.
    Augmented,
}

/// Algebra maps out of a free algebra with differential `ξ₁` into `B` that send
/// each generator into `B̄` (the span of `target_basis`) and commute with the differentials.
fn dg_maps_from_free(
    source: &BarDifferential,
    b: &CurvedDga,
    target_basis: &[Vec<FieldElement>],
    opts: &EnumerationOptions,
) -> Result<Vec<Vec<Vec<FieldElement>>>> {
    let field = b.field();
    let r = &source.reduced;
    let nb = b.dim();
    // Variables: for each generator, the target basis vectors of matching degree.
    let mut slots: Vec<Vec<(usize, Vec<FieldElement>)>> = Vec::new();
    let mut nvars = 0;
    for k in 0..r.ngens() {
        let deg = r.generators().degree(k);
        let mut s = Vec::new();
        for v in target_basis {
            if b.space().degree_of(v) == Some(deg) {
                s.push((nvars, v.clone()));
                nvars += 1;
            }
        }
        slots.push(s);
    }
    let mut sys = QuadraticSystem::new(field, nvars)?;
    for k in 0..r.ngens() {
        // f(ξ₁ t_k) - d_B f(t_k) = 0, coordinate by coordinate in B.
        let mut constant = vector::zeros(field, nb);
        let mut linear: Vec<Vec<(usize, FieldElement)>> = vec![Vec::new(); nb];
        let mut quadratic: Vec<Vec<(usize, usize, FieldElement)>> = vec![Vec::new(); nb];
        for (w, c) in source.xi1.values[k].terms() {
            match w.as_slice() {
                [] => vector::axpy(&mut constant, c, b.unit()),
                [i] => {
                    for (var, v) in &slots[*i] {
                        for (pos, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                            linear[pos].push((*var, c * x));
                        }
                    }
                }
                [i, j] => {
                    for (vi, u) in &slots[*i] {
                        for (vj, v) in &slots[*j] {
                            for (pos, x) in b.mul(u, v).into_iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                                quadratic[pos].push((*vi, *vj, c * &x));
                            }
                        }
                    }
                }
                _ => return Err(Error::Internal("bar differential has a word of length > 2".into())),
            }
        }
        for (var, v) in &slots[k] {
            for (pos, x) in b.d(v).into_iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                linear[pos].push((*var, -x));
            }
        }
        for pos in 0..nb {
            sys.push(&constant[pos], &linear[pos], &quadratic[pos]);
        }
    }
    let sols = sys.solutions(opts.max_coordinates, opts.execution)?;
    Ok(sols
        .into_iter()
        .map(|s| {
            slots
                .iter()
                .map(|slot| {
                    let mut img = vector::zeros(field, nb);
                    for (var, v) in slot {
                        if s[*var] != 0 {
                            vector::axpy(&mut img, &field.from_i64(s[*var] as i64), v);
                        }
                    }
                    img
                })
                .collect()
        })
        .collect())
}

fn require_augmented(a: &CurvedDga, what: &str) -> Result<Vec<FieldElement>> {
    let eps = a
        .retraction()
        .ok_or_else(|| Error::Retraction(format!("{what} needs an augmentation")))?
        .to_vec();
    if !a.is_augmentation(&eps) {
        return Err(Error::Retraction(format!("the retraction of {what} is not an augmentation")));
    }
    Ok(eps)
}

/// `-Σ ā_i ⊗ f(t_i)` in `A ⊗ B`.
fn mc_from_assignment(lifts: &[Vec<FieldElement>], images: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let mut out: Option<Vec<FieldElement>> = None;
    for (a, b) in lifts.iter().zip(images) {
        let term = outer(a, b);
        match &mut out {
            None => out = Some(vector::neg(&term)),
            Some(acc) => {
                let minus_one = -acc[0].field().one();
                vector::axpy(acc, &minus_one, &term)
            }
        }
    }
    out.unwrap_or_default()
}

/// Points of the extended bar construction of `A` with values in `B`.
pub fn bar_points(
    a: &CurvedDga,
    b: &CurvedDga,
    convention: PointConvention,
    opts: &EnumerationOptions,
) -> Result<Vec<McElement>> {
    let host = tensor_cdga(a, b)?;
    match convention {
        PointConvention::Curved => enumerate_mc(&host, opts),
        PointConvention::Augmented => {
            let eps_a = require_augmented(a, "A")?;
            let eps_b = require_augmented(b, "B")?;
            let bar = BarDifferential::new(a, Some(&eps_a), 2.max(DEFAULT_WINDOW))?;
            let bbar = standard_lifts(b, &eps_b)?;
            let maps = dg_maps_from_free(&bar, b, &bbar, opts)?;
            let mut out = Vec::with_capacity(maps.len());
            for images in maps {
                let mut coords = mc_from_assignment(&bar.lifts, &images);
                if coords.is_empty() {
                    coords = host.zero_vector();
                }
                if !is_mc(&host, &coords)?.is_ok() {
                    return Err(Error::Internal("a dg map out of the bar construction gave a non-MC element".into()));
                }
                out.push(McElement { coords });
            }
            Ok(out)
        }
    }
}

/// A dg algebra map `ΩC → A`, given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CobarMap {
    pub generators: Vec<String>,
    pub images: Vec<Vec<FieldElement>>,
}

/// All augmented dg maps `ΩC → A`, each paired with its Maurer–Cartan element in `A ⊗ C`.
pub fn cobar_maps(c: &CurvedDga, a: &CurvedDga, opts: &EnumerationOptions) -> Result<Vec<(CobarMap, McElement)>> {
    let eps_c = require_augmented(c, "C")?;
    let eps_a = require_augmented(a, "A")?;
    let bar = BarDifferential::new(c, Some(&eps_c), DEFAULT_WINDOW)?;
    let abar = standard_lifts(a, &eps_a)?;
    let maps = dg_maps_from_free(&bar, a, &abar, opts)?;
    let host = tensor_cdga(a, c)?;
    let names: Vec<String> = bar.reduced.generators().basis().iter().map(|b| b.name.clone()).collect();
    let mut out = Vec::with_capacity(maps.len());
    for images in maps {
        let in_ca = mc_from_assignment(&bar.lifts, &images);
        let coords = if in_ca.is_empty() { host.zero_vector() } else { swap_tensor(c, a, &in_ca) };
        if !is_mc(&host, &coords)?.is_ok() {
            return Err(Error::Internal("a dg map out of the cobar construction gave a non-MC element".into()));
        }
        out.push((CobarMap { generators: names.clone(), images }, McElement { coords }));
    }
    Ok(out)
}

/// `c ⊗ a ↦ (-1)^{|a||c|} a ⊗ c`, from `C ⊗ A` coordinates to `A ⊗ C` coordinates.
pub fn swap_tensor(c: &CurvedDga, a: &CurvedDga, v: &[FieldElement]) -> Vec<FieldElement> {
    let field = a.field();
    let (nc, na) = (c.dim(), a.dim());
    let mut out = vector::zeros(field, na * nc);
    for i in 0..nc {
        for j in 0..na {
            let x = &v[i * na + j];
            if !x.is_zero() {
                out[j * nc + i] = &koszul_sign(field, c.degree(i), a.degree(j)) * x;
            }
        }
    }
    out
}

/// `MC(Ā ⊗ C̄)` for augmented `A` and `C`, enumerated inside `A ⊗ C`.
pub fn reduced_mc(a: &CurvedDga, c: &CurvedDga, opts: &EnumerationOptions) -> Result<Vec<McElement>> {
    let eps_a = require_augmented(a, "A")?;
    let eps_c = require_augmented(c, "C")?;
    let host = tensor_cdga(a, c)?;
    let abar = standard_lifts(a, &eps_a)?;
    let cbar = standard_lifts(c, &eps_c)?;
    let mut vectors = Vec::new();
    for u in &abar {
        for v in &cbar {
            let w = outer(u, v);
            if host.space().degree_of(&w) == Some(1) {
                vectors.push(w);
            }
        }
    }
    enumerate_mc_on(&host, &vectors, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ground_algebra, DgaBuilder};
    use crate::field::Field;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn a0(field: Field) -> CurvedDga {
        DgaBuilder::new(field, &[("1", 0), ("x", 1)]).unit("1").retraction(&[(1, "1")]).build().unwrap()
    }

    fn dual_numbers(field: Field, n: usize) -> CurvedDga {
        // k[e]/e^n with |e| = 0.
        let names: Vec<String> = (0..n).map(|i| if i == 0 { "1".into() } else { format!("e{i}") }).collect();
        let pairs: Vec<(&str, i32)> = names.iter().map(|s| (s.as_str(), 0)).collect();
        let mut b = DgaBuilder::new(field, &pairs).unit("1").retraction(&[(1, "1")]);
        for i in 1..n {
            for j in 1..n {
                if i + j < n {
                    b = b.mul(&names[i], &names[j], &[(1, &names[i + j])]);
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn small_example_has_zero_bar_differential() {
        let bar = bar_differential(&a0(f3()), None, 4).unwrap();
        assert_eq!(bar.reduced.ngens(), 1);
        assert_eq!(bar.reduced.generators().degree(0), 0);
        assert!(bar.xi1.values.iter().all(TElement::is_zero));
        assert!(bar.g.is_zero());
        let report = bar.check_identities();
        assert!(report.xi_squared_zero && report.curvature_identity && report.signed_identity);
    }

    #[test]
    fn cobar_of_ground_field_is_trivial() {
        let c = cobar(&ground_algebra(f3()), None, 4).unwrap();
        assert_eq!(c.algebra().ngens(), 0);
        assert!(c.check_d_squared().0.is_ok());
    }

    #[test]
    fn cobar_of_dual_numbers() {
        let c = cobar(&dual_numbers(f3(), 2), None, 4).unwrap();
        assert_eq!(c.algebra().generators().degrees(), vec![1]);
        assert!(c.differential().values[0].is_zero());
    }

    #[test]
    fn cobar_of_truncated_cube() {
        let c = cobar(&dual_numbers(f3(), 3), None, 5).unwrap();
        let r = c.algebra();
        assert!(c.differential().values[0].is_zero());
        let d2 = &c.differential().values[1];
        assert_eq!(d2.terms().len(), 1);
        assert_eq!(d2.coefficient(&[0, 0]), Some(&f3().one()));
        let (cert, exact) = c.check_d_squared();
        assert!(cert.is_ok());
        assert_eq!(exact, r.window());
    }

    #[test]
    fn window_too_small() {
        assert!(matches!(cobar(&a0(f3()), None, 1), Err(Error::Window(_))));
    }

    #[test]
    fn nonaugmented_retraction_gives_curvature() {
        let a = DgaBuilder::new(f3(), &[("1", 0), ("y", 0)])
            .unit("1")
            .mul("y", "y", &[(1, "1")])
            .retraction(&[(1, "1")])
            .build()
            .unwrap();
        let bar = bar_differential(&a, None, 4).unwrap();
        assert!(!bar.g.is_zero());
        let report = bar.check_identities();
        assert!(report.xi_squared_zero);
        assert!(report.curvature_identity);
        // t has degree 1 and [g, t] = [t·t, t] = 0 here, so every form agrees.
        assert!(report.signed_identity);
    }

    #[test]
    fn signed_form_fails_on_cyclic_cube() {
        // k[y]/(y^3 - 1), |y| = 0, ε(y) = ε(y^2) = 0: g = t1·t2 + t2·t1 does not commute with t1.
        let a = DgaBuilder::new(f3(), &[("1", 0), ("y", 0), ("y2", 0)])
            .unit("1")
            .mul("y", "y", &[(1, "y2")])
            .mul("y", "y2", &[(1, "1")])
            .mul("y2", "y", &[(1, "1")])
            .mul("y2", "y2", &[(1, "y")])
            .retraction(&[(1, "1")])
            .build()
            .unwrap();
        assert!(a.check_axioms().is_ok());
        let report = bar_differential(&a, None, 4).unwrap().check_identities();
        assert!(report.xi_squared_zero);
        assert!(report.curvature_identity);
        assert!(!report.signed_identity);
    }

    #[test]
    fn change_of_retraction_on_small_example() {
        let f = f3();
        let a = a0(f);
        let eps = vec![f.one(), f.zero()];
        assert!(change_retraction_check(&a, &eps, &eps, 4).unwrap().is_ok());
        let b = DgaBuilder::new(f, &[("1", 0), ("y", 0)]).unit("1").mul("y", "y", &[(1, "1")]).build().unwrap();
        let e1 = vec![f.one(), f.zero()];
        let e2 = vec![f.one(), f.from_i64(2)];
        assert!(change_retraction_check(&b, &e1, &e2, 4).unwrap().is_ok());
    }

    #[test]
    fn points_of_small_example() {
        let f = f3();
        let opts = EnumerationOptions::default();
        let k = ground_algebra(f);
        assert_eq!(bar_points(&a0(f), &k, PointConvention::Curved, &opts).unwrap().len(), 3);
        assert_eq!(bar_points(&a0(f), &k, PointConvention::Augmented, &opts).unwrap().len(), 1);
        let b = dual_numbers(f, 2);
        // x⊗1 and x⊗e span the degree-1 part and everything squares to zero.
        assert_eq!(bar_points(&a0(f), &b, PointConvention::Curved, &opts).unwrap().len(), 9);
        assert_eq!(bar_points(&a0(f), &b, PointConvention::Augmented, &opts).unwrap().len(), 3);
    }

    #[test]
    fn representability_small() {
        let f = f3();
        let opts = EnumerationOptions::default();
        let a = a0(f);
        let c = dual_numbers(f, 2);
        let maps = cobar_maps(&c, &a, &opts).unwrap();
        assert_eq!(maps.len(), 3);
        assert_eq!(reduced_mc(&a, &c, &opts).unwrap().len(), 3);
        assert_eq!(bar_points(&a, &c, PointConvention::Augmented, &opts).unwrap().len(), 3);
        let k = ground_algebra(f);
        assert_eq!(cobar_maps(&k, &a, &opts).unwrap().len(), 1);
    }
}
