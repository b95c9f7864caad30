//! Maurer–Cartan elements: verification, exhaustive enumeration over prime
//! fields, twisting, and push-forward along algebra maps.

use serde::Serialize;

use crate::algebra::{AlgebraMap, CurvedDga};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};
use crate::parallel::{self, Execution};

/// Default guard on the number of free coordinates scanned by enumeration.
pub const DEFAULT_MAX_COORDINATES: usize = 12;

/// A degree-1 element `x` with `h + dx + x² = 0`, as coordinates in the host's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct McElement {
    pub coords: Vec<FieldElement>,
}

impl McElement {
    /// Verifies the equation in `host`.
    pub fn new(host: &CurvedDga, coords: Vec<FieldElement>) -> Result<Self> {
        is_mc(host, &coords)?.into_result(Error::Axiom)?;
        Ok(McElement { coords })
    }

    pub fn zero(host: &CurvedDga) -> Self {
        McElement { coords: host.zero_vector() }
    }
}

fn require_degree_one(a: &CurvedDga, x: &[FieldElement]) -> Result<()> {
    if x.len() != a.dim() {
        return Err(Error::Dimension(format!("vector of length {} in an algebra of dimension {}", x.len(), a.dim())));
    }
    if !a.space().is_homogeneous(x, 1) {
        return Err(Error::Degree("element is not homogeneous of degree 1".into()));
    }
    Ok(())
}

/// `h + dx + x²`.
pub fn mc_residual(a: &CurvedDga, x: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.curvature().to_vec();
    vector::add_assign(&mut r, &a.d(x));
    vector::add_assign(&mut r, &a.mul(x, x));
    r
}

/// Checks the Maurer–Cartan equation; a failure carries the residual.
pub fn is_mc(a: &CurvedDga, x: &[FieldElement]) -> Result<Certificate> {
    require_degree_one(a, x)?;
    let mut cert = Certificate::ok();
    cert.expect_eq("h + dx + x^2 = 0", &[], &mc_residual(a, x), &a.zero_vector());
    Ok(cert)
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    pub max_coordinates: usize,
    pub execution: Execution,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { max_coordinates: DEFAULT_MAX_COORDINATES, execution: Execution::default() }
    }
}

/// A system of polynomial equations of degree at most 2 over `F_p`, solved by
/// exhaustive search in lexicographic order of the variable vector.
#[derive(Clone, Debug)]
pub struct QuadraticSystem {
    p: u64,
    vars: usize,
    equations: Vec<Equation>,
}

#[derive(Clone, Debug, Default)]
struct Equation {
    constant: u64,
    linear: Vec<(usize, u64)>,
    quadratic: Vec<(usize, usize, u64)>,
}

impl Equation {
    fn is_trivial(&self) -> bool {
        self.constant == 0 && self.linear.is_empty() && self.quadratic.is_empty()
    }

    fn eval(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = self.constant;
        for &(i, c) in &self.linear {
            acc = (acc + c * x[i]) % p;
        }
        for &(i, j, c) in &self.quadratic {
            acc = (acc + (c * x[i]) % p * x[j]) % p;
        }
        acc
    }
}

fn residue(x: &FieldElement) -> u64 {
    x.residue().expect("prime field element")
}

impl QuadraticSystem {
    pub fn new(field: Field, vars: usize) -> Result<Self> {
        let p = match field {
            Field::Prime(p) => p,
            Field::Rationals => {
                return Err(Error::Unsupported(
                    "exhaustive enumeration needs a finite field; over Q solve the linear cases with solve_linear".into(),
                ))
            }
        };
        Ok(QuadraticSystem { p, vars, equations: Vec::new() })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Adds `constant + Σ linear + Σ quadratic = 0`.
    pub fn push(
        &mut self,
        constant: &FieldElement,
        linear: &[(usize, FieldElement)],
        quadratic: &[(usize, usize, FieldElement)],
    ) {
        let mut eq = Equation { constant: residue(constant), ..Default::default() };
        let mut lin = vec![0u64; self.vars];
        for (i, c) in linear {
            lin[*i] = (lin[*i] + residue(c)) % self.p;
        }
        eq.linear = lin.into_iter().enumerate().filter(|(_, c)| *c != 0).collect();
        let mut quad = std::collections::BTreeMap::new();
        for (i, j, c) in quadratic {
            let e = quad.entry((*i, *j)).or_insert(0u64);
            *e = (*e + residue(c)) % self.p;
        }
        eq.quadratic = quad.into_iter().filter(|(_, c)| *c != 0).map(|((i, j), c)| (i, j, c)).collect();
        if !eq.is_trivial() {
            self.equations.push(eq);
        }
    }

    pub fn candidate_count(&self) -> Option<u64> {
        self.p.checked_pow(u32::try_from(self.vars).ok()?)
    }

    fn satisfied(&self, x: &[u64]) -> bool {
        self.equations.iter().all(|e| e.eval(x, self.p) == 0)
    }

    /// All solutions in lexicographic order (first variable most significant).
    pub fn solutions(&self, max_vars: usize, exec: Execution) -> Result<Vec<Vec<u64>>> {
        if self.vars > max_vars {
            return Err(Error::BoundExceeded(format!(
                "{} free coordinates exceed the limit of {max_vars} ({}^{} candidates)",
                self.vars, self.p, self.vars
            )));
        }
        let total = self.candidate_count().ok_or_else(|| Error::BoundExceeded("candidate count overflows".into()))?;
        let chunk = 4096u64;
        let chunks = total.div_ceil(chunk) as usize;
        let found = parallel::map_indexed(chunks, exec, |c| {
            let start = c as u64 * chunk;
            let end = (start + chunk).min(total);
            let mut x = self.decode(start);
            let mut out = Vec::new();
            for _ in start..end {
                if self.satisfied(&x) {
                    out.push(x.clone());
                }
                self.increment(&mut x);
            }
            out
        });
        Ok(found.into_iter().flatten().collect())
    }

    fn decode(&self, mut index: u64) -> Vec<u64> {
        let mut x = vec![0u64; self.vars];
        for slot in x.iter_mut().rev() {
            *slot = index % self.p;
            index /= self.p;
        }
        x
    }

    fn increment(&self, x: &mut [u64]) {
        for slot in x.iter_mut().rev() {
            *slot += 1;
            if *slot < self.p {
                return;
            }
            *slot = 0;
        }
    }
}

/// The Maurer–Cartan equation of `a` as a system in the degree-1 coordinates.
/// Returns the system and the host indices of its variables.
pub fn mc_system(a: &CurvedDga) -> Result<(QuadraticSystem, Vec<usize>)> {
    let vars = a.indices_in_degree(1);
    let vectors: Vec<_> = vars.iter().map(|&i| a.basis_vector(i)).collect();
    Ok((mc_system_on(a, &vectors)?, vars))
}

/// The Maurer–Cartan equation for `x = Σ s_v v` with `v` ranging over the given
/// degree-1 vectors; the unknowns are the `s_v`.
pub fn mc_system_on(a: &CurvedDga, vectors: &[Vec<FieldElement>]) -> Result<QuadraticSystem> {
    for v in vectors {
        require_degree_one(a, v)?;
    }
    let n = a.dim();
    let mut sys = QuadraticSystem::new(a.field(), vectors.len())?;
    let mut linear = vec![Vec::new(); n];
    let mut quadratic = vec![Vec::new(); n];
    for (s, v) in vectors.iter().enumerate() {
        for (k, c) in a.d(v).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            linear[k].push((s, c));
        }
        for (t, w) in vectors.iter().enumerate() {
            for (k, c) in a.mul(v, w).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                quadratic[k].push((s, t, c));
            }
        }
    }
    for k in 0..n {
        sys.push(&a.curvature()[k], &linear[k], &quadratic[k]);
    }
    Ok(sys)
}

/// Every Maurer–Cartan element of `a`, in lexicographic order of coordinates.
pub fn enumerate_mc(a: &CurvedDga, opts: &EnumerationOptions) -> Result<Vec<McElement>> {
    let vars = a.indices_in_degree(1);
    let vectors: Vec<_> = vars.iter().map(|&i| a.basis_vector(i)).collect();
    enumerate_mc_on(a, &vectors, opts)
}

/// Maurer–Cartan elements lying in the span of the given degree-1 vectors,
/// ordered lexicographically by their coefficients on those vectors.
pub fn enumerate_mc_on(a: &CurvedDga, vectors: &[Vec<FieldElement>], opts: &EnumerationOptions) -> Result<Vec<McElement>> {
    let sys = mc_system_on(a, vectors)?;
    let field = a.field();
    let sols = sys.solutions(opts.max_coordinates, opts.execution)?;
    Ok(sols
        .into_iter()
        .map(|s| {
            let mut coords = a.zero_vector();
            for (v, c) in vectors.iter().zip(s) {
                if c != 0 {
                    vector::axpy(&mut coords, &field.from_i64(c as i64), v);
                }
            }
            McElement { coords }
        })
        .collect())
}

/// `A^b`: differential `d + [b, -]` and curvature `h + db + b²`, for any degree-1 `b`.
pub fn twist_algebra(a: &CurvedDga, b: &[FieldElement]) -> Result<CurvedDga> {
    require_degree_one(a, b)?;
    let diff = a.diff().add(&a.commutator_matrix(b, 1))?;
    a.with_diff_and_curvature(diff, mc_residual(a, b))
}

/// `(1 ⊗ φ)(x)` for `x ∈ MC(C ⊗ B)` and a strict map `φ : B → B'`.
pub fn mc_pushforward(c: &CurvedDga, x: &McElement, phi: &AlgebraMap) -> Result<McElement> {
    let lifted = phi.tensor_left(c)?;
    let image = lifted.apply(&x.coords);
    let cert = is_mc(&lifted.target, &image)?;
    if !cert.is_ok() {
        return Err(Error::Internal("push-forward of a Maurer–Cartan element is not Maurer–Cartan".into()));
    }
    Ok(McElement { coords: image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ground_algebra, DgaBuilder};

    fn a0(field: Field) -> CurvedDga {
        DgaBuilder::new(field, &[("1", 0), ("x", 1)]).unit("1").build().unwrap()
    }

    #[test]
    fn small_example_has_p_elements() {
        for p in [2, 3, 5, 7] {
            let f = Field::prime(p).unwrap();
            let mc = enumerate_mc(&a0(f), &EnumerationOptions::default()).unwrap();
            assert_eq!(mc.len() as u64, p);
            assert_eq!(mc[1].coords, vec![f.zero(), f.one()]);
        }
    }

    #[test]
    fn ground_field_has_only_zero() {
        let f = Field::prime(3).unwrap();
        let mc = enumerate_mc(&ground_algebra(f), &EnumerationOptions::default()).unwrap();
        assert_eq!(mc, vec![McElement { coords: vec![f.zero()] }]);
    }

    #[test]
    fn rationals_refused() {
        let err = enumerate_mc(&a0(Field::Rationals), &EnumerationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn curvature_is_the_residual_at_zero() {
        let f = Field::prime(3).unwrap();
        let a = DgaBuilder::new(f, &[("1", 0), ("h", 2)]).unit("1").curvature(&[(1, "h")]).build().unwrap();
        let cert = is_mc(&a, &a.zero_vector()).unwrap();
        assert_eq!(cert.violations[0].lhs, vec!["0", "1"]);
        assert!(is_mc(&a, &[f.one(), f.zero()]).is_err());
    }

    #[test]
    fn bound_guard() {
        let f = Field::prime(2).unwrap();
        let opts = EnumerationOptions { max_coordinates: 0, ..Default::default() };
        assert!(matches!(enumerate_mc(&a0(f), &opts), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn twist_by_mc_kills_curvature() {
        let f = Field::prime(3).unwrap();
        let a = a0(f);
        let x = vec![f.zero(), f.from_i64(2)];
        let t = twist_algebra(&a, &x).unwrap();
        assert!(!t.is_curved());
        assert!(t.check_axioms().is_ok());
        assert_eq!(twist_algebra(&a, &a.zero_vector()).unwrap(), a);
    }
}
