//! Finitely generated twisted modules `(V⊗A)^{[x]}`, maps of dg modules,
//! Hom complexes and cones.
//!
//! A twisted module is the free right module `V⊗A` with differential
//! `δ + x·`, where `δ(v⊗a) = (-1)^{|v|} v⊗da` and `x ∈ End(V)⊗A` acts by
//! `(E⊗c)(v⊗a) = (-1)^{|c||v|} E(v)⊗ca`. Then `(δ + x·)² = -(·)h` exactly
//! when `x` is Maurer–Cartan in `End(V)⊗A`.

use std::collections::BTreeMap;

use crate::algebra::{endo_convolution, CurvedDga};
use crate::certificate::Certificate;
use crate::complex;
use crate::error::{Error, Result};
use crate::field::{vector, FieldElement};
use crate::graded::{hom_space, koszul_sign, tensor, GradedSpace};
use crate::matrix::Matrix;
use crate::mc::is_mc;
use crate::module::{DgModule, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedModule {
    algebra: CurvedDga,
    space: GradedSpace,
    x: Vec<FieldElement>,
    convolution: CurvedDga,
}

/// Images `x·(v_j⊗1)` in `V⊗A` coordinates (`v_i⊗a_k` at `i * dim A + k`).
pub fn twist_images(v: &GradedSpace, a: &CurvedDga, x: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    let (n, na) = (v.dim(), a.dim());
    let field = a.field();
    (0..n)
        .map(|j| {
            let mut out = vector::zeros(field, n * na);
            for i in 0..n {
                for k in 0..na {
                    let c = &x[(i * n + j) * na + k];
                    if !c.is_zero() {
                        out[i * na + k] = &koszul_sign(field, a.degree(k), v.degree(j)) * c;
                    }
                }
            }
            out
        })
        .collect()
}

/// Inverse of [`twist_images`]: the element of `End(V)⊗A` whose action sends
/// each `v_j⊗1` to `images[j]`.
pub fn from_twist_images(v: &GradedSpace, a: &CurvedDga, images: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let (n, na) = (v.dim(), a.dim());
    let field = a.field();
    let mut x = vector::zeros(field, n * n * na);
    for (j, img) in images.iter().enumerate() {
        for i in 0..n {
            for k in 0..na {
                let c = &img[i * na + k];
                if !c.is_zero() {
                    x[(i * n + j) * na + k] = &koszul_sign(field, a.degree(k), v.degree(j)) * c;
                }
            }
        }
    }
    x
}

/// The right `A`-linear map `V⊗A → W⊗A` with `v_j⊗1 ↦ images[j]`.
pub fn a_linear_matrix(a: &CurvedDga, target_dim: usize, images: &[Vec<FieldElement>]) -> Matrix {
    let na = a.dim();
    let field = a.field();
    let right: Vec<Matrix> = (0..na).map(|k| a.right_mul_matrix(&a.basis_vector(k))).collect();
    let mut m = Matrix::zeros(field, target_dim * na, images.len() * na);
    for (j, img) in images.iter().enumerate() {
        for k in 0..na {
            let col = right_act(a, &right[k], img);
            for (r, c) in col.into_iter().enumerate() {
                m[(r, j * na + k)] = c;
            }
        }
    }
    m
}

/// `(w⊗a)·b` on `W⊗A` coordinates, given the right multiplication matrix of `b`.
fn right_act(a: &CurvedDga, right: &Matrix, v: &[FieldElement]) -> Vec<FieldElement> {
    let na = a.dim();
    let mut out = vector::zeros(a.field(), v.len());
    for (block, chunk) in v.chunks(na).enumerate() {
        if vector::is_zero(chunk) {
            continue;
        }
        let img = right.mul_vec(chunk).expect("length");
        out[block * na..(block + 1) * na].clone_from_slice(&img);
    }
    out
}

impl TwistedModule {
    pub fn new(algebra: CurvedDga, space: GradedSpace, x: Vec<FieldElement>) -> Result<Self> {
        let convolution = endo_convolution(&space, &algebra)?;
        is_mc(&convolution, &x)?.into_result(Error::Axiom)?;
        Ok(TwistedModule { algebra, space, x, convolution })
    }

    /// `(V⊗A, 1⊗d_A)`; requires `h = 0`.
    pub fn untwisted(algebra: CurvedDga, space: GradedSpace) -> Result<Self> {
        let x = vector::zeros(algebra.field(), space.dim() * space.dim() * algebra.dim());
        TwistedModule::new(algebra, space, x)
    }

    pub fn algebra(&self) -> &CurvedDga {
        &self.algebra
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn x(&self) -> &[FieldElement] {
        &self.x
    }

    /// `End(V)⊗A`, where `x` lives.
    pub fn convolution(&self) -> &CurvedDga {
        &self.convolution
    }

    pub fn twist_images(&self) -> Vec<Vec<FieldElement>> {
        twist_images(&self.space, &self.algebra, &self.x)
    }

    /// The right dg module `V⊗A` with differential `δ + x·`.
    pub fn underlying(&self) -> DgModule {
        let a = &self.algebra;
        let field = a.field();
        let (n, na) = (self.space.dim(), a.dim());
        let space = tensor(&self.space, a.space()).expect("same field");
        let right: Vec<Matrix> = (0..na).map(|k| a.right_mul_matrix(&a.basis_vector(k))).collect();
        let action = right
            .iter()
            .map(|r| {
                let mut m = Matrix::zeros(field, n * na, n * na);
                for i in 0..n {
                    for p in 0..na {
                        for q in 0..na {
                            m[(i * na + p, i * na + q)] = r[(p, q)].clone();
                        }
                    }
                }
                m
            })
            .collect();
        let mut diff = a_linear_matrix(a, n, &self.twist_images());
        for i in 0..n {
            let s = field.sign(i64::from(self.space.degree(i)));
            for p in 0..na {
                for q in 0..na {
                    let c = &a.diff()[(p, q)];
                    if !c.is_zero() {
                        diff[(i * na + p, i * na + q)] += &(&s * c);
                    }
                }
            }
        }
        DgModule::new(Side::Right, a.clone(), space, action, diff).expect("consistent shapes")
    }

    /// The map `V⊗A → W⊗A` given by a degree-0 cycle of `hom_complex(self, target)`.
    pub fn map_from_cycle(&self, target: &TwistedModule, phi: &[FieldElement]) -> Result<ModuleMap> {
        let n = target.underlying();
        let hom = hom_complex_to(self, &n)?;
        hom.require_cycle(phi, 0)?;
        ModuleMap::new(self.underlying(), n.clone(), hom.to_matrix(self, &n, phi))
    }

    /// The identity as a cycle of `hom_complex(self, self)`.
    pub fn identity_cycle(&self) -> Vec<FieldElement> {
        let a = &self.algebra;
        let (n, na) = (self.space.dim(), a.dim());
        let mut phi = vector::zeros(a.field(), n * na * n);
        for j in 0..n {
            for k in 0..na {
                phi[(j * na + k) * n + j] = a.unit()[k].clone();
            }
        }
        phi
    }
}

/// A degree-0 right `A`-linear chain map between dg modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: DgModule,
    pub target: DgModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: DgModule, target: DgModule, matrix: Matrix) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::Presentation("modules over different algebras".into()));
        }
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension("module map has the wrong shape".into()));
        }
        let map = ModuleMap { source, target, matrix };
        map.check().into_result(Error::Axiom)?;
        Ok(map)
    }

    pub fn identity(m: &DgModule) -> ModuleMap {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.algebra().field(), m.dim()) }
    }

    pub fn zero(source: &DgModule, target: &DgModule) -> Result<ModuleMap> {
        ModuleMap::new(source.clone(), target.clone(), Matrix::zeros(source.algebra().field(), target.dim(), source.dim()))
    }

    /// Degree 0, commutes with `d` and with the action.
    pub fn check(&self) -> Certificate {
        let mut cert = Certificate::ok();
        let (s, t, f) = (&self.source, &self.target, &self.matrix);
        for j in 0..s.dim() {
            let col = f.column(j);
            let zero = vector::zeros(t.algebra().field(), t.dim());
            if !t.space().is_homogeneous(&col, s.space().degree(j)) {
                cert.push("map has degree 0", vec![s.space().name(j).to_string()], &col, &zero);
            }
        }
        let df = t.diff().mul(f).expect("shape");
        let fd = f.mul(s.diff()).expect("shape");
        for j in 0..s.dim() {
            cert.expect_eq("d f = f d", &[s.space().name(j)], &df.column(j), &fd.column(j));
        }
        for k in 0..s.algebra().dim() {
            let lhs = f.mul(&s.action()[k]).expect("shape");
            let rhs = t.action()[k].mul(f).expect("shape");
            for j in 0..s.dim() {
                cert.expect_eq(
                    "f(m a) = f(m) a",
                    &[s.space().name(j), s.algebra().space().name(k)],
                    &lhs.column(j),
                    &rhs.column(j),
                );
            }
        }
        cert
    }
}

/// `Hom_A((U⊗A)^{[z]}, M) ≅ Hom(U, M)`, with basis `E(m, u)` as in [`hom_space`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomComplex {
    pub space: GradedSpace,
    pub diff: Matrix,
    pub certificate: Certificate,
}

impl HomComplex {
    pub fn cohomology(&self) -> Result<BTreeMap<i32, usize>> {
        if !self.certificate.is_ok() {
            return Err(Error::Axiom("Hom differential does not square to zero".into()));
        }
        complex::cohomology(&self.space, &self.diff)
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.cohomology()?.values().all(|&h| h == 0))
    }

    pub fn apply(&self, phi: &[FieldElement]) -> Vec<FieldElement> {
        self.diff.mul_vec(phi).expect("length")
    }

    fn require_cycle(&self, phi: &[FieldElement], degree: i32) -> Result<()> {
        if phi.len() != self.space.dim() {
            return Err(Error::Dimension("wrong number of Hom coordinates".into()));
        }
        if !vector::is_zero(phi) && self.space.degree_of(phi) != Some(degree) {
            return Err(Error::Degree(format!("expected a homogeneous element of degree {degree}")));
        }
        if !vector::is_zero(&self.apply(phi)) {
            return Err(Error::Axiom("the Hom element is not closed".into()));
        }
        Ok(())
    }

    /// The `A`-linear extension of `φ` as a matrix `U⊗A → M`.
    fn to_matrix(&self, t: &TwistedModule, m: &DgModule, phi: &[FieldElement]) -> Matrix {
        let n = t.space().dim();
        let images: Vec<Vec<FieldElement>> =
            (0..n).map(|j| (0..m.dim()).map(|b| phi[b * n + j].clone()).collect()).collect();
        let na = t.algebra().dim();
        let mut out = Matrix::zeros(t.algebra().field(), m.dim(), n * na);
        for (j, img) in images.iter().enumerate() {
            for k in 0..na {
                let col = m.action()[k].mul_vec(img).expect("length");
                for (r, c) in col.into_iter().enumerate() {
                    out[(r, j * na + k)] = c;
                }
            }
        }
        out
    }
}

/// `D(φ)(u) = d_M φ(u) - (-1)^{|φ|} φ(z·(u⊗1))`, with `φ` extended `A`-linearly.
pub fn hom_complex_to(t: &TwistedModule, m: &DgModule) -> Result<HomComplex> {
    if m.side() != Side::Right {
        return Err(Error::Presentation("twisted modules map into right modules".into()));
    }
    if t.algebra() != m.algebra() {
        return Err(Error::Presentation("modules over different algebras".into()));
    }
    let a = t.algebra();
    let field = a.field();
    let (nu, nm, na) = (t.space().dim(), m.dim(), a.dim());
    let space = hom_space(t.space(), m.space())?;
    let mut diff = Matrix::zeros(field, nm * nu, nm * nu);
    let x = t.x();
    for b in 0..nm {
        let dm = m.d(&vector::unit(field, nm, b));
        for j in 0..nu {
            let col = b * nu + j;
            for (r, c) in dm.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                diff[(r * nu + j, col)] += c;
            }
            let s = -field.sign(i64::from(space.degree(col)));
            for j2 in 0..nu {
                for k in 0..na {
                    let z = &x[(j * nu + j2) * na + k];
                    if z.is_zero() {
                        continue;
                    }
                    let coef = &(&s * z) * &koszul_sign(field, a.degree(k), t.space().degree(j2));
                    for r in 0..nm {
                        let c = &m.action()[k][(r, b)];
                        if !c.is_zero() {
                            diff[(r * nu + j2, col)] += &(&coef * c);
                        }
                    }
                }
            }
        }
    }
    let mut certificate = Certificate::ok();
    let d2 = diff.mul(&diff)?;
    let zero = vector::zeros(field, nm * nu);
    for j in 0..nm * nu {
        certificate.expect_eq("D^2 = 0", &[space.name(j)], &d2.column(j), &zero);
        let col = diff.column(j);
        if !space.is_homogeneous(&col, space.degree(j) + 1) {
            certificate.push("D has degree +1", vec![space.name(j).to_string()], &col, &zero);
        }
    }
    Ok(HomComplex { space, diff, certificate })
}

/// `Hom_A(M, N)` for twisted modules, on `Hom(V, W⊗A)`.
pub fn hom_complex(m: &TwistedModule, n: &TwistedModule) -> Result<HomComplex> {
    hom_complex_to(m, &n.underlying())
}

/// `ΣM ⊕ N` with `d(sm, n) = (-s dm, f(m) + dn)`.
pub fn dg_cone(f: &ModuleMap) -> Result<DgModule> {
    let (m, n) = (&f.source, &f.target);
    let field = m.algebra().field();
    let (dm, dn) = (m.dim(), n.dim());
    let space = m.space().suspend(1).direct_sum(n.space())?;
    let mut diff = Matrix::zeros(field, dm + dn, dm + dn);
    for j in 0..dm {
        for i in 0..dm {
            diff[(i, j)] = -m.diff()[(i, j)].clone();
        }
        for i in 0..dn {
            diff[(dm + i, j)] = f.matrix[(i, j)].clone();
        }
    }
    for j in 0..dn {
        for i in 0..dn {
            diff[(dm + i, dm + j)] = n.diff()[(i, j)].clone();
        }
    }
    let action = (0..m.algebra().dim())
        .map(|k| block_diagonal(field, &m.action()[k], &n.action()[k]))
        .collect();
    DgModule::new(Side::Right, m.algebra().clone(), space, action, diff)
}

pub fn block_diagonal(field: crate::field::Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = Matrix::zeros(field, ra + rb, ca + cb);
    for i in 0..ra {
        for j in 0..ca {
            out[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..rb {
        for j in 0..cb {
            out[(ra + i, ca + j)] = b[(i, j)].clone();
        }
    }
    out
}

/// The cone of a degree-0 cycle `φ : M → N` as a twisted module on `ΣV ⊕ W`.
pub fn cone(m: &TwistedModule, n: &TwistedModule, phi: &[FieldElement]) -> Result<TwistedModule> {
    let nmod = n.underlying();
    hom_complex_to(m, &nmod)?.require_cycle(phi, 0)?;
    let a = m.algebra();
    let field = a.field();
    let (nv, nw, na) = (m.space().dim(), n.space().dim(), a.dim());
    let space = m.space().suspend(1).direct_sum(n.space())?;
    let mut images = Vec::with_capacity(nv + nw);
    for (j, xj) in m.twist_images().iter().enumerate() {
        let mut img = vector::zeros(field, (nv + nw) * na);
        for (p, c) in xj.iter().enumerate() {
            img[p] = -c.clone();
        }
        for b in 0..nw * na {
            img[nv * na + b] = phi[b * nv + j].clone();
        }
        images.push(img);
    }
    for yj in n.twist_images() {
        let mut img = vector::zeros(field, (nv + nw) * na);
        img[nv * na..].clone_from_slice(&yj);
        images.push(img);
    }
    let x = from_twist_images(&space, a, &images);
    TwistedModule::new(a.clone(), space, x)
        .map_err(|e| Error::Internal(format!("cone twisting element is not Maurer–Cartan: {e}")))
}
