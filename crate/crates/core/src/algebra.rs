//! Finite-dimensional curved dg algebras given by structure constants.

use serde::Serialize;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};
use crate::graded::{hom_space, koszul_sign, tensor, BasisElement, GradedMap, GradedSpace};
use crate::matrix::Matrix;

/// Sparse column of structure constants: `e_i e_j = Σ c e_k` as `(k, c)` pairs.
pub type Product = Vec<(usize, FieldElement)>;

/// A curved dg algebra `(A, d, h)` with an optional degree-0 retraction `ε`.
///
/// Products are stored for every ordered pair of basis vectors at index
/// `i * dim + j`; column `j` of `diff` is `d(e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvedDga {
    space: GradedSpace,
    unit: Vec<FieldElement>,
    table: Vec<Product>,
    diff: Matrix,
    curvature: Vec<FieldElement>,
    retraction: Option<Vec<FieldElement>>,
}

fn sparse(v: &[FieldElement]) -> Product {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
}

impl CurvedDga {
    /// Assembles a presentation from dense product vectors (`products[i * n + j] = e_i e_j`).
    /// Only shapes are validated; use [`CurvedDga::check_axioms`] for the rest.
    pub fn new(
        space: GradedSpace,
        unit: Vec<FieldElement>,
        products: Vec<Vec<FieldElement>>,
        diff: Matrix,
        curvature: Vec<FieldElement>,
        retraction: Option<Vec<FieldElement>>,
    ) -> Result<Self> {
        let n = space.dim();
        if products.len() != n * n || products.iter().any(|p| p.len() != n) {
            return Err(Error::Dimension(format!("multiplication table must hold {n}x{n} vectors of length {n}")));
        }
        let table = products.iter().map(|p| sparse(p)).collect();
        CurvedDga::from_sparse(space, unit, table, diff, curvature, retraction)
    }

    pub fn from_sparse(
        space: GradedSpace,
        unit: Vec<FieldElement>,
        table: Vec<Product>,
        diff: Matrix,
        curvature: Vec<FieldElement>,
        retraction: Option<Vec<FieldElement>>,
    ) -> Result<Self> {
        let n = space.dim();
        let field = space.field();
        let bad_len = |v: &[FieldElement]| v.len() != n;
        if bad_len(&unit) || bad_len(&curvature) || retraction.as_deref().is_some_and(bad_len) {
            return Err(Error::Dimension(format!("unit, curvature and retraction must have length {n}")));
        }
        if table.len() != n * n || table.iter().flatten().any(|(k, _)| *k >= n) {
            return Err(Error::Dimension("multiplication table has the wrong shape".into()));
        }
        if diff.shape() != (n, n) {
            return Err(Error::Dimension(format!("differential must be {n}x{n}")));
        }
        let all = unit
            .iter()
            .chain(&curvature)
            .chain(retraction.iter().flatten())
            .chain(table.iter().flatten().map(|(_, c)| c));
        for x in all {
            if x.field() != field {
                return Err(Error::FieldMismatch(x.field().name(), field.name()));
            }
        }
        if diff.field() != field {
            return Err(Error::FieldMismatch(diff.field().name(), field.name()));
        }
        let table = table.into_iter().map(|p| p.into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect();
        Ok(CurvedDga { space, unit, table, diff, curvature, retraction })
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.space.degree(i)
    }

    pub fn unit(&self) -> &[FieldElement] {
        &self.unit
    }

    pub fn curvature(&self) -> &[FieldElement] {
        &self.curvature
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    /// The differential as a graded map; fails when it is not of degree +1.
    pub fn diff_map(&self) -> Result<GradedMap> {
        GradedMap::new(self.space.clone(), self.space.clone(), 1, self.diff.clone())
    }

    pub fn retraction(&self) -> Option<&[FieldElement]> {
        self.retraction.as_deref()
    }

    pub fn is_curved(&self) -> bool {
        !vector::is_zero(&self.curvature)
    }

    pub fn table(&self) -> &[Product] {
        &self.table
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Product {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<FieldElement> {
        vector::unit(self.field(), self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vec<FieldElement> {
        vector::zeros(self.field(), self.dim())
    }

    pub fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = self.zero_vector();
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    pub fn d(&self, a: &[FieldElement]) -> Vec<FieldElement> {
        self.diff.mul_vec(a).expect("vector length checked by caller")
    }

    /// `[a, b] = ab - (-1)^{|a||b|} ba` for homogeneous `a`, `b` of the given degrees.
    pub fn graded_commutator(&self, a: &[FieldElement], da: i32, b: &[FieldElement], db: i32) -> Vec<FieldElement> {
        let s = koszul_sign(self.field(), da, db);
        let mut out = self.mul(a, b);
        vector::axpy(&mut out, &-s, &self.mul(b, a));
        out
    }

    /// Matrix of `v ↦ a v`.
    pub fn left_mul_matrix(&self, a: &[FieldElement]) -> Matrix {
        let cols: Vec<_> = (0..self.dim()).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols).expect("square")
    }

    /// Matrix of `v ↦ v a`.
    pub fn right_mul_matrix(&self, a: &[FieldElement]) -> Matrix {
        let cols: Vec<_> = (0..self.dim()).map(|j| self.mul(&self.basis_vector(j), a)).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols).expect("square")
    }

    /// Matrix of `v ↦ [b, v]` for `b` homogeneous of degree `deg_b`.
    pub fn commutator_matrix(&self, b: &[FieldElement], deg_b: i32) -> Matrix {
        let cols: Vec<_> = (0..self.dim())
            .map(|j| self.graded_commutator(b, deg_b, &self.basis_vector(j), self.degree(j)))
            .collect();
        Matrix::from_columns(self.field(), self.dim(), &cols).expect("square")
    }

    /// Degree-`d` subspace as a list of basis indices.
    pub fn indices_in_degree(&self, d: i32) -> Vec<usize> {
        self.space.indices_in_degree(d)
    }

    /// Same algebra with a different differential and curvature.
    pub fn with_diff_and_curvature(&self, diff: Matrix, curvature: Vec<FieldElement>) -> Result<CurvedDga> {
        CurvedDga::from_sparse(self.space.clone(), self.unit.clone(), self.table.clone(), diff, curvature, self.retraction.clone())
    }

    /// Attaches (or replaces) a retraction after checking `ε(1) = 1` and `ε` of degree 0.
    pub fn with_retraction(&self, eps: Vec<FieldElement>) -> Result<CurvedDga> {
        check_retraction(self, &eps)?;
        Ok(CurvedDga { retraction: Some(eps), ..self.clone() })
    }

    pub fn without_retraction(&self) -> CurvedDga {
        CurvedDga { retraction: None, ..self.clone() }
    }

    pub fn renamed(&self, space: GradedSpace) -> Result<CurvedDga> {
        if space.degrees() != self.space.degrees() || space.field() != self.field() {
            return Err(Error::InvalidSpace("renaming must keep degrees".into()));
        }
        Ok(CurvedDga { space, ..self.clone() })
    }

    /// Checks every axiom on every basis tuple.
    pub fn check_axioms(&self) -> Certificate {
        let mut cert = Certificate::ok();
        let n = self.dim();
        let field = self.field();
        let name = |i: usize| self.space.name(i).to_string();
        let zero = self.zero_vector();

        if vector::is_zero(&self.unit) {
            cert.push("unit nonzero", vec![], &self.unit, &zero);
        }
        if !self.space.is_homogeneous(&self.unit, 0) {
            cert.push("unit has degree 0", vec![], &self.unit, &zero);
        }
        if !self.space.is_homogeneous(&self.curvature, 2) {
            cert.push("curvature has degree 2", vec![], &self.curvature, &zero);
        }
        for i in 0..n {
            for j in 0..n {
                let p = self.dense_product(i, j);
                if !self.space.is_homogeneous(&p, self.degree(i) + self.degree(j)) {
                    cert.push("multiplication is degree-additive", vec![name(i), name(j)], &p, &zero);
                }
            }
            let di = self.diff.column(i);
            if !self.space.is_homogeneous(&di, self.degree(i) + 1) {
                cert.push("diff has degree +1", vec![name(i)], &di, &zero);
            }
        }
        if let Some(eps) = &self.retraction {
            if let Err(e) = check_retraction(self, eps) {
                cert.push(&format!("retraction: {e}"), vec![], eps, &zero);
            }
        }

        let basis: Vec<_> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            let left = self.mul(&self.unit, &basis[i]);
            cert.expect_eq("unit: 1a = a", &[&name(i)], &left, &basis[i]);
            let right = self.mul(&basis[i], &self.unit);
            cert.expect_eq("unit: a1 = a", &[&name(i)], &right, &basis[i]);
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.dense_product(i, j);
                for k in 0..n {
                    let lhs = self.mul(&ij, &basis[k]);
                    let rhs = self.mul(&basis[i], &self.dense_product(j, k));
                    cert.expect_eq("associativity", &[&name(i), &name(j), &name(k)], &lhs, &rhs);
                }
            }
        }
        for i in 0..n {
            let di = self.d(&basis[i]);
            for j in 0..n {
                let lhs = self.d(&self.dense_product(i, j));
                let mut rhs = self.mul(&di, &basis[j]);
                let tail = self.mul(&basis[i], &self.d(&basis[j]));
                vector::axpy(&mut rhs, &field.sign(i64::from(self.degree(i))), &tail);
                cert.expect_eq("Leibniz", &[&name(i), &name(j)], &lhs, &rhs);
            }
        }
        for i in 0..n {
            let lhs = self.d(&self.d(&basis[i]));
            let rhs = vector::sub(&self.mul(&self.curvature, &basis[i]), &self.mul(&basis[i], &self.curvature));
            cert.expect_eq("d^2 = [h,-]", &[&name(i)], &lhs, &rhs);
        }
        let dh = self.d(&self.curvature);
        cert.expect_eq("d(h) = 0", &[], &dh, &zero);
        cert
    }

    pub fn dense_product(&self, i: usize, j: usize) -> Vec<FieldElement> {
        let mut v = self.zero_vector();
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Whether `ε` is multiplicative, unital and kills `d` (an augmentation).
    pub fn is_augmentation(&self, eps: &[FieldElement]) -> bool {
        let n = self.dim();
        if !vector::dot(eps, &self.unit).is_one() {
            return false;
        }
        for i in 0..n {
            if !vector::dot(eps, &self.diff.column(i)).is_zero() {
                return false;
            }
            for j in 0..n {
                let lhs = vector::dot(eps, &self.dense_product(i, j));
                if lhs != &eps[i] * &eps[j] {
                    return false;
                }
            }
        }
        true
    }
}

fn check_retraction(a: &CurvedDga, eps: &[FieldElement]) -> Result<()> {
    if eps.len() != a.dim() {
        return Err(Error::Dimension("retraction has the wrong length".into()));
    }
    if eps.iter().enumerate().any(|(i, x)| !x.is_zero() && a.degree(i) != 0) {
        return Err(Error::Retraction("retraction must vanish outside degree 0".into()));
    }
    if !vector::dot(eps, &a.unit).is_one() {
        return Err(Error::Retraction("retraction must send the unit to 1".into()));
    }
    Ok(())
}

/// Fluent construction by basis names. Products with the unit are filled in
/// automatically once the unit is named.
pub struct DgaBuilder {
    space: GradedSpace,
    unit: Option<Vec<FieldElement>>,
    unit_index: Option<usize>,
    table: Vec<Vec<FieldElement>>,
    diff: Matrix,
    curvature: Vec<FieldElement>,
    retraction: Option<Vec<FieldElement>>,
    error: Option<Error>,
}

impl DgaBuilder {
    pub fn new(field: Field, basis: &[(&str, i32)]) -> Self {
        let (space, error) = match GradedSpace::from_pairs(field, basis) {
            Ok(s) => (s, None),
            Err(e) => (GradedSpace::zero(field), Some(e)),
        };
        let n = space.dim();
        DgaBuilder {
            table: vec![vector::zeros(field, n); n * n],
            diff: Matrix::zeros(field, n, n),
            curvature: vector::zeros(field, n),
            unit: None,
            unit_index: None,
            retraction: None,
            space,
            error,
        }
    }

    fn index(&mut self, name: &str) -> usize {
        match self.space.index_of(name) {
            Some(i) => i,
            None => {
                self.error.get_or_insert(Error::Presentation(format!("unknown basis element {name:?}")));
                0
            }
        }
    }

    fn combo(&mut self, terms: &[(i64, &str)]) -> Vec<FieldElement> {
        let field = self.space.field();
        let mut v = vector::zeros(field, self.space.dim());
        for &(c, name) in terms {
            let i = self.index(name);
            if i < v.len() {
                v[i] += &field.from_i64(c);
            }
        }
        v
    }

    pub fn unit(mut self, name: &str) -> Self {
        let i = self.index(name);
        self.unit_index = Some(i);
        self.unit = Some(self.combo(&[(1, name)]));
        self
    }

    pub fn mul(mut self, a: &str, b: &str, terms: &[(i64, &str)]) -> Self {
        let (i, j) = (self.index(a), self.index(b));
        let v = self.combo(terms);
        let n = self.space.dim();
        if i < n && j < n {
            self.table[i * n + j] = v;
        }
        self
    }

    pub fn diff(mut self, a: &str, terms: &[(i64, &str)]) -> Self {
        let j = self.index(a);
        let v = self.combo(terms);
        for (i, x) in v.into_iter().enumerate() {
            if j < self.space.dim() {
                self.diff[(i, j)] = x;
            }
        }
        self
    }

    pub fn curvature(mut self, terms: &[(i64, &str)]) -> Self {
        self.curvature = self.combo(terms);
        self
    }

    pub fn retraction(mut self, terms: &[(i64, &str)]) -> Self {
        self.retraction = Some(self.combo(terms));
        self
    }

    pub fn build(mut self) -> Result<CurvedDga> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        let field = self.space.field();
        let n = self.space.dim();
        let unit = self.unit.ok_or_else(|| Error::Presentation("no unit given".into()))?;
        if let Some(u) = self.unit_index {
            for i in 0..n {
                let e = vector::unit(field, n, i);
                self.table[u * n + i] = e.clone();
                self.table[i * n + u] = e;
            }
        }
        CurvedDga::new(self.space, unit, self.table, self.diff, self.curvature, self.retraction)
    }
}

/// The ground field as a curved dg algebra, augmented by the identity.
pub fn ground_algebra(field: Field) -> CurvedDga {
    DgaBuilder::new(field, &[("1", 0)]).unit("1").retraction(&[(1, "1")]).build().expect("ground algebra")
}

/// `A ⊗ B` with `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'`, `d = d⊗1 + 1⊗d`
/// (Koszul-signed) and `h = h⊗1 + 1⊗h`. Basis index of `a_i ⊗ b_j` is `i * dim B + j`.
pub fn tensor_cdga(a: &CurvedDga, b: &CurvedDga) -> Result<CurvedDga> {
    let field = a.field();
    if field != b.field() {
        return Err(Error::FieldMismatch(field.name(), b.field().name()));
    }
    let space = tensor(&a.space, &b.space)?;
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let idx = |i: usize, j: usize| i * nb + j;

    let mut table = vec![Vec::new(); n * n];
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                let ak = a.basis_product(i, k);
                if ak.is_empty() {
                    continue;
                }
                let s = koszul_sign(field, b.degree(j), a.degree(k));
                for l in 0..nb {
                    let bl = b.basis_product(j, l);
                    let mut entry = Vec::with_capacity(ak.len() * bl.len());
                    for (p, x) in ak {
                        for (q, y) in bl {
                            entry.push((idx(*p, *q), &(&s * x) * y));
                        }
                    }
                    entry.sort_by_key(|(k, _)| *k);
                    table[idx(i, j) * n + idx(k, l)] = entry;
                }
            }
        }
    }

    let mut diff = Matrix::zeros(field, n, n);
    for i in 0..na {
        for j in 0..nb {
            let col = idx(i, j);
            for p in 0..na {
                let x = &a.diff[(p, i)];
                if !x.is_zero() {
                    diff[(idx(p, j), col)] += x;
                }
            }
            let s = field.sign(i64::from(a.degree(i)));
            for q in 0..nb {
                let y = &b.diff[(q, j)];
                if !y.is_zero() {
                    diff[(idx(i, q), col)] += &(&s * y);
                }
            }
        }
    }

    let unit = outer(&a.unit, &b.unit);
    let mut curvature = outer(&a.curvature, &b.unit);
    vector::add_assign(&mut curvature, &outer(&a.unit, &b.curvature));
    let retraction = match (&a.retraction, &b.retraction) {
        (Some(ea), Some(eb)) => Some(outer(ea, eb)),
        _ => None,
    };
    CurvedDga::from_sparse(space, unit, table, diff, curvature, retraction)
}

/// Coordinates of `u ⊗ v` in the lexicographic tensor basis.
pub fn outer(u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for x in u {
        for y in v {
            out.push(x * y);
        }
    }
    out
}

/// `End(V)` with composition, zero differential and zero curvature. The
/// elementary map `E(i,j)` sends `v_j` to `v_i` and sits at index `i * dim V + j`.
/// The same algebra in a new basis; `columns[i]` is the `i`-th new basis
/// vector in old coordinates and `space` names it. A stored retraction is carried along.
pub fn change_of_basis(a: &CurvedDga, space: GradedSpace, columns: &[Vec<FieldElement>]) -> Result<CurvedDga> {
    let field = a.field();
    let n = a.dim();
    if space.dim() != n || columns.len() != n {
        return Err(Error::Dimension("a basis change needs one column per basis vector".into()));
    }
    for (i, c) in columns.iter().enumerate() {
        if !vector::is_zero(c) && a.space().degree_of(c) != Some(space.degree(i)) {
            return Err(Error::Degree(format!("new basis vector {} has the wrong degree", space.name(i))));
        }
    }
    let p = Matrix::from_columns(field, n, columns)?;
    let p_inv = p.inverse().ok_or_else(|| Error::InvalidSpace("the new basis vectors are dependent".into()))?;
    let coords = |v: &[FieldElement]| p_inv.mul_vec(v).expect("length");
    let mut products = Vec::with_capacity(n * n);
    for u in columns {
        for v in columns {
            products.push(coords(&a.mul(u, v)));
        }
    }
    let diff_cols: Vec<_> = columns.iter().map(|u| coords(&a.d(u))).collect();
    let diff = Matrix::from_columns(field, n, &diff_cols)?;
    let eps = a.retraction().map(|e| columns.iter().map(|c| vector::dot(e, c)).collect());
    CurvedDga::new(space, coords(a.unit()), products, diff, coords(a.curvature()), eps)
}

pub fn end_algebra(v: &GradedSpace) -> CurvedDga {
    let field = v.field();
    let n = v.dim();
    let space = hom_space(v, v).expect("same field");
    let m = n * n;
    let mut table = vec![Vec::new(); m * m];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[(i * n + j) * m + (j * n + l)] = vec![(i * n + l, field.one())];
            }
        }
    }
    let mut unit = vector::zeros(field, m);
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    let retraction = (n == 1).then(|| vec![field.one()]);
    CurvedDga::from_sparse(space, unit, table, Matrix::zeros(field, m, m), vector::zeros(field, m), retraction)
        .expect("endomorphism algebra")
}

/// The convolution algebra `End(V) ⊗ A`; element `E(i,j) ⊗ a_k` sits at `(i * dim V + j) * dim A + k`.
pub fn endo_convolution(v: &GradedSpace, a: &CurvedDga) -> Result<CurvedDga> {
    tensor_cdga(&end_algebra(v), a)
}

/// `a ·op b = (-1)^{|a||b|} ba`, same differential, curvature `-h`.
pub fn opposite(a: &CurvedDga) -> CurvedDga {
    let field = a.field();
    let n = a.dim();
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            let s = koszul_sign(field, a.degree(i), a.degree(j));
            table[i * n + j] = a.basis_product(j, i).iter().map(|(k, c)| (*k, &s * c)).collect();
        }
    }
    CurvedDga {
        space: a.space.clone(),
        unit: a.unit.clone(),
        table,
        diff: a.diff.clone(),
        curvature: vector::neg(&a.curvature),
        retraction: a.retraction.clone(),
    }
}

/// The decomposition of a presentation relative to a retraction `ε`:
/// `Ā = ker ε` with the induced basis, and the five structure maps
/// `m_Ā, m_k, d_Ā, d_k, h_Ā` with `āb̄ = m_Ā(ā,b̄) + m_k(ā,b̄)·1`,
/// `d(ā) = d_Ā(ā) + d_k(ā)·1` and `h = h_Ā`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractionSplit {
    pub retraction: Vec<FieldElement>,
    /// Basis of `Ā`, with names taken from the original basis vectors they replace.
    #[serde(skip)]
    pub abar: GradedSpace,
    /// Each `Ā` basis vector as a vector of `A`.
    pub abar_vectors: Vec<Vec<FieldElement>>,
    /// Original basis index that each `Ā` coordinate is read from.
    pub coordinate_columns: Vec<usize>,
    /// `m_Ā(ā_i, ā_j)` at index `i * dim Ā + j`.
    pub m_abar: Vec<Vec<FieldElement>>,
    pub m_k: Vec<FieldElement>,
    #[serde(skip)]
    pub d_abar: Matrix,
    pub d_k: Vec<FieldElement>,
    pub h_abar: Vec<FieldElement>,
    #[serde(skip)]
    source_space: GradedSpace,
    unit: Vec<FieldElement>,
}

impl RetractionSplit {
    pub fn dim_abar(&self) -> usize {
        self.abar.dim()
    }

    /// Coordinates in `Ā` of `π(v) = v - ε(v)·1`.
    pub fn project(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        // Each Ā basis vector has a 1 in its coordinate column and zeros in
        // the others, and so does the unit after subtracting ε(v)·1.
        let eps = vector::dot(&self.retraction, v);
        let mut w = v.to_vec();
        vector::axpy(&mut w, &-eps, &self.unit);
        self.coordinate_columns.iter().map(|&c| w[c].clone()).collect()
    }

    /// `ε(v)·1 + Σ c_i ā_i` as a vector of `A`.
    pub fn lift(&self, scalar: &FieldElement, abar: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = vector::scale(scalar, &self.unit);
        for (c, b) in abar.iter().zip(&self.abar_vectors) {
            if !c.is_zero() {
                vector::axpy(&mut v, c, b);
            }
        }
        v
    }

    /// Rebuilds the presentation in the original basis from the five components alone.
    pub fn reassemble(&self) -> Result<CurvedDga> {
        let field = self.abar.field();
        let n = self.source_space.dim();
        let m = self.dim_abar();
        let decompose = |i: usize| {
            let e = vector::unit(field, n, i);
            (self.retraction[i].clone(), self.project(&e))
        };
        let parts: Vec<_> = (0..n).map(decompose).collect();
        let mut products = Vec::with_capacity(n * n);
        for (si, ai) in &parts {
            for (sj, aj) in &parts {
                let mut scalar = si * sj;
                let mut bar = vector::scale(si, aj);
                vector::axpy(&mut bar, sj, ai);
                for (p, x) in ai.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (q, y) in aj.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        let xy = x * y;
                        vector::axpy(&mut bar, &xy, &self.m_abar[p * m + q]);
                        scalar += &(&xy * &self.m_k[p * m + q]);
                    }
                }
                products.push(self.lift(&scalar, &bar));
            }
        }
        let mut cols = Vec::with_capacity(n);
        for (_, ai) in &parts {
            let bar = self.d_abar.mul_vec(ai)?;
            let scalar = vector::dot(&self.d_k, ai);
            cols.push(self.lift(&scalar, &bar));
        }
        let diff = Matrix::from_columns(field, n, &cols)?;
        let curvature = self.lift(&field.zero(), &self.h_abar);
        CurvedDga::new(self.source_space.clone(), self.unit.clone(), products, diff, curvature, Some(self.retraction.clone()))
    }
}

/// Splits `A` along `ε` (the algebra's stored retraction when `eps` is `None`).
pub fn split_by_retraction(a: &CurvedDga, eps: Option<&[FieldElement]>) -> Result<RetractionSplit> {
    let eps = match eps.or(a.retraction()) {
        Some(e) => e.to_vec(),
        None => return Err(Error::Retraction("no retraction given".into())),
    };
    check_retraction(a, &eps)?;
    let field = a.field();
    let n = a.dim();
    // ker ε has the basis e_f - (ε_f / ε_p) e_p over the columns f other than
    // the first column p where ε is nonzero; each vector is 1 at its own column
    // and 0 at the others, so coordinates can be read off directly.
    let pivot = eps.iter().position(|x| !x.is_zero()).expect("ε(1) = 1");
    let free: Vec<usize> = (0..n).filter(|&c| c != pivot).collect();
    let inv = eps[pivot].inv();
    let kernel: Vec<Vec<FieldElement>> = free
        .iter()
        .map(|&f| {
            let mut v = vector::unit(field, n, f);
            v[pivot] = -(&eps[f] * &inv);
            v
        })
        .collect();

    let basis: Vec<BasisElement> = free
        .iter()
        .map(|&c| BasisElement { name: a.space.name(c).to_string(), degree: a.degree(c) })
        .collect();
    let abar = GradedSpace::new(field, basis)?;
    let mut split = RetractionSplit {
        retraction: eps.clone(),
        abar,
        abar_vectors: kernel,
        coordinate_columns: free,
        m_abar: Vec::new(),
        m_k: Vec::new(),
        d_abar: Matrix::zeros(field, 0, 0),
        d_k: Vec::new(),
        h_abar: Vec::new(),
        source_space: a.space.clone(),
        unit: a.unit.clone(),
    };
    let m = split.dim_abar();
    for i in 0..m {
        for j in 0..m {
            let p = a.mul(&split.abar_vectors[i], &split.abar_vectors[j]);
            split.m_k.push(vector::dot(&eps, &p));
            split.m_abar.push(split.project(&p));
        }
    }
    let mut cols = Vec::with_capacity(m);
    for i in 0..m {
        let dv = a.d(&split.abar_vectors[i]);
        split.d_k.push(vector::dot(&eps, &dv));
        cols.push(split.project(&dv));
    }
    split.d_abar = Matrix::from_columns(field, m, &cols)?;
    split.h_abar = split.project(a.curvature());
    Ok(split)
}

/// A strict map of curved dg algebras, as a matrix in the two bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    pub source: CurvedDga,
    pub target: CurvedDga,
    pub matrix: Matrix,
}

impl AlgebraMap {
    pub fn new(source: CurvedDga, target: CurvedDga, matrix: Matrix) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension("algebra map matrix has the wrong shape".into()));
        }
        Ok(AlgebraMap { source, target, matrix })
    }

    pub fn identity(a: &CurvedDga) -> Self {
        AlgebraMap { source: a.clone(), target: a.clone(), matrix: Matrix::identity(a.field(), a.dim()) }
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.matrix.mul_vec(v).expect("length checked")
    }

    /// Degree 0, unital, multiplicative, commutes with `d`, preserves `h`.
    pub fn check(&self) -> Certificate {
        let mut cert = Certificate::ok();
        let (s, t) = (&self.source, &self.target);
        let zero = t.zero_vector();
        for j in 0..s.dim() {
            let col = self.matrix.column(j);
            if !t.space().is_homogeneous(&col, s.degree(j)) {
                cert.push("map has degree 0", vec![s.space().name(j).into()], &col, &zero);
            }
        }
        cert.expect_eq("f(1) = 1", &[], &self.apply(s.unit()), t.unit());
        cert.expect_eq("f(h) = h", &[], &self.apply(s.curvature()), t.curvature());
        for i in 0..s.dim() {
            let ei = s.basis_vector(i);
            let fi = self.apply(&ei);
            cert.expect_eq("f d = d f", &[s.space().name(i)], &self.apply(&s.d(&ei)), &t.d(&fi));
            for j in 0..s.dim() {
                let fj = self.apply(&s.basis_vector(j));
                cert.expect_eq(
                    "f(ab) = f(a)f(b)",
                    &[s.space().name(i), s.space().name(j)],
                    &self.apply(&s.dense_product(i, j)),
                    &t.mul(&fi, &fj),
                );
            }
        }
        cert
    }

    /// `1 ⊗ f : C ⊗ A → C ⊗ B`.
    pub fn tensor_left(&self, c: &CurvedDga) -> Result<AlgebraMap> {
        let id = GradedMap::identity(c.space());
        let f = GradedMap::new(self.source.space().clone(), self.target.space().clone(), 0, self.matrix.clone())?;
        let m = crate::graded::koszul_apply(&id, &f)?;
        AlgebraMap::new(tensor_cdga(c, &self.source)?, tensor_cdga(c, &self.target)?, m.matrix().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn a0(field: Field) -> CurvedDga {
        DgaBuilder::new(field, &[("1", 0), ("x", 1)]).unit("1").retraction(&[(1, "1")]).build().unwrap()
    }

    #[test]
    fn small_example_certifies() {
        assert!(a0(f3()).check_axioms().is_ok());
    }

    #[test]
    fn degree_violation_is_reported() {
        let a = DgaBuilder::new(f3(), &[("1", 0), ("x", 1)]).unit("1").diff("x", &[(1, "1")]).build().unwrap();
        let cert = a.check_axioms();
        assert!(cert.has("diff has degree +1"));
    }

    #[test]
    fn truncated_cube_with_square_differential_is_a_dga() {
        // k<x>/x^3, |x| = 1, d(x) = x^2: d(x·x) = 0 and dx·x - x·dx = x^3 - x^3 = 0,
        // so Leibniz holds on (x, x) and on every other pair.
        let a = DgaBuilder::new(f3(), &[("1", 0), ("x", 1), ("x2", 2)])
            .unit("1")
            .mul("x", "x", &[(1, "x2")])
            .diff("x", &[(1, "x2")])
            .build()
            .unwrap();
        assert!(a.check_axioms().is_ok());
    }

    #[test]
    fn leibniz_failure_names_the_pair() {
        // d(1) = x breaks d(1·1) = d(1)·1 + 1·d(1).
        let a = DgaBuilder::new(f3(), &[("1", 0), ("x", 1)]).unit("1").diff("1", &[(1, "x")]).build().unwrap();
        let cert = a.check_axioms();
        assert!(cert.violations.iter().any(|v| v.identity == "Leibniz" && v.witness == ["1", "1"]));
    }

    #[test]
    fn tensor_with_ground_field() {
        let a = a0(f3());
        let t = tensor_cdga(&a, &ground_algebra(f3())).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.table(), a.table());
        assert!(t.check_axioms().is_ok());
    }

    #[test]
    fn square_of_small_example() {
        let a = a0(f3());
        let t = tensor_cdga(&a, &a).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(!t.is_curved());
        assert!(t.check_axioms().is_ok());
        // (x⊗1)(1⊗x) = x⊗x while (1⊗x)(x⊗1) = -x⊗x.
        assert_eq!(t.dense_product(2, 1), vec![f3().zero(), f3().zero(), f3().zero(), f3().one()]);
        assert_eq!(t.dense_product(1, 2)[3], f3().from_i64(-1));
    }

    #[test]
    fn endo_convolution_small() {
        let field = f3();
        let a = a0(field);
        let k = GradedSpace::from_pairs(field, &[("u", 0)]).unwrap();
        let e = endo_convolution(&k, &a).unwrap();
        assert_eq!(e.table(), a.table());
        assert_eq!(e.indices_in_degree(1), vec![1]);
        let v = GradedSpace::from_pairs(field, &[("u", 0), ("w", 1)]).unwrap();
        let e2 = endo_convolution(&v, &a).unwrap();
        assert_eq!(e2.dim(), 8);
        assert!(e2.check_axioms().is_ok());
    }

    #[test]
    fn split_small_example() {
        let a = a0(f3());
        let s = split_by_retraction(&a, None).unwrap();
        assert_eq!(s.m_k, vec![f3().zero()]);
        assert_eq!(s.reassemble().unwrap(), a);
    }

    #[test]
    fn split_nonaugmented() {
        let a = DgaBuilder::new(f3(), &[("1", 0), ("y", 0)])
            .unit("1")
            .mul("y", "y", &[(1, "1")])
            .retraction(&[(1, "1")])
            .build()
            .unwrap();
        assert!(a.check_axioms().is_ok());
        let s = split_by_retraction(&a, None).unwrap();
        assert_eq!(s.m_k, vec![f3().one()]);
        assert_eq!(s.reassemble().unwrap(), a);
    }

    #[test]
    fn split_with_mixed_retraction() {
        let field = f3();
        let a = DgaBuilder::new(field, &[("1", 0), ("y", 0), ("x", 1)])
            .unit("1")
            .mul("y", "y", &[(1, "1")])
            .mul("y", "x", &[(1, "x")])
            .mul("x", "y", &[(1, "x")])
            .build()
            .unwrap();
        assert!(a.check_axioms().is_ok());
        let eps = vec![field.one(), field.from_i64(2), field.zero()];
        let s = split_by_retraction(&a, Some(&eps)).unwrap();
        assert_eq!(s.reassemble().unwrap(), a.with_retraction(eps).unwrap());
    }

    #[test]
    fn bad_retraction_rejected() {
        let a = a0(f3()).without_retraction();
        let z = vec![f3().zero(), f3().zero()];
        assert!(split_by_retraction(&a, Some(&z)).is_err());
        assert!(split_by_retraction(&a, None).is_err());
    }

    #[test]
    fn opposite_is_involutive() {
        let a = a0(f3());
        assert_eq!(opposite(&opposite(&a)), a);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(opposite(&a0(f2)).table(), a0(f2).table());
    }

    #[test]
    fn builder_rejects_unknown_names() {
        assert!(DgaBuilder::new(f3(), &[("1", 0)]).unit("u").build().is_err());
    }
}
