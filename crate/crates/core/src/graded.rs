//! Cohomologically graded vector spaces with named bases, homogeneous maps,
//! and the Koszul sign rule.
//!
//! Conventions: `(ΣV)^i = V^{i+1}`, so suspending lowers the degree label of
//! each basis vector by one; `(V*)^i = (V^{-i})*`. Every sign in the crate is
//! produced by [`koszul_sign`].

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;

/// `(-1)^{p q}`: the sign for moving something of degree `p` past something of degree `q`.
pub fn koszul_sign(field: Field, p: i32, q: i32) -> FieldElement {
    field.sign(i64::from(p) * i64::from(q))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

/// A finite-dimensional graded vector space with an ordered, named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    basis: Vec<BasisElement>,
}

impl GradedSpace {
    pub fn new(field: Field, basis: Vec<BasisElement>) -> Result<Self> {
        let mut seen = HashSet::new();
        for b in &basis {
            if !seen.insert(b.name.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate basis name {:?}", b.name)));
            }
        }
        Ok(GradedSpace { field, basis })
    }

    /// Shorthand for tests and fixtures: `&[("x", 1), ...]`.
    pub fn from_pairs(field: Field, pairs: &[(&str, i32)]) -> Result<Self> {
        GradedSpace::new(
            field,
            pairs.iter().map(|&(n, d)| BasisElement { name: n.to_string(), degree: d }).collect(),
        )
    }

    pub fn zero(field: Field) -> Self {
        GradedSpace { field, basis: Vec::new() }
    }

    /// The ground field as a graded space concentrated in degree 0.
    pub fn ground(field: Field) -> Self {
        GradedSpace { field, basis: vec![BasisElement { name: "1".into(), degree: 0 }] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Indices of basis vectors of the given degree, in basis order.
    pub fn indices_in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == d).collect()
    }

    /// `degree -> dimension`, only for degrees that occur.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    /// Whether a coordinate vector is homogeneous of the given degree.
    pub fn is_homogeneous(&self, v: &[FieldElement], degree: i32) -> bool {
        v.iter().zip(&self.basis).all(|(x, b)| x.is_zero() || b.degree == degree)
    }

    /// Degree of a nonzero homogeneous vector; `None` for zero or inhomogeneous vectors.
    pub fn degree_of(&self, v: &[FieldElement]) -> Option<i32> {
        let mut deg = None;
        for (x, b) in v.iter().zip(&self.basis) {
            if x.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(b.degree),
                Some(d) if d != b.degree => return None,
                _ => {}
            }
        }
        deg
    }

    /// `Σ^n V`, with `(Σ^n V)^i = V^{i+n}`.
    pub fn suspend(&self, n: i32) -> GradedSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement { name: shift_name(&b.name, n), degree: b.degree - n })
            .collect();
        GradedSpace { field: self.field, basis }
    }

    pub fn dual(&self) -> GradedSpace {
        dual_with_order(self).0
    }

    /// Direct sum with the basis of `self` first.
    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        same_field(self.field, other.field)?;
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        GradedSpace::new(self.field, basis)
    }

    /// Renames every basis vector with a prefix, keeping degrees.
    pub fn prefixed(&self, prefix: &str) -> GradedSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement { name: format!("{prefix}{}", b.name), degree: b.degree })
            .collect();
        GradedSpace { field: self.field, basis }
    }
}

/// The dual basis: names get a trailing `*`, degrees are negated, and the
/// basis is sorted by degree and then by original name. Also returns, for each
/// dual basis vector, the index of the original vector it is dual to.
pub fn dual_with_order(v: &GradedSpace) -> (GradedSpace, Vec<usize>) {
    let mut order: Vec<usize> = (0..v.dim()).collect();
    order.sort_by(|&a, &b| {
        (-v.basis[a].degree, &v.basis[a].name).cmp(&(-v.basis[b].degree, &v.basis[b].name))
    });
    let basis = order
        .iter()
        .map(|&i| BasisElement { name: format!("{}*", v.basis[i].name), degree: -v.basis[i].degree })
        .collect();
    (GradedSpace { field: v.field, basis }, order)
}

/// Decorates a name with a suspension shift, merging with an existing one so
/// that `Σ^a Σ^b V` and `Σ^{a+b} V` get identical names.
fn shift_name(name: &str, n: i32) -> String {
    let (base, existing) = parse_shift(name);
    let total = existing + n;
    if total == 0 {
        base.to_string()
    } else {
        format!("s^{total}({base})")
    }
}

fn parse_shift(name: &str) -> (&str, i32) {
    if let Some(rest) = name.strip_prefix("s^") {
        if let Some(open) = rest.find('(') {
            if let (Ok(k), true) = (rest[..open].parse::<i32>(), rest.ends_with(')')) {
                return (&rest[open + 1..rest.len() - 1], k);
            }
        }
    }
    (name, 0)
}

fn same_field(a: Field, b: Field) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch(a.name(), b.name()));
    }
    Ok(())
}

pub fn suspend(v: &GradedSpace, n: i32) -> GradedSpace {
    v.suspend(n)
}

pub fn dual(v: &GradedSpace) -> GradedSpace {
    v.dual()
}

/// Tensor product; the basis is lexicographic in `(i, j)` with `v_i ⊗ w_j`
/// at position `i * dim W + j`.
pub fn tensor(v: &GradedSpace, w: &GradedSpace) -> Result<GradedSpace> {
    same_field(v.field, w.field)?;
    let mut basis = Vec::with_capacity(v.dim() * w.dim());
    for a in &v.basis {
        for b in &w.basis {
            basis.push(BasisElement { name: format!("({},{})", a.name, b.name), degree: a.degree + b.degree });
        }
    }
    Ok(GradedSpace { field: v.field, basis })
}

/// `Hom(V, W)` with elementary maps `E(w_i, v_j)` at position `i * dim V + j`,
/// of degree `|w_i| - |v_j|`.
pub fn hom_space(v: &GradedSpace, w: &GradedSpace) -> Result<GradedSpace> {
    same_field(v.field, w.field)?;
    let mut basis = Vec::with_capacity(v.dim() * w.dim());
    for b in &w.basis {
        for a in &v.basis {
            basis.push(BasisElement { name: format!("E({},{})", b.name, a.name), degree: b.degree - a.degree });
        }
    }
    Ok(GradedSpace { field: v.field, basis })
}

/// A homogeneous linear map. Column `j` of the matrix is the image of the
/// `j`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    matrix: Matrix,
}

impl GradedMap {
    pub fn new(source: GradedSpace, target: GradedSpace, degree: i32, matrix: Matrix) -> Result<Self> {
        same_field(source.field, target.field)?;
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension(format!(
                "matrix {:?} for a map from dimension {} to {}",
                matrix.shape(),
                source.dim(),
                target.dim()
            )));
        }
        for j in 0..source.dim() {
            for i in 0..target.dim() {
                if !matrix[(i, j)].is_zero() && target.degree(i) != source.degree(j) + degree {
                    return Err(Error::Degree(format!(
                        "entry {} -> {} is not of degree {degree}",
                        source.name(j),
                        target.name(i)
                    )));
                }
            }
        }
        Ok(GradedMap { source, target, degree, matrix })
    }

    pub fn identity(v: &GradedSpace) -> Self {
        GradedMap { source: v.clone(), target: v.clone(), degree: 0, matrix: Matrix::identity(v.field, v.dim()) }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The block from source degree `d` to target degree `d + degree`.
    pub fn block(&self, d: i32) -> Matrix {
        let cols = self.source.indices_in_degree(d);
        let rows = self.target.indices_in_degree(d + self.degree);
        self.matrix.select(&rows, &cols)
    }

    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::Dimension("composing maps with mismatched spaces".into()));
        }
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Dimension("adding maps of different shapes".into()));
        }
        Ok(GradedMap { matrix: self.matrix.add(&other.matrix)?, ..self.clone() })
    }
}

/// `(f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w)`.
pub fn koszul_apply(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    let field = f.source.field;
    same_field(field, g.source.field)?;
    let source = tensor(&f.source, &g.source)?;
    let target = tensor(&f.target, &g.target)?;
    let (n_src_g, n_tgt_g) = (g.source.dim(), g.target.dim());
    let mut m = Matrix::zeros(field, target.dim(), source.dim());
    for a in 0..f.source.dim() {
        let sign = koszul_sign(field, g.degree, f.source.degree(a));
        for b in 0..n_src_g {
            let col = a * n_src_g + b;
            for i in 0..f.target.dim() {
                let x = &f.matrix[(i, a)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n_tgt_g {
                    let y = &g.matrix[(j, b)];
                    if !y.is_zero() {
                        m[(i * n_tgt_g + j, col)] = &(&sign * x) * y;
                    }
                }
            }
        }
    }
    GradedMap::new(source, target, f.degree + g.degree, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn suspension_orientation() {
        let v = GradedSpace::from_pairs(f3(), &[("v", 1)]).unwrap();
        assert_eq!(v.suspend(-1).degree(0), 2);
        assert_eq!(v.suspend(1).degree(0), 0);
        assert_eq!(v.suspend(0), v);
    }

    #[test]
    fn suspension_composes_names() {
        let v = GradedSpace::from_pairs(f3(), &[("a", 0), ("b", 3)]).unwrap();
        assert_eq!(v.suspend(2).suspend(-5), v.suspend(-3));
        assert_eq!(v.suspend(2).suspend(-2), v);
    }

    #[test]
    fn bar_generator_degree() {
        // Σ^{-1} of the dual of {x: 1} sits in degree 0.
        let abar = GradedSpace::from_pairs(f3(), &[("x", 1)]).unwrap();
        assert_eq!(abar.dual().suspend(-1).degree(0), 0);
    }

    #[test]
    fn dual_examples() {
        let v = GradedSpace::from_pairs(f3(), &[("x", 1)]).unwrap();
        assert_eq!(v.dual().basis(), &[BasisElement { name: "x*".into(), degree: -1 }]);
        let w = GradedSpace::from_pairs(f3(), &[("a", 0), ("b", 2)]).unwrap();
        let d = w.dual();
        assert_eq!(d.graded_dims(), BTreeMap::from([(-2, 1), (0, 1)]));
        assert_eq!(d.dual().graded_dims(), w.graded_dims());
    }

    #[test]
    fn tensor_examples() {
        let v = GradedSpace::from_pairs(f3(), &[("a", 0), ("b", 1)]).unwrap();
        let w = GradedSpace::from_pairs(f3(), &[("c", 0), ("d", 1), ("e", 2)]).unwrap();
        assert_eq!(tensor(&v, &w).unwrap().dim(), 6);
        let k = GradedSpace::ground(f3());
        assert_eq!(tensor(&k, &w).unwrap().degrees(), w.degrees());
        let x = GradedSpace::from_pairs(f3(), &[("x", 1)]).unwrap();
        let t = GradedSpace::from_pairs(f3(), &[("t", 0)]).unwrap();
        let xt = tensor(&x, &t).unwrap();
        assert_eq!(xt.basis(), &[BasisElement { name: "(x,t)".into(), degree: 1 }]);
        assert!(tensor(&x, &GradedSpace::ground(Field::Rationals)).is_err());
    }

    #[test]
    fn hom_examples() {
        let k = GradedSpace::ground(f3());
        let v = GradedSpace::from_pairs(f3(), &[("a", 0), ("b", 1)]).unwrap();
        assert_eq!(hom_space(&k, &v).unwrap().degrees(), v.degrees());
        let s = GradedSpace::from_pairs(f3(), &[("v", 0)]).unwrap();
        let t = GradedSpace::from_pairs(f3(), &[("w", 1)]).unwrap();
        assert_eq!(hom_space(&s, &t).unwrap().degrees(), vec![1]);
    }

    #[test]
    fn koszul_sign_on_odd_pair() {
        let field = f3();
        let v = GradedSpace::from_pairs(field, &[("v", 1)]).unwrap();
        let w = GradedSpace::from_pairs(field, &[("w", 0)]).unwrap();
        let w1 = GradedSpace::from_pairs(field, &[("w'", 1)]).unwrap();
        let id = GradedMap::identity(&v);
        let g = GradedMap::new(w, w1, 1, Matrix::identity(field, 1)).unwrap();
        let fg = koszul_apply(&id, &g).unwrap();
        assert_eq!(fg.matrix()[(0, 0)], field.from_i64(-1));
        let ii = koszul_apply(&id, &GradedMap::identity(&v)).unwrap();
        assert_eq!(ii.matrix(), &Matrix::identity(field, 1));
    }

    #[test]
    fn tensor_differential_squares_to_zero() {
        // C = span{c0 (deg 0), c1 (deg 1)}, d c0 = c1.
        let field = f3();
        let c = GradedSpace::from_pairs(field, &[("c0", 0), ("c1", 1)]).unwrap();
        let d = GradedMap::new(c.clone(), c.clone(), 1, Matrix::from_i64(field, &[&[0, 0], &[1, 0]])).unwrap();
        let id = GradedMap::identity(&c);
        let total = koszul_apply(&d, &id).unwrap().add(&koszul_apply(&id, &d).unwrap()).unwrap();
        assert!(total.compose(&total).unwrap().matrix().is_zero());
    }

    #[test]
    fn map_degree_validation() {
        let field = f3();
        let c = GradedSpace::from_pairs(field, &[("c0", 0), ("c1", 1)]).unwrap();
        assert!(GradedMap::new(c.clone(), c.clone(), 1, Matrix::identity(field, 2)).is_err());
        let d = GradedMap::new(c.clone(), c, 1, Matrix::from_i64(field, &[&[0, 0], &[2, 0]])).unwrap();
        assert_eq!(d.block(0).shape(), (1, 1));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::from_pairs(f3(), &[("a", 0), ("a", 1)]).is_err());
    }
}
