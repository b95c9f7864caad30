//! JSON files for algebras, modules and module maps. Scalars are strings
//! (`"2/3"`, `"4"`), linear combinations are maps from basis names to scalars.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::CurvedDga;
use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};
use crate::graded::{BasisElement, GradedSpace};
use crate::matrix::Matrix;
use crate::module::{DgModule, Side};
use crate::twisted::{ModuleMap, TwistedModule};

pub type Terms = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulEntry {
    pub left: String,
    pub right: String,
    pub terms: Terms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageEntry {
    pub of: String,
    pub terms: Terms,
}

/// Products not listed are zero, except that when the unit is a basis vector
/// its products are filled in. An empty basis is the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    pub basis: Vec<BasisElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Terms>,
    #[serde(default)]
    pub mul: Vec<MulEntry>,
    #[serde(default)]
    pub diff: Vec<ImageEntry>,
    #[serde(default)]
    pub curvature: Terms,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retraction: Option<Terms>,
}

pub fn combination(space: &GradedSpace, terms: &Terms) -> Result<Vec<FieldElement>> {
    let field = space.field();
    let mut v = vector::zeros(field, space.dim());
    for (name, c) in terms {
        let i = space.index_of(name).ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))?;
        v[i] += &field.parse(c)?;
    }
    Ok(v)
}

pub fn terms_of(space: &GradedSpace, v: &[FieldElement]) -> Terms {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (space.name(i).to_string(), c.to_string()))
        .collect()
}

fn index(space: &GradedSpace, name: &str) -> Result<usize> {
    space.index_of(name).ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))
}

impl AlgebraFile {
    /// Builds the algebra; `default_field` is used when the file names none.
    /// Axioms are not checked here.
    pub fn build(&self, default_field: Field) -> Result<CurvedDga> {
        let field = self.field.unwrap_or(default_field);
        let space = GradedSpace::new(field, self.basis.clone())?;
        let n = space.dim();
        if n == 0 {
            // An empty basis stands for the ground field.
            return Ok(crate::algebra::ground_algebra(field));
        }
        let unit = match &self.unit {
            Some(t) => combination(&space, t)?,
            None => vector::unit(field, n, 0),
        };
        let mut products = vec![vector::zeros(field, n); n * n];
        let mut listed = vec![false; n * n];
        for e in &self.mul {
            let (i, j) = (index(&space, &e.left)?, index(&space, &e.right)?);
            products[i * n + j] = combination(&space, &e.terms)?;
            listed[i * n + j] = true;
        }
        let unit_basis = (0..n).find(|&u| unit == vector::unit(field, n, u));
        if let Some(u) = unit_basis {
            for b in 0..n {
                for (i, j) in [(u, b), (b, u)] {
                    if !listed[i * n + j] {
                        products[i * n + j] = vector::unit(field, n, b);
                    }
                }
            }
        }
        let mut diff = Matrix::zeros(field, n, n);
        for e in &self.diff {
            let j = index(&space, &e.of)?;
            for (i, c) in combination(&space, &e.terms)?.into_iter().enumerate() {
                diff[(i, j)] = c;
            }
        }
        let curvature = combination(&space, &self.curvature)?;
        let retraction = self.retraction.as_ref().map(|t| combination(&space, t)).transpose()?;
        CurvedDga::new(space, unit, products, diff, curvature, retraction)
    }

    pub fn from_algebra(a: &CurvedDga) -> AlgebraFile {
        let s = a.space();
        let n = a.dim();
        let mut mul = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = a.dense_product(i, j);
                if !vector::is_zero(&p) {
                    mul.push(MulEntry { left: s.name(i).into(), right: s.name(j).into(), terms: terms_of(s, &p) });
                }
            }
        }
        let diff = (0..n)
            .filter_map(|j| {
                let col = a.diff().column(j);
                (!vector::is_zero(&col)).then(|| ImageEntry { of: s.name(j).into(), terms: terms_of(s, &col) })
            })
            .collect();
        AlgebraFile {
            field: Some(a.field()),
            basis: s.basis().to_vec(),
            unit: Some(terms_of(s, a.unit())),
            mul,
            diff,
            curvature: terms_of(s, a.curvature()),
            retraction: a.retraction().map(|e| terms_of(s, e)),
        }
    }
}

/// One term `E(row, col)⊗a` of a twisting element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistEntry {
    pub row: String,
    pub col: String,
    pub a: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModuleFile {
    /// `(V⊗A)^{[x]}`.
    Twisted {
        basis: Vec<BasisElement>,
        #[serde(default)]
        x: Vec<TwistEntry>,
    },
    /// A right dg module: `m·a` for each listed pair, zero otherwise; the unit acts as the identity.
    Dg {
        basis: Vec<BasisElement>,
        #[serde(default)]
        diff: Vec<ImageEntry>,
        #[serde(default)]
        action: Vec<ActionEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub of: String,
    pub a: String,
    pub terms: Terms,
}

/// A parsed module: twisted modules keep their presentation.
#[derive(Clone, Debug)]
pub enum LoadedModule {
    Twisted(TwistedModule),
    Dg(DgModule),
}

impl LoadedModule {
    pub fn dg(&self) -> DgModule {
        match self {
            LoadedModule::Twisted(t) => t.underlying(),
            LoadedModule::Dg(m) => m.clone(),
        }
    }

    pub fn twisted(&self) -> Result<&TwistedModule> {
        match self {
            LoadedModule::Twisted(t) => Ok(t),
            LoadedModule::Dg(_) => Err(Error::Presentation("expected a twisted module".into())),
        }
    }
}

impl ModuleFile {
    pub fn build(&self, a: &CurvedDga) -> Result<LoadedModule> {
        let field = a.field();
        match self {
            ModuleFile::Twisted { basis, x } => {
                let v = GradedSpace::new(field, basis.clone())?;
                let (n, na) = (v.dim(), a.dim());
                let mut coords = vector::zeros(field, n * n * na);
                for e in x {
                    let (i, j, k) = (index(&v, &e.row)?, index(&v, &e.col)?, index(a.space(), &e.a)?);
                    coords[(i * n + j) * na + k] += &field.parse(&e.coefficient)?;
                }
                Ok(LoadedModule::Twisted(TwistedModule::new(a.clone(), v, coords)?))
            }
            ModuleFile::Dg { basis, diff, action } => {
                let v = GradedSpace::new(field, basis.clone())?;
                let n = v.dim();
                let mut d = Matrix::zeros(field, n, n);
                for e in diff {
                    let j = index(&v, &e.of)?;
                    for (i, c) in combination(&v, &e.terms)?.into_iter().enumerate() {
                        d[(i, j)] = c;
                    }
                }
                let mut mats = vec![Matrix::zeros(field, n, n); a.dim()];
                let mut listed = vec![false; a.dim()];
                for e in action {
                    let (j, k) = (index(&v, &e.of)?, index(a.space(), &e.a)?);
                    listed[k] = true;
                    for (i, c) in combination(&v, &e.terms)?.into_iter().enumerate() {
                        mats[k][(i, j)] = c;
                    }
                }
                if let Some(u) = (0..a.dim()).find(|&u| a.unit() == vector::unit(field, a.dim(), u).as_slice()) {
                    if !listed[u] {
                        mats[u] = Matrix::identity(field, n);
                    }
                }
                Ok(LoadedModule::Dg(DgModule::new(Side::Right, a.clone(), v, mats, d)?))
            }
        }
    }

    pub fn from_twisted(t: &TwistedModule) -> ModuleFile {
        let v = t.space();
        let a = t.algebra();
        let (n, na) = (v.dim(), a.dim());
        let mut x = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..na {
                    let c = &t.x()[(i * n + j) * na + k];
                    if !c.is_zero() {
                        x.push(TwistEntry {
                            row: v.name(i).into(),
                            col: v.name(j).into(),
                            a: a.space().name(k).into(),
                            coefficient: c.to_string(),
                        });
                    }
                }
            }
        }
        ModuleFile::Twisted { basis: v.basis().to_vec(), x }
    }
}

/// A module map as `images[source name] = terms in the target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub images: Vec<ImageEntry>,
}

impl MapFile {
    pub fn build(&self, source: &DgModule, target: &DgModule) -> Result<ModuleMap> {
        let field = source.algebra().field();
        let mut m = Matrix::zeros(field, target.dim(), source.dim());
        for e in &self.images {
            let j = index(source.space(), &e.of)?;
            for (i, c) in combination(target.space(), &e.terms)?.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        ModuleMap::new(source.clone(), target.clone(), m)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A0: &str = r#"{
        "field": "F3",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}],
        "retraction": {"1": "1"}
    }"#;

    #[test]
    fn parses_small_example() {
        let f: AlgebraFile = read_json(A0).unwrap();
        let a = f.build(Field::Rationals).unwrap();
        assert_eq!(a.field(), Field::prime(3).unwrap());
        assert!(a.check_axioms().is_ok());
        assert!(a.dense_product(1, 1).iter().all(FieldElement::is_zero));
    }

    #[test]
    fn round_trip() {
        let a = read_json::<AlgebraFile>(A0).unwrap().build(Field::Rationals).unwrap();
        let text = serde_json::to_string(&AlgebraFile::from_algebra(&a)).unwrap();
        assert_eq!(read_json::<AlgebraFile>(&text).unwrap().build(Field::Rationals).unwrap(), a);
    }

    #[test]
    fn unknown_names_are_parse_errors() {
        let text = r#"{"basis": [{"name": "1", "degree": 0}], "mul": [{"left": "y", "right": "1", "terms": {}}]}"#;
        let f: AlgebraFile = read_json(text).unwrap();
        assert!(matches!(f.build(Field::Rationals), Err(Error::Parse(_))));
    }

    #[test]
    fn twisted_module_file() {
        let a = read_json::<AlgebraFile>(A0).unwrap().build(Field::Rationals).unwrap();
        let text = r#"{"kind": "twisted", "basis": [{"name": "u", "degree": 0}],
                       "x": [{"row": "u", "col": "u", "a": "x", "coefficient": "2"}]}"#;
        let m = read_json::<ModuleFile>(text).unwrap().build(&a).unwrap();
        let t = m.twisted().unwrap();
        assert_eq!(ModuleFile::from_twisted(t), read_json::<ModuleFile>(text).unwrap());
    }
}
