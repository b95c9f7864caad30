//! Free graded algebras on finitely many generators, truncated at a word-length
//! window, with derivations given by their values on generators.
//!
//! Every element records the largest word length up to which its coefficients
//! are known to be correct (`exact`); words beyond the window are dropped and
//! identities are only compared up to the exact length of both sides.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graded::GradedSpace;

pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTensorAlgebra {
    generators: GradedSpace,
    window: usize,
}

/// A linear combination of words, exact for word lengths `<= exact`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TElement {
    terms: BTreeMap<Word, FieldElement>,
    exact: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub word: Vec<String>,
    pub coefficient: FieldElement,
}

impl TElement {
    pub fn terms(&self) -> &BTreeMap<Word, FieldElement> {
        &self.terms
    }

    pub fn exact(&self) -> usize {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[usize]) -> Option<&FieldElement> {
        self.terms.get(w)
    }

    /// Smallest word length that may carry a nonzero coefficient, counting unknown ones.
    fn low(&self) -> usize {
        self.terms.keys().map(Vec::len).min().unwrap_or(usize::MAX).min(self.exact + 1)
    }

    fn add_term(&mut self, w: Word, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms of word length `<= len`.
    pub fn up_to(&self, len: usize) -> BTreeMap<Word, FieldElement> {
        self.terms.iter().filter(|(w, _)| w.len() <= len).map(|(w, c)| (w.clone(), c.clone())).collect()
    }
}

impl TruncatedTensorAlgebra {
    pub fn new(generators: GradedSpace, window: usize) -> Self {
        TruncatedTensorAlgebra { generators, window }
    }

    pub fn field(&self) -> Field {
        self.generators.field()
    }

    pub fn generators(&self) -> &GradedSpace {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.dim()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn word_degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&i| self.generators.degree(i)).sum()
    }

    pub fn zero(&self) -> TElement {
        TElement { terms: BTreeMap::new(), exact: self.window }
    }

    pub fn scalar(&self, c: FieldElement) -> TElement {
        let mut e = self.zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn one(&self) -> TElement {
        self.scalar(self.field().one())
    }

    pub fn word(&self, w: Word, c: FieldElement) -> TElement {
        let mut e = self.zero();
        if w.len() <= self.window {
            e.add_term(w, c);
        }
        e
    }

    pub fn generator(&self, i: usize) -> TElement {
        self.word(vec![i], self.field().one())
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Word, FieldElement)>) -> TElement {
        let mut e = self.zero();
        for (w, c) in terms {
            if w.len() <= self.window {
                e.add_term(w, c);
            }
        }
        e
    }

    pub fn add(&self, a: &TElement, b: &TElement) -> TElement {
        let mut out = a.clone();
        for (w, c) in &b.terms {
            out.add_term(w.clone(), c.clone());
        }
        out.exact = a.exact.min(b.exact);
        out
    }

    pub fn scale(&self, c: &FieldElement, a: &TElement) -> TElement {
        let mut out = TElement { terms: BTreeMap::new(), exact: a.exact };
        for (w, x) in &a.terms {
            out.add_term(w.clone(), c * x);
        }
        out
    }

    pub fn neg(&self, a: &TElement) -> TElement {
        self.scale(&self.field().from_i64(-1), a)
    }

    pub fn sub(&self, a: &TElement, b: &TElement) -> TElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TElement, b: &TElement) -> TElement {
        let mut out = self.zero();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                if u.len() + v.len() > self.window {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, x * y);
            }
        }
        out.exact = self.window.min(a.exact.saturating_add(b.low())).min(b.exact.saturating_add(a.low()));
        out
    }

    /// `[a, b] = ab - (-1)^{|u||v|} ba`, extended bilinearly over words.
    pub fn commutator(&self, a: &TElement, b: &TElement) -> TElement {
        let mut out = self.mul(a, b);
        let field = self.field();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                if u.len() + v.len() > self.window {
                    continue;
                }
                let s = field.sign(i64::from(self.word_degree(u)) * i64::from(self.word_degree(v)));
                let mut w = v.clone();
                w.extend_from_slice(u);
                out.add_term(w, -(&(&s * x) * y));
            }
        }
        out
    }

    /// Substitutes `-t_i` for every generator.
    pub fn negate_generators(&self, a: &TElement) -> TElement {
        let field = self.field();
        let mut out = TElement { terms: BTreeMap::new(), exact: a.exact };
        for (w, c) in &a.terms {
            out.add_term(w.clone(), &field.sign(w.len() as i64) * c);
        }
        out
    }

    /// Equality on word lengths where both sides are exact; returns that length.
    pub fn agree(&self, a: &TElement, b: &TElement) -> (bool, usize) {
        let len = a.exact.min(b.exact);
        (a.up_to(len) == b.up_to(len), len)
    }

    /// All words of length exactly `n`.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let g = self.ngens();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..g).map(move |i| {
                        let mut v = w.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Canonically ordered terms: by degree, then lexicographically by generator names.
    pub fn terms_sorted(&self, a: &TElement) -> Vec<Term> {
        let mut terms: Vec<Term> = a
            .terms
            .iter()
            .map(|(w, c)| Term {
                word: w.iter().map(|&i| self.generators.name(i).to_string()).collect(),
                coefficient: c.clone(),
            })
            .collect();
        let deg = |t: &Term| -> i32 {
            t.word.iter().map(|n| self.generators.degree(self.generators.index_of(n).expect("generator"))).sum()
        };
        terms.sort_by(|x, y| (deg(x), &x.word).cmp(&(deg(y), &y.word)));
        terms
    }

    pub fn format(&self, a: &TElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        self.terms_sorted(a)
            .iter()
            .map(|t| {
                let w = if t.word.is_empty() { "1".to_string() } else { t.word.join("·") };
                format!("{}*{}", t.coefficient, w)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A derivation of fixed degree, determined by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i32,
    pub values: Vec<TElement>,
}

impl Derivation {
    pub fn new(alg: &TruncatedTensorAlgebra, degree: i32, values: Vec<TElement>) -> Result<Self> {
        if values.len() != alg.ngens() {
            return Err(Error::Dimension("one value per generator is required".into()));
        }
        Ok(Derivation { degree, values })
    }

    pub fn zero(alg: &TruncatedTensorAlgebra, degree: i32) -> Self {
        Derivation { degree, values: vec![alg.zero(); alg.ngens()] }
    }

    /// Most negative change of word length a single application can cause.
    fn length_shift(&self) -> i64 {
        self.values
            .iter()
            .map(|v| v.low() as i64 - 1)
            .min()
            .unwrap_or(0)
    }

    /// Graded Leibniz extension to arbitrary elements.
    pub fn apply(&self, alg: &TruncatedTensorAlgebra, a: &TElement) -> TElement {
        let field = alg.field();
        let mut out = alg.zero();
        for (w, c) in &a.terms {
            let mut prefix_degree = 0i64;
            for j in 0..w.len() {
                let s = field.sign(i64::from(self.degree) * prefix_degree);
                let coef = &s * c;
                for (v, x) in &self.values[w[j]].terms {
                    let len = w.len() - 1 + v.len();
                    if len > alg.window {
                        continue;
                    }
                    let mut word = Vec::with_capacity(len);
                    word.extend_from_slice(&w[..j]);
                    word.extend_from_slice(v);
                    word.extend_from_slice(&w[j + 1..]);
                    out.add_term(word, &coef * x);
                }
                prefix_degree += i64::from(alg.generators.degree(w[j]));
            }
        }
        // Unknown input words (length > a.exact) land at length >= a.exact + 1 + shift.
        let from_input = a.exact as i64 + self.length_shift();
        // Generator values are exact up to their own length; a word of length n
        // using a value exact to e is exact to n - 1 + e.
        let from_values = a
            .terms
            .keys()
            .flat_map(|w| w.iter().map(move |&g| (w.len(), g)))
            .map(|(n, g)| (n - 1 + self.values[g].exact) as i64)
            .min()
            .unwrap_or(i64::MAX);
        let exact = (alg.window as i64).min(from_input).min(from_values).max(0);
        out.exact = exact as usize;
        out
    }

    pub fn apply_twice(&self, alg: &TruncatedTensorAlgebra, a: &TElement) -> TElement {
        self.apply(alg, &self.apply(alg, a))
    }

    /// `D + [b, -]` for `b` of degree `|D|`.
    pub fn plus_inner(&self, alg: &TruncatedTensorAlgebra, b: &TElement) -> Derivation {
        let values = (0..alg.ngens()).map(|i| alg.add(&self.values[i], &alg.commutator(b, &alg.generator(i)))).collect();
        Derivation { degree: self.degree, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(window: usize) -> TruncatedTensorAlgebra {
        let f = Field::prime(3).unwrap();
        TruncatedTensorAlgebra::new(GradedSpace::from_pairs(f, &[("a", 1), ("b", 0)]).unwrap(), window)
    }

    #[test]
    fn products_truncate() {
        let t = alg(2);
        let a = t.generator(0);
        let aa = t.mul(&a, &a);
        assert_eq!(aa.terms().len(), 1);
        assert!(t.mul(&aa, &a).is_zero());
        assert_eq!(t.mul(&aa, &a).exact(), 2);
    }

    #[test]
    fn odd_generator_commutes_with_itself_to_twice_its_square() {
        let t = alg(3);
        let a = t.generator(0);
        let c = t.commutator(&a, &a);
        assert_eq!(c.coefficient(&[0, 0]), Some(&t.field().from_i64(2)));
        let b = t.generator(1);
        assert!(t.commutator(&b, &b).is_zero());
    }

    #[test]
    fn odd_derivation_signs() {
        // D(b) = a, D(a) = 0, |D| = 1.
        let t = alg(3);
        let d = Derivation::new(&t, 1, vec![t.zero(), t.generator(0)]).unwrap();
        // D(a·b) = (-1)^{|a|} a·D(b) = -a·a.
        let ab = t.word(vec![0, 1], t.field().one());
        let dab = d.apply(&t, &ab);
        assert_eq!(dab.coefficient(&[0, 0]), Some(&t.field().from_i64(-1)));
        assert_eq!(dab.exact(), 3);
    }

    #[test]
    fn constant_values_lower_exactness() {
        let t = alg(3);
        let d = Derivation::new(&t, 1, vec![t.zero(), t.one()]).unwrap();
        let b = t.generator(1);
        assert_eq!(d.apply(&t, &b).exact(), 2);
        assert_eq!(d.apply_twice(&t, &b).exact(), 1);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(alg(3).words_of_length(2).len(), 4);
        assert_eq!(alg(3).words_of_length(0), vec![Vec::<usize>::new()]);
    }
}
