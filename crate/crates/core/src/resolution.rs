//! Exactness of the bimodule resolution `TV⊗V⊗TV → TV⊗TV → TV` in each word length.
//!
//! Both maps keep the concatenated word fixed, so the length-`n` component
//! splits into one block per word of length `n`: `n` ways to mark the middle
//! letter, `n + 1` ways to cut the word in two, one way to multiply.

use serde::Serialize;

use crate::certificate::{Certificate, Violation};
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionComponent {
    pub length: usize,
    /// Dimensions of the `TV⊗V⊗TV`, `TV⊗TV` and `TV` components.
    pub dims: [usize; 3],
    pub rank_d: usize,
    pub rank_m: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub components: Vec<ResolutionComponent>,
    pub certificate: Certificate,
}

/// `d(u⊗v⊗w) = uv⊗w - u⊗vw` on one word: column `j` marks letter `j`, row `i`
/// cuts after `i` letters.
pub fn word_block_d(field: Field, n: usize) -> Matrix {
    let mut m = Matrix::zeros(field, n + 1, n);
    for j in 0..n {
        m[(j + 1, j)] = field.one();
        m[(j, j)] = field.from_i64(-1);
    }
    m
}

/// Multiplication `TV⊗TV → TV` on one word.
pub fn word_block_m(field: Field, n: usize) -> Matrix {
    Matrix::from_rows(field, &[vec![field.one(); n + 1]], n + 1).expect("shape")
}

/// The length-`n` component assembled over all `dim^n` words, for cross-checks.
pub fn full_component(field: Field, dim: usize, n: usize) -> (Matrix, Matrix) {
    let words = dim.pow(n as u32);
    let (bd, bm) = (word_block_d(field, n), word_block_m(field, n));
    let mut d = Matrix::zeros(field, words * (n + 1), words * n);
    let mut m = Matrix::zeros(field, words, words * (n + 1));
    for w in 0..words {
        for i in 0..=n {
            for j in 0..n {
                d[(w * (n + 1) + i, w * n + j)] = bd[(i, j)].clone();
            }
            m[(w, w * (n + 1) + i)] = bm[(0, i)].clone();
        }
    }
    (d, m)
}

/// Checks `ker m = im d`, `m` onto and `d` injective in every length `n <= max_len`.
pub fn resolution_exactness(v: &GradedSpace, max_len: usize) -> ResolutionReport {
    let field = v.field();
    let dim = v.dim();
    let mut cert = Certificate::ok();
    let mut components = Vec::with_capacity(max_len + 1);
    for n in 0..=max_len {
        let words = dim.checked_pow(n as u32).unwrap_or(usize::MAX);
        let dims = [n * words, (n + 1) * words, words];
        let (bd, bm) = (word_block_d(field, n), word_block_m(field, n));
        if !bm.mul(&bd).expect("shape").is_zero() {
            cert.violations.push(violation("m∘d = 0", n, "nonzero", "0"));
        }
        let (rank_d, rank_m) = if words == 0 { (0, 0) } else { (bd.rank() * words, bm.rank() * words) };
        let injective = rank_d == dims[0];
        let middle = dims[1] - rank_m == rank_d;
        let onto = rank_m == dims[2];
        for (ok, what, lhs, rhs) in [
            (injective, "d injective", rank_d, dims[0]),
            (middle, "ker m = im d", dims[1] - rank_m, rank_d),
            (onto, "m surjective", rank_m, dims[2]),
        ] {
            if !ok {
                cert.violations.push(violation(what, n, &lhs.to_string(), &rhs.to_string()));
            }
        }
        components.push(ResolutionComponent { length: n, dims, rank_d, rank_m, exact: injective && middle && onto });
    }
    ResolutionReport { components, certificate: cert }
}

fn violation(identity: &str, n: usize, lhs: &str, rhs: &str) -> Violation {
    Violation {
        identity: identity.into(),
        witness: vec![format!("length {n}")],
        lhs: vec![lhs.into()],
        rhs: vec![rhs.into()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(field: Field, dim: usize) -> GradedSpace {
        let names: Vec<String> = (0..dim).map(|i| format!("v{i}")).collect();
        let pairs: Vec<(&str, i32)> = names.iter().map(|s| (s.as_str(), 0)).collect();
        GradedSpace::from_pairs(field, &pairs).unwrap()
    }

    #[test]
    fn one_generator_length_three() {
        let r = resolution_exactness(&space(Field::Rationals, 1), 3);
        let c = &r.components[3];
        assert_eq!(c.dims, [3, 4, 1]);
        assert_eq!((c.rank_d, c.rank_m), (3, 1));
        assert!(c.exact && r.certificate.is_ok());
    }

    #[test]
    fn length_zero() {
        let r = resolution_exactness(&space(Field::prime(2).unwrap(), 2), 0);
        assert_eq!(r.components[0].dims, [0, 1, 1]);
        assert!(r.components[0].exact);
    }

    #[test]
    fn blocks_agree_with_full_matrices() {
        let f = Field::prime(2).unwrap();
        let r = resolution_exactness(&space(f, 2), 3);
        for n in 0..=3 {
            let (d, m) = full_component(f, 2, n);
            assert!(m.mul(&d).unwrap().is_zero());
            assert_eq!(d.rank(), r.components[n].rank_d);
            assert_eq!(m.rank(), r.components[n].rank_m);
        }
    }
}
