//! Reading JSON input files and element expressions.

use std::path::Path;

use koszulkit::io::{combination, read_json, AlgebraFile, LoadedModule, MapFile, ModuleFile, Terms};
use koszulkit::twisted::ModuleMap;
use koszulkit::{CurvedDga, DgModule, Field, FieldElement, GradedSpace};

use crate::report::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses an algebra file and checks its axioms. A field given on the command
/// line replaces the one in the file.
pub fn algebra(path: &Path, field: Option<Field>, default: Field) -> Result<CurvedDga, Failure> {
    let a = unchecked_algebra(path, field, default)?;
    let cert = a.check_axioms();
    if !cert.is_ok() {
        return Err(Failure::math(format!("{} is not a curved dg algebra", path.display()), Some(cert)));
    }
    Ok(a)
}

pub fn unchecked_algebra(path: &Path, field: Option<Field>, default: Field) -> Result<CurvedDga, Failure> {
    let mut file: AlgebraFile = read_json(&read(path)?)?;
    if field.is_some() {
        file.field = field;
    }
    Ok(file.build(default)?)
}

pub fn module(path: &Path, a: &CurvedDga) -> Result<LoadedModule, Failure> {
    let file: ModuleFile = read_json(&read(path)?)?;
    let m = file.build(a)?;
    let cert = m.dg().check_axioms();
    if !cert.is_ok() {
        return Err(Failure::math(format!("{} is not a module", path.display()), Some(cert)));
    }
    Ok(m)
}

pub fn map(path: &Path, source: &DgModule, target: &DgModule) -> Result<ModuleMap, Failure> {
    let file: MapFile = read_json(&read(path)?)?;
    Ok(file.build(source, target)?)
}

/// Parses `"0"`, `"x"`, `"2*x + (x,t)"`, `"-1/2*y - z"` in the basis of `space`.
pub fn element(space: &GradedSpace, text: &str) -> Result<Vec<FieldElement>, Failure> {
    let mut terms = Terms::new();
    let mut total = koszulkit::field::vector::zeros(space.field(), space.dim());
    let normalized = text.replace(" - ", " + -");
    for raw in normalized.split('+') {
        let piece = raw.trim();
        if piece.is_empty() || piece == "0" {
            continue;
        }
        let (coefficient, name) = match piece.split_once('*') {
            Some((c, n)) => (c.trim().to_string(), n.trim()),
            None => match piece.strip_prefix('-') {
                Some(n) if space.index_of(piece).is_none() => ("-1".to_string(), n.trim()),
                _ => ("1".to_string(), piece),
            },
        };
        terms.clear();
        terms.insert(name.to_string(), coefficient);
        let v = combination(space, &terms)?;
        koszulkit::field::vector::add_assign(&mut total, &v);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_combinations() {
        let f = Field::prime(5).unwrap();
        let s = GradedSpace::from_pairs(f, &[("1", 0), ("x", 1), ("(x,t)", 1)]).unwrap();
        let v = element(&s, "2*x + (x,t) - 1").unwrap();
        assert_eq!(v, vec![f.from_i64(-1), f.from_i64(2), f.one()]);
        assert_eq!(element(&s, "0").unwrap(), vec![f.zero(); 3]);
        assert_eq!(element(&s, "-x").unwrap(), vec![f.zero(), f.from_i64(-1), f.zero()]);
        assert!(element(&s, "y").is_err());
    }
}
