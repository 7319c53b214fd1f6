//! Tensor induction of two-dimensional representations from an index two
//! subgroup, the S5 quintic case, and the filtration and Hodge-Tate tables.

pub mod cyclotomic;
pub mod group;
pub mod hodge;
pub mod icosahedral;
pub mod quintic;

pub use cyclotomic::{CMat, Cyc, CycloField};
pub use group::{tensor_induce, AsaiRep, FiniteGroup, FiniteRep2, ASAI_BASIS};
pub use hodge::{ht_weight_table, CharExpr, HtTable, Token};
pub use icosahedral::IcosahedralExample;
pub use quintic::{
    asai_frobenius_eigenvalues, discriminant, distinct_mod_p, frobenius_class_quintic, RootOfUnity, S5FrobeniusClass,
};

use num_rational::Rational64;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsaiError {
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("the subgroup does not have index two")]
    NotIndexTwo,
    #[error("theta lies in the subgroup")]
    ThetaInSubgroup,
    #[error("{0} divides the discriminant or the leading coefficient")]
    RamifiedPrime(u64),
    #[error("{0:?} is not a partition of 5")]
    NotAPartition(Vec<u32>),
    #[error("expected an integer polynomial of degree 5")]
    BadPolynomial,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Largest permutation degree accepted from JSON.
pub const MAX_POINTS: usize = 64;
/// Largest conductor accepted from JSON; cyclotomic polynomials up to here have
/// coefficients in {-1, 0, 1}.
pub const MAX_JSON_CONDUCTOR: u32 = 60;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepDoc {
    conductor: u32,
    generators: Vec<Vec<usize>>,
    theta: Vec<usize>,
    subgroup: Vec<SubgroupGen>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupGen {
    perm: Vec<usize>,
    /// Rows of the 2x2 matrix; each entry lists power-basis coefficients as rationals.
    matrix: Vec<Vec<Vec<String>>>,
}

fn check_perm(p: &[usize], n: usize) -> Result<(), AsaiError> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(AsaiError::Parse("permutations must have equal length".into()));
    }
    for &i in p {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(AsaiError::Parse(format!("{p:?} is not a permutation")));
        }
    }
    Ok(())
}

fn compose(a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Parse a representation given by permutation generators of G, a theta outside
/// H, and generators of H with their matrices over Q(zeta_conductor).
///
/// ```json
/// {"conductor": 1, "generators": [[1,0]], "theta": [1,0],
///  "subgroup": [{"perm": [0,1], "matrix": [[["1"],["0"]],[["0"],["1"]]]}]}
/// ```
pub fn parse_rep_json(s: &str) -> Result<FiniteRep2, AsaiError> {
    let doc: RepDoc = serde_json::from_str(s).map_err(|e| AsaiError::Parse(e.to_string()))?;
    if doc.conductor > MAX_JSON_CONDUCTOR {
        return Err(AsaiError::Unsupported(format!("conductor above {MAX_JSON_CONDUCTOR}")));
    }
    let k = CycloField::new(doc.conductor)?;
    let n = doc.theta.len();
    if n == 0 || n > MAX_POINTS {
        return Err(AsaiError::Parse(format!("permutation degree must be in 1..={MAX_POINTS}")));
    }
    check_perm(&doc.theta, n)?;
    for g in doc.generators.iter().chain(doc.subgroup.iter().map(|h| &h.perm)) {
        check_perm(g, n)?;
    }
    let mut mats = Vec::new();
    for h in &doc.subgroup {
        if h.matrix.len() != 2 || h.matrix.iter().any(|r| r.len() != 2) {
            return Err(AsaiError::Parse("matrices must be 2x2".into()));
        }
        let mut rows = Vec::new();
        for r in &h.matrix {
            let mut row = Vec::new();
            for entry in r {
                if entry.len() != k.degree() {
                    return Err(AsaiError::Parse(format!("entries need {} coefficients", k.degree())));
                }
                let c: Result<Vec<Rational64>, _> = entry
                    .iter()
                    .map(|x| {
                        let v = x.trim().parse::<Rational64>().map_err(|e| AsaiError::Parse(e.to_string()))?;
                        if v.numer().unsigned_abs() > group::MAX_ENTRY_HEIGHT as u64 {
                            return Err(AsaiError::Unsupported(format!("entry {x} exceeds the height bound")));
                        }
                        Ok(v)
                    })
                    .collect();
                row.push(Cyc(c?));
            }
            rows.push(row);
        }
        mats.push(CMat::from_rows(rows));
    }
    let id: Vec<usize> = (0..n).collect();
    let mut all: Vec<Vec<usize>> = doc.generators.clone();
    all.push(doc.theta.clone());
    all.extend(doc.subgroup.iter().map(|h| h.perm.clone()));
    let (group, elems) = FiniteGroup::generate(id.clone(), &all, compose)?;
    let hgens: Vec<Vec<usize>> = doc.subgroup.iter().map(|h| h.perm.clone()).collect();
    let (_, helems) = FiniteGroup::generate(id, &hgens, compose)?;
    let hset: std::collections::HashSet<&Vec<usize>> = helems.iter().collect();
    let in_subgroup: Vec<bool> = elems.iter().map(|e| hset.contains(e)).collect();
    let index = |p: &Vec<usize>| elems.iter().position(|e| e == p).expect("generated");
    let theta = index(&doc.theta);
    let gens: Vec<(usize, CMat)> = hgens.iter().map(index).zip(mats).collect();
    FiniteRep2::from_generators(group, k, in_subgroup, theta, &gens)
}

/// Integer quintic from a comma or whitespace separated list, leading
/// coefficient first; a surrounding pair of brackets is allowed. The result is
/// stored constant term first.
pub fn parse_quintic(s: &str) -> Result<Vec<i64>, AsaiError> {
    let t = s.trim();
    let t = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
    let mut c: Vec<i64> = t
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|e| AsaiError::Parse(format!("{x}: {e}"))))
        .collect::<Result<_, _>>()?;
    if c.len() != 6 || c[0] == 0 {
        return Err(AsaiError::BadPolynomial);
    }
    c.reverse();
    // Keep the resultant comfortably inside exact rational range.
    if c.iter().any(|x| x.unsigned_abs() > 1 << 20) {
        return Err(AsaiError::Unsupported("coefficients above 2^20".into()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_small_rep() {
        // G = S3 on three points, H = A3, rho(3-cycle) = diag(zeta3, zeta3^2).
        let s = r#"{"conductor": 3, "generators": [], "theta": [1,0,2],
            "subgroup": [{"perm": [1,2,0], "matrix": [[["0","1"],["0","0"]],[["0","0"],["-1","-1"]]]}]}"#;
        let rep = parse_rep_json(s).unwrap();
        assert_eq!(rep.group.order, 6);
        let as_rep = tensor_induce(&rep).unwrap();
        as_rep.verify_homomorphism(&rep.group).unwrap();
        assert!(parse_rep_json("{}").is_err());
        assert!(parse_rep_json(&s.replace("[1,0,2]", "[1,2,0]")).is_err());
    }

    #[test]
    fn quintic_input() {
        assert_eq!(parse_quintic("[1, 0, 0, 0, -1, -1]").unwrap(), vec![-1, -1, 0, 0, 0, 1]);
        assert_eq!(parse_quintic("1 0 0 0 -1 -1").unwrap(), vec![-1, -1, 0, 0, 0, 1]);
        assert_eq!(parse_quintic("1,2,3"), Err(AsaiError::BadPolynomial));
    }
}
