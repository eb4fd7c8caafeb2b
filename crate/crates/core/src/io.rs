//! JSON documents for lattices and finite quadratic forms. Rationals are
//! written as `"p/q"` strings; integers may also be plain JSON numbers.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rat, fmt_rat64, parse_rat, to_rat64, Rat};
use crate::discform::{discriminant_form, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::lattice::{determinant, lattice_from_generators, signature, Lattice, QuadSpace};
use crate::matrix::{self, RatMat};

/// A rational entry: a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatEntry {
    Int(i64),
    Text(String),
}

impl RatEntry {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatEntry::Int(n) => Ok(Rat::from_integer((*n).into())),
            RatEntry::Text(s) => parse_rat(s),
        }
    }
}

fn rat_matrix(rows: &[Vec<RatEntry>]) -> Result<RatMat> {
    rows.iter().map(|r| r.iter().map(RatEntry::to_rat).collect()).collect()
}

fn text_matrix(m: &RatMat) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}

/// Input document: `{"dim": n, "gram": [[...]], "generators": [[...]]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub dim: usize,
    pub gram: Vec<Vec<RatEntry>>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<RatEntry>>>,
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The even lattice spanned by the generators, or by the standard basis
    /// when none are given.
    pub fn lattice(&self) -> Result<Lattice> {
        let gram = rat_matrix(&self.gram)?;
        if gram.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: gram.len() });
        }
        if let Some(row) = gram.iter().find(|r| r.len() != self.dim) {
            return Err(Error::Dimension { expected: self.dim, found: row.len() });
        }
        if (0..self.dim).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(Error::Parse("gram matrix is not symmetric".into()));
        }
        let space = QuadSpace::new(gram)?;
        let gens = match &self.generators {
            Some(g) => rat_matrix(g)?,
            None => matrix::to_rat(&matrix::identity(self.dim)),
        };
        lattice_from_generators(&space, &gens)
    }
}

/// Output document: the input fields plus rank, determinant and signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub dim: usize,
    pub gram: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<Vec<Vec<String>>>,
    pub rank: usize,
    pub det: String,
    pub signature: [usize; 2],
}

impl LatticeSummary {
    pub fn new(file: &LatticeFile, l: &Lattice) -> Result<Self> {
        let sig = signature(l);
        Ok(LatticeSummary {
            dim: file.dim,
            gram: text_matrix(&rat_matrix(&file.gram)?),
            generators: file.generators.as_deref().map(rat_matrix).transpose()?.as_ref().map(text_matrix),
            rank: l.rank(),
            det: determinant(l).to_string(),
            signature: [sig.plus, sig.minus],
        })
    }
}

/// `{"orders": [...], "q": ["p/q", ...], "b": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub orders: Vec<u64>,
    pub q: Vec<String>,
    pub b: Vec<Vec<String>>,
}

fn rat64(s: &str) -> Result<Rational64> {
    to_rat64(&parse_rat(s)?)
}

impl FormJson {
    pub fn from_form(f: &FiniteQuadraticForm) -> Self {
        FormJson {
            orders: f.orders().to_vec(),
            q: f.q_values().iter().map(fmt_rat64).collect(),
            b: f.b_matrix().iter().map(|r| r.iter().map(fmt_rat64).collect()).collect(),
        }
    }

    pub fn to_form(&self) -> Result<FiniteQuadraticForm> {
        let q = self.q.iter().map(|s| rat64(s)).collect::<Result<Vec<_>>>()?;
        let b = self.b.iter().map(|r| r.iter().map(|s| rat64(s)).collect()).collect::<Result<Vec<Vec<_>>>>()?;
        FiniteQuadraticForm::new(self.orders.clone(), q, b)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Lattice summary together with its discriminant form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscformReport {
    #[serde(flatten)]
    pub lattice: LatticeSummary,
    pub form: FormJson,
    pub describe: String,
}

pub fn discform_report(file: &LatticeFile) -> Result<DiscformReport> {
    let l = file.lattice()?;
    let f = discriminant_form(&l)?;
    Ok(DiscformReport { lattice: LatticeSummary::new(file, &l)?, form: FormJson::from_form(&f), describe: f.describe() })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_file_round_trip() {
        let text = r#"{"dim": 2, "gram": [[0, 2], ["2", 0]]}"#;
        let file = LatticeFile::parse(text).unwrap();
        let r = discform_report(&file).unwrap();
        assert_eq!(r.lattice.det, "-4");
        assert_eq!(r.lattice.signature, [1, 1]);
        assert_eq!(r.form.orders, vec![2, 2]);
        let json = to_json(&r);
        let back: DiscformReport = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json(&back), json);
        assert!(crate::discform::form_iso(&r.form.to_form().unwrap(), &FiniteQuadraticForm::u(1)).unwrap().is_some());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LatticeFile::parse(r#"{"dim": 1, "gram": [[2]], "extra": 1}"#).is_err());
        assert!(LatticeFile::parse(r#"{"dim": 2, "gram": [[2, 1], [0, 2]]}"#).unwrap().lattice().is_err());
        assert!(LatticeFile::parse(r#"{"dim": 1, "gram": [[1]]}"#).unwrap().lattice().is_err());
        assert!(LatticeFile::parse(r#"{"dim": 1, "gram": [["x"]]}"#).unwrap().lattice().is_err());
    }
}
