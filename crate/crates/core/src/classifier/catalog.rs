use num_rational::Rational64;
use serde::Serialize;

use crate::arith::rat64_mod;
use crate::discform::{discriminant_form, form_iso, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::lattice::{signature, Lattice, Signature};
use crate::report::Discrepancy;

/// Orthogonal summands of the table lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// `U(k)`.
    U(i64),
    /// `⟨m⟩`.
    Diag(i64),
    /// The rank-3 lattice `N`.
    N,
}

/// Gram matrix of the rank-3 lattice `N` of the table.
pub const N_GRAM: [[i64; 3]; 3] = [[2, 1, 2], [1, -2, 0], [2, 0, 0]];

impl Block {
    fn gram(self) -> Vec<Vec<i64>> {
        match self {
            Block::U(k) => vec![vec![0, k], vec![k, 0]],
            Block::Diag(m) => vec![vec![m]],
            Block::N => N_GRAM.iter().map(|r| r.to_vec()).collect(),
        }
    }

    fn name(self) -> String {
        match self {
            Block::U(1) => "U".into(),
            Block::U(k) => format!("U({k})"),
            Block::Diag(m) => format!("<{m}>"),
            Block::N => "N".into(),
        }
    }
}

pub fn block_gram(blocks: &[Block]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(|b| b.gram().len()).sum();
    let mut g = vec![vec![0; n]; n];
    let mut at = 0;
    for b in blocks {
        let bg = b.gram();
        for (i, row) in bg.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                g[at + i][at + j] = x;
            }
        }
        at += bg.len();
    }
    g
}

/// A printed quadratic polynomial `Σ cᵢ xᵢ² + Σ_{i<j} cᵢⱼ xᵢxⱼ` on a
/// product of cyclic groups.
#[derive(Clone, Debug)]
pub struct PrintedForm {
    pub orders: Vec<u64>,
    pub squares: Vec<Rational64>,
    pub cross: Vec<(usize, usize, Rational64)>,
    pub text: &'static str,
}

impl PrintedForm {
    pub fn to_form(&self) -> Result<FiniteQuadraticForm> {
        let k = self.orders.len();
        let q: Vec<Rational64> = self.squares.iter().map(|&c| rat64_mod(c, 2)).collect();
        let mut b = vec![vec![Rational64::from_integer(0); k]; k];
        for i in 0..k {
            b[i][i] = rat64_mod(q[i], 1);
        }
        for &(i, j, c) in &self.cross {
            let v = rat64_mod(c / 2, 1);
            b[i][j] = v;
            b[j][i] = v;
        }
        FiniteQuadraticForm::new(self.orders.clone(), q, b)
    }
}

#[derive(Clone, Debug)]
pub struct CatalogRow {
    pub id: usize,
    pub name: String,
    pub blocks: Vec<Block>,
    /// Printed number of surfaces, the orbit size.
    pub size: usize,
    pub printed: PrintedForm,
    pub lattice: Lattice,
    pub signature: Signature,
    /// Discriminant form recomputed from the Gram matrix.
    pub computed: FiniteQuadraticForm,
    pub printed_form: FiniteQuadraticForm,
}

/// Outcome of comparing one printed form against its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSelfCheck {
    pub row: usize,
    pub matches_print: bool,
}

#[derive(Clone, Debug)]
pub struct TableCatalog {
    rows: Vec<CatalogRow>,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn zero() -> Rational64 {
    r(0, 1)
}

type RowSpec = (&'static [Block], usize, &'static [u64], Vec<Rational64>, Vec<(usize, usize, Rational64)>, &'static str);

fn row_specs() -> Vec<RowSpec> {
    use Block::{Diag, N, U};
    let half = r(1, 2);
    let mhalf = r(-1, 2);
    let m8 = r(-1, 8);
    let n8 = r(3, 8);
    vec![
        (&[U(1), U(1), Diag(-2)], 1, &[2], vec![half], vec![], "1/2 x^2"),
        (&[U(2), U(1), Diag(-2)], 15, &[2, 2, 2], vec![zero(), zero(), mhalf], vec![(0, 1, r(1, 1))], "x1x2 - 1/2 x3^2"),
        (&[U(1), U(1), Diag(-8)], 10, &[8], vec![m8], vec![], "-1/8 x^2"),
        (&[U(1), N], 6, &[8], vec![n8], vec![], "3/8 x^2"),
        (&[U(4), U(1), Diag(-2)], 20, &[4, 4, 2], vec![zero(), zero(), mhalf], vec![(0, 1, half)], "1/2 x1x2 - 1/2 x3^2"),
        (
            &[U(2), U(2), Diag(-2)],
            15,
            &[2, 2, 2, 2, 2],
            vec![zero(), zero(), zero(), zero(), mhalf],
            vec![(0, 1, r(1, 1)), (2, 3, r(1, 1))],
            "x1x2 + x3x4 - 1/2 x5^2",
        ),
        (&[U(2), U(1), Diag(-8)], 45, &[2, 2, 8], vec![zero(), zero(), m8], vec![(0, 1, r(1, 1))], "x1x2 - 1/8 x3^2"),
        (&[U(1), Diag(-2), Diag(2), Diag(-8)], 60, &[2, 2, 8], vec![mhalf, half, m8], vec![], "-1/2 x1^2 + 1/2 x2^2 - 1/8 x3^2"),
        (&[U(2), N], 15, &[2, 2, 8], vec![zero(), zero(), n8], vec![(0, 1, r(1, 1))], "x1x2 + 3/8 x3^2"),
        (
            &[U(4), U(2), Diag(-2)],
            15,
            &[4, 4, 2, 2, 2],
            vec![zero(), zero(), zero(), zero(), mhalf],
            vec![(0, 1, half), (2, 3, r(1, 1))],
            "1/2 x1x2 + x3x4 - 1/2 x5^2",
        ),
        (&[U(4), U(1), Diag(-8)], 60, &[4, 4, 8], vec![zero(), zero(), m8], vec![(0, 1, half)], "1/2 x1x2 - 1/8 x3^2"),
        (
            &[U(4), N],
            20,
            &[4, 4, 8],
            vec![mhalf, zero(), n8],
            vec![(0, 1, half), (0, 2, r(1, 1))],
            "1/2 x1x2 - 1/2 x1^2 + x1x3 + 3/8 x3^2",
        ),
        (
            &[U(2), U(2), Diag(-8)],
            15,
            &[2, 2, 2, 2, 8],
            vec![zero(), zero(), zero(), zero(), m8],
            vec![(0, 1, r(1, 1)), (2, 3, r(1, 1))],
            "x1x2 + x3x4 - 1/8 x5^2",
        ),
        (
            &[Diag(2), Diag(2), Diag(-2), Diag(-2), Diag(-8)],
            45,
            &[2, 2, 2, 2, 8],
            vec![half, half, mhalf, mhalf, m8],
            vec![],
            "1/2 (x1^2 + x2^2 - x3^2 - x4^2) - 1/8 x5^2",
        ),
        (
            &[U(4), U(4), Diag(-2)],
            1,
            &[4, 4, 4, 4, 2],
            vec![zero(), zero(), zero(), zero(), mhalf],
            vec![(0, 1, half), (2, 3, half)],
            "1/2 x1x2 + 1/2 x3x4 - 1/2 x5^2",
        ),
        (
            &[U(4), U(2), Diag(-8)],
            15,
            &[2, 2, 4, 4, 8],
            vec![zero(), zero(), zero(), zero(), m8],
            vec![(0, 1, r(1, 1)), (2, 3, half)],
            "x1x2 + 1/2 x3x4 - 1/8 x5^2",
        ),
        (
            &[U(4), Diag(2), Diag(-2), Diag(-8)],
            15,
            &[2, 2, 4, 4, 8],
            vec![half, mhalf, zero(), zero(), m8],
            vec![(2, 3, half)],
            "1/2 x1^2 - 1/2 x2^2 + 1/2 x3x4 - 1/8 x5^2",
        ),
    ]
}

impl TableCatalog {
    /// Builds the 17 rows and checks that their recomputed discriminant forms
    /// are pairwise non-isomorphic.
    pub fn load() -> Result<Self> {
        let mut rows = Vec::new();
        for (k, (blocks, size, orders, squares, cross, text)) in row_specs().into_iter().enumerate() {
            let lattice = Lattice::from_gram(&block_gram(blocks))?;
            let name = blocks.iter().map(|b| b.name()).collect::<Vec<_>>().join("+");
            let printed = PrintedForm { orders: orders.to_vec(), squares, cross, text };
            rows.push(CatalogRow {
                id: k + 1,
                name,
                blocks: blocks.to_vec(),
                size,
                signature: signature(&lattice),
                computed: discriminant_form(&lattice)?,
                printed_form: printed.to_form()?,
                printed,
                lattice,
            });
        }
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                if form_iso(&a.computed, &b.computed)?.is_some() {
                    return Err(Error::AmbiguousMatch(vec![a.id, b.id]));
                }
            }
        }
        Ok(TableCatalog { rows })
    }

    pub fn rows(&self) -> &[CatalogRow] {
        &self.rows
    }

    pub fn row(&self, id: usize) -> &CatalogRow {
        &self.rows[id - 1]
    }

    /// Compares each printed form with the recomputed one.
    pub fn self_check(&self) -> Result<(Vec<RowSelfCheck>, Vec<Discrepancy>)> {
        let mut checks = Vec::new();
        let mut discrepancies = Vec::new();
        for row in &self.rows {
            let matches_print = form_iso(&row.printed_form, &row.computed)?.is_some();
            if !matches_print {
                discrepancies.push(Discrepancy::new(
                    &format!("row{}-q-sign", row.id),
                    format!("q = {} for {}", row.printed.text, row.name),
                    format!("q = {}", row.computed.describe()),
                ));
            }
            checks.push(RowSelfCheck { row: row.id, matches_print });
        }
        Ok((checks, discrepancies))
    }
}
