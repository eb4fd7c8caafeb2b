//! The Néron–Severi lattice `S_Y` of a general Kummer surface: nodes, tropes,
//! the covering involution, even eights and the twisted `E₈` inside `N^⊥`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{fmt_rat, int, parse_rat, rat, Int, Rat};
use crate::classifier::E8_EDGES;
use crate::error::{Error, Result};
use crate::lattice::{
    determinant, index_in, lattice_from_generators, orthogonal_complement, saturation, signature, Lattice, QuadSpace,
    Signature,
};
use crate::matrix::{self, RatMat};
use crate::report::Discrepancy;

pub const RANK: usize = 17;

/// Basis order of the ambient space.
pub const BASIS_NAMES: [&str; RANK] = [
    "L", "E0", "E12", "E13", "E14", "E15", "E16", "E23", "E24", "E25", "E26", "E34", "E35", "E36", "E45", "E46", "E56",
];

/// Node names: `E0` and `E_ij`.
pub fn node_names() -> Vec<&'static str> {
    BASIS_NAMES[1..].to_vec()
}

/// Trope names: `C0`, `C1j` and `Cjk` for `2 ≤ j < k ≤ 6`.
pub fn trope_names() -> Vec<String> {
    let mut out = vec!["C0".to_string()];
    out.extend((2..=6).map(|j| format!("C1{j}")));
    for j in 2..=6 {
        for k in j + 1..=6 {
            out.push(format!("C{j}{k}"));
        }
    }
    out
}

fn basis_index(name: &str) -> Option<usize> {
    BASIS_NAMES.iter().position(|&n| n == name)
}

/// A class in the ambient space, by coordinates over [`BASIS_NAMES`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coords: Vec<Rat>,
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass { coords: vec![Rat::zero(); RANK] }
    }

    pub fn from_coords(coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != RANK {
            return Err(Error::Dimension { expected: RANK, found: coords.len() });
        }
        Ok(DivisorClass { coords })
    }

    pub fn basis(i: usize) -> Self {
        let mut c = DivisorClass::zero();
        c.coords[i] = Rat::one();
        c
    }

    /// `E_ij` with the indices in either order.
    pub fn node(i: usize, j: usize) -> Self {
        let (a, b) = (i.min(j), i.max(j));
        DivisorClass::basis(basis_index(&format!("E{a}{b}")).expect("node index"))
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn scale(&self, c: &Rat) -> Self {
        DivisorClass { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn times(&self, n: i64) -> Self {
        self.scale(&rat(n, 1))
    }

    pub fn half(&self) -> Self {
        self.scale(&rat(1, 2))
    }

    pub fn sum<'a>(it: impl IntoIterator<Item = &'a DivisorClass>) -> Self {
        it.into_iter().fold(DivisorClass::zero(), |acc, x| &acc + x)
    }
}

impl std::ops::Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl std::ops::Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.times(-1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coords.iter().zip(BASIS_NAMES) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if a.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{}{name}", fmt_rat(&a))?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(fmt_rat))
    }
}

fn lc(terms: &[(i64, &DivisorClass)]) -> DivisorClass {
    terms.iter().fold(DivisorClass::zero(), |acc, (c, v)| &acc + &v.times(*c))
}

/// `Σ cᵢ·Eᵢ` over node names.
fn nodes(spec: &[(i64, &str)]) -> DivisorClass {
    spec.iter().fold(DivisorClass::zero(), |acc, &(c, n)| {
        &acc + &DivisorClass::basis(basis_index(n).expect("node name")).times(c)
    })
}

/// The Néron–Severi lattice with its named classes.
#[derive(Clone, Debug)]
pub struct KummerNS {
    ambient: QuadSpace,
    lattice: Lattice,
    named: BTreeMap<String, DivisorClass>,
}

/// Gram matrix of the ambient space, `diag(4, -2, …, -2)`.
pub fn ambient_gram() -> Vec<Vec<i64>> {
    (0..RANK)
        .map(|i| (0..RANK).map(|j| if i != j { 0 } else if i == 0 { 4 } else { -2 }).collect())
        .collect()
}

fn trope(name: &str) -> Option<DivisorClass> {
    let l = DivisorClass::basis(0);
    let e0 = DivisorClass::basis(1);
    let digits: Vec<usize> = name.strip_prefix('C')?.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?;
    let sum = match digits.as_slice() {
        [0] => {
            let e1: Vec<DivisorClass> = (2..=6).map(|i| DivisorClass::node(1, i)).collect();
            &(&l - &e0) - &DivisorClass::sum(&e1)
        }
        [1, j] if (2..=6).contains(j) => {
            let es: Vec<DivisorClass> = (1..=6).filter(|i| i != j).map(|i| DivisorClass::node(i, *j)).collect();
            &(&l - &e0) - &DivisorClass::sum(&es)
        }
        [j, k] if 2 <= *j && j < k && *k <= 6 => {
            let rest: Vec<usize> = (2..=6).filter(|x| x != j && x != k).collect();
            let (a, b, c) = (rest[0], rest[1], rest[2]);
            let es = [
                DivisorClass::node(1, *j),
                DivisorClass::node(1, *k),
                DivisorClass::node(*j, *k),
                DivisorClass::node(a, b),
                DivisorClass::node(a, c),
                DivisorClass::node(b, c),
            ];
            &l - &DivisorClass::sum(&es)
        }
        _ => return None,
    };
    Some(sum.half())
}

/// Verdict of the lattice-level even-eight test.
#[derive(Clone, Debug, Serialize)]
pub struct EvenEightVerdict {
    pub self_products_ok: bool,
    pub disjoint: bool,
    pub half_sum: DivisorClass,
    /// `S_Y`-coordinates of `½Σ` when it lies in `S_Y`.
    pub witness: Option<Vec<String>>,
    pub pairing_matrix: Vec<Vec<String>>,
    pub is_even_eight: bool,
}

/// An integral combination of named classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedCombination {
    pub expression: String,
    pub class: DivisorClass,
}

/// Report on the twisted `E₈` inside `N^⊥`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub twist_det: String,
    pub twist_signature: Signature,
    pub nikulin_det: String,
    pub complement_rank: usize,
    pub complement_det: String,
    /// Candidate classes lying in `N^⊥`.
    pub pool_in_complement: Vec<String>,
    /// An ordered 8-subset of the candidate pool realizing the Gram.
    pub pool_solution: Option<Vec<String>>,
    /// A realization by combinations of the pool classes in `N^⊥` with
    /// coefficients in `[-1, 1]`.
    pub extended_solution: Option<Vec<NamedCombination>>,
    pub extended_primitive: bool,
    /// A pool class completing the realization to a basis of `N^⊥`.
    pub completion: Option<String>,
    pub discrepancy: Discrepancy,
}

impl KummerNS {
    pub fn ambient(&self) -> &QuadSpace {
        &self.ambient
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn named(&self) -> &BTreeMap<String, DivisorClass> {
        &self.named
    }

    pub fn class(&self, name: &str) -> Result<&DivisorClass> {
        self.named.get(name).ok_or_else(|| Error::NotFound(format!("unknown class {name}")))
    }

    pub fn pairing(&self, v: &DivisorClass, w: &DivisorClass) -> Rat {
        self.ambient.pairing(&v.coords, &w.coords)
    }

    pub fn square(&self, v: &DivisorClass) -> Rat {
        self.pairing(v, v)
    }

    /// The covering involution: `L ↦ 3L - 4E0`, `E0 ↦ 2L - 3E0`, nodes `E_ij` fixed.
    pub fn alpha(&self, v: &DivisorClass) -> DivisorClass {
        let mut c = v.coords.clone();
        c[0] = &v.coords[0] * rat(3, 1) + &v.coords[1] * rat(2, 1);
        c[1] = &v.coords[0] * rat(-4, 1) + &v.coords[1] * rat(-3, 1);
        DivisorClass { coords: c }
    }

    /// Matrix of `α` acting on row coordinates.
    pub fn alpha_matrix(&self) -> RatMat {
        (0..RANK).map(|i| self.alpha(&DivisorClass::basis(i)).coords).collect()
    }

    pub fn contains(&self, v: &DivisorClass) -> bool {
        self.lattice.integer_coordinates(&v.coords).is_some()
    }

    /// Coordinates in the reduced basis of `S_Y`.
    pub fn lattice_coordinates(&self, v: &DivisorClass) -> Option<Vec<Int>> {
        self.lattice.integer_coordinates(&v.coords)
    }

    pub fn is_even_eight(&self, classes: &[DivisorClass]) -> Result<EvenEightVerdict> {
        if classes.len() != 8 {
            return Err(Error::Dimension { expected: 8, found: classes.len() });
        }
        let pairing_matrix: Vec<Vec<Rat>> =
            classes.iter().map(|a| classes.iter().map(|b| self.pairing(a, b)).collect()).collect();
        let minus_two = rat(-2, 1);
        let self_products_ok = (0..8).all(|i| pairing_matrix[i][i] == minus_two);
        let disjoint = (0..8).all(|i| (0..8).all(|j| i == j || pairing_matrix[i][j].is_zero()));
        let half_sum = DivisorClass::sum(classes).half();
        let witness = self.lattice_coordinates(&half_sum).map(|c| c.iter().map(Int::to_string).collect());
        Ok(EvenEightVerdict {
            is_even_eight: self_products_ok && disjoint && witness.is_some(),
            self_products_ok,
            disjoint,
            half_sum,
            witness,
            pairing_matrix: pairing_matrix.iter().map(|r| r.iter().map(fmt_rat).collect()).collect(),
        })
    }

    /// The even eight `e`, `a` or `b`.
    pub fn even_eight(&self, family: &str) -> Result<Vec<DivisorClass>> {
        (1..=8).map(|i| self.class(&format!("{family}{i}")).cloned()).collect()
    }

    /// The Nikulin lattice on `a1, …, a8` and `½Σaᵢ`.
    pub fn nikulin_lattice(&self) -> Result<Lattice> {
        let a = self.even_eight("a")?;
        let mut gens: RatMat = a.iter().map(|c| c.coords.clone()).collect();
        gens.push(DivisorClass::sum(&a).half().coords);
        lattice_from_generators(&self.ambient, &gens)
    }

    pub fn twist_check(&self) -> Result<TwistReport> {
        let tw = twist_gram();
        let tw_lat = Lattice::from_gram(&tw)?;
        let n = self.nikulin_lattice()?;
        let perp = orthogonal_complement(&n, &self.lattice)?;

        let a = self.even_eight("a")?;
        let mut pool: Vec<(String, DivisorClass)> = node_names().iter().map(|&n| (n.to_string(), self.named[n].clone())).collect();
        pool.extend(trope_names().into_iter().map(|t| {
            let c = self.named[&t].clone();
            (t, c)
        }));
        pool.push(("2C14+a5+a8".into(), lc(&[(2, &self.named["C14"]), (1, &a[4]), (1, &a[7])])));
        pool.push(("2E23+a6+a7".into(), lc(&[(2, &self.named["E23"]), (1, &a[5]), (1, &a[6])])));
        let in_perp: Vec<(String, DivisorClass)> =
            pool.into_iter().filter(|(_, c)| a.iter().all(|x| self.pairing(c, x).is_zero())).collect();

        let pool_classes: Vec<DivisorClass> = in_perp.iter().map(|(_, c)| c.clone()).collect();
        let pool_gram: Vec<Vec<i64>> = pool_classes
            .iter()
            .map(|x| pool_classes.iter().map(|y| small_int(&self.pairing(x, y))).collect())
            .collect::<Result<_>>()?;
        let pool_solution =
            realize_gram(&pool_gram, &tw).map(|idx| idx.into_iter().map(|i| in_perp[i].0.clone()).collect::<Vec<_>>());

        let combos = short_combinations(&pool_gram, 1);
        let combo_gram: Vec<Vec<i64>> =
            combos.iter().map(|x| combos.iter().map(|y| quad(&pool_gram, x, y)).collect()).collect();
        let names: Vec<&str> = in_perp.iter().map(|(n, _)| n.as_str()).collect();
        let extended = realize_gram(&combo_gram, &tw).map(|idx| {
            idx.into_iter()
                .map(|i| {
                    let terms: Vec<(i64, &DivisorClass)> = combos[i].iter().copied().zip(&pool_classes).collect();
                    NamedCombination { expression: render_combination(&combos[i], &names), class: lc(&terms) }
                })
                .collect::<Vec<_>>()
        });
        let mut extended_primitive = false;
        let mut completion = None;
        if let Some(found) = &extended {
            let gens: RatMat = found.iter().map(|c| c.class.coords.clone()).collect();
            let sub = lattice_from_generators(&self.ambient, &gens)?;
            let sat = saturation(&sub, &perp)?;
            extended_primitive = index_in(&sub, &sat)? == Int::one();
            for (name, c) in &in_perp {
                let mut with = gens.clone();
                with.push(c.coords.clone());
                let t = lattice_from_generators(&self.ambient, &with)?;
                if t.rank() == perp.rank() && index_in(&t, &perp)? == Int::one() {
                    completion = Some(name.clone());
                    break;
                }
            }
        }

        let printed = "E14, C12, E26, C16, E16, C0, E14, 2C14+a5+a8".to_string();
        let computed = format!(
            "2C14+a5+a8 {} N^perp; pool search {}",
            if in_perp.iter().any(|(n, _)| n == "2C14+a5+a8") { "lies in" } else { "is not in" },
            if pool_solution.is_some() { "found a realization" } else { "found no realization" }
        );
        let mut discrepancy = Discrepancy::new("twist-generators", printed, computed);
        if let Some(found) = &extended {
            let list: Vec<&str> = found.iter().map(|c| c.expression.as_str()).collect();
            discrepancy = discrepancy.resolved(format!("e1..e8 = {}", list.join("; ")));
        }

        Ok(TwistReport {
            twist_det: determinant(&tw_lat).to_string(),
            twist_signature: signature(&tw_lat),
            nikulin_det: determinant(&n).to_string(),
            complement_rank: perp.rank(),
            complement_det: determinant(&perp).to_string(),
            pool_in_complement: in_perp.iter().map(|(n, _)| n.clone()).collect(),
            pool_solution,
            extended_solution: extended,
            extended_primitive,
            completion,
            discrepancy,
        })
    }

    /// Parses and evaluates a linear expression in named classes.
    pub fn eval(&self, expr: &str) -> Result<DivisorClass> {
        let mut p = ExprParser { src: expr.as_bytes(), pos: 0, ns: self };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("unexpected input at offset {} in {expr:?}", p.pos)));
        }
        Ok(v)
    }

    /// 16×16 products `node · trope`.
    pub fn incidence(&self) -> Vec<Vec<Rat>> {
        let tropes = trope_names();
        node_names()
            .iter()
            .map(|n| tropes.iter().map(|t| self.pairing(&self.named[*n], &self.named[t])).collect())
            .collect()
    }

    /// Each node meets exactly six tropes with product 1 and is disjoint from
    /// the rest, and vice versa.
    pub fn incidence_16_6(&self) -> bool {
        let m = self.incidence();
        let (one, zero) = (Rat::one(), Rat::zero());
        let entries_ok = m.iter().flatten().all(|x| *x == one || *x == zero);
        let rows_ok = m.iter().all(|r| r.iter().filter(|x| **x == one).count() == 6);
        let cols_ok = (0..16).all(|j| m.iter().filter(|r| r[j] == one).count() == 6);
        entries_ok && rows_ok && cols_ok
    }

    /// `α` is an involution preserving the pairing and `S_Y`.
    pub fn alpha_is_isometry(&self) -> bool {
        let a = self.alpha_matrix();
        let g = self.ambient.gram().clone();
        let id: RatMat = matrix::to_rat(&matrix::identity(RANK));
        let squares_to_id = matrix::mul_rat(&a, &a) == id;
        let preserves = matrix::mul_rat(&matrix::mul_rat(&a, &g), &matrix::transpose(&a)) == g;
        let stable = self.lattice.basis().iter().all(|b| {
            let v = DivisorClass { coords: b.clone() };
            self.contains(&self.alpha(&v))
        });
        squares_to_id && preserves && stable
    }
}

/// Gram of the twisted `E₈(-1)`: `e7² = -4` and `e6·e7 = 2`.
pub fn twist_gram() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (i, j) in E8_EDGES {
        g[i][j] = 1;
        g[j][i] = 1;
    }
    g[6][6] = -4;
    g[5][6] = 2;
    g[6][5] = 2;
    g
}

fn small_int(r: &Rat) -> Result<i64> {
    use num_traits::ToPrimitive;
    if !r.is_integer() {
        return Err(Error::NonIntegralPairing(fmt_rat(r)));
    }
    r.to_integer().to_i64().ok_or_else(|| Error::Overflow(fmt_rat(r)))
}

fn quad(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            s += a * b * gram[i][j];
        }
    }
    s
}

fn render_combination(c: &[i64], names: &[&str]) -> String {
    let mut out = String::new();
    for (&k, name) in c.iter().zip(names) {
        if k == 0 {
            continue;
        }
        let sign = if k < 0 { "-" } else { "+" };
        if out.is_empty() {
            if k < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if k.abs() != 1 {
            out.push_str(&k.abs().to_string());
        }
        out.push_str(name);
    }
    out
}

/// Indices of pool elements realizing `gram` in order, by backtracking on
/// self-products and products with earlier choices.
fn realize_gram(products: &[Vec<i64>], gram: &[Vec<i64>]) -> Option<Vec<usize>> {
    // each vertex after the first has an earlier neighbour: e7, e6, …, e2, e8, e1
    let order = [6, 5, 4, 3, 2, 1, 7, 0];
    fn go(depth: usize, order: &[usize], gram: &[Vec<i64>], products: &[Vec<i64>], chosen: &mut Vec<usize>) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for c in 0..products.len() {
            if chosen.contains(&c) || products[c][c] != gram[v][v] {
                continue;
            }
            if (0..depth).all(|k| products[c][chosen[k]] == gram[v][order[k]]) {
                chosen.push(c);
                if go(depth + 1, order, gram, products, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if !go(0, &order, gram, products, &mut chosen) {
        return None;
    }
    let mut out = vec![0; gram.len()];
    for (k, &v) in order.iter().enumerate() {
        out[v] = chosen[k];
    }
    Some(out)
}

/// Coefficient vectors `c` with `|cᵢ| ≤ bound`, first nonzero entry positive,
/// and `cᵀGc ∈ {-2, -4}`.
fn short_combinations(gram: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let k = gram.len();
    let width = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..width.pow(k as u32) {
        let mut rest = idx;
        let c: Vec<i64> = (0..k)
            .map(|_| {
                let d = (rest % width) as i64 - bound;
                rest /= width;
                d
            })
            .collect();
        if !c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            continue;
        }
        if matches!(quad(gram, &c, &c), -2 | -4) {
            out.push(c);
        }
    }
    out
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    ns: &'a KummerNS,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<DivisorClass> {
        let mut acc = DivisorClass::zero();
        let mut sign = 1;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.times(sign);
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<DivisorClass> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) { Some(self.number()?) } else { None };
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
        }
        let factor = match self.peek() {
            Some(c) if c == b'(' || c.is_ascii_alphabetic() => self.factor()?,
            _ if coeff.is_some() => return Err(self.err("a bare number is not a class")),
            _ => return Err(self.err("expected a term")),
        };
        Ok(match coeff {
            Some(c) => factor.scale(&c),
            None => factor,
        })
    }

    fn number(&mut self) -> Result<Rat> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
            self.pos += 1;
        }
        parse_rat(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn factor(&mut self) -> Result<DivisorClass> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(v);
        }
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if name == "alpha" {
            let arg = self.factor()?;
            return Ok(self.ns.alpha(&arg));
        }
        self.ns.class(name).cloned()
    }
}

/// Assembles `S_Y` from the 17 basis classes and the 16 tropes, names the
/// classes used throughout, and validates the lattice invariants.
pub fn build_sy() -> Result<KummerNS> {
    let ambient = QuadSpace::from_int(&ambient_gram())?;
    let mut named: BTreeMap<String, DivisorClass> = BTreeMap::new();
    for (i, n) in BASIS_NAMES.iter().enumerate() {
        named.insert(n.to_string(), DivisorClass::basis(i));
    }
    for t in trope_names() {
        named.insert(t.clone(), trope(&t).expect("trope name"));
    }
    let mut gens: RatMat = (0..RANK).map(|i| DivisorClass::basis(i).coords).collect();
    gens.extend(trope_names().iter().map(|t| named[t].coords.clone()));
    let lattice = lattice_from_generators(&ambient, &gens)?;
    let mut ns = KummerNS { ambient, lattice, named };
    ns.named.extend(preset_classes(&ns));

    let sig = signature(&ns.lattice);
    let det = determinant(&ns.lattice);
    if ns.lattice.rank() != RANK || sig != Signature::new(1, 16) || det.abs() != int(64) {
        return Err(Error::InvalidForm(format!("S_Y has rank {}, signature {sig}, det {det}", ns.lattice.rank())));
    }
    let l = &ns.named["L"];
    for t in trope_names() {
        let c = &ns.named[&t];
        if ns.square(c) != rat(-2, 1) || ns.pairing(l, c) != rat(2, 1) {
            return Err(Error::InvalidForm(format!("trope {t} has the wrong products")));
        }
    }
    Ok(ns)
}

/// `e5` with the printed `+(E24+E25+E34+E36+E45)`.
pub fn e5_as_printed() -> DivisorClass {
    let le = &DivisorClass::basis(0) - &DivisorClass::basis(1);
    &le.times(5) - &nodes(&[(3, "E12"), (2, "E13"), (2, "E46"), (2, "E56"), (-1, "E24"), (-1, "E25"), (-1, "E34"), (-1, "E36"), (-1, "E45")])
}

/// The named classes `e1…e8`, `a1…a8`, `b1…b8`, `D`, `B` and the fibers
/// `san1_F1…F7`, `san6_F1…F6` as printed.
pub fn preset_classes(ns: &KummerNS) -> BTreeMap<String, DivisorClass> {
    let le = &DivisorClass::basis(0) - &DivisorClass::basis(1);
    let m = |k: i64, spec: &[(i64, &str)]| &le.times(k) - &nodes(spec);
    let t = |n: &str| ns.named[n].clone();
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: DivisorClass| {
        out.insert(k.to_string(), v);
    };

    let e: Vec<DivisorClass> = vec![
        m(1, &[(1, "E12"), (1, "E46")]),
        m(2, &[(1, "E12"), (1, "E13"), (1, "E24"), (1, "E46"), (1, "E56")]),
        m(3, &[(2, "E12"), (1, "E13"), (1, "E24"), (1, "E36"), (1, "E45"), (1, "E46"), (1, "E56")]),
        m(4, &[(2, "E12"), (2, "E13"), (2, "E46"), (1, "E24"), (1, "E25"), (1, "E36"), (1, "E45"), (1, "E56")]),
        m(5, &[(3, "E12"), (2, "E13"), (2, "E46"), (2, "E56"), (1, "E24"), (1, "E25"), (1, "E34"), (1, "E36"), (1, "E45")]),
        t("C23"),
        ns.alpha(&t("C23")),
        t("E35"),
    ];
    let a: Vec<DivisorClass> = vec![
        m(1, &[(1, "E12"), (1, "E56")]),
        m(2, &[(1, "E12"), (1, "E13"), (1, "E46"), (1, "E56"), (1, "E25")]),
        m(3, &[(2, "E12"), (1, "E13"), (1, "E46"), (1, "E56"), (1, "E25"), (1, "E36"), (1, "E45")]),
        m(4, &[(2, "E12"), (2, "E13"), (2, "E56"), (1, "E46"), (1, "E24"), (1, "E25"), (1, "E36"), (1, "E45")]),
        m(5, &[(3, "E12"), (2, "E13"), (2, "E46"), (2, "E56"), (1, "E24"), (1, "E25"), (1, "E36"), (1, "E45"), (1, "E35")]),
        e[5].clone(),
        e[6].clone(),
        t("E34"),
    ];
    let b: Vec<DivisorClass> = vec![
        m(1, &[(1, "E12"), (1, "E45")]),
        m(2, &[(1, "E12"), (1, "E13"), (1, "E24"), (1, "E45"), (1, "E56")]),
        m(3, &[(2, "E12"), (1, "E13"), (1, "E24"), (1, "E36"), (1, "E45"), (1, "E46"), (1, "E56")]),
        t("E35"),
        m(1, &[(1, "E12"), (1, "E56")]),
        e[5].clone(),
        e[6].clone(),
        t("E34"),
    ];
    let d = m(5, &[(3, "E12"), (2, "E13"), (2, "E46"), (2, "E56"), (1, "E24"), (1, "E25"), (1, "E36"), (1, "E45")]);
    let big_b = m(3, &[(2, "E12"), (1, "E13"), (1, "E24"), (1, "E45"), (1, "E46"), (1, "E56")]);

    let san1 = [
        &e[4] + &t("E34"),
        &e[3] + &a[0],
        &e[2] + &a[1],
        &e[1] + &a[2],
        &e[0] + &a[3],
        &e[7] + &a[4],
        &(&e[5] + &e[6]) + &lc(&[
            (2, &t("E23")),
            (2, &t("C12")),
            (2, &t("E26")),
            (2, &t("C16")),
            (2, &t("E16")),
            (2, &t("C0")),
            (1, &t("E14")),
            (1, &t("E15")),
        ]),
    ];
    let san6 = [
        &b[0] + &e[1],
        &b[1] + &e[0],
        &b[2] + &t("E36"),
        &b[3] + &m(3, &[(2, "E12"), (1, "E13"), (1, "E24"), (1, "E45"), (1, "E56"), (1, "E46"), (1, "E35")]),
        &b[4] + &lc(&[(1, &t("E14")), (2, &t("C0")), (2, &t("E14")), (2, &t("C14")), (1, &t("E15")), (1, &t("E16"))]),
        &(&e[5] + &e[6]) + &lc(&[(2, &t("C12")), (2, &t("E23")), (1, &t("E26")), (1, &t("E25"))]),
    ];

    for (fam, list) in [("e", &e), ("a", &a), ("b", &b)] {
        for (i, v) in list.iter().enumerate() {
            put(&format!("{fam}{}", i + 1), v.clone());
        }
    }
    put("D", d);
    put("B", big_b);
    for (i, f) in san1.iter().enumerate() {
        put(&format!("san1_F{}", i + 1), f.clone());
    }
    for (i, f) in san6.iter().enumerate() {
        put(&format!("san6_F{}", i + 1), f.clone());
    }
    out
}

/// Displayed right-hand sides of the half-sums `½Σaᵢ` and `½Σbᵢ`.
pub fn printed_half_sum(ns: &KummerNS, family: &str) -> Option<DivisorClass> {
    let le = &DivisorClass::basis(0) - &DivisorClass::basis(1);
    let m = |k: i64, spec: &[(i64, &str)]| &le.times(k) - &nodes(spec);
    let t = |n: &str| ns.named[n].clone();
    match family {
        "a" => Some(&(&t("C13") + &t("E34")) + &m(8, &[(5, "E12"), (4, "E46"), (3, "E13"), (3, "E56"), (1, "E36"), (1, "E25"), (1, "E45")])),
        "b" => Some(
            &(&(&t("C13") + &t("E35")) + &t("E34"))
                + &m(4, &[(3, "E12"), (2, "E45"), (2, "E56"), (1, "E13"), (1, "E24"), (1, "E46")]),
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trope_products() {
        let ns = build_sy().unwrap();
        assert_eq!(ns.square(&ns.named["C0"]), rat(-2, 1));
        assert_eq!(ns.pairing(&ns.named["L"], &ns.named["E0"]), Rat::zero());
        assert!(ns.incidence_16_6());
    }

    #[test]
    fn parser_basics() {
        let ns = build_sy().unwrap();
        let v = ns.eval("5(L-E0) - 3E12 - 2*(E13+E46+E56) - (E24+E25+E36+E45)").unwrap();
        assert_eq!(v, ns.named["D"]);
        assert_eq!(ns.eval("1/2 E0").unwrap(), DivisorClass::basis(1).half());
        assert_eq!(ns.eval("alpha(E0)").unwrap(), ns.eval("2L - 3E0").unwrap());
        assert!(ns.eval("2 +").is_err());
        assert!(ns.eval("Q7").is_err());
        assert!(ns.eval("3").is_err());
    }

    #[test]
    fn display_round_trips() {
        let ns = build_sy().unwrap();
        for name in ["C0", "e5", "D", "a4"] {
            let v = &ns.named[name];
            assert_eq!(&ns.eval(&v.to_string()).unwrap(), v, "{name}: {v}");
        }
    }
}
