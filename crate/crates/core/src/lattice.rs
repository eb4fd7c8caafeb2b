//! Lattices given by generators inside a nondegenerate rational quadratic
//! space.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{common_denominator, fmt_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMat, RatMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    gram: RatMat,
}

impl QuadSpace {
    pub fn new(gram: RatMat) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, found: row.len() });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Parse(format!("gram is not symmetric at ({i},{j})")));
                }
            }
        }
        if n == 0 || matrix::det_rat(&gram).is_zero() {
            return Err(Error::DegenerateSpace);
        }
        Ok(QuadSpace { gram })
    }

    pub fn from_int(gram: &[Vec<i64>]) -> Result<Self> {
        QuadSpace::new(matrix::to_rat(&matrix::from_i64(gram)))
    }

    /// Block diagonal space `a ⊕ b`.
    pub fn direct_sum(a: &QuadSpace, b: &QuadSpace) -> QuadSpace {
        let (n, m) = (a.dim(), b.dim());
        let mut gram = vec![vec![Rat::zero(); n + m]; n + m];
        for i in 0..n {
            gram[i][..n].clone_from_slice(&a.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].clone_from_slice(&b.gram[i]);
        }
        QuadSpace { gram }
    }

    pub fn scaled(&self, m: &Rat) -> QuadSpace {
        QuadSpace {
            gram: self.gram.iter().map(|r| r.iter().map(|x| x * m).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn pairing(&self, a: &[Rat], b: &[Rat]) -> Rat {
        matrix::bilinear(a, &self.gram, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize) -> Self {
        Signature { plus, minus }
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(self.plus + o.plus, self.minus + o.minus)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    space: QuadSpace,
    generators: RatMat,
    basis: RatMat,
    pivots: Vec<usize>,
    gram: IntMat,
    even: bool,
}

/// Builds an even lattice from rational generators.
pub fn lattice_from_generators(space: &QuadSpace, generators: &RatMat) -> Result<Lattice> {
    Lattice::build(space, generators, true)
}

impl Lattice {
    /// The standard lattice `Zⁿ` with the given integral Gram matrix.
    pub fn from_gram(gram: &[Vec<i64>]) -> Result<Lattice> {
        let space = QuadSpace::from_int(gram)?;
        let ident = matrix::to_rat(&matrix::identity(gram.len()));
        lattice_from_generators(&space, &ident)
    }

    /// Integral lattice that may be odd. Used only by realization searches;
    /// the classification path goes through [`lattice_from_generators`].
    pub fn integral_allow_odd(space: &QuadSpace, generators: &RatMat) -> Result<Lattice> {
        Lattice::build(space, generators, false)
    }

    fn build(space: &QuadSpace, generators: &RatMat, require_even: bool) -> Result<Lattice> {
        let dim = space.dim();
        for g in generators {
            if g.len() != dim {
                return Err(Error::Dimension { expected: dim, found: g.len() });
            }
        }
        let den = common_denominator(generators.iter().flatten());
        let scaled: IntMat = generators
            .iter()
            .map(|g| g.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let (h, _, pivots) = if scaled.is_empty() {
            (Vec::new(), Vec::new(), Vec::new())
        } else {
            matrix::hermite_with_transform(&scaled)
        };
        let denr = Rat::from_integer(den);
        let basis: RatMat = h
            .into_iter()
            .take(pivots.len())
            .map(|r| r.into_iter().map(|x| Rat::from_integer(x) / &denr).collect())
            .collect();
        let gram_rat = matrix::mul_rat(&matrix::mul_rat(&basis, &space.gram), &matrix::transpose(&basis));
        let mut gram = Vec::with_capacity(basis.len());
        let mut even = true;
        for (i, row) in gram_rat.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                if !x.is_integer() {
                    return Err(Error::NonIntegralPairing(format!(
                        "basis vectors {i} and {j} pair to {}",
                        fmt_rat(x)
                    )));
                }
                let v = x.to_integer();
                if i == j && v.is_odd() {
                    even = false;
                    if require_even {
                        return Err(Error::OddNorm(format!("basis vector {i} has norm {v}")));
                    }
                }
                out.push(v);
            }
            gram.push(out);
        }
        Ok(Lattice {
            space: space.clone(),
            generators: generators.clone(),
            basis,
            pivots,
            gram,
            even,
        })
    }

    pub fn space(&self) -> &QuadSpace {
        &self.space
    }

    pub fn generators(&self) -> &RatMat {
        &self.generators
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_nondegenerate(&self) -> bool {
        !determinant(self).is_zero()
    }

    pub fn pairing(&self, a: &[Rat], b: &[Rat]) -> Rat {
        self.space.pairing(a, b)
    }

    /// Rational coordinates of `v` in the basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if v.len() != self.space.dim() {
            return None;
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = &rest[p] / &row[p];
            if !c.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &c * y;
                }
            }
            coords.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Integer coordinates of `v` in the basis, if `v` is a lattice vector.
    pub fn integer_coordinates(&self, v: &[Rat]) -> Option<Vec<Int>> {
        let c = self.coordinates(v)?;
        c.iter().all(Rat::is_integer).then(|| c.iter().map(Rat::to_integer).collect())
    }

    /// Ambient vector with the given basis coordinates.
    pub fn vector(&self, coords: &[Rat]) -> Vec<Rat> {
        matrix::vec_mul_rat(coords, &self.basis)
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.space == other.space && other.basis.iter().all(|v| is_member(v, self))
    }
}

pub fn determinant(l: &Lattice) -> Int {
    matrix::det_bareiss(&l.gram)
}

/// Signature by symmetric elimination over the rationals. Null directions of
/// a degenerate lattice are counted in neither part.
pub fn signature(l: &Lattice) -> Signature {
    signature_of(&matrix::to_rat(&l.gram))
}

pub fn signature_of(gram: &RatMat) -> Signature {
    let mut a = gram.clone();
    let n = a.len();
    let (mut plus, mut minus) = (0, 0);
    let sym_swap = |a: &mut RatMat, i: usize, j: usize| {
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                sym_swap(&mut a, k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
            {
                // a[i][i] = a[j][j] = 0, so i + j has norm 2·a[i][j] ≠ 0
                let rj = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(rj) {
                    *x += y;
                }
                for row in a.iter_mut() {
                    let y = row[j].clone();
                    row[i] += y;
                }
                sym_swap(&mut a, k, i);
            } else {
                break;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        for i in k + 1..n {
            a[i][k] = Rat::zero();
            a[k][i] = Rat::zero();
        }
    }
    Signature::new(plus, minus)
}

/// Same module with the form multiplied by `m`.
pub fn rescale(l: &Lattice, m: i64) -> Result<Lattice> {
    if m == 0 {
        return Err(Error::DegenerateSpace);
    }
    let space = l.space.scaled(&Rat::from_integer(Int::from(m)));
    lattice_from_generators(&space, &l.basis)
}

pub fn direct_sum(a: &Lattice, b: &Lattice) -> Lattice {
    let space = QuadSpace::direct_sum(&a.space, &b.space);
    let (n, m) = (a.space.dim(), b.space.dim());
    let mut gens: RatMat = a
        .basis
        .iter()
        .map(|r| r.iter().cloned().chain(std::iter::repeat_n(Rat::zero(), m)).collect())
        .collect();
    gens.extend(
        b.basis
            .iter()
            .map(|r| std::iter::repeat_n(Rat::zero(), n).chain(r.iter().cloned()).collect()),
    );
    Lattice::build(&space, &gens, a.even && b.even).expect("direct sum of integral lattices is integral")
}

/// Coordinates of each basis vector of `sub` in the basis of `sup`.
fn relative_coordinates(sub: &Lattice, sup: &Lattice) -> Result<IntMat> {
    if sub.space != sup.space {
        return Err(Error::NotSublattice("lattices live in different spaces".into()));
    }
    sub.basis
        .iter()
        .enumerate()
        .map(|(i, v)| {
            sup.integer_coordinates(v)
                .ok_or_else(|| Error::NotSublattice(format!("basis vector {i} is not in the larger lattice")))
        })
        .collect()
}

/// `[sup : sub]` for a full-rank sublattice.
pub fn index_in(sub: &Lattice, sup: &Lattice) -> Result<Int> {
    let c = relative_coordinates(sub, sup)?;
    if sub.rank() != sup.rank() {
        return Err(Error::NotSublattice(format!("rank {} inside rank {}", sub.rank(), sup.rank())));
    }
    let s = matrix::smith(&c);
    Ok(s.divisors.iter().fold(Int::one(), |acc, d| acc * d))
}

/// Vectors of `ambient` orthogonal to `sub`; always primitive in `ambient`.
pub fn orthogonal_complement(sub: &Lattice, ambient: &Lattice) -> Result<Lattice> {
    relative_coordinates(sub, ambient)?;
    let cross = matrix::mul_rat(
        &matrix::mul_rat(&ambient.basis, &ambient.space.gram),
        &matrix::transpose(&sub.basis),
    );
    let kernel_rows = if sub.rank() == 0 {
        matrix::identity(ambient.rank())
    } else {
        let den = common_denominator(cross.iter().flatten());
        let denr = Rat::from_integer(den);
        let int_cross: IntMat = cross
            .iter()
            .map(|r| r.iter().map(|x| (x * &denr).to_integer()).collect())
            .collect();
        matrix::left_kernel(&int_cross)
    };
    let gens: RatMat = kernel_rows
        .iter()
        .map(|c| ambient.vector(&c.iter().map(|x| Rat::from_integer(x.clone())).collect::<Vec<_>>()))
        .collect();
    Lattice::build(&ambient.space, &gens, ambient.even)
}

/// Smallest primitive sublattice of `ambient` containing `sub`.
pub fn saturation(sub: &Lattice, ambient: &Lattice) -> Result<Lattice> {
    let c = relative_coordinates(sub, ambient)?;
    let r = ambient.rank();
    let coords = if c.is_empty() {
        Vec::new()
    } else {
        let annihilator = matrix::right_kernel(&c, r);
        if annihilator.is_empty() {
            matrix::identity(r)
        } else {
            matrix::left_kernel(&matrix::transpose(&annihilator))
        }
    };
    let gens: RatMat = coords
        .iter()
        .map(|c| ambient.vector(&c.iter().map(|x| Rat::from_integer(x.clone())).collect::<Vec<_>>()))
        .collect();
    Lattice::build(&ambient.space, &gens, ambient.even)
}

pub fn is_member(v: &[Rat], l: &Lattice) -> bool {
    l.integer_coordinates(v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn u() -> Lattice {
        Lattice::from_gram(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn t_a() -> Lattice {
        Lattice::from_gram(&[
            vec![0, 1, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, -2],
        ])
        .unwrap()
    }

    #[test]
    fn half_vector_in_hyperbolic_plane_is_rejected() {
        let space = QuadSpace::from_int(&[vec![0, 1], vec![1, 0]]).unwrap();
        let gens = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        assert!(matches!(lattice_from_generators(&space, &gens), Err(Error::NonIntegralPairing(_))));
    }

    #[test]
    fn degenerate_space_is_rejected() {
        assert_eq!(QuadSpace::from_int(&[vec![1, 1], vec![1, 1]]), Err(Error::DegenerateSpace));
    }

    #[test]
    fn odd_generators_are_rejected() {
        let space = QuadSpace::from_int(&[vec![1]]).unwrap();
        let one = vec![vec![rat(1, 1)]];
        assert!(matches!(lattice_from_generators(&space, &one), Err(Error::OddNorm(_))));
        assert!(!Lattice::integral_allow_odd(&space, &one).unwrap().is_even());
    }

    #[test]
    fn basic_invariants() {
        assert_eq!(determinant(&t_a()), Int::from(-2));
        assert_eq!(signature(&u()), Signature::new(1, 1));
        assert_eq!(signature(&t_a()), Signature::new(2, 3));
        let n = Lattice::from_gram(&[vec![2, 1, 2], vec![1, -2, 0], vec![2, 0, 0]]).unwrap();
        assert_eq!(determinant(&n), Int::from(8));
        assert_eq!(determinant(&direct_sum(&u(), &n)), Int::from(-8));
        assert_eq!(determinant(&rescale(&t_a(), 2).unwrap()), Int::from(-64));
        assert_eq!(rescale(&u(), 2).unwrap().gram(), &matrix::from_i64(&[vec![0, 2], vec![2, 0]]));
    }

    #[test]
    fn index_of_doubled_lattice() {
        let two = rescale(&t_a(), 1).unwrap();
        let doubled = lattice_from_generators(
            two.space(),
            &two.basis().iter().map(|r| r.iter().map(|x| x * rat(2, 1)).collect()).collect(),
        )
        .unwrap();
        assert_eq!(index_in(&doubled, &two).unwrap(), Int::from(32));
        assert_eq!(index_in(&u(), &u()).unwrap(), Int::one());
        assert!(index_in(&two, &doubled).is_err());
        assert_eq!(saturation(&doubled, &two).unwrap().basis(), two.basis());
    }

    #[test]
    fn isotropic_line_is_its_own_complement() {
        let line = lattice_from_generators(u().space(), &vec![vec![rat(1, 1), rat(0, 1)]]).unwrap();
        let perp = orthogonal_complement(&line, &u()).unwrap();
        assert_eq!(perp.rank(), 1);
        assert_eq!(perp.basis(), line.basis());
    }

    #[test]
    fn membership() {
        let l = t_a();
        assert!(is_member(&vec![rat(0, 1); 5], &l));
        assert!(is_member(&[rat(1, 1), rat(-3, 1), rat(0, 1), rat(2, 1), rat(5, 1)], &l));
        assert!(!is_member(&[rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)], &l));
    }
}
