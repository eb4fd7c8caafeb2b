//! Dense integer and rational matrices as row vectors, with the normal forms
//! the lattice code relies on.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};

pub type IntMat = Vec<Vec<Int>>;
pub type RatMat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMat {
    rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
}

pub fn to_rat(m: &IntMat) -> RatMat {
    m.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul_int(a: &IntMat, b: &IntMat) -> IntMat {
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| (0..k).fold(Int::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn mul_rat(a: &RatMat, b: &RatMat) -> RatMat {
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    (0..k).fold(Rat::zero(), |acc, t| {
                        if row[t].is_zero() {
                            acc
                        } else {
                            acc + &row[t] * &b[t][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `v · M` for a row vector `v`.
pub fn vec_mul_rat(v: &[Rat], m: &RatMat) -> Vec<Rat> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![Rat::zero(); n];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// `a G bᵀ`.
pub fn bilinear(a: &[Rat], g: &RatMat, b: &[Rat]) -> Rat {
    dot_rat(&vec_mul_rat(a, g), b)
}

fn row_sub_mul(m: &mut [Vec<Int>], target: usize, src: usize, k: &Int) {
    if k.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= k * y;
    }
}

fn negate_row(m: &mut [Vec<Int>], i: usize) {
    for x in m[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Row echelon form with transform: returns `(H, U, pivots)` with `U·A = H`,
/// `U` unimodular, `H` in row-style Hermite normal form (positive pivots,
/// entries above a pivot reduced into `[0, pivot)`), zero rows last.
pub fn hermite_with_transform(a: &IntMat) -> (IntMat, IntMat, Vec<usize>) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            row_sub_mul(&mut h, i, r, &q);
            row_sub_mul(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

/// Nonzero rows of the row-style Hermite normal form.
pub fn hermite(a: &IntMat) -> IntMat {
    let (h, _, pivots) = hermite_with_transform(a);
    h.into_iter().take(pivots.len()).collect()
}

/// Basis of the left kernel `{x ∈ Zᵐ : x·A = 0}`. The result is saturated.
pub fn left_kernel(a: &IntMat) -> IntMat {
    let (_, u, pivots) = hermite_with_transform(a);
    hermite(&u[pivots.len()..].to_vec())
}

/// Basis of the right kernel `{y ∈ Zⁿ : A·y = 0}`, as rows.
pub fn right_kernel(a: &IntMat, ncols: usize) -> IntMat {
    if a.is_empty() {
        return identity(ncols);
    }
    left_kernel(&transpose(a))
}

/// Smith normal form `U·A·V = D` of an arbitrary integer matrix.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero elementary divisors, positive, each dividing the next.
    pub divisors: Vec<Int>,
    pub u: IntMat,
    pub v: IntMat,
}

pub fn smith(a: &IntMat) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut divisors = Vec::new();

    let col_sub_mul = |d: &mut IntMat, target: usize, src: usize, k: &Int| {
        for row in d.iter_mut() {
            let s = row[src].clone();
            row[target] -= k * s;
        }
    };
    let swap_cols = |d: &mut IntMat, i: usize, j: usize| {
        for row in d.iter_mut() {
            row.swap(i, j);
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_sub_mul(&mut d, i, t, &q);
                row_sub_mul(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_sub_mul(&mut d, j, t, &q);
                col_sub_mul(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -Int::one();
                    row_sub_mul(&mut d, t, i, &minus_one);
                    row_sub_mul(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_zero() {
            break;
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        divisors.push(d[t][t].clone());
    }
    Smith { divisors, u, v }
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det_bareiss(a: &IntMat) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse_rat(a: &RatMat) -> Option<RatMat> {
    let n = a.len();
    let mut m: RatMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pivot_row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(pivot_row) {
                *x -= &f * y;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix.
pub fn det_rat(a: &RatMat) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            let pivot_row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Rank of a rational matrix.
pub fn rank_rat(a: &RatMat) -> usize {
    let mut m = a.clone();
    let n = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            let pivot_row = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(pivot_row) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMat {
        from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn hermite_is_reduced_and_transform_holds() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u, piv) = hermite_with_transform(&a);
        assert_eq!(mul_int(&u, &a), h);
        assert_eq!(piv, vec![0, 1, 2]);
        assert_eq!(h, im(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        assert_eq!(det_bareiss(&u).abs(), Int::one());
    }

    #[test]
    fn kernels() {
        let a = im(&[&[1, 2], &[2, 4], &[3, 6]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 2);
        for row in &k {
            assert!(mul_int(&vec![row.clone()], &a)[0].iter().all(Zero::is_zero));
        }
        let r = right_kernel(&a, 2);
        assert_eq!(r, im(&[&[2, -1]]));
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.divisors, vec![Int::from(2), Int::from(6), Int::from(12)]);
        let d = mul_int(&mul_int(&s.u, &a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { s.divisors[i].clone() } else { Int::zero() };
                assert_eq!(*x, expect);
            }
        }
    }

    #[test]
    fn determinants_agree() {
        let a = im(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        assert_eq!(det_bareiss(&a), Int::from(2));
        assert_eq!(det_rat(&to_rat(&a)), Rat::from_integer(Int::from(2)));
        let inv = inverse_rat(&to_rat(&a)).unwrap();
        assert_eq!(mul_rat(&inv, &to_rat(&a)), to_rat(&identity(3)));
        assert_eq!(rank_rat(&to_rat(&im(&[&[1, 2], &[2, 4]]))), 1);
    }
}
