//! Exact integer linear algebra: Hermite and Smith normal forms, ranks,
//! determinants and coordinate solves over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is a basis of that lattice in echelon form: each row starts
/// with a positive pivot strictly to the right of the previous pivot, and
/// entries above a pivot are reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> IntMatrix {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: IntMatrix = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut top = 0;
    for col in 0..width {
        if top >= m.len() {
            break;
        }
        // Euclid on the column until a single nonzero entry remains at `top`.
        loop {
            let pivot = (top..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(p) = pivot else { break };
            m.swap(top, p);
            let mut done = true;
            for i in top + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[top][col]);
                let (head, tail) = m.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[top], &q);
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[top][col].is_zero() {
            continue;
        }
        if m[top][col].is_negative() {
            for x in m[top].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..top {
            let q = m[i][col].div_floor(&m[top][col]);
            if !q.is_zero() {
                let (head, tail) = m.split_at_mut(top);
                sub_scaled(&mut head[i], &tail[0], &q);
            }
        }
        top += 1;
    }
    m.truncate(top);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

fn sub_scaled(target: &mut [BigInt], source: &[BigInt], factor: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

/// Column index of the first nonzero entry of each row of an echelon matrix.
pub fn pivots(echelon: &[Vec<BigInt>]) -> Vec<usize> {
    echelon
        .iter()
        .map(|r| {
            r.iter()
                .position(|x| !x.is_zero())
                .expect("echelon rows are nonzero")
        })
        .collect()
}

/// Rank over Q.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    hermite_rows(rows).len()
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Primitive normal of the hyperplane spanned by `d - 1` vectors of `Z^d`,
/// or `None` when they are linearly dependent.
pub fn hyperplane_normal(vectors: &[Vec<BigInt>], d: usize) -> Option<Vec<BigInt>> {
    debug_assert_eq!(vectors.len() + 1, d);
    let normal: Vec<BigInt> = (0..d)
        .map(|skip| {
            let minor: IntMatrix = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let det = determinant(&minor);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    if normal.iter().all(Zero::is_zero) {
        None
    } else {
        Some(primitive(&normal))
    }
}

/// Divide a nonzero integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rational coordinates of `v` with respect to the rows of an echelon basis,
/// or `None` if `v` is outside their Q-span.
pub fn echelon_coordinates(basis: &[Vec<BigInt>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let piv = pivots(basis);
    let mut coords = Vec::with_capacity(basis.len());
    for (i, &p) in piv.iter().enumerate() {
        let mut acc = v[p].clone();
        for (k, c) in coords.iter().enumerate() {
            let b: &Vec<BigInt> = &basis[k];
            acc -= c * BigRational::from_integer(b[p].clone());
        }
        coords.push(acc / BigRational::from_integer(basis[i][p].clone()));
    }
    let width = v.len();
    for col in 0..width {
        let mut sum = BigRational::zero();
        for (c, row) in coords.iter().zip(basis) {
            sum += c * BigRational::from_integer(row[col].clone());
        }
        if sum != v[col] {
            return None;
        }
    }
    Some(coords)
}

/// Solve `x * rows = v` for a square invertible matrix over Q.
pub fn solve_square(rows: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    // Augmented transpose: columns of `rows` become equations.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|eq| {
            let mut r: Vec<BigRational> = (0..n).map(|var| rows[var][eq].clone()).collect();
            r.push(v[eq].clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let (src, dst) = if i < col {
                    let (h, t) = a.split_at_mut(col);
                    (&t[0], &mut h[i])
                } else {
                    let (h, t) = a.split_at_mut(i);
                    (&h[col], &mut t[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Smith normal form `left * m * right = diag(d_1, .., d_k, 0, ..)` with
/// `d_i | d_{i+1}`, together with `right^{-1}`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

pub fn smith_normal_form(m: &[Vec<BigInt>], cols: usize) -> Smith {
    let rows = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut right_inv = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let pick = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pick else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut right, t, pj);
        right_inv.swap(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            row_sub(&mut a, i, t, &q);
            row_sub(&mut left, i, t, &q);
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            col_sub(&mut a, j, t, &q);
            col_sub(&mut right, j, t, &q);
            // right_inv: inverse column op is a row op.
            row_add(&mut right_inv, t, j, &q);
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any non-multiple from the block into row t.
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
        if let Some((i, _)) = bad {
            let one = BigInt::one();
            row_sub(&mut a, t, i, &-&one);
            row_sub(&mut left, t, i, &-&one);
            continue;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in left[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    Smith {
        diagonal,
        left,
        right,
        right_inverse: right_inv,
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for r in m.iter_mut() {
            r.swap(a, b);
        }
    }
}

/// row[i] -= q * row[k]
fn row_sub(m: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
    let src = m[k].clone();
    sub_scaled(&mut m[i], &src, q);
}

/// row[i] += q * row[k]
fn row_add(m: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
    let src = m[k].clone();
    for (t, s) in m[i].iter_mut().zip(&src) {
        *t += q * s;
    }
}

/// col[j] -= q * col[k]
fn col_sub(m: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for r in m.iter_mut() {
        let v = &r[k] * q;
        r[j] -= v;
    }
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let width = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..width)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}
