//! Integer abelianization of endomorphisms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Endomorphism;
use crate::error::{Error, Result};
use crate::word::Word;

/// Row `i` is the exponent vector of the image of generator `i`, so with row
/// vectors `v(xf) = v(x) · M` and `M(compose(f, g)) = M(f) · M(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl AbelianMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<AbelianMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(AbelianMatrix { rows, cols })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<AbelianMatrix> {
        AbelianMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> AbelianMatrix {
        let rows = (0..n)
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
            .collect();
        AbelianMatrix { rows, cols: n }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn mul(&self, other: &AbelianMatrix) -> Result<AbelianMatrix> {
        if self.cols != other.row_count() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.row_count(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| r.iter().zip(&other.rows).map(|(x, o)| x * &o[j]).sum())
                    .collect()
            })
            .collect();
        Ok(AbelianMatrix {
            rows,
            cols: other.cols,
        })
    }

    /// `M − I` for a square matrix.
    pub fn minus_identity(&self) -> Result<AbelianMatrix> {
        if self.cols != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: self.cols,
            });
        }
        let mut rows = self.rows.clone();
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] -= 1;
        }
        Ok(AbelianMatrix {
            rows,
            cols: self.cols,
        })
    }
}

pub fn ab_matrix(f: &Endomorphism) -> AbelianMatrix {
    let rows = f
        .images()
        .iter()
        .map(|w| w.exponent_sums().into_iter().map(BigInt::from).collect())
        .collect();
    AbelianMatrix {
        rows,
        cols: f.rank(),
    }
}

/// Solves `x · M = v` over the integers.
pub fn ab_solve(m: &AbelianMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    let n = m.rows.len();
    // Row-reduce M while tracking U with U·M = E.
    let mut e = m.rows.clone();
    let mut u: Vec<Vec<BigInt>> = AbelianMatrix::identity(n).rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == n {
            break;
        }
        loop {
            let best = (r..n)
                .filter(|&i| !e[i][c].is_zero())
                .min_by(|&i, &j| e[i][c].abs().cmp(&e[j][c].abs()));
            let Some(p) = best else { break };
            e.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if e[i][c].is_zero() {
                    continue;
                }
                let q = e[i][c].div_floor(&e[r][c]);
                sub_row(&mut e, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !e[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push(c);
                r += 1;
                break;
            }
        }
    }
    // Forward substitution for z · E = v.
    let mut residual = v.to_vec();
    let mut z = vec![BigInt::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        let (q, rem) = residual[c].div_rem(&e[i][c]);
        if !rem.is_zero() {
            return Ok(None);
        }
        for (res, x) in residual.iter_mut().zip(&e[i]) {
            *res -= &q * x;
        }
        z[i] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let x: Vec<BigInt> = (0..n)
        .map(|j| z.iter().zip(&u).map(|(zi, ui)| zi * &ui[j]).sum())
        .collect();
    debug_assert!({
        let check: Vec<BigInt> = (0..m.cols)
            .map(|j| x.iter().zip(&m.rows).map(|(a, r)| a * &r[j]).sum())
            .collect();
        check == v
    });
    Ok(Some(x))
}

fn sub_row(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

/// Nonzero invariant factors (Smith normal form diagonal) of the matrix
/// whose rows are `rows`, each positive and dividing the next.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < n.min(m) {
        // Pick the smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t].clone();
        let mut clean = true;
        for i in t + 1..n {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&p);
                sub_row(&mut a, i, t, &q);
                clean &= a[i][t].is_zero();
            }
        }
        for j in t + 1..m {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &q * s;
                }
                clean &= a[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility: fold an offending row into row t.
        let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| !(&a[i][j] % &p).is_zero()));
        if let Some(i) = bad {
            let src = a[i].clone();
            for (x, s) in a[t].iter_mut().zip(&src) {
                *x += s;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Whether the exponent-sum vector has gcd 1. Necessary for primitivity, not sufficient.
pub fn is_primitive_abelianized(w: &Word) -> bool {
    let g = w
        .exponent_sums()
        .into_iter()
        .fold(0i64, |acc, x| acc.gcd(&x));
    g == 1
}
