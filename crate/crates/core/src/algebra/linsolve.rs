//! Exact linear systems over polynomial coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scalar::{add_mod, inv_mod, mul_mod, sub_mod, Scalar, ScalarRatio, MOD_P, NUM_VARS};
use crate::error::{Error, Result};

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// The system has exactly one solution.
    Unique(Vec<ScalarRatio>),
    /// Consistent but rank deficient; `particular` sets free unknowns to zero.
    Underdetermined { rank: usize, particular: Vec<ScalarRatio> },
    /// No solution; `row` is an equation violated by every candidate.
    Inconsistent { row: usize },
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, LinearSolution::Inconsistent { .. })
    }
}

/// Solves `A x = b` exactly over the field of rational functions.
///
/// Any solution returned satisfies every equation identically. A full column
/// rank subsystem is located by evaluation at a random point modulo a prime,
/// solved by fraction-free elimination, and then checked against all rows.
/// Rank-deficient systems fall back to elimination on every row.
pub fn solve_linear_exact(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<LinearSolution> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    let cols = a.first().map(Vec::len).unwrap_or(0);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::SizeMismatch("ragged matrix".into()));
    }
    let live: Vec<usize> = (0..a.len()).filter(|&i| !b[i].is_zero() || a[i].iter().any(|x| !x.is_zero())).collect();
    if cols == 0 {
        return Ok(match live.first() {
            Some(&row) => LinearSolution::Inconsistent { row },
            None => LinearSolution::Unique(Vec::new()),
        });
    }
    if let Some(rows) = independent_rows(a, &live, cols) {
        if rows.len() == cols {
            let square: Vec<usize> = rows;
            let ech = eliminate(a, b, &square, cols)?;
            let (nums, den) = back_substitute(&ech, cols)?;
            for &i in &live {
                let mut lhs = Scalar::zero();
                for (j, n) in nums.iter().enumerate() {
                    if !n.is_zero() && !a[i][j].is_zero() {
                        lhs += &a[i][j] * n;
                    }
                }
                if lhs != &den * &b[i] {
                    return Ok(LinearSolution::Inconsistent { row: i });
                }
            }
            return Ok(LinearSolution::Unique(ratios(nums, &den)?));
        }
    }
    let ech = eliminate(a, b, &live, cols)?;
    if let Some(row) = ech.inconsistent {
        return Ok(LinearSolution::Inconsistent { row });
    }
    let (nums, den) = back_substitute(&ech, cols)?;
    let sol = ratios(nums, &den)?;
    if ech.pivots.len() == cols {
        Ok(LinearSolution::Unique(sol))
    } else {
        Ok(LinearSolution::Underdetermined { rank: ech.pivots.len(), particular: sol })
    }
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::SizeMismatch("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut prev = Scalar::one();
    let mut sign = false;
    for k in 0..n {
        let piv = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| (a[i][k].num_terms(), a[i][k].total_degree()));
        let Some(piv) = piv else { return Ok(Scalar::zero()) };
        if piv != k {
            a.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v.exact_div(&prev)?;
            }
            a[i][k] = Scalar::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(if sign { -prev } else { prev })
}

fn ratios(nums: Vec<Scalar>, den: &Scalar) -> Result<Vec<ScalarRatio>> {
    nums.into_iter().map(|n| ScalarRatio::new(n, den.clone())).collect()
}

/// Rows forming a maximal independent set at a random point, or `None` when
/// some coefficient cannot be reduced modulo the prime.
fn independent_rows(a: &[Vec<Scalar>], live: &[usize], cols: usize) -> Option<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fb0b);
    let mut point = [0u64; NUM_VARS];
    for p in point.iter_mut() {
        *p = rng.gen_range(2..MOD_P);
    }
    let mut order: Vec<usize> = live.to_vec();
    order.sort_by_key(|&i| {
        let cost: usize = a[i].iter().map(|x| x.num_terms()).sum();
        (cost, i)
    });
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for i in order {
        let mut v: Vec<u64> = Vec::with_capacity(cols);
        for x in &a[i] {
            v.push(x.eval_mod(&point)?);
        }
        for (pc, bv) in &basis {
            let f = v[*pc];
            if f != 0 {
                for j in 0..cols {
                    v[j] = sub_mod(v[j], mul_mod(f, bv[j]));
                }
            }
        }
        if let Some(pc) = (0..cols).find(|&j| v[j] != 0) {
            let inv = inv_mod(v[pc]);
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            for (_, bv) in basis.iter_mut() {
                let f = bv[pc];
                if f != 0 {
                    for j in 0..cols {
                        bv[j] = add_mod(bv[j], MOD_P - mul_mod(f, v[j]));
                    }
                }
            }
            basis.push((pc, v));
            chosen.push(i);
            if chosen.len() == cols {
                break;
            }
        }
    }
    Some(chosen)
}

struct Echelon {
    /// Rows of the reduced augmented matrix, in pivot order.
    rows: Vec<Vec<Scalar>>,
    /// Pivot column of each of the first `pivots.len()` rows.
    pivots: Vec<usize>,
    /// Original index of a row reduced to `0 = nonzero`.
    inconsistent: Option<usize>,
}

fn eliminate(a: &[Vec<Scalar>], b: &[Scalar], rows: &[usize], cols: usize) -> Result<Echelon> {
    let mut m: Vec<(usize, Vec<Scalar>)> = rows
        .iter()
        .map(|&i| {
            let mut r = a[i].clone();
            r.push(b[i].clone());
            (i, r)
        })
        .collect();
    let mut prev = Scalar::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .filter(|&i| !m[i].1[c].is_zero())
            .min_by_key(|&i| (m[i].1[c].num_terms(), m[i].1[c].total_degree()));
        let Some(piv) = piv else { continue };
        m.swap(piv, r);
        let (top, bottom) = m.split_at_mut(r + 1);
        let prow = &top[r].1;
        for (_, row) in bottom.iter_mut() {
            for j in c + 1..=cols {
                let mut v = &prow[c] * &row[j];
                if !row[c].is_zero() && !prow[j].is_zero() {
                    v -= &row[c] * &prow[j];
                }
                row[j] = if prev.is_one() { v } else { v.exact_div(&prev)? };
            }
            row[c] = Scalar::zero();
        }
        prev = top[r].1[c].clone();
        pivots.push(c);
        r += 1;
    }
    let inconsistent = m[r..].iter().find(|(_, row)| !row[cols].is_zero()).map(|(i, _)| *i);
    Ok(Echelon { rows: m.into_iter().map(|(_, r)| r).collect(), pivots, inconsistent })
}

/// Numerators `n_j` and common denominator `d` with `x_j = n_j / d`, free
/// unknowns set to zero.
fn back_substitute(ech: &Echelon, cols: usize) -> Result<(Vec<Scalar>, Scalar)> {
    let rank = ech.pivots.len();
    let mut nums = vec![Scalar::zero(); cols];
    if rank == 0 {
        return Ok((nums, Scalar::one()));
    }
    let den = ech.rows[rank - 1][ech.pivots[rank - 1]].clone();
    for i in (0..rank).rev() {
        let row = &ech.rows[i];
        let mut acc = &den * &row[cols];
        for &pc in &ech.pivots[i + 1..] {
            if !row[pc].is_zero() && !nums[pc].is_zero() {
                acc -= &row[pc] * &nums[pc];
            }
        }
        nums[ech.pivots[i]] = acc.exact_div(&row[ech.pivots[i]])?;
    }
    Ok((nums, den))
}
