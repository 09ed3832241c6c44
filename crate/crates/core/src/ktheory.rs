//! Integer linear algebra and the K-theory of crossed products by Z.
//!
//! Smith normal form over arbitrary-precision integers drives everything:
//! cokernels and kernels of the Pimsner–Voiculescu maps id − α_*^{-1}, the
//! isomorphism types of K₀ and K₁ of the crossed product, and the
//! Hermite-reduced trace range inside Q + Qθ + Qγ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KTheoryError {
    #[error("matrix must be square, got {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must be unimodular (det ±1), got det {det}")]
    NotUnimodular { det: BigInt },
    #[error("{0}")]
    Shape(String),
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, KTheoryError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(KTheoryError::Shape("ragged rows".into()));
        }
        let data = rows.into_iter().flatten().map(BigInt::from).collect();
        Ok(IntMatrix { rows: nrows, cols: ncols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Exact determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * n + j].clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if at(&a, k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !at(&a, i, k).is_zero());
                match swap {
                    None => return BigInt::zero(),
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&a, k, k) * at(&a, i, j) - at(&a, i, k) * at(&a, k, j);
                    a[i * n + j] = num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = at(&a, k, k);
        }
        sign * at(&a, n - 1, n - 1)
    }

    /// Exact inverse of a unimodular matrix via rational elimination.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix, KTheoryError> {
        if self.rows != self.cols {
            return Err(KTheoryError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let det = self.det();
        if !det.clone().abs().is_one() {
            return Err(KTheoryError::NotUnimodular { det });
        }
        let n = self.rows;
        // [A | I] → [I | A^{-1}] over Q; entries of the result are integers
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self[(i, j)].clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).expect("unimodular");
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for j in 0..2 * n {
                aug[col][j] *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for j in 0..2 * n {
                        let sub = &factor * &aug[col][j];
                        aug[r][j] -= sub;
                    }
                }
            }
        }
        let mut out = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let q = &aug[i][j + n];
                debug_assert!(q.is_integer());
                out[(i, j)] = q.to_integer();
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// M = U·D·V with U, V unimodular and D diagonal with d₁ | d₂ | ….
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form. Pivot selection: minimal nonzero absolute value in the
/// working submatrix, ties broken in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    // row op on d is matched by the inverse column op on u (d := E d ⇒ u := u E^{-1}),
    // col op on d by the inverse row op on v, preserving m = u·d·v throughout.
    let mut t = 0;
    'stages: while t < rows.min(cols) {
        loop {
            // re-select the minimal pivot every sweep; remainders from the
            // previous sweep then at least halve it, which keeps quotients
            // and intermediate entries small
            let Some((pi, pj)) = min_pivot(&d, t) else { break 'stages };
            if pi != t {
                swap_rows(&mut d, &mut u, t, pi);
            }
            if pj != t {
                swap_cols(&mut d, &mut v, t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(i, t)], &d[(t, t)]);
                if !q.is_zero() {
                    row_axpy(&mut d, &mut u, i, t, &q);
                }
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(t, j)], &d[(t, t)]);
                if !q.is_zero() {
                    col_axpy(&mut d, &mut v, j, t, &q);
                }
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility fix-up: the pivot must divide the whole block.
            // Adding the offending row to row t exposes the entry to the next
            // sweep, whose nonzero remainder becomes a strictly smaller pivot.
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        let minus_one = BigInt::from(-1);
                        row_axpy(&mut d, &mut u, t, i, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, t);
        }
        t += 1;
    }
    Snf { u, d, v }
}

fn min_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let a = d[(i, j)].clone().abs();
            if a.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => &a < b,
            };
            if better {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Quotient rounding toward the nearest integer keeps remainders ≤ |pivot|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.clone().abs();
    if two_r > b.clone().abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    for j in 0..d.cols() {
        let tmp = d[(a, j)].clone();
        d[(a, j)] = d[(b, j)].clone();
        d[(b, j)] = tmp;
    }
    // E = E^{-1} = swap ⇒ u := u·E
    for i in 0..u.rows() {
        let tmp = u[(i, a)].clone();
        u[(i, a)] = u[(i, b)].clone();
        u[(i, b)] = tmp;
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    for i in 0..d.rows() {
        let tmp = d[(i, a)].clone();
        d[(i, a)] = d[(i, b)].clone();
        d[(i, b)] = tmp;
    }
    for j in 0..v.cols() {
        let tmp = v[(a, j)].clone();
        v[(a, j)] = v[(b, j)].clone();
        v[(b, j)] = tmp;
    }
}

/// d: row_i -= q·row_t;  u absorbs the inverse op: col_t += q·col_i.
fn row_axpy(d: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..d.cols() {
        let sub = q * &d[(t, j)];
        d[(i, j)] -= sub;
    }
    for r in 0..u.rows() {
        let add = q * &u[(r, i)];
        u[(r, t)] += add;
    }
}

/// d: col_j -= q·col_t;  v absorbs the inverse op: row_t += q·row_j.
fn col_axpy(d: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..d.rows() {
        let sub = q * &d[(i, t)];
        d[(i, j)] -= sub;
    }
    for c in 0..v.cols() {
        let add = q * &v[(j, c)];
        v[(t, c)] += add;
    }
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..d.cols() {
        let x = -d[(t, j)].clone();
        d[(t, j)] = x;
    }
    for r in 0..u.rows() {
        let x = -u[(r, t)].clone();
        u[(r, t)] = x;
    }
}

/// Finitely generated abelian group: free rank plus invariant factors
/// d₁ | d₂ | …, each ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    fn plus_free(mut self, rank: usize) -> Self {
        self.rank += rank;
        self
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

/// Cokernel (as an abstract group) and kernel rank of an integer matrix seen
/// as a map Z^cols → Z^rows.
pub fn coker_ker(m: &IntMatrix) -> (FGAbelianGroup, usize) {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| d > &BigInt::one())
        .collect();
    (FGAbelianGroup { rank: m.rows() - rank, torsion }, m.cols() - rank)
}

/// K-groups of the crossed product by an automorphism acting on K₀ and K₁ of
/// the base through the unimodular matrices A0 and A1:
/// K_i(B) ≅ coker(I − A_i^{-1}) ⊕ ker(I − A_{1−i}^{-1}).
pub fn pv_kgroups(
    a0: &IntMatrix,
    a1: &IntMatrix,
) -> Result<(FGAbelianGroup, FGAbelianGroup), KTheoryError> {
    let b0 = pv_map(a0)?;
    let b1 = pv_map(a1)?;
    let (coker0, ker0) = coker_ker(&b0);
    let (coker1, ker1) = coker_ker(&b1);
    Ok((coker0.plus_free(ker1), coker1.plus_free(ker0)))
}

fn pv_map(a: &IntMatrix) -> Result<IntMatrix, KTheoryError> {
    let inv = a.unimodular_inverse()?;
    Ok(IntMatrix::identity(a.rows()).sub(&inv))
}

/// Subgroup of R generated by rational combinations of {1, θ, γ}, in
/// Hermite-reduced canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRange {
    /// canonical generators as rational coordinate triples
    pub generators: Vec<[BigRational; 3]>,
}

impl fmt::Display for TraceRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.generators.iter().map(|g| format_triple(g)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn format_triple(g: &[BigRational; 3]) -> String {
    let symbols = ["", "θ", "γ"];
    let mut parts = Vec::new();
    for (i, c) in g.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if i == 0 {
            parts.push(c.to_string());
        } else if c.is_one() {
            parts.push(symbols[i].to_string());
        } else {
            parts.push(format!("{}{}", c, symbols[i]));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Canonical generating set of the subgroup of Q + Qθ + Qγ generated by the
/// inputs: clear denominators, row-style Hermite normal form, scale back.
pub fn trace_range(generators: &[[BigRational; 3]]) -> TraceRange {
    if generators.is_empty() {
        return TraceRange { generators: Vec::new() };
    }
    let mut denom = BigInt::one();
    for g in generators {
        for c in g {
            denom = denom.lcm(c.denom());
        }
    }
    let scale = BigRational::from_integer(denom.clone());
    let mut rows: Vec<[BigInt; 3]> = generators
        .iter()
        .map(|g| {
            [
                (&g[0] * &scale).to_integer(),
                (&g[1] * &scale).to_integer(),
                (&g[2] * &scale).to_integer(),
            ]
        })
        .collect();
    hermite_reduce(&mut rows);
    let back = BigRational::new(BigInt::one(), denom);
    TraceRange {
        generators: rows
            .into_iter()
            .map(|r| {
                let [a, b, c] = r;
                [
                    BigRational::from_integer(a) * &back,
                    BigRational::from_integer(b) * &back,
                    BigRational::from_integer(c) * &back,
                ]
            })
            .collect(),
    }
}

/// In-place row Hermite normal form (positive pivots, entries above a pivot
/// reduced into [0, pivot)); zero rows dropped.
fn hermite_reduce(rows: &mut Vec<[BigInt; 3]>) {
    let mut pivot_row = 0;
    for col in 0..3 {
        loop {
            let mut nonzero: Vec<usize> =
                (pivot_row..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let r = nonzero[0];
                rows.swap(pivot_row, r);
                if rows[pivot_row][col].is_negative() {
                    for c in 0..3 {
                        let x = -rows[pivot_row][c].clone();
                        rows[pivot_row][c] = x;
                    }
                }
                // reduce the entries above the pivot into [0, pivot)
                for r in 0..pivot_row {
                    let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                    if !q.is_zero() {
                        for c in 0..3 {
                            let sub = &q * &rows[pivot_row][c];
                            rows[r][c] -= sub;
                        }
                    }
                }
                pivot_row += 1;
                break;
            }
            // reduce all entries in this column by the minimal one
            nonzero.sort_by_key(|&r| rows[r][col].clone().abs());
            let min_row = nonzero[0];
            for &r in &nonzero[1..] {
                let q = div_round(&rows[r][col], &rows[min_row][col]);
                for c in 0..3 {
                    let sub = &q * &rows[min_row][c];
                    rows[r][c] -= sub;
                }
            }
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rat;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn assert_snf_valid(mat: &IntMatrix, snf: &Snf) {
        assert_eq!(snf.u.mul(&snf.d).mul(&snf.v), *mat, "U·D·V = M");
        assert!(snf.u.det().abs().is_one(), "U unimodular");
        assert!(snf.v.det().abs().is_one(), "V unimodular");
        let diag = snf.invariant_factors();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility {} | {}", w[0], w[1]);
        }
        // off-diagonal zero, trailing diagonal zero
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_coprime_diagonal() {
        let mat = m(vec![vec![3, 0], vec![0, 5]]);
        let snf = smith_normal_form(&mat);
        assert_snf_valid(&mat, &snf);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(1), BigInt::from(15)]);
    }

    #[test]
    fn snf_single_entry() {
        let mat = m(vec![vec![0, 7], vec![0, 0]]);
        let snf = smith_normal_form(&mat);
        assert_snf_valid(&mat, &snf);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(7)]);
        assert_eq!(snf.d[(1, 1)], BigInt::zero());
    }

    #[test]
    fn snf_two_by_two() {
        let mat = m(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&mat);
        assert_snf_valid(&mat, &snf);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn coker_ker_examples() {
        let (g, k) = coker_ker(&IntMatrix::zero(2, 2));
        assert_eq!(g, FGAbelianGroup::free(2));
        assert_eq!(k, 2);

        let (g, k) = coker_ker(&IntMatrix::identity(2));
        assert!(g.is_trivial());
        assert_eq!(k, 0);

        let (g, k) = coker_ker(&m(vec![vec![0, 4], vec![0, 0]]));
        assert_eq!(g, FGAbelianGroup { rank: 1, torsion: vec![BigInt::from(4)] });
        assert_eq!(k, 1);
    }

    #[test]
    fn pv_kgroups_of_rotation_crossed_product() {
        for d in [1i64, 2, 3, 7, -2] {
            let a0 = IntMatrix::identity(2);
            let a1 = m(vec![vec![1, d], vec![0, 1]]);
            let (k0, k1) = pv_kgroups(&a0, &a1).unwrap();
            assert_eq!(k0, FGAbelianGroup::free(3), "d = {d}");
            let expected_torsion: Vec<BigInt> =
                if d.abs() == 1 { vec![] } else { vec![BigInt::from(d.abs())] };
            assert_eq!(k1, FGAbelianGroup { rank: 3, torsion: expected_torsion }, "d = {d}");
        }
    }

    #[test]
    fn pv_kgroups_circle_and_degenerate() {
        // trivial action on C: K-theory of C(S¹)
        let a0 = IntMatrix::identity(1);
        let a1 = IntMatrix::identity(0);
        let (k0, k1) = pv_kgroups(&a0, &a1).unwrap();
        assert_eq!(k0, FGAbelianGroup::free(1));
        assert_eq!(k1, FGAbelianGroup::free(1));

        // d = 0: both groups Z⁴
        let (k0, k1) = pv_kgroups(&IntMatrix::identity(2), &IntMatrix::identity(2)).unwrap();
        assert_eq!(k0, FGAbelianGroup::free(4));
        assert_eq!(k1, FGAbelianGroup::free(4));
    }

    #[test]
    fn pv_rejects_bad_input() {
        let a = m(vec![vec![2, 0], vec![0, 1]]);
        assert!(matches!(
            pv_kgroups(&a, &IntMatrix::identity(2)),
            Err(KTheoryError::NotUnimodular { .. })
        ));
        let r = m(vec![vec![1, 0]]);
        assert!(matches!(
            pv_kgroups(&r, &IntMatrix::identity(1)),
            Err(KTheoryError::NotSquare { .. })
        ));
    }

    #[test]
    fn group_display() {
        assert_eq!(FGAbelianGroup::free(3).to_string(), "Z^3");
        assert_eq!(
            FGAbelianGroup { rank: 3, torsion: vec![BigInt::from(3)] }.to_string(),
            "Z^3 (+) Z/3"
        );
        assert_eq!(FGAbelianGroup::free(1).to_string(), "Z");
        assert_eq!(FGAbelianGroup::free(0).to_string(), "0");
    }

    #[test]
    fn trace_range_examples() {
        let one = || [rat(1, 1), rat(0, 1), rat(0, 1)];
        let theta = || [rat(0, 1), rat(1, 1), rat(0, 1)];
        let gamma = || [rat(0, 1), rat(0, 1), rat(1, 1)];

        let r = trace_range(&[one(), theta(), gamma()]);
        assert_eq!(r.generators, vec![one(), theta(), gamma()]);
        assert_eq!(r.to_string(), "1, θ, γ");

        let theta_plus_one = [rat(1, 1), rat(1, 1), rat(0, 1)];
        let r = trace_range(&[one(), theta(), theta_plus_one]);
        assert_eq!(r.generators, vec![one(), theta()]);

        let half = || [rat(1, 2), rat(0, 1), rat(0, 1)];
        let two_theta = [rat(0, 1), rat(2, 1), rat(0, 1)];
        let r = trace_range(&[half(), theta(), two_theta]);
        assert_eq!(r.generators, vec![half(), theta()]);
    }

    #[test]
    fn trace_range_invariance() {
        let gens = [
            [rat(1, 2), rat(1, 1), rat(0, 1)],
            [rat(0, 1), rat(3, 1), rat(1, 1)],
            [rat(1, 1), rat(0, 1), rat(2, 1)],
        ];
        let base = trace_range(&gens);
        let permuted = trace_range(&[gens[2].clone(), gens[0].clone(), gens[1].clone()]);
        assert_eq!(base, permuted);
        let negated = trace_range(&[
            [-gens[0][0].clone(), -gens[0][1].clone(), -gens[0][2].clone()],
            gens[1].clone(),
            gens[2].clone(),
        ]);
        assert_eq!(base, negated);
    }

    fn random_matrix(rng: &mut impl Rng, max_dim: usize, max_abs: i64) -> IntMatrix {
        let rows = rng.random_range(1..=max_dim);
        let cols = rng.random_range(1..=max_dim);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-max_abs..=max_abs)).collect())
            .collect();
        IntMatrix::from_rows(data).unwrap()
    }

    /// gcd of all k×k minors; zero when every minor vanishes.
    fn minor_gcd(mat: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return vec![];
            }
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                out.push(idx.clone());
                let mut i = k;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if idx[i] != i + n - k {
                        break;
                    }
                    if i == 0 {
                        return out;
                    }
                }
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        let mut g = BigInt::zero();
        for rows in combos(mat.rows(), k) {
            for cols in combos(mat.cols(), k) {
                let mut sub = IntMatrix::zero(k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        sub[(a, b)] = mat[(i, j)].clone();
                    }
                }
                g = g.gcd(&sub.det());
            }
        }
        g
    }

    #[test]
    fn minor_gcd_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..60 {
            let mat = random_matrix(&mut rng, 5, 9);
            let snf = smith_normal_form(&mat);
            assert_snf_valid(&mat, &snf);
            let factors = snf.invariant_factors();
            let mut product = BigInt::one();
            for (k, d) in factors.iter().enumerate() {
                product *= d;
                assert_eq!(product, minor_gcd(&mat, k + 1), "k = {} of\n{}", k + 1, mat);
            }
            if factors.len() < mat.rows().min(mat.cols()) {
                assert!(minor_gcd(&mat, factors.len() + 1).is_zero());
            }
        }
    }

    #[test]
    fn pv_invariant_under_basis_change() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let d = rng.random_range(-4i64..=4);
            let a0 = IntMatrix::identity(2);
            let a1 = m(vec![vec![1, d], vec![0, 1]]);
            let s0 = random_unimodular(&mut rng, 2);
            let s1 = random_unimodular(&mut rng, 2);
            let conj = |s: &IntMatrix, a: &IntMatrix| {
                s.mul(a).mul(&s.unimodular_inverse().unwrap())
            };
            let (k0, k1) = pv_kgroups(&a0, &a1).unwrap();
            let (k0c, k1c) = pv_kgroups(&conj(&s0, &a0), &conj(&s1, &a1)).unwrap();
            assert_eq!(k0, k0c);
            assert_eq!(k1, k1c);
        }
    }

    fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
        let mut s = IntMatrix::identity(n);
        for _ in 0..8 {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n);
            while j == i {
                j = rng.random_range(0..n);
            }
            let c = BigInt::from(rng.random_range(-3i64..=3));
            for col in 0..n {
                let add = &c * &s[(j, col)];
                s[(i, col)] += add;
            }
        }
        s
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn snf_valid_on_random_matrices(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mat = random_matrix(&mut rng, 8, 9);
            let snf = smith_normal_form(&mat);
            assert_snf_valid(&mat, &snf);
        }
    }
}
