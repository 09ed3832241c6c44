//! Finite clock-and-shift model of the rotation algebra at a rational
//! parameter: U = diag(ω^j) with ω = e^{2πip/q} and V the cyclic shift, so
//! that V·U = ω·U·V exactly.
//!
//! Operators are stored by shift degree as diagonal coefficient vectors,
//! Σ_k D_k·V^k, never as dense q×q matrices (dense form exists only inside
//! small-q oracles). The module builds implementing unitaries W = h(U)·V^s
//! for Furstenberg automorphisms by solving the multiplicative cohomological
//! equation on the q-th roots of unity, constructs Rokhlin towers over Z/q by
//! first return (Kakutani) or from the three-distance structure, and verifies
//! the trace-norm tower conditions exactly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

use crate::linalg::{hermitian_eigenvalues, DenseMatrix};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("dimension q must be ≥ 2, got {q}")]
    DimensionTooSmall { q: usize },
    #[error("step s = {s} must be coprime to q = {q}")]
    NotCoprime { s: usize, q: usize },
    #[error("tower height {height} exceeds the dimension {q}")]
    HeightExceedsDimension { height: usize, q: usize },
    #[error(
        "first return to the marker happens at t_min = {t_min} < height {height}; \
         decrease c or change convergent"
    )]
    MarkerTooWide { t_min: usize, height: usize },
    #[error("marker length {c} must lie in 1..=q = {q}")]
    BadMarker { c: usize, q: usize },
    #[error("dense checks are limited to q ≤ {max}, got {q}")]
    DenseTooLarge { q: usize, max: usize },
    #[error("operator is not self-adjoint (defect {defect:.3e})")]
    NotSelfAdjoint { defect: f64 },
    #[error("spectrum [{min:.3e}, {max:.3e}] is not contained in [0, 1]")]
    NotPositiveContraction { min: f64, max: f64 },
    #[error("f must be sampled on all q roots, got {got} values for q = {q}")]
    BadSampleCount { got: usize, q: usize },
    #[error("operators live in different dimensions: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
}

/// Model parameters: dimension q, twist numerator p (ω = e^{2πip/q}), and
/// rotation numerator s (the tower step; γ ≈ s/q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzyParams {
    pub q: usize,
    pub p: usize,
    pub s: usize,
}

impl FuzzyParams {
    pub fn new(q: usize, p: usize, s: usize) -> Result<Self, FuzzyError> {
        if q < 2 {
            return Err(FuzzyError::DimensionTooSmall { q });
        }
        Ok(FuzzyParams { q, p: p % q, s: s % q })
    }

    /// gcd(p, q); the model carries a faithful trace iff this is 1.
    pub fn twist_gcd(&self) -> usize {
        self.p.gcd(&self.q)
    }
}

/// Operator Σ_k D_k·V^k on C^q, stored by shift degree k ∈ Z/q.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyOperator {
    q: usize,
    terms: BTreeMap<usize, Vec<Complex64>>,
}

impl FuzzyOperator {
    pub fn zero(q: usize) -> Self {
        FuzzyOperator { q, terms: BTreeMap::new() }
    }

    pub fn identity(q: usize) -> Self {
        FuzzyOperator::from_diag(vec![Complex64::new(1.0, 0.0); q])
    }

    pub fn from_diag(diag: Vec<Complex64>) -> Self {
        FuzzyOperator::from_term(0, diag)
    }

    pub fn from_term(degree: usize, diag: Vec<Complex64>) -> Self {
        let q = diag.len();
        let mut op = FuzzyOperator::zero(q);
        op.add_term(degree % q, &diag);
        op
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<usize, Vec<Complex64>> {
        &self.terms
    }

    fn add_term(&mut self, degree: usize, diag: &[Complex64]) {
        assert_eq!(diag.len(), self.q);
        let slot = self
            .terms
            .entry(degree)
            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); self.q]);
        for (a, b) in slot.iter_mut().zip(diag) {
            *a += b;
        }
        if slot.iter().all(|z| z.norm() == 0.0) {
            self.terms.remove(&degree);
        }
    }

    pub fn add(&self, other: &FuzzyOperator) -> FuzzyOperator {
        assert_eq!(self.q, other.q);
        let mut out = self.clone();
        for (&k, diag) in &other.terms {
            out.add_term(k, diag);
        }
        out
    }

    pub fn sub(&self, other: &FuzzyOperator) -> FuzzyOperator {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: Complex64) -> FuzzyOperator {
        let mut out = FuzzyOperator::zero(self.q);
        for (&k, diag) in &self.terms {
            out.add_term(k, &diag.iter().map(|a| a * z).collect::<Vec<_>>());
        }
        out
    }

    /// (D·V^a)(E·V^b) = D·σ^a(E)·V^{a+b} with σ^a(E)_j = E_{j+a}.
    pub fn mul(&self, other: &FuzzyOperator) -> FuzzyOperator {
        assert_eq!(self.q, other.q);
        let q = self.q;
        let mut out = FuzzyOperator::zero(q);
        for (&k1, d1) in &self.terms {
            for (&k2, d2) in &other.terms {
                let diag: Vec<Complex64> =
                    (0..q).map(|j| d1[j] * d2[(j + k1) % q]).collect();
                out.add_term((k1 + k2) % q, &diag);
            }
        }
        out
    }

    /// (D·V^k)* = σ^{−k}(conj D)·V^{−k}.
    pub fn adjoint(&self) -> FuzzyOperator {
        let q = self.q;
        let mut out = FuzzyOperator::zero(q);
        for (&k, diag) in &self.terms {
            let new: Vec<Complex64> =
                (0..q).map(|j| diag[(j + q - k % q) % q].conj()).collect();
            out.add_term((q - k % q) % q, &new);
        }
        out
    }

    /// Normalized trace: the mean of the degree-0 diagonal.
    pub fn trace(&self) -> Complex64 {
        match self.terms.get(&0) {
            None => Complex64::new(0.0, 0.0),
            Some(diag) => diag.iter().sum::<Complex64>() / self.q as f64,
        }
    }

    /// ‖A‖²_{2,τ} = (1/q)·Σ_k ‖D_k‖².
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self
            .terms
            .values()
            .map(|d| d.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum();
        (sum / self.q as f64).sqrt()
    }

    pub fn l2_dist(&self, other: &FuzzyOperator) -> f64 {
        self.sub(other).l2_norm()
    }

    /// ℓ¹-type operator norm bound Σ_k ‖D_k‖_∞.
    pub fn op_norm_bound(&self) -> f64 {
        self.terms
            .values()
            .map(|d| d.iter().map(|z| z.norm()).fold(0.0f64, f64::max))
            .sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let q = self.q;
        let mut m = DenseMatrix::zero(q);
        for (&k, diag) in &self.terms {
            for i in 0..q {
                m[(i, (i + k) % q)] += diag[i];
            }
        }
        m
    }
}

/// The clock and shift pair: U = diag(ω^j), V the cyclic shift, V·U = ω·U·V.
pub fn clock_shift(params: &FuzzyParams) -> (FuzzyOperator, FuzzyOperator) {
    let q = params.q;
    let u = FuzzyOperator::from_diag(
        (0..q)
            .map(|j| Complex64::from_polar(1.0, TAU * ((params.p * j) % q) as f64 / q as f64))
            .collect(),
    );
    let v = FuzzyOperator::from_term(1, vec![Complex64::new(1.0, 0.0); q]);
    (u, v)
}

/// U^a·V^b without accumulating rounding through repeated products.
pub fn monomial_op(params: &FuzzyParams, a: i64, b: i64) -> FuzzyOperator {
    let q = params.q as i64;
    let degree = b.rem_euclid(q) as usize;
    let diag = (0..params.q)
        .map(|j| {
            let e = (a.rem_euclid(q) * (params.p as i64) * (j as i64)).rem_euclid(q);
            Complex64::from_polar(1.0, TAU * e as f64 / q as f64)
        })
        .collect();
    FuzzyOperator::from_term(degree, diag)
}

/// Ad(w)(x) = w·x·w* for unitary w.
pub fn ad(w: &FuzzyOperator, x: &FuzzyOperator) -> FuzzyOperator {
    w.mul(x).mul(&w.adjoint())
}

/// Construction data for the implementing unitary W = h(U)·V^s.
#[derive(Clone, Debug)]
pub struct ImplementReport {
    /// |arg c| of the holonomy obstruction c = Π_k g(ω^k)·ω^{kd}
    pub holonomy_arg: f64,
    /// ‖ĝ − g‖_∞ after the principal-root correction, ≤ |arg c|/q ≤ 2π/q
    pub g_perturbation: f64,
    /// ‖Ad(W)(U) − ω^s·U‖_{2,τ}
    pub ad_u_defect: f64,
    /// ‖Ad(W)(V) − ĝ(U)·U^d·V‖_{2,τ}
    pub ad_v_defect: f64,
}

/// Implementing unitary for u ↦ ω^s·u, v ↦ ĝ(u)·u^d·v in the finite model.
///
/// h solves h(ζ)·h(ωζ)^{-1} = ĝ(ζ)·ζ^d on the q-th roots, where ĝ = g·c^{−1/q}
/// removes the holonomy obstruction c with the principal q-th root; then both
/// conjugation identities hold up to float rounding.
pub fn implement_auto(
    params: &FuzzyParams,
    d: i64,
    f_samples: &[f64],
) -> Result<(FuzzyOperator, ImplementReport), FuzzyError> {
    let q = params.q;
    if f_samples.len() != q {
        return Err(FuzzyError::BadSampleCount { got: f_samples.len(), q });
    }
    let omega_exp = |e: i64| -> Complex64 {
        Complex64::from_polar(1.0, TAU * e.rem_euclid(q as i64) as f64 / q as f64)
    };
    let g: Vec<Complex64> =
        f_samples.iter().map(|&x| Complex64::from_polar(1.0, TAU * x)).collect();

    // holonomy c = Π_j g(ω^j)·ω^{jd}
    let mut c = Complex64::new(1.0, 0.0);
    for (j, gj) in g.iter().enumerate() {
        c *= gj * omega_exp(params.p as i64 * j as i64 * d);
        c /= c.norm();
    }
    let holonomy_arg = c.arg().abs();
    let correction = Complex64::from_polar(1.0, -c.arg() / q as f64);
    let g_hat: Vec<Complex64> = g.iter().map(|z| z * correction).collect();
    let g_perturbation = (correction - Complex64::new(1.0, 0.0)).norm();

    // h(ω^{j+1}) = h(ω^j) / (ĝ(ω^j)·ω^{jd}), h(1) = 1
    let mut h = vec![Complex64::new(1.0, 0.0); q];
    for j in 0..q - 1 {
        let step = g_hat[j] * omega_exp(params.p as i64 * j as i64 * d);
        let next = h[j] / step;
        h[j + 1] = next / next.norm();
    }
    let w = FuzzyOperator::from_term(params.s, {
        // W = h(U)·V^s: the diagonal of U is ω^{pj}, so position j carries h(ω^{pj})
        (0..q).map(|j| h[(params.p * j) % q]).collect()
    });

    let (u, v) = clock_shift(params);
    let expected_u = u.scale(omega_exp((params.p * params.s) as i64));
    let ad_u_defect = ad(&w, &u).l2_dist(&expected_u);
    let ghat_of_u: Vec<Complex64> = (0..q)
        .map(|j| g_hat[(params.p * j) % q] * omega_exp(params.p as i64 * j as i64 * d))
        .collect();
    let expected_v = FuzzyOperator::from_term(1, ghat_of_u);
    let ad_v_defect = ad(&w, &v).l2_dist(&expected_v);

    Ok((w, ImplementReport { holonomy_arg, g_perturbation, ad_u_defect, ad_v_defect }))
}

/// A cyclic arc {start, start+1, …, start+len−1} in Z/q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicArc {
    pub start: usize,
    pub len: usize,
}

impl CyclicArc {
    pub fn points(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |i| (start + i) % q)
    }
}

/// A Rokhlin tower: level sets in Z/q, each a union of cyclic arcs, with
/// level_{k+1} = level_k − s.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub q: usize,
    pub s: usize,
    pub levels: Vec<Vec<CyclicArc>>,
    pub marker_len: Option<usize>,
    /// first-return time → number of marker points with that time
    pub return_histogram: BTreeMap<usize, usize>,
}

impl TowerSpec {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.levels[k].iter().map(|a| a.len).sum()
    }

    pub fn covered_points(&self) -> usize {
        (0..self.height()).map(|k| self.level_size(k)).sum()
    }

    /// 1 − Σ_k τ(e_k), computed from exact set sizes.
    pub fn residual(&self) -> f64 {
        (self.q - self.covered_points()) as f64 / self.q as f64
    }

    pub fn level_projection(&self, k: usize) -> FuzzyOperator {
        let mut diag = vec![Complex64::new(0.0, 0.0); self.q];
        for arc in &self.levels[k] {
            for j in arc.points(self.q) {
                diag[j] = Complex64::new(1.0, 0.0);
            }
        }
        FuzzyOperator::from_diag(diag)
    }

    /// Number of arcs in level k (each contributes 2/q to ‖[e_k, V]‖²).
    pub fn arc_count(&self, k: usize) -> usize {
        self.levels[k].len()
    }

    fn validate(&self) -> Result<(), FuzzyError> {
        let mut seen = vec![false; self.q];
        for level in &self.levels {
            for arc in level {
                for j in arc.points(self.q) {
                    assert!(!seen[j], "tower levels are not disjoint at {j}");
                    seen[j] = true;
                }
            }
        }
        for k in 0..self.height().saturating_sub(1) {
            let mut expect: Vec<usize> = self.levels[k]
                .iter()
                .flat_map(|a| a.points(self.q).collect::<Vec<_>>())
                .map(|j| (j + self.q - self.s) % self.q)
                .collect();
            expect.sort_unstable();
            let mut got: Vec<usize> = self.levels[k + 1]
                .iter()
                .flat_map(|a| a.points(self.q).collect::<Vec<_>>())
                .collect();
            got.sort_unstable();
            assert_eq!(expect, got, "level {} is not level {} translated by −s", k + 1, k);
        }
        Ok(())
    }
}

/// Gaps between consecutive points of {−k·s mod q : 0 ≤ k < n} on the cycle;
/// at most three distinct values (the three-distance structure).
pub fn three_distance_gaps(q: usize, s: usize, n: usize) -> Vec<usize> {
    assert!(n >= 1 && n <= q, "need 1 ≤ n ≤ q");
    let mut points: Vec<usize> = (0..n).map(|k| (q - (k * s) % q) % q).collect();
    points.sort_unstable();
    points.dedup();
    if points.len() == 1 {
        return vec![q];
    }
    let mut gaps: Vec<usize> = points.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(q - points.last().unwrap() + points.first().unwrap());
    gaps.sort_unstable();
    gaps
}

/// Tower of height h over the single base arc [0, L), L the minimal
/// three-distance gap; residual 1 − hL/q.
pub fn single_arc_tower(q: usize, s: usize, height: usize) -> Result<TowerSpec, FuzzyError> {
    if s.gcd(&q) != 1 {
        return Err(FuzzyError::NotCoprime { s, q });
    }
    if height > q || height == 0 {
        return Err(FuzzyError::HeightExceedsDimension { height, q });
    }
    let len = three_distance_gaps(q, s, height)[0];
    let levels: Vec<Vec<CyclicArc>> = (0..height)
        .map(|k| vec![CyclicArc { start: (q - (k * s) % q) % q, len }])
        .collect();
    let tower = TowerSpec {
        q,
        s,
        levels,
        marker_len: None,
        return_histogram: BTreeMap::new(),
    };
    tower.validate()?;
    Ok(tower)
}

/// Kakutani tower over the marker arc J = [0, c): the first-return castle of
/// j ↦ j − s over J is cut into blocks of `height` consecutive levels, the
/// top R mod height levels of each column discarded; e_k collects the k-th
/// level of every block, so level_{k+1} = level_k − s exactly and the
/// residual is at most (height−1)·c/q.
pub fn kakutani_tower(
    q: usize,
    s: usize,
    height: usize,
    marker_len: usize,
) -> Result<TowerSpec, FuzzyError> {
    if s.gcd(&q) != 1 {
        return Err(FuzzyError::NotCoprime { s, q });
    }
    if height == 0 || height > q {
        return Err(FuzzyError::HeightExceedsDimension { height, q });
    }
    if marker_len == 0 || marker_len > q {
        return Err(FuzzyError::BadMarker { c: marker_len, q });
    }
    let c = marker_len;

    // t_min = min{t ≥ 1 : t·s mod q ∈ (−c, c)}
    let t_min = (1..=q)
        .find(|&t| {
            let r = (t * s) % q;
            r < c || r > q - c
        })
        .unwrap_or(q);
    if t_min < height {
        return Err(FuzzyError::MarkerTooWide { t_min, height });
    }

    // first-return times under j ↦ j − s
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut returns = Vec::with_capacity(c);
    for j in 0..c {
        let mut pos = (j + q - s) % q;
        let mut t = 1;
        while pos >= c {
            pos = (pos + q - s) % q;
            t += 1;
        }
        returns.push(t);
        *histogram.entry(t).or_insert(0) += 1;
    }

    let mut level_points: Vec<Vec<usize>> = vec![Vec::new(); height];
    for (j, &r) in returns.iter().enumerate() {
        let blocks = r / height;
        for m in 0..blocks {
            for (k, level) in level_points.iter_mut().enumerate() {
                let t = m * height + k;
                level.push((j + q - (t * s) % q) % q);
            }
        }
    }

    let levels: Vec<Vec<CyclicArc>> = level_points
        .into_iter()
        .map(|points| points_to_arcs(points, q))
        .collect();
    let tower = TowerSpec {
        q,
        s,
        levels,
        marker_len: Some(c),
        return_histogram: histogram,
    };
    tower.validate()?;
    Ok(tower)
}

/// Merge a point set into maximal cyclic arcs.
fn points_to_arcs(mut points: Vec<usize>, q: usize) -> Vec<CyclicArc> {
    if points.is_empty() {
        return Vec::new();
    }
    points.sort_unstable();
    points.dedup();
    if points.len() == q {
        return vec![CyclicArc { start: 0, len: q }];
    }
    let mut arcs: Vec<CyclicArc> = Vec::new();
    let mut start = points[0];
    let mut prev = points[0];
    for &x in &points[1..] {
        if x == prev + 1 {
            prev = x;
        } else {
            arcs.push(CyclicArc { start, len: prev - start + 1 });
            start = x;
            prev = x;
        }
    }
    arcs.push(CyclicArc { start, len: prev - start + 1 });
    // wrap-around: merge a trailing arc ending at q−1 into one starting at 0
    if arcs.len() > 1 {
        let first = arcs[0];
        let last = *arcs.last().unwrap();
        if first.start == 0 && (last.start + last.len) == q {
            arcs[0] = CyclicArc { start: last.start, len: last.len + first.len };
            arcs.pop();
        }
    }
    arcs
}

/// Exact verification of the trace-norm tower conditions.
#[derive(Clone, Debug)]
pub struct TowerReport {
    pub q: usize,
    pub height: usize,
    pub marker_len: Option<usize>,
    /// 1 − Σ_k τ(e_k)
    pub residual: f64,
    /// max_k ‖Ad(W)(e_k) − e_{k+1}‖_{2,τ}
    pub cycling_defect: f64,
    /// per test element: max_k ‖[e_k, a]‖_{2,τ}
    pub commutator_norms: Vec<f64>,
    /// per test element: max_k of the ℓ¹ operator-norm bound of [e_k, a]
    pub commutator_op_bounds: Vec<f64>,
    pub epsilon: f64,
}

impl TowerReport {
    pub fn commutator_max(&self) -> f64 {
        self.commutator_norms.iter().copied().fold(0.0, f64::max)
    }

    pub fn cycling_ok(&self) -> bool {
        self.cycling_defect < self.epsilon
    }

    pub fn commutators_ok(&self) -> bool {
        self.commutator_max() < self.epsilon
    }

    pub fn residual_ok(&self) -> bool {
        self.residual < self.epsilon
    }

    pub fn passes(&self) -> bool {
        self.cycling_ok() && self.commutators_ok() && self.residual_ok()
    }
}

pub fn verify_tower(
    tower: &TowerSpec,
    w: &FuzzyOperator,
    test_set: &[FuzzyOperator],
    epsilon: f64,
) -> Result<TowerReport, FuzzyError> {
    if w.q() != tower.q {
        return Err(FuzzyError::DimensionMismatch { a: w.q(), b: tower.q });
    }
    let height = tower.height();
    let projections: Vec<FuzzyOperator> =
        (0..height).map(|k| tower.level_projection(k)).collect();

    let mut cycling_defect = 0.0f64;
    for k in 0..height.saturating_sub(1) {
        let defect = ad(w, &projections[k]).l2_dist(&projections[k + 1]);
        cycling_defect = cycling_defect.max(defect);
    }

    let mut commutator_norms = Vec::with_capacity(test_set.len());
    let mut commutator_op_bounds = Vec::with_capacity(test_set.len());
    for a in test_set {
        if a.q() != tower.q {
            return Err(FuzzyError::DimensionMismatch { a: a.q(), b: tower.q });
        }
        let mut worst = 0.0f64;
        let mut worst_bound = 0.0f64;
        for e in &projections {
            let comm = e.mul(a).sub(&a.mul(e));
            worst = worst.max(comm.l2_norm());
            worst_bound = worst_bound.max(comm.op_norm_bound());
        }
        commutator_norms.push(worst);
        commutator_op_bounds.push(worst_bound);
    }

    Ok(TowerReport {
        q: tower.q,
        height,
        marker_len: tower.marker_len,
        residual: tower.residual(),
        cycling_defect,
        commutator_norms,
        commutator_op_bounds,
        epsilon,
    })
}

/// Both sides of ‖ab − b‖ ≤ √(2‖abb* − bb*‖) for 0 ≤ a ≤ 1, evaluated with
/// dense operator norms (small q only).
pub fn calc_inequality_probe(
    a: &FuzzyOperator,
    b: &FuzzyOperator,
) -> Result<(f64, f64), FuzzyError> {
    const MAX_DENSE: usize = 64;
    if a.q() != b.q() {
        return Err(FuzzyError::DimensionMismatch { a: a.q(), b: b.q() });
    }
    if a.q() > MAX_DENSE {
        return Err(FuzzyError::DenseTooLarge { q: a.q(), max: MAX_DENSE });
    }
    let ad_ = a.to_dense();
    let defect = ad_.self_adjoint_defect();
    if defect > 1e-9 {
        return Err(FuzzyError::NotSelfAdjoint { defect });
    }
    let eigs = hermitian_eigenvalues(&ad_);
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min < -1e-9 || max > 1.0 + 1e-9 {
        return Err(FuzzyError::NotPositiveContraction { min, max });
    }
    let bd = b.to_dense();
    let ab = ad_.mul(&bd);
    let lhs = ab.sub(&bd).op_norm();
    let bbstar = bd.mul(&bd.adjoint());
    let rhs = (2.0 * ad_.mul(&bbstar).sub(&bbstar).op_norm()).sqrt();
    Ok((lhs, rhs))
}

/// Continued-fraction input: a real number or an exact fraction.
#[derive(Clone, Copy, Debug)]
pub enum ConvergentInput {
    Real(f64),
    Rational(i64, i64),
}

/// Continued-fraction convergents s/q of x; terminates early on rationals.
pub fn convergents(x: ConvergentInput, count: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(count);
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1i64, 0i64);
    let mut push = |a: i64, h: &mut i64, h_prev: &mut i64, k: &mut i64, k_prev: &mut i64| -> bool {
        let Some(hn) = a.checked_mul(*h).and_then(|x| x.checked_add(*h_prev)) else {
            return false;
        };
        let Some(kn) = a.checked_mul(*k).and_then(|x| x.checked_add(*k_prev)) else {
            return false;
        };
        *h_prev = *h;
        *k_prev = *k;
        *h = hn;
        *k = kn;
        true
    };
    match x {
        ConvergentInput::Rational(num, den) => {
            assert!(den > 0, "denominator must be positive");
            let (mut n, mut d) = (num, den);
            while out.len() < count {
                let a = n.div_euclid(d);
                if !push(a, &mut h, &mut h_prev, &mut k, &mut k_prev) {
                    break;
                }
                out.push((h, k));
                let r = n - a * d;
                if r == 0 {
                    break;
                }
                n = d;
                d = r;
            }
        }
        ConvergentInput::Real(value) => {
            let mut x = value;
            while out.len() < count {
                let fa = x.floor();
                if !(-(1e15)..1e15).contains(&fa) {
                    break;
                }
                if !push(fa as i64, &mut h, &mut h_prev, &mut k, &mut k_prev) {
                    break;
                }
                out.push((h, k));
                let frac = x - fa;
                if frac.abs() < 1e-12 {
                    break;
                }
                x = 1.0 / frac;
            }
        }
    }
    out
}
