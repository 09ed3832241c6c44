//! Finite-box solutions of monomial intertwining constraints.
//!
//! Given constraints w·x = y·w with x, y scalar·monomial, a candidate
//! w = Σ c_μ·μ supported in the box [−M, M]^k turns each constraint into a
//! permutation-with-phases of the coefficient family: monomial products are
//! again scalar·monomial, so coefficients are matched in pairs up to an exact
//! scalar ratio. The solution space dimension is the number of connected
//! components whose cycle ratios are all trivial and which are not forced to
//! zero at the box boundary. Dimension 0 certifies that no nonzero truncated
//! intertwiner exists.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, Monomial};
use crate::element::Element;
use crate::phase::IndependenceMode;
use crate::scalar::{EvalCtx, Scalar};

#[derive(Debug, Error)]
pub enum CentralizerError {
    #[error("constraint sides must be single monomials with exact scalars")]
    NonMonomialConstraint,
    #[error("exact modes only; numeric mode cannot certify dimension")]
    NumericMode,
}

struct WeightedDsu {
    parent: Vec<usize>,
    /// c_node = weight · c_parent
    weight: Vec<Scalar>,
    zeroed: Vec<bool>,
    ctx: EvalCtx,
}

impl WeightedDsu {
    fn new(n: usize, ctx: EvalCtx) -> Self {
        WeightedDsu {
            parent: (0..n).collect(),
            weight: vec![Scalar::one(); n],
            zeroed: vec![false; n],
            ctx,
        }
    }

    fn find(&mut self, v: usize) -> (usize, Scalar) {
        if self.parent[v] == v {
            return (v, Scalar::one());
        }
        let (root, pw) = self.find(self.parent[v]);
        let w = self.weight[v].mul(&pw, self.ctx);
        self.parent[v] = root;
        self.weight[v] = w.clone();
        (root, w)
    }

    /// Impose c_b = ratio · c_a.
    fn relate(&mut self, a: usize, b: usize, ratio: Scalar, mode: &IndependenceMode) {
        let (ra, wa) = self.find(a);
        let (rb, wb) = self.find(b);
        if ra == rb {
            // cycle: c_b = ratio·c_a forces (wb − ratio·wa)·c_root = 0
            let implied = ratio.mul(&wa, self.ctx);
            let check = implied.mul(&wb.inv(self.ctx), self.ctx);
            if !check.is_one(mode) {
                self.zeroed[ra] = true;
            }
            return;
        }
        // attach rb under ra: c_b = wb·c_rb  and  c_b = ratio·wa·c_ra
        // so c_rb = wb^{-1}·ratio·wa · c_ra
        let w = self.weight_for_attach(&wa, &wb, ratio);
        self.parent[rb] = ra;
        self.weight[rb] = w;
        if self.zeroed[rb] {
            self.zeroed[ra] = true;
        }
    }

    fn weight_for_attach(&self, wa: &Scalar, wb: &Scalar, ratio: Scalar) -> Scalar {
        wb.inv(self.ctx).mul(&ratio, self.ctx).mul(wa, self.ctx)
    }

    fn force_zero(&mut self, v: usize) {
        let (root, _) = self.find(v);
        self.zeroed[root] = true;
    }

    fn free_dimension(&mut self) -> usize {
        (0..self.parent.len()).filter(|&v| self.parent[v] == v && !self.zeroed[v]).count()
    }
}

fn monomial_constraint(e: &Element) -> Option<(Monomial, Scalar)> {
    let (m, s) = e.as_monomial()?;
    if s.is_exact() && !s.is_zero() {
        Some((m.clone(), s.clone()))
    } else {
        None
    }
}

/// Dimension of { w supported in [−M, M]^k : w·x = y·w for all constraints }.
pub fn centralizer_dim(
    algebra: &Arc<Algebra>,
    constraints: &[(Element, Element)],
    box_radius: i64,
) -> Result<usize, CentralizerError> {
    if matches!(algebra.mode(), IndependenceMode::Numeric { .. }) {
        return Err(CentralizerError::NumericMode);
    }
    let k = algebra.k();
    let ctx = algebra.ctx();
    let mode = algebra.mode().clone();

    let monomials = box_monomials(k, box_radius);
    let index: BTreeMap<Monomial, usize> =
        monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    let mut dsu = WeightedDsu::new(monomials.len(), ctx);

    for (x, y) in constraints {
        let (xi, sx) = monomial_constraint(x).ok_or(CentralizerError::NonMonomialConstraint)?;
        let (nu, sy) = monomial_constraint(y).ok_or(CentralizerError::NonMonomialConstraint)?;
        let (_, nu_inv) = algebra.inv_monomial(&nu);
        let (_, xi_inv) = algebra.inv_monomial(&xi);

        for (mu_idx, mu) in monomials.iter().enumerate() {
            // left side sends μ to the target μ·ξ; the matching right-side
            // source is μ' = ν^{-1}·(μ·ξ)
            let (phase_l, target) = algebra.mul_monomials(mu, &xi);
            let (_, mu_prime) = algebra.mul_monomials(&nu_inv, &target);
            match index.get(&mu_prime) {
                None => dsu.force_zero(mu_idx),
                Some(&mu_prime_idx) => {
                    let (phase_r, check) = algebra.mul_monomials(&nu, &mu_prime);
                    debug_assert_eq!(check, target);
                    // s_x·φ_L·c_μ = s_y·φ_R·c_μ'
                    let lhs = sx.mul_phase(&phase_l, ctx);
                    let rhs = sy.mul_phase(&phase_r, ctx);
                    let ratio = lhs.mul(&rhs.inv(ctx), ctx);
                    dsu.relate(mu_idx, mu_prime_idx, ratio, &mode);
                }
            }
        }
        for (mu_prime_idx, mu_prime) in monomials.iter().enumerate() {
            // right-side targets whose left-side source falls outside the box
            let (_, target) = algebra.mul_monomials(&nu, mu_prime);
            let (_, mu) = algebra.mul_monomials(&target, &xi_inv);
            if !index.contains_key(&mu) {
                dsu.force_zero(mu_prime_idx);
            }
        }
    }

    Ok(dsu.free_dimension())
}

fn box_monomials(k: usize, radius: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![-radius; k];
    loop {
        out.push(Monomial(current.clone()));
        let mut dim = 0;
        loop {
            if dim == k {
                return out;
            }
            current[dim] += 1;
            if current[dim] <= radius {
                break;
            }
            current[dim] = -radius;
            dim += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{rat, Phase};
    use num_complex::Complex64;

    fn a_theta(mode: IndependenceMode, ctx: EvalCtx) -> Arc<Algebra> {
        Algebra::a_theta(mode, ctx)
    }

    fn independent() -> Arc<Algebra> {
        Algebra::a_theta_independent()
    }

    fn gamma_constraint(alg: &Arc<Algebra>) -> (Element, Element) {
        // w·u = e^{2πiγ}·u·w
        let u = Element::generator(alg, 0);
        (u.clone(), u.scale(&Scalar::from_phase(Phase::gamma_pow(1))))
    }

    fn lin_constraints(alg: &Arc<Algebra>, d: i64, rho: Phase) -> Vec<(Element, Element)> {
        // w·u = u·w  and  w·v = e^{2πiρ}·u^d·v·w
        let u = Element::generator(alg, 0);
        let v = Element::generator(alg, 1);
        let udv = Element::from_term(
            alg,
            Monomial(vec![d, 1]),
            Scalar::from_phase(rho),
        );
        vec![(u.clone(), u), (v, udv)]
    }

    #[test]
    fn gamma_constraint_has_no_solutions_when_independent() {
        let alg = independent();
        for radius in [1, 3, 6] {
            let dim = centralizer_dim(&alg, &[gamma_constraint(&alg)], radius).unwrap();
            assert_eq!(dim, 0, "box {radius}");
        }
    }

    #[test]
    fn gamma_constraint_related_mode_counts_u_powers() {
        // γ = 2θ: solutions are the monomials u^m v^2, |m| ≤ 6
        let theta = std::f64::consts::SQRT_2 - 1.0;
        let alg = a_theta(
            IndependenceMode::Related { a: rat(0, 1), b: rat(2, 1) },
            EvalCtx { theta, gamma: 2.0 * theta },
        );
        let dim = centralizer_dim(&alg, &[gamma_constraint(&alg)], 6).unwrap();
        assert_eq!(dim, 13);
    }

    #[test]
    fn lin_constraints_force_zero_at_box_edge() {
        let alg = independent();
        let dim =
            centralizer_dim(&alg, &lin_constraints(&alg, 2, Phase::of_rational(rat(1, 7))), 6)
                .unwrap();
        assert_eq!(dim, 0);
    }

    #[test]
    fn rejects_non_monomial_and_numeric_modes() {
        let alg = independent();
        let u = Element::generator(&alg, 0);
        let bad = u.add(&Element::generator(&alg, 1));
        assert!(matches!(
            centralizer_dim(&alg, &[(bad, u.clone())], 2),
            Err(CentralizerError::NonMonomialConstraint)
        ));

        let numeric = a_theta(
            IndependenceMode::Numeric { theta: 0.3, gamma: 0.7, tol: 1e-9 },
            EvalCtx { theta: 0.3, gamma: 0.7 },
        );
        assert!(matches!(
            centralizer_dim(&numeric, &[gamma_constraint(&numeric)], 2),
            Err(CentralizerError::NumericMode)
        ));
    }

    // Independent oracle: dense numeric linear system over the same box,
    // with phases evaluated at the numeric witnesses; dimension = nullity.
    fn brute_force_dim(
        alg: &Arc<Algebra>,
        constraints: &[(Element, Element)],
        radius: i64,
    ) -> usize {
        let ctx = alg.ctx();
        let monomials = box_monomials(alg.k(), radius);
        let index: BTreeMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = monomials.len();
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for (x, y) in constraints {
            let (xi, sx) = monomial_constraint(x).unwrap();
            let (nu, sy) = monomial_constraint(y).unwrap();
            let mut by_target: BTreeMap<Monomial, Vec<(usize, Complex64)>> = BTreeMap::new();
            for (i, mu) in monomials.iter().enumerate() {
                let (phase, target) = alg.mul_monomials(mu, &xi);
                let coeff = sx.mul_phase(&phase, ctx).eval(ctx);
                by_target.entry(target).or_default().push((i, coeff));
            }
            for (i, mu) in monomials.iter().enumerate() {
                let (phase, target) = alg.mul_monomials(&nu, mu);
                let coeff = -sy.mul_phase(&phase, ctx).eval(ctx);
                by_target.entry(target).or_default().push((i, coeff));
            }
            for (_, entries) in by_target {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                for (i, c) in entries {
                    row[i] += c;
                }
                rows.push(row);
            }
        }
        let _ = index;
        n - numeric_rank(rows, n)
    }

    fn numeric_rank(mut rows: Vec<Vec<Complex64>>, n: usize) -> usize {
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..rows.len())
                .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()));
            let Some(p) = pivot else { break };
            if rows[p][col].norm() < 1e-8 {
                continue;
            }
            rows.swap(rank, p);
            let inv = rows[rank][col].inv();
            for r in rank + 1..rows.len() {
                let factor = rows[r][col] * inv;
                for c in col..n {
                    let sub = factor * rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn agrees_with_dense_rank_oracle_on_small_boxes() {
        let theta = std::f64::consts::SQRT_2 - 1.0;
        let cases: Vec<(Arc<Algebra>, Vec<(Element, Element)>)> = {
            let ind = independent();
            let rel = a_theta(
                IndependenceMode::Related { a: rat(0, 1), b: rat(2, 1) },
                EvalCtx { theta, gamma: 2.0 * theta },
            );
            let rel3 = a_theta(
                IndependenceMode::Related { a: rat(1, 2), b: rat(-1, 1) },
                EvalCtx { theta, gamma: 0.5 - theta },
            );
            vec![
                (ind.clone(), vec![gamma_constraint(&ind)]),
                (ind.clone(), lin_constraints(&ind, 1, Phase::of_rational(rat(1, 5)))),
                (ind.clone(), lin_constraints(&ind, 2, Phase::theta_pow(1))),
                (rel.clone(), vec![gamma_constraint(&rel)]),
                (rel3.clone(), vec![gamma_constraint(&rel3)]),
            ]
        };
        for (alg, constraints) in cases {
            for radius in 1..=3 {
                let fast = centralizer_dim(&alg, &constraints, radius).unwrap();
                let slow = brute_force_dim(&alg, &constraints, radius);
                assert_eq!(fast, slow, "mode {:?} box {radius}", alg.mode());
            }
        }
    }
}
