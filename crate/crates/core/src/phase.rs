//! Exact unit scalars of the form e^{2πi(p + qθ + rγ)} with rational p, q, r.
//!
//! The three basis symbols are 1, θ (the twist of the rotation algebra) and γ
//! (the rotation parameter of a Furstenberg transformation). Multiplication is
//! componentwise addition with p reduced into [0, 1); whether a phase equals 1
//! depends on the declared arithmetic relations between 1, θ and γ, which is
//! what [`IndependenceMode`] captures.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn reduce_mod_one(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// A unit complex number e^{2πi(p + qθ + rγ)} with p, q, r ∈ Q and 0 ≤ p < 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase {
    p: BigRational,
    q: BigRational,
    r: BigRational,
}

impl Phase {
    pub fn new(p: BigRational, q: BigRational, r: BigRational) -> Self {
        Phase { p: reduce_mod_one(&p), q, r }
    }

    /// The trivial phase 1.
    pub fn trivial() -> Self {
        Phase::new(BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    /// e^{2πip} for rational p.
    pub fn of_rational(p: BigRational) -> Self {
        Phase::new(p, BigRational::zero(), BigRational::zero())
    }

    /// e^{2πi·nθ}.
    pub fn theta_pow(n: i64) -> Self {
        Phase::new(BigRational::zero(), rat(n, 1), BigRational::zero())
    }

    /// e^{2πi·nγ}.
    pub fn gamma_pow(n: i64) -> Self {
        Phase::new(BigRational::zero(), BigRational::zero(), rat(n, 1))
    }

    /// The half turn −1.
    pub fn half_turn() -> Self {
        Phase::of_rational(rat(1, 2))
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase::new(&self.p + &other.p, &self.q + &other.q, &self.r + &other.r)
    }

    /// The complex conjugate, i.e. the inverse.
    pub fn conj(&self) -> Phase {
        Phase::new(-&self.p, -&self.q, -&self.r)
    }

    pub fn pow(&self, n: i64) -> Phase {
        let n = rat(n, 1);
        Phase::new(&self.p * &n, &self.q * &n, &self.r * &n)
    }

    /// Scale the exponent by an arbitrary rational (used for roots of phases).
    pub fn scale(&self, c: &BigRational) -> Phase {
        Phase::new(&self.p * c, &self.q * c, &self.r * c)
    }

    /// Split off a half turn: returns (true, φ·(−1)) with the reduced phase in
    /// [0, ½) when p ≥ ½, so that e^{2πi·self} = ±e^{2πi·folded}.
    pub fn fold_half_turn(&self) -> (bool, Phase) {
        if self.p >= rat(1, 2) {
            (true, Phase::new(&self.p - rat(1, 2), self.q.clone(), self.r.clone()))
        } else {
            (false, self.clone())
        }
    }

    /// Numeric value at the given θ and γ.
    pub fn eval(&self, theta: f64, gamma: f64) -> Complex64 {
        let x = self.p.to_f64().unwrap_or(0.0)
            + self.q.to_f64().unwrap_or(0.0) * theta
            + self.r.to_f64().unwrap_or(0.0) * gamma;
        Complex64::from_polar(1.0, std::f64::consts::TAU * x)
    }

    /// Decide whether the phase equals 1 under the given mode.
    pub fn is_trivial(&self, mode: &IndependenceMode) -> bool {
        match mode {
            IndependenceMode::Independent => {
                self.p.is_zero() && self.q.is_zero() && self.r.is_zero()
            }
            IndependenceMode::Related { a, b } => {
                // substitute γ = a + bθ and reduce
                let q = &self.q + &self.r * b;
                let p = &self.p + &self.r * a;
                q.is_zero() && p.is_integer()
            }
            IndependenceMode::Numeric { theta, gamma, tol } => {
                let x = self.p.to_f64().unwrap_or(0.0)
                    + self.q.to_f64().unwrap_or(0.0) * theta
                    + self.r.to_f64().unwrap_or(0.0) * gamma;
                (x - x.round()).abs() < *tol
            }
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phase({},{},{})", self.p, self.q, self.r)
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix("phase(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| format!("expected phase(p,q,r), got {s:?}"))?;
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected three components in {s:?}"));
        }
        let mut vals = Vec::with_capacity(3);
        for part in parts {
            vals.push(parse_rational(part.trim())?);
        }
        let r = vals.pop().unwrap();
        let q = vals.pop().unwrap();
        let p = vals.pop().unwrap();
        Ok(Phase::new(p, q, r))
    }
}

/// Parse "a/b" or "a" as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s.trim()).map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Declared arithmetic relations between 1, θ and γ.
///
/// `Independent` means 1, θ, γ are Q-linearly independent, so phase triviality
/// is decidable exactly. `Related` substitutes γ = a + bθ (θ still irrational).
/// `Numeric` fixes float values and decides triviality up to a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub enum IndependenceMode {
    Independent,
    Numeric { theta: f64, gamma: f64, tol: f64 },
    Related { a: BigRational, b: BigRational },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn phase(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Phase {
        Phase::new(rat(p.0, p.1), rat(q.0, q.1), rat(r.0, r.1))
    }

    #[test]
    fn mul_identity() {
        let a = phase((2, 3), (1, 1), (5, 1));
        assert_eq!(Phase::trivial().mul(&a), a);
    }

    #[test]
    fn mul_half_turns_cancel() {
        let h = Phase::half_turn();
        assert_eq!(h.mul(&h), Phase::trivial());
    }

    #[test]
    fn mul_reduces_p_mod_one() {
        // (1/3, 1, 0)·(5/6, 2, 1) = (1/6, 3, 1)
        let a = phase((1, 3), (1, 1), (0, 1));
        let b = phase((5, 6), (2, 1), (1, 1));
        assert_eq!(a.mul(&b), phase((1, 6), (3, 1), (1, 1)));
    }

    #[test]
    fn triviality_independent() {
        assert!(Phase::trivial().is_trivial(&IndependenceMode::Independent));
        assert!(!Phase::theta_pow(1).is_trivial(&IndependenceMode::Independent));
    }

    #[test]
    fn triviality_related() {
        // γ = 2θ makes e^{2πi(−2θ + γ)} trivial
        let mode = IndependenceMode::Related { a: rat(0, 1), b: rat(2, 1) };
        let a = Phase::new(rat(0, 1), rat(-2, 1), rat(1, 1));
        assert!(a.is_trivial(&mode));
        let b = Phase::new(rat(0, 1), rat(-1, 1), rat(1, 1));
        assert!(!b.is_trivial(&mode));
    }

    #[test]
    fn triviality_numeric() {
        let mode = IndependenceMode::Numeric { theta: 0.25, gamma: 0.5, tol: 1e-9 };
        let a = Phase::new(rat(1, 2), rat(0, 1), rat(1, 1));
        assert!(a.is_trivial(&mode));
        let b = Phase::new(rat(1, 3), rat(0, 1), rat(1, 1));
        assert!(!b.is_trivial(&mode));
    }

    #[test]
    fn display_round_trip() {
        let a = phase((1, 6), (-3, 1), (2, 7));
        let s = a.to_string();
        assert_eq!(s.parse::<Phase>().unwrap(), a);
    }

    proptest! {
        #[test]
        fn reduction_keeps_p_in_unit_interval(pn in -40i64..40, pd in 1i64..9, q in -5i64..5) {
            let a = Phase::new(rat(pn, pd), rat(q, 1), rat(0, 1));
            prop_assert!(!a.p().is_negative());
            prop_assert!(a.p() < &rat(1, 1));
        }

        #[test]
        fn eval_is_multiplicative(
            pn in -6i64..6, qn in -6i64..6, rn in -6i64..6,
            pm in -6i64..6, qm in -6i64..6, rm in -6i64..6,
        ) {
            let theta = 0.41421356237309515;
            let gamma = 0.6180339887498949;
            let a = Phase::new(rat(pn, 4), rat(qn, 3), rat(rn, 5));
            let b = Phase::new(rat(pm, 4), rat(qm, 3), rat(rm, 5));
            let lhs = a.mul(&b).eval(theta, gamma);
            let rhs = a.eval(theta, gamma) * b.eval(theta, gamma);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn conj_inverts(pn in -9i64..9, q in -4i64..4, r in -4i64..4) {
            let a = Phase::new(rat(pn, 7), rat(q, 1), rat(r, 1));
            prop_assert!(a.mul(&a.conj()).is_trivial(&IndependenceMode::Independent));
        }
    }
}
