//! Coefficient scalars: exact rational combinations of phases, or complex
//! doubles.
//!
//! An exact scalar is a finite sum Σ cᵢ·e^{2πi(pᵢ + qᵢθ + rᵢγ)} with rational
//! cᵢ, kept in a canonical form (phases with p ∈ [0, ½), strictly increasing,
//! nonzero coefficients) so that equality is structural. Exact scalars are
//! closed under sums, products and adjoints; any operation that mixes in an
//! approximate value coerces to a complex double using the numeric witnesses
//! for θ and γ.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::phase::Phase;

/// Numeric witnesses for the symbols θ and γ, used when exact scalars must be
/// evaluated or coerced to floats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalCtx {
    pub theta: f64,
    pub gamma: f64,
}

/// Canonical rational combination of unit phases.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSum {
    /// (coefficient, phase) with phases strictly increasing and p ∈ [0, ½).
    terms: Vec<(BigRational, Phase)>,
}

impl ExactSum {
    fn canonical(mut raw: Vec<(BigRational, Phase)>) -> Self {
        for (c, f) in &mut raw {
            let (flip, folded) = f.fold_half_turn();
            if flip {
                *c = -std::mem::take(c);
            }
            *f = folded;
        }
        raw.sort_by(|a, b| a.1.cmp(&b.1));
        let mut terms: Vec<(BigRational, Phase)> = Vec::with_capacity(raw.len());
        for (c, f) in raw {
            if c.is_zero() {
                continue;
            }
            match terms.last_mut() {
                Some(last) if last.1 == f => {
                    last.0 += c;
                    if last.0.is_zero() {
                        terms.pop();
                    }
                }
                _ => terms.push((c, f)),
            }
        }
        ExactSum { terms }
    }

    pub fn terms(&self) -> &[(BigRational, Phase)] {
        &self.terms
    }

    fn eval(&self, ctx: EvalCtx) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, f)| f.eval(ctx.theta, ctx.gamma) * c.to_f64().unwrap_or(0.0))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(ExactSum),
    Approx(Complex64),
}

impl Scalar {
    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn zero() -> Self {
        Scalar::Exact(ExactSum { terms: Vec::new() })
    }

    /// mag·e^{2πi(p + qθ + rγ)}; the magnitude may carry a sign.
    pub fn exact(mag: BigRational, phase: Phase) -> Self {
        Scalar::Exact(ExactSum::canonical(vec![(mag, phase)]))
    }

    pub fn from_phase(phase: Phase) -> Self {
        Scalar::exact(BigRational::one(), phase)
    }

    pub fn from_rational(x: BigRational) -> Self {
        Scalar::exact(x, Phase::trivial())
    }

    pub fn approx(z: Complex64) -> Self {
        Scalar::Approx(z)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(s) => s.terms.is_empty(),
            Scalar::Approx(z) => z.norm() == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Is the scalar literally 1 under the given independence mode?
    pub fn is_one(&self, mode: &crate::phase::IndependenceMode) -> bool {
        match self.as_single_exact() {
            Some((c, f)) => c.is_one() && f.is_trivial(mode),
            None => false,
        }
    }

    /// The single (coefficient, phase) pair of a one-term exact scalar.
    pub fn as_single_exact(&self) -> Option<(&BigRational, &Phase)> {
        match self {
            Scalar::Exact(s) if s.terms.len() == 1 => {
                let (c, f) = &s.terms[0];
                Some((c, f))
            }
            _ => None,
        }
    }

    pub fn eval(&self, ctx: EvalCtx) -> Complex64 {
        match self {
            Scalar::Exact(s) => s.eval(ctx),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn abs(&self, ctx: EvalCtx) -> f64 {
        match self {
            Scalar::Exact(s) if s.terms.len() == 1 => {
                s.terms[0].0.abs().to_f64().unwrap_or(0.0)
            }
            _ => self.eval(ctx).norm(),
        }
    }

    pub fn mul(&self, other: &Scalar, ctx: EvalCtx) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let mut raw = Vec::with_capacity(a.terms.len() * b.terms.len());
                for (c1, f1) in &a.terms {
                    for (c2, f2) in &b.terms {
                        raw.push((c1 * c2, f1.mul(f2)));
                    }
                }
                Scalar::Exact(ExactSum::canonical(raw))
            }
            _ => Scalar::Approx(self.eval(ctx) * other.eval(ctx)),
        }
    }

    pub fn mul_phase(&self, phase: &Phase, ctx: EvalCtx) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(ExactSum::canonical(
                s.terms.iter().map(|(c, f)| (c.clone(), f.mul(phase))).collect(),
            )),
            Scalar::Approx(z) => Scalar::Approx(z * phase.eval(ctx.theta, ctx.gamma)),
        }
    }

    pub fn add(&self, other: &Scalar, ctx: EvalCtx) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let mut raw = a.terms.clone();
                raw.extend(b.terms.iter().cloned());
                Scalar::Exact(ExactSum::canonical(raw))
            }
            _ => Scalar::Approx(self.eval(ctx) + other.eval(ctx)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(ExactSum {
                terms: s.terms.iter().map(|(c, f)| (-c, f.clone())).collect(),
            }),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(ExactSum::canonical(
                s.terms.iter().map(|(c, f)| (c.clone(), f.conj())).collect(),
            )),
            Scalar::Approx(z) => Scalar::Approx(z.conj()),
        }
    }

    /// Multiplicative inverse. Exact for a single term; multi-term sums fall
    /// back to the numeric reciprocal. Panics on zero.
    pub fn inv(&self, ctx: EvalCtx) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        match self {
            Scalar::Exact(s) if s.terms.len() == 1 => {
                let (c, f) = &s.terms[0];
                Scalar::exact(c.recip(), f.conj())
            }
            _ => Scalar::Approx(self.eval(ctx).inv()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rat;

    const CTX: EvalCtx = EvalCtx { theta: 0.3183098861837907, gamma: 0.5772156649015329 };

    #[test]
    fn exact_product_stays_exact() {
        let a = Scalar::exact(rat(2, 3), Phase::theta_pow(1));
        let b = Scalar::exact(rat(3, 4), Phase::gamma_pow(2));
        let c = a.mul(&b, CTX);
        assert!(c.is_exact());
        assert!((c.eval(CTX) - a.eval(CTX) * b.eval(CTX)).norm() < 1e-15);
    }

    #[test]
    fn mixing_coerces_to_approx() {
        let a = Scalar::one();
        let b = Scalar::approx(Complex64::new(0.5, 0.25));
        assert!(!a.mul(&b, CTX).is_exact());
    }

    #[test]
    fn sums_of_distinct_phases_stay_exact() {
        let a = Scalar::from_phase(Phase::theta_pow(1));
        let b = Scalar::from_phase(Phase::theta_pow(2));
        let s = a.add(&b, CTX);
        assert!(s.is_exact());
        assert!((s.eval(CTX) - (a.eval(CTX) + b.eval(CTX))).norm() < 1e-15);
        // and cancel exactly
        assert!(s.add(&a.neg(), CTX).add(&b.neg(), CTX).is_zero());
    }

    #[test]
    fn half_turn_phases_merge_into_signs() {
        let minus_one = Scalar::from_phase(Phase::half_turn());
        assert_eq!(minus_one, Scalar::from_rational(rat(-1, 1)));
        let sum = Scalar::one().add(&minus_one, CTX);
        assert!(sum.is_zero() && sum.is_exact());
    }

    #[test]
    fn adjoint_involution_and_inverse() {
        let a = Scalar::exact(rat(5, 7), Phase::new(rat(1, 3), rat(2, 1), rat(-1, 1)));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&a.inv(CTX), CTX), Scalar::one());
    }

    #[test]
    fn multi_term_inverse_is_numeric() {
        let a = Scalar::one().add(&Scalar::from_phase(Phase::theta_pow(1)), CTX);
        let inv = a.inv(CTX);
        assert!(!inv.is_exact());
        assert!((a.eval(CTX) * inv.eval(CTX) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
