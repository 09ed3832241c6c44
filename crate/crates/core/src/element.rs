//! Noncommutative Laurent polynomials in the generators of a twisted algebra.
//!
//! An element is a finitely supported map from ordered monomials to scalars.
//! The trace τ reads off the coefficient of the identity monomial; monomials
//! are orthonormal for the induced 2-norm, so ‖a‖²_{2,τ} = Σ|λ|².

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{Algebra, Monomial};
use crate::circle;
use crate::phase::{parse_rational, Phase};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    algebra: Arc<Algebra>,
    coeffs: BTreeMap<Monomial, Scalar>,
}

#[derive(Debug, Error)]
pub enum ElementError {
    #[error("sample count {got} is not a power of two")]
    NotPowerOfTwo { got: usize },
    #[error("need at least {needed} samples for bandwidth {bandwidth}, got {got}")]
    TooFewSamples { needed: usize, bandwidth: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: duplicate exponent vector")]
    DuplicateExponent { line: usize },
}

impl Element {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Element { algebra: Arc::clone(algebra), coeffs: BTreeMap::new() }
    }

    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Element::from_term(algebra, Monomial::identity(algebra.k()), Scalar::one())
    }

    pub fn generator(algebra: &Arc<Algebra>, index: usize) -> Self {
        Element::from_term(algebra, Monomial::generator(algebra.k(), index), Scalar::one())
    }

    pub fn from_term(algebra: &Arc<Algebra>, m: Monomial, s: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !s.is_zero() {
            coeffs.insert(m, s);
        }
        Element { algebra: Arc::clone(algebra), coeffs }
    }

    pub fn from_terms(algebra: &Arc<Algebra>, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut out = Element::zero(algebra);
        for (m, s) in terms {
            out.add_term(m, s);
        }
        out.clean();
        out
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// A single scalar·monomial term, or None.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Scalar)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let ctx = self.algebra.ctx();
        match self.coeffs.remove(&m) {
            Some(old) => {
                let new = old.add(&s, ctx);
                if !new.is_zero() {
                    self.coeffs.insert(m, new);
                }
            }
            None => {
                self.coeffs.insert(m, s);
            }
        }
    }

    fn clean(&mut self) {
        let tol = self.algebra.drop_tol();
        self.coeffs.retain(|_, s| match s {
            Scalar::Approx(z) => z.norm() >= tol,
            s => !s.is_zero(),
        });
    }

    pub fn add(&self, other: &Element) -> Element {
        self.check_same_algebra(other);
        let mut out = self.clone();
        for (m, s) in &other.coeffs {
            out.add_term(m.clone(), s.clone());
        }
        out.clean();
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        let coeffs = self.coeffs.iter().map(|(m, s)| (m.clone(), s.neg())).collect();
        Element { algebra: Arc::clone(&self.algebra), coeffs }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        let ctx = self.algebra.ctx();
        let mut out = Element::zero(&self.algebra);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), c.mul(s, ctx));
        }
        out.clean();
        out
    }

    pub fn mul(&self, other: &Element) -> Element {
        self.check_same_algebra(other);
        let ctx = self.algebra.ctx();
        let mut out = Element::zero(&self.algebra);
        for (m1, s1) in &self.coeffs {
            for (m2, s2) in &other.coeffs {
                let (phase, m) = self.algebra.mul_monomials(m1, m2);
                let s = s1.mul(s2, ctx).mul_phase(&phase, ctx);
                out.add_term(m, s);
            }
        }
        out.clean();
        out
    }

    /// The adjoint; generators are unitaries, so m* = m^{−1} on monomials.
    pub fn adjoint(&self) -> Element {
        let ctx = self.algebra.ctx();
        let mut out = Element::zero(&self.algebra);
        for (m, s) in &self.coeffs {
            let (phase, minv) = self.algebra.inv_monomial(m);
            out.add_term(minv, s.conj().mul_phase(&phase, ctx));
        }
        out.clean();
        out
    }

    /// τ extracts the coefficient of the identity monomial.
    pub fn trace(&self) -> Scalar {
        self.coeff(&Monomial::identity(self.algebra.k()))
    }

    /// ‖a‖_{2,τ} = sqrt(Σ |λ|²) over the coefficient family.
    pub fn l2_norm(&self) -> f64 {
        let ctx = self.algebra.ctx();
        self.coeffs.values().map(|s| s.abs(ctx).powi(2)).sum::<f64>().sqrt()
    }

    /// ℓ¹ coefficient bound on the operator norm.
    pub fn op_norm_bound(&self) -> f64 {
        let ctx = self.algebra.ctx();
        self.coeffs.values().map(|s| s.abs(ctx)).sum()
    }

    pub fn l2_dist(&self, other: &Element) -> f64 {
        self.sub(other).l2_norm()
    }

    fn check_same_algebra(&self, other: &Element) {
        assert!(
            self.algebra == other.algebra || Arc::ptr_eq(&self.algebra, &other.algebra),
            "elements live in different algebras"
        );
    }

    /// Element carried by a sampled circle function of a single generator:
    /// the band |k| ≤ bandwidth of its Fourier series, together with the ℓ²
    /// mass left outside the band.
    pub fn from_circle_samples(
        algebra: &Arc<Algebra>,
        samples: &[Complex64],
        gen_index: usize,
        bandwidth: usize,
    ) -> Result<(Element, f64), ElementError> {
        let n = samples.len();
        if !circle::is_power_of_two(n) {
            return Err(ElementError::NotPowerOfTwo { got: n });
        }
        if n < 4 * bandwidth {
            return Err(ElementError::TooFewSamples {
                needed: 4 * bandwidth,
                bandwidth,
                got: n,
            });
        }
        let coeffs = circle::coeffs_of_samples(samples);
        let mut out = Element::zero(algebra);
        let mut residual_sq = 0.0;
        for (idx, c) in coeffs.iter().enumerate() {
            let k = circle::signed_freq(idx, n);
            if k.unsigned_abs() as usize <= bandwidth {
                let mut e = Monomial::identity(algebra.k());
                e.0[gen_index] = k;
                out.add_term(e, Scalar::approx(*c));
            } else {
                residual_sq += c.norm_sqr();
            }
        }
        out.clean();
        Ok((out, residual_sq.sqrt()))
    }

    /// Evaluate an element supported on powers of one generator on the grid
    /// of `len` roots of unity. Returns None if other generators occur.
    pub fn samples_on_generator(&self, gen_index: usize, len: usize) -> Option<Vec<Complex64>> {
        let ctx = self.algebra.ctx();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (m, s) in &self.coeffs {
            for (g, &e) in m.exps().iter().enumerate() {
                if g != gen_index && e != 0 {
                    return None;
                }
            }
            let k = m.exps()[gen_index];
            if k.unsigned_abs() as usize > len / 2 {
                return None;
            }
            let idx = k.rem_euclid(len as i64) as usize;
            coeffs[idx] += s.eval(ctx);
        }
        Some(circle::samples_of_coeffs(&coeffs))
    }

    /// Plain-text serialization: one term per line,
    /// `m1 … mk  re im` for approximate or `m1 … mk  num/den p q r` for exact
    /// coefficients; `#` starts a comment. Exact coefficients with more than
    /// one phase term have no slot in the format and are written numerically.
    pub fn to_text(&self) -> String {
        let ctx = self.algebra.ctx();
        let mut out = String::new();
        for (m, s) in &self.coeffs {
            let exps: Vec<String> = m.exps().iter().map(|e| e.to_string()).collect();
            out.push_str(&exps.join(" "));
            match s.as_single_exact() {
                Some((mag, phase)) => {
                    out.push_str(&format!(
                        "  {} {} {} {}\n",
                        mag,
                        phase.p(),
                        phase.q(),
                        phase.r()
                    ));
                }
                None => {
                    let z = s.eval(ctx);
                    out.push_str(&format!("  {} {}\n", z.re, z.im));
                }
            }
        }
        out
    }

    pub fn parse_text(algebra: &Arc<Algebra>, text: &str) -> Result<Element, ElementError> {
        let k = algebra.k();
        let mut out = Element::zero(algebra);
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let parse = |msg: String| ElementError::Parse { line, msg };
            if tokens.len() != k + 2 && tokens.len() != k + 4 {
                return Err(parse(format!(
                    "expected {} or {} fields, got {}",
                    k + 2,
                    k + 4,
                    tokens.len()
                )));
            }
            let mut exps = Vec::with_capacity(k);
            for t in &tokens[..k] {
                exps.push(t.parse::<i64>().map_err(|e| parse(format!("bad exponent {t:?}: {e}")))?);
            }
            let m = Monomial(exps);
            if !seen.insert(m.clone()) {
                return Err(ElementError::DuplicateExponent { line });
            }
            let s = if tokens.len() == k + 2 {
                let re = tokens[k].parse::<f64>().map_err(|e| parse(format!("bad float: {e}")))?;
                let im =
                    tokens[k + 1].parse::<f64>().map_err(|e| parse(format!("bad float: {e}")))?;
                Scalar::approx(Complex64::new(re, im))
            } else {
                let mag = parse_rational(tokens[k]).map_err(&parse)?;
                let p = parse_rational(tokens[k + 1]).map_err(&parse)?;
                let q = parse_rational(tokens[k + 2]).map_err(&parse)?;
                let r = parse_rational(tokens[k + 3]).map_err(&parse)?;
                Scalar::exact(mag, Phase::new(p, q, r))
            };
            out.add_term(m, s);
        }
        out.clean();
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let names = self.algebra.names();
        let mut first = true;
        for (m, s) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match s.as_single_exact() {
                Some((mag, phase)) => write!(f, "{mag}·{phase}")?,
                None => {
                    let z = s.eval(self.algebra.ctx());
                    write!(f, "({:.6}{:+.6}i)", z.re, z.im)?;
                }
            }
            for (g, &e) in m.exps().iter().enumerate() {
                if e == 1 {
                    write!(f, " {}", names[g])?;
                } else if e != 0 {
                    write!(f, " {}^{}", names[g], e)?;
                }
            }
        }
        Ok(())
    }
}
