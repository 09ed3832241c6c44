//! Furstenberg transformations on the rotation algebra: the automorphisms
//! determined by u ↦ e^{2πiγ}·u and v ↦ exp(2πif(u))·u^d·v.
//!
//! On monomials the action is
//!
//! ```text
//!   α(u^m v^n) = e^{2πiγm} · θ^{d·n(n−1)/2} · Π_{j} g(e^{2πijθ}u) · u^{m+dn} v^n
//! ```
//!
//! with g = exp(2πif). Constant f with rational phase data acts exactly,
//! monomial to scalar·monomial; sampled f acts through FFT calculus with a
//! hard bandwidth cutoff and the discarded ℓ² mass reported.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::Monomial;
use crate::circle;
use crate::element::Element;
use crate::phase::{parse_rational, Phase};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum FurstenbergAuto {
    /// Constant f; γ and f are rational combinations of {1, θ, γ}.
    Exact { gamma: Phase, d: i64, f: Phase },
    /// f sampled on a power-of-two grid over the circle; γ numeric.
    Sampled { gamma: f64, d: i64, f: Vec<f64> },
}

#[derive(Debug, Error)]
pub enum FurstError {
    #[error("sample grid length {got} is not a power of two")]
    GridNotPowerOfTwo { got: usize },
    #[error("bandwidth {got} is not a power of two")]
    BandwidthNotPowerOfTwo { got: usize },
    #[error("element must live in a two-generator rotation algebra")]
    NotRotationAlgebra,
    #[error("u-exponent {exp} exceeds half the sample grid {grid}")]
    SupportExceedsGrid { exp: i64, grid: usize },
    #[error("gauge conjugation needs d ≠ 0")]
    GaugeNeedsNonzeroD,
    #[error("operation needs the {needed} representation")]
    VariantMismatch { needed: &'static str },
    #[error("image·v* involves generators other than u")]
    NotFunctionOfU,
    #[error("unitarity defect {defect:.3e} exceeds {tol:.0e}")]
    UnitarityDefect { defect: f64, tol: f64 },
    #[error("phase unwrapping jump {jump:.3} exceeds π at grid point {index}; refine the grid")]
    UnwrapJump { jump: f64, index: usize },
    #[error("winding number {got:.6} is not close to an integer")]
    NonIntegerWinding { got: f64 },
    #[error("round-trip reconstruction defect {defect:.3e} exceeds {tol:.0e}")]
    RoundTripDefect { defect: f64, tol: f64 },
    #[error("serialization: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Result of applying an automorphism: the image together with the ℓ² mass
/// discarded by the bandwidth cutoff (always 0 for exact autos).
#[derive(Clone, Debug)]
pub struct Applied {
    pub element: Element,
    pub residual: f64,
}

impl FurstenbergAuto {
    /// The standard exact automorphism α_{θ,γ,d,f} with γ the basis symbol.
    pub fn standard_exact(d: i64, f: Phase) -> Self {
        FurstenbergAuto::Exact { gamma: Phase::gamma_pow(1), d, f }
    }

    pub fn sampled(gamma: f64, d: i64, f: Vec<f64>) -> Result<Self, FurstError> {
        if !circle::is_power_of_two(f.len()) {
            return Err(FurstError::GridNotPowerOfTwo { got: f.len() });
        }
        Ok(FurstenbergAuto::Sampled { gamma, d, f })
    }

    pub fn d(&self) -> i64 {
        match self {
            FurstenbergAuto::Exact { d, .. } | FurstenbergAuto::Sampled { d, .. } => *d,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FurstenbergAuto::Exact { .. })
    }

    /// α(a), truncated to u-exponents in [−bandwidth, bandwidth] when sampled.
    pub fn apply(&self, a: &Element, bandwidth: usize) -> Result<Applied, FurstError> {
        let algebra = a.algebra();
        if algebra.k() != 2 {
            return Err(FurstError::NotRotationAlgebra);
        }
        match self {
            FurstenbergAuto::Exact { gamma, d, f } => {
                let ctx = algebra.ctx();
                let mut terms = Vec::with_capacity(a.support_size());
                for (mono, s) in a.coeffs() {
                    let (m, n) = (mono.exps()[0], mono.exps()[1]);
                    let phase = gamma
                        .pow(m)
                        .mul(&f.pow(n))
                        .mul(&Phase::theta_pow(d * n * (n - 1) / 2));
                    terms.push((Monomial(vec![m + d * n, n]), s.mul_phase(&phase, ctx)));
                }
                Ok(Applied { element: Element::from_terms(algebra, terms), residual: 0.0 })
            }
            FurstenbergAuto::Sampled { gamma, d, f } => {
                if !circle::is_power_of_two(bandwidth) {
                    return Err(FurstError::BandwidthNotPowerOfTwo { got: bandwidth });
                }
                self.apply_sampled(a, *gamma, *d, f, bandwidth)
            }
        }
    }

    fn apply_sampled(
        &self,
        a: &Element,
        gamma: f64,
        d: i64,
        f: &[f64],
        bandwidth: usize,
    ) -> Result<Applied, FurstError> {
        let algebra = a.algebra();
        let ctx = algebra.ctx();
        let theta = ctx.theta;
        let grid = f.len();
        let g: Vec<Complex64> =
            f.iter().map(|&x| Complex64::from_polar(1.0, std::f64::consts::TAU * x)).collect();

        // group coefficients by the power of v
        let mut rows: std::collections::BTreeMap<i64, Vec<Complex64>> =
            std::collections::BTreeMap::new();
        for (mono, s) in a.coeffs() {
            let (m, n) = (mono.exps()[0], mono.exps()[1]);
            if m.unsigned_abs() as usize > grid / 2 {
                return Err(FurstError::SupportExceedsGrid { exp: m, grid });
            }
            let row = rows.entry(n).or_insert_with(|| vec![Complex64::new(0.0, 0.0); grid]);
            let idx = m.rem_euclid(grid as i64) as usize;
            row[idx] += s.eval(ctx)
                * Complex64::from_polar(1.0, std::f64::consts::TAU * gamma * m as f64);
        }

        let mut terms = Vec::new();
        let mut residual_sq = 0.0;
        for (n, row_coeffs) in rows {
            let cocycle = rotated_product(&g, theta, n);
            let row_samples = circle::samples_of_coeffs(&row_coeffs);
            let product: Vec<Complex64> =
                row_samples.iter().zip(&cocycle).map(|(a, b)| a * b).collect();
            let out_coeffs = circle::coeffs_of_samples(&product);
            let const_phase = Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * theta * (d * n * (n - 1)) as f64 / 2.0,
            );
            for (idx, c) in out_coeffs.iter().enumerate() {
                let k = circle::signed_freq(idx, grid);
                let target = k + d * n;
                if target.unsigned_abs() as usize <= bandwidth {
                    terms.push((
                        Monomial(vec![target, n]),
                        Scalar::approx(c * const_phase),
                    ));
                } else {
                    residual_sq += c.norm_sqr();
                }
            }
        }
        Ok(Applied { element: Element::from_terms(algebra, terms), residual: residual_sq.sqrt() })
    }

    /// The two-sided inverse α_{θ,−γ,−d,g} with g(ζ) = −f(e^{−2πiγ}ζ) + dγ.
    pub fn inverse(&self) -> FurstenbergAuto {
        match self {
            FurstenbergAuto::Exact { gamma, d, f } => FurstenbergAuto::Exact {
                gamma: gamma.conj(),
                d: -d,
                f: f.conj().mul(&gamma.pow(*d)),
            },
            FurstenbergAuto::Sampled { gamma, d, f } => {
                let rotated = circle::rotate_real_samples(f, -gamma);
                let shift = *d as f64 * gamma;
                FurstenbergAuto::Sampled {
                    gamma: -gamma,
                    d: -d,
                    f: rotated.iter().map(|&x| -x + shift).collect(),
                }
            }
        }
    }

    /// Ad(u^k v^l) ∘ α = α_{θ, γ+lθ, d, g} with g(ζ) = f(e^{2πilθ}ζ) + (ld−k)θ.
    pub fn conjugate_by_monomial(&self, k: i64, l: i64, theta: f64) -> FurstenbergAuto {
        match self {
            FurstenbergAuto::Exact { gamma, d, f } => FurstenbergAuto::Exact {
                gamma: gamma.mul(&Phase::theta_pow(l)),
                d: *d,
                f: f.mul(&Phase::theta_pow(l * d - k)),
            },
            FurstenbergAuto::Sampled { gamma, d, f } => {
                let rotated = circle::rotate_real_samples(f, l as f64 * theta);
                let shift = (l * d - k) as f64 * theta;
                FurstenbergAuto::Sampled {
                    gamma: gamma + l as f64 * theta,
                    d: *d,
                    f: rotated.iter().map(|&x| x + shift).collect(),
                }
            }
        }
    }

    /// β∘α∘β^{−1} for the gauge β(u) = e^{2πir/d}u, β(v) = v; the result is
    /// α_{θ,γ,d,g} with g(ζ) = f(e^{2πir/d}ζ) + r. Exact representation.
    pub fn gauge_conjugate_exact(&self, r: &Phase) -> Result<FurstenbergAuto, FurstError> {
        let FurstenbergAuto::Exact { gamma, d, f } = self else {
            return Err(FurstError::VariantMismatch { needed: "exact" });
        };
        if *d == 0 {
            return Err(FurstError::GaugeNeedsNonzeroD);
        }
        Ok(FurstenbergAuto::Exact { gamma: gamma.clone(), d: *d, f: f.mul(r) })
    }

    /// Sampled version of [`Self::gauge_conjugate_exact`].
    pub fn gauge_conjugate(&self, r: f64) -> Result<FurstenbergAuto, FurstError> {
        let FurstenbergAuto::Sampled { gamma, d, f } = self else {
            return Err(FurstError::VariantMismatch { needed: "sampled" });
        };
        if *d == 0 {
            return Err(FurstError::GaugeNeedsNonzeroD);
        }
        let rotated = circle::rotate_real_samples(f, r / *d as f64);
        Ok(FurstenbergAuto::Sampled {
            gamma: *gamma,
            d: *d,
            f: rotated.iter().map(|&x| x + r).collect(),
        })
    }

    /// The gauge automorphism β(u) = e^{2πir/d}u, β(v) = v as an automorphism
    /// in its own right (a Furstenberg transformation with d = 0, f = 0).
    pub fn gauge_beta_exact(r: &Phase, d: i64) -> Result<FurstenbergAuto, FurstError> {
        if d == 0 {
            return Err(FurstError::GaugeNeedsNonzeroD);
        }
        Ok(FurstenbergAuto::Exact {
            gamma: r.scale(&crate::phase::rat(1, d)),
            d: 0,
            f: Phase::trivial(),
        })
    }

    pub fn gauge_beta(r: f64, d: i64, grid: usize) -> Result<FurstenbergAuto, FurstError> {
        if d == 0 {
            return Err(FurstError::GaugeNeedsNonzeroD);
        }
        FurstenbergAuto::sampled(r / d as f64, 0, vec![0.0; grid])
    }

    /// k-fold composition; negative k composes the inverse.
    pub fn power(&self, k: i64) -> AutoPower {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        AutoPower { base, reps: k.unsigned_abs() }
    }

    /// Key-value serialization. Sampled f is written inline as
    /// `samples:v0,v1,…` or, via [`FurstenbergAuto::save`], to a side file.
    pub fn to_text(&self, theta: f64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theta = {theta}");
        match self {
            FurstenbergAuto::Exact { gamma, d, f } => {
                let _ = writeln!(out, "gamma = const:{},{},{}", gamma.p(), gamma.q(), gamma.r());
                let _ = writeln!(out, "d = {d}");
                let _ = writeln!(out, "f = const:{},{},{}", f.p(), f.q(), f.r());
            }
            FurstenbergAuto::Sampled { gamma, d, f } => {
                let _ = writeln!(out, "gamma = {gamma}");
                let _ = writeln!(out, "d = {d}");
                let vals: Vec<String> = f.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "f = samples:{}", vals.join(","));
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<(f64, FurstenbergAuto), FurstError> {
        let mut theta = None;
        let mut gamma_const = None;
        let mut gamma_num = None;
        let mut d = None;
        let mut f_const = None;
        let mut f_samples = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| FurstError::Format(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "theta" => {
                    theta = Some(
                        value.parse::<f64>().map_err(|e| FurstError::Format(e.to_string()))?,
                    )
                }
                "gamma" => {
                    if let Some(triple) = value.strip_prefix("const:") {
                        gamma_const = Some(parse_triple(triple)?);
                    } else {
                        gamma_num = Some(
                            value.parse::<f64>().map_err(|e| FurstError::Format(e.to_string()))?,
                        );
                    }
                }
                "d" => {
                    d = Some(value.parse::<i64>().map_err(|e| FurstError::Format(e.to_string()))?)
                }
                "f" => {
                    if let Some(triple) = value.strip_prefix("const:") {
                        f_const = Some(parse_triple(triple)?);
                    } else if let Some(list) = value.strip_prefix("samples:") {
                        let mut vals = Vec::new();
                        for item in list.split(',') {
                            vals.push(
                                item.trim()
                                    .parse::<f64>()
                                    .map_err(|e| FurstError::Format(e.to_string()))?,
                            );
                        }
                        f_samples = Some(vals);
                    } else {
                        return Err(FurstError::Format(format!(
                            "f must be const:p,q,r or samples:…, got {value:?}"
                        )));
                    }
                }
                other => return Err(FurstError::Format(format!("unknown key {other:?}"))),
            }
        }
        let theta = theta.ok_or_else(|| FurstError::Format("missing theta".into()))?;
        let d = d.ok_or_else(|| FurstError::Format("missing d".into()))?;
        let auto = match (gamma_const, gamma_num, f_const, f_samples) {
            (Some(g), None, Some(f), None) => FurstenbergAuto::Exact { gamma: g, d, f },
            (None, Some(g), None, Some(f)) => FurstenbergAuto::sampled(g, d, f)?,
            _ => {
                return Err(FurstError::Format(
                    "gamma/f must be both const (exact) or both numeric/samples".into(),
                ))
            }
        };
        Ok((theta, auto))
    }

    pub fn save(&self, path: &Path, theta: f64) -> Result<(), FurstError> {
        std::fs::write(path, self.to_text(theta))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<(f64, FurstenbergAuto), FurstError> {
        let text = std::fs::read_to_string(path)?;
        FurstenbergAuto::parse_text(&text)
    }
}

fn parse_triple(s: &str) -> Result<Phase, FurstError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(FurstError::Format(format!("expected p,q,r, got {s:?}")));
    }
    let p = parse_rational(parts[0].trim()).map_err(FurstError::Format)?;
    let q = parse_rational(parts[1].trim()).map_err(FurstError::Format)?;
    let r = parse_rational(parts[2].trim()).map_err(FurstError::Format)?;
    Ok(Phase::new(p, q, r))
}

/// Π_{j=0}^{n−1} g(e^{2πijθ}ζ) on the sample grid (inverted factors for n < 0),
/// accumulated by pointwise multiplication of rotated sample vectors.
fn rotated_product(g: &[Complex64], theta: f64, n: i64) -> Vec<Complex64> {
    let grid = g.len();
    let mut acc = vec![Complex64::new(1.0, 0.0); grid];
    if n >= 0 {
        for j in 0..n {
            let rotated = circle::rotate_samples(g, j as f64 * theta);
            for (a, r) in acc.iter_mut().zip(&rotated) {
                *a *= r;
            }
        }
    } else {
        for j in 1..=(-n) {
            let rotated = circle::rotate_samples(g, -j as f64 * theta);
            // g has unit modulus, so the pointwise inverse is the conjugate
            for (a, r) in acc.iter_mut().zip(&rotated) {
                *a *= r.conj() / r.norm_sqr();
            }
        }
    }
    acc
}

/// k-fold composition of a Furstenberg transformation.
#[derive(Clone, Debug)]
pub struct AutoPower {
    base: FurstenbergAuto,
    reps: u64,
}

impl AutoPower {
    pub fn apply(&self, a: &Element, bandwidth: usize) -> Result<Applied, FurstError> {
        let mut current = Applied { element: a.clone(), residual: 0.0 };
        for _ in 0..self.reps {
            let next = self.base.apply(&current.element, bandwidth)?;
            current = Applied {
                element: next.element,
                residual: current.residual + next.residual,
            };
        }
        Ok(current)
    }
}

/// Ad(u^k v^l)(a) = (u^k v^l)·a·(u^k v^l)^{-1}.
pub fn ad_monomial(k: i64, l: i64, a: &Element) -> Element {
    let algebra = a.algebra();
    let m = Element::from_term(algebra, Monomial(vec![k, l]), Scalar::one());
    m.mul(a).mul(&m.adjoint())
}

/// ‖Ad(u^k v^l)(α(a)) − α'(a)‖_{2,τ} where α' is the conjugated automorphism.
pub fn conj_identity_defect(
    auto: &FurstenbergAuto,
    k: i64,
    l: i64,
    a: &Element,
    bandwidth: usize,
) -> Result<Element, FurstError> {
    let theta = a.algebra().ctx().theta;
    let lhs = ad_monomial(k, l, &auto.apply(a, bandwidth)?.element);
    let rhs = auto.conjugate_by_monomial(k, l, theta).apply(a, bandwidth)?.element;
    Ok(lhs.sub(&rhs))
}

/// α^{-1}(α(a)) − a.
pub fn inverse_round_trip_defect(
    auto: &FurstenbergAuto,
    a: &Element,
    bandwidth: usize,
) -> Result<Element, FurstError> {
    let forward = auto.apply(a, bandwidth)?;
    let back = auto.inverse().apply(&forward.element, bandwidth)?;
    Ok(back.element.sub(a))
}

/// β∘α∘β^{-1}(a) − (gauge-conjugated α)(a), for the exact gauge r.
pub fn gauge_identity_defect_exact(
    auto: &FurstenbergAuto,
    r: &Phase,
    a: &Element,
    bandwidth: usize,
) -> Result<Element, FurstError> {
    let beta = FurstenbergAuto::gauge_beta_exact(r, auto.d())?;
    let lhs = beta
        .apply(&auto.apply(&beta.inverse().apply(a, bandwidth)?.element, bandwidth)?.element, bandwidth)?
        .element;
    let rhs = auto.gauge_conjugate_exact(r)?.apply(a, bandwidth)?.element;
    Ok(lhs.sub(&rhs))
}

/// Sampled counterpart of [`gauge_identity_defect_exact`].
pub fn gauge_identity_defect(
    auto: &FurstenbergAuto,
    r: f64,
    grid: usize,
    a: &Element,
    bandwidth: usize,
) -> Result<Element, FurstError> {
    let beta = FurstenbergAuto::gauge_beta(r, auto.d(), grid)?;
    let lhs = beta
        .apply(&auto.apply(&beta.inverse().apply(a, bandwidth)?.element, bandwidth)?.element, bandwidth)?
        .element;
    let rhs = auto.gauge_conjugate(r)?.apply(a, bandwidth)?.element;
    Ok(lhs.sub(&rhs))
}

/// Recover (γ, d, f-samples) from the images of the generators: d is the
/// winding number of g = image_v·v*, read off by phase unwrapping on the grid,
/// and f is the unwrapped argument with the winding removed.
pub fn classify(
    image_u_phase: Phase,
    image_v: &Element,
    grid: usize,
) -> Result<(Phase, i64, Vec<f64>), FurstError> {
    let algebra = image_v.algebra();
    if algebra.k() != 2 {
        return Err(FurstError::NotRotationAlgebra);
    }
    let v = Element::generator(algebra, 1);
    let g_elem = image_v.mul(&v.adjoint());
    let samples = g_elem
        .samples_on_generator(0, grid)
        .ok_or(FurstError::NotFunctionOfU)?;

    let tol = 1e-6;
    let mut unitary_defect = 0.0f64;
    for z in &samples {
        unitary_defect = unitary_defect.max((z.norm() - 1.0).abs());
    }
    if unitary_defect > tol {
        return Err(FurstError::UnitarityDefect { defect: unitary_defect, tol });
    }

    // unwrap the argument along the grid, one full loop
    let mut args = Vec::with_capacity(grid + 1);
    let mut prev = samples[0].arg();
    args.push(prev);
    for idx in 1..=grid {
        let raw = samples[idx % grid].arg();
        let mut delta = raw - prev.rem_euclid(std::f64::consts::TAU);
        delta = delta.rem_euclid(std::f64::consts::TAU);
        if delta > std::f64::consts::PI {
            delta -= std::f64::consts::TAU;
        }
        if delta.abs() > std::f64::consts::PI - 1e-12 {
            return Err(FurstError::UnwrapJump { jump: delta.abs(), index: idx });
        }
        prev += delta;
        args.push(prev);
    }
    let winding = (args[grid] - args[0]) / std::f64::consts::TAU;
    if (winding - winding.round()).abs() > 1e-6 {
        return Err(FurstError::NonIntegerWinding { got: winding });
    }
    let d = winding.round() as i64;

    let f: Vec<f64> = (0..grid)
        .map(|i| args[i] / std::f64::consts::TAU - d as f64 * i as f64 / grid as f64)
        .collect();

    // round trip: exp(2πif(ζ))·ζ^d must reproduce g
    let mut defect = 0.0f64;
    for (i, z) in samples.iter().take(grid).enumerate() {
        let t = i as f64 / grid as f64;
        let rebuilt = Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * (f[i] + d as f64 * t),
        );
        defect = defect.max((z - rebuilt).norm());
    }
    if defect > tol {
        return Err(FurstError::RoundTripDefect { defect, tol });
    }

    Ok((image_u_phase, d, f))
}
