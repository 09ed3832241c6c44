//! Polycyclic presentations: the crossed-product presentation of a
//! Furstenberg transformation with constant f, the Milnes–Walters algebras
//! A^{5,3}, A^{5,6} and A^{5,3}(r₁,…,r₅), generator substitutions between
//! them, and a randomized confluence probe.
//!
//! A presentation here is just an [`Algebra`] rule table with named
//! generators; `normal_form` collects any word into scalar·monomial.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    default_names, Algebra, Monomial, ReductionStrategy, RewriteError, SwapRule, TableError,
    TwistTable,
};
use crate::element::Element;
use crate::phase::{IndependenceMode, Phase};
use crate::scalar::{EvalCtx, Scalar};

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("image of a generator must be a unitary word (unit-modulus exact scalar)")]
    NonUnitaryImage,
    #[error("substitution must cover all {expected} source generators, got {got}")]
    IncompleteSubstitution { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("skew extension image for generator {index} touches the generator itself")]
    BadSkewImage { index: usize },
}

/// A word over the generators and their inverses with a leading scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    pub scalar: Scalar,
    /// merged runs (generator index, nonzero exponent)
    pub letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { scalar: Scalar::one(), letters: Vec::new() }
    }

    pub fn generator(index: usize) -> Self {
        Word::generator_pow(index, 1)
    }

    pub fn generator_pow(index: usize, exp: i64) -> Self {
        let letters = if exp == 0 { Vec::new() } else { vec![(index, exp)] };
        Word { scalar: Scalar::one(), letters }
    }

    pub fn with_scalar(mut self, scalar: Scalar) -> Self {
        self.scalar = scalar;
        self
    }

    pub fn append(&mut self, other: &Word, ctx: EvalCtx) {
        self.scalar = self.scalar.mul(&other.scalar, ctx);
        for &(g, e) in &other.letters {
            push_letter(&mut self.letters, g, e);
        }
    }

    pub fn mul(&self, other: &Word, ctx: EvalCtx) -> Word {
        let mut out = self.clone();
        out.append(other, ctx);
        out
    }

    /// Inverse of a unitary word: letters reversed and negated, scalar
    /// conjugated.
    pub fn inverse(&self, ctx: EvalCtx) -> Word {
        let _ = ctx;
        let mut letters: Vec<(usize, i64)> = self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect();
        letters.retain(|&(_, e)| e != 0);
        Word { scalar: self.scalar.conj(), letters }
    }

    pub fn pow(&self, exp: i64, ctx: EvalCtx) -> Word {
        let base = if exp < 0 { self.inverse(ctx) } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exp.unsigned_abs() {
            out.append(&base, ctx);
        }
        out
    }

    /// Parse `v u^-2 x` against the generator names of an algebra.
    pub fn parse(algebra: &Algebra, s: &str) -> Result<Word, PresentationError> {
        let mut word = Word::identity();
        for token in s.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>().map_err(|err| PresentationError::Parse {
                        line: 1,
                        msg: format!("bad exponent in {token:?}: {err}"),
                    })?,
                ),
                None => (token, 1),
            };
            let index = algebra
                .name_index(name)
                .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))?;
            push_letter(&mut word.letters, index, exp);
        }
        Ok(word)
    }

    pub fn display<'a>(&'a self, algebra: &'a Algebra) -> WordDisplay<'a> {
        WordDisplay { word: self, algebra }
    }
}

fn push_letter(letters: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    match letters.last_mut() {
        Some(last) if last.0 == g => {
            last.1 += e;
            if last.1 == 0 {
                letters.pop();
            }
        }
        _ => letters.push((g, e)),
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    algebra: &'a Algebra,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.letters.is_empty() {
            return write!(f, "1");
        }
        let names = self.algebra.names();
        let mut first = true;
        for &(g, e) in &self.word.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", names[g])?;
            } else {
                write!(f, "{}^{}", names[g], e)?;
            }
        }
        Ok(())
    }
}

/// Collect a word into a single scalar·monomial element.
pub fn normal_form(word: &Word, algebra: &Arc<Algebra>) -> Element {
    let (phase, mono) = algebra.reduce(&word.letters, ReductionStrategy::Leftmost);
    Element::from_term(algebra, mono, word.scalar.mul_phase(&phase, algebra.ctx()))
}

pub fn normal_form_with(
    word: &Word,
    algebra: &Arc<Algebra>,
    strategy: ReductionStrategy,
    budget: u64,
) -> Result<Element, RewriteError> {
    let (phase, mono) = algebra.try_reduce(&word.letters, strategy, budget)?;
    Ok(Element::from_term(algebra, mono, word.scalar.mul_phase(&phase, algebra.ctx())))
}

/// The crossed-product presentation of α_{θ,γ,d,ρ} with constant ρ:
/// generators u < v < w with
/// v·u = θph·u·v,  w·u = γph·u·w,  w·v = ρ·u^d·v·w.
pub fn crossed_presentation(
    theta_phase: &Phase,
    gamma_phase: &Phase,
    d: i64,
    rho: &Phase,
    mode: IndependenceMode,
    ctx: EvalCtx,
) -> Arc<Algebra> {
    let mut table = TwistTable::new(3);
    table.set_rule(1, 0, SwapRule::phase_only(theta_phase.clone(), 3)).unwrap();
    table.set_rule(2, 0, SwapRule::phase_only(gamma_phase.clone(), 3)).unwrap();
    table
        .set_rule(2, 1, SwapRule { phase: rho.clone(), correction: Monomial(vec![d, 0, 0]) })
        .unwrap();
    Algebra::new(default_names(3), table, mode, ctx)
}

/// The standard crossed product of A_θ by α_{θ,γ,d,ρ}.
pub fn standard_crossed(d: i64, rho: &Phase, mode: IndependenceMode, ctx: EvalCtx) -> Arc<Algebra> {
    crossed_presentation(&Phase::theta_pow(1), &Phase::gamma_pow(1), d, rho, mode, ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MwAlgebra {
    A53,
    A56,
    A53Param([i64; 5]),
}

/// The simplicity condition r₁, r₃, r₄ > 0 for A^{5,3}(r₁,…,r₅); reported,
/// never enforced.
pub fn mw_param_simplicity(r: &[i64; 5]) -> bool {
    r[0] > 0 && r[2] > 0 && r[3] > 0
}

/// Milnes–Walters presentations on generators u < v < w < x. The defining
/// relations, e.g. u·v = x·v·u for A^{5,3}, are stored in collection form
/// v·u = x^{-1}·u·v and so on; λ = e^{2πiθ}.
pub fn mw_presentation(which: MwAlgebra, mode: IndependenceMode, ctx: EvalCtx) -> Arc<Algebra> {
    let r = match which {
        MwAlgebra::A53 => [1, 0, 1, 1, 0],
        MwAlgebra::A56 => [0; 5],
        MwAlgebra::A53Param(r) => r,
    };
    let mut table = TwistTable::new(4);
    match which {
        MwAlgebra::A53 | MwAlgebra::A53Param(_) => {
            let [r1, r2, r3, r4, r5] = r;
            // u v = λ^{r2} x^{r1} v u
            table
                .set_rule(1, 0, SwapRule {
                    phase: Phase::theta_pow(-r2),
                    correction: Monomial(vec![0, 0, 0, -r1]),
                })
                .unwrap();
            // u w = λ^{r5} w u
            table.set_rule(2, 0, SwapRule::phase_only(Phase::theta_pow(-r5), 4)).unwrap();
            // u x = λ^{r3} x u
            table.set_rule(3, 0, SwapRule::phase_only(Phase::theta_pow(-r3), 4)).unwrap();
            // v w = λ^{r4} w v
            table.set_rule(2, 1, SwapRule::phase_only(Phase::theta_pow(-r4), 4)).unwrap();
            // v x = x v,  w x = x w
            table.set_rule(3, 1, SwapRule::phase_only(Phase::trivial(), 4)).unwrap();
            table.set_rule(3, 2, SwapRule::phase_only(Phase::trivial(), 4)).unwrap();
        }
        MwAlgebra::A56 => {
            // u v = w v u
            table
                .set_rule(1, 0, SwapRule {
                    phase: Phase::trivial(),
                    correction: Monomial(vec![0, 0, -1, 0]),
                })
                .unwrap();
            // u w = x w u
            table
                .set_rule(2, 0, SwapRule {
                    phase: Phase::trivial(),
                    correction: Monomial(vec![0, 0, 0, -1]),
                })
                .unwrap();
            // u x = λ x u
            table.set_rule(3, 0, SwapRule::phase_only(Phase::theta_pow(-1), 4)).unwrap();
            // v w = λ w v
            table.set_rule(2, 1, SwapRule::phase_only(Phase::theta_pow(-1), 4)).unwrap();
            table.set_rule(3, 1, SwapRule::phase_only(Phase::trivial(), 4)).unwrap();
            table.set_rule(3, 2, SwapRule::phase_only(Phase::trivial(), 4)).unwrap();
        }
    }
    Algebra::new(default_names(4), table, mode, ctx)
}

/// Extend an algebra by one implementing generator t with t·g_i·t* = α(g_i),
/// where α(g_i) = phase_i · M_i · g_i (M_i an exponent vector avoiding g_i).
pub fn skew_extension(
    base: &Arc<Algebra>,
    images: &[(Phase, Monomial)],
    letter_name: &str,
) -> Result<Arc<Algebra>, PresentationError> {
    let k = base.k();
    assert_eq!(images.len(), k, "one image per base generator");
    let mut table = TwistTable::new(k + 1);
    for (j, i, rule) in base.table().rule_entries() {
        let mut corr = rule.correction.exps().to_vec();
        corr.push(0);
        table.set_rule(j, i, SwapRule { phase: rule.phase.clone(), correction: Monomial(corr) })?;
    }
    for (i, (phase, m)) in images.iter().enumerate() {
        if m.exps()[i] != 0 {
            return Err(PresentationError::BadSkewImage { index: i });
        }
        let mut corr = m.exps().to_vec();
        corr.push(0);
        table.set_rule(k, i, SwapRule { phase: phase.clone(), correction: Monomial(corr) })?;
    }
    let mut names = base.names().to_vec();
    names.push(letter_name.to_string());
    Ok(Algebra::new(names, table, base.mode().clone(), base.ctx()))
}

/// Map from the generators of a source presentation to unitary words of a
/// target presentation.
#[derive(Clone, Debug)]
pub struct Substitution {
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(images: Vec<Word>) -> Result<Self, PresentationError> {
        use num_traits::{One, Signed};
        for w in &images {
            let unit = match w.scalar.as_single_exact() {
                Some((c, _)) => c.abs().is_one(),
                None => false,
            };
            if !unit {
                return Err(PresentationError::NonUnitaryImage);
            }
        }
        Ok(Substitution { images })
    }

    pub fn identity(k: usize) -> Self {
        Substitution { images: (0..k).map(Word::generator).collect() }
    }

    pub fn apply(&self, word: &Word, ctx: EvalCtx) -> Word {
        let mut out = Word::identity().with_scalar(word.scalar.clone());
        for &(g, e) in &word.letters {
            out.append(&self.images[g].pow(e, ctx), ctx);
        }
        out
    }
}

/// Outcome of verifying the defining relations of `src` inside `dst`.
#[derive(Clone, Debug)]
pub struct SubstitutionCheck {
    pub ok: bool,
    /// the first offending relation, rendered, and its reduced residue
    pub witness: Option<(String, Element)>,
}

/// True iff normal_form(σ(L)·σ(R)^{-1}) = 1 for every rule L = R of `src`.
pub fn check_substitution(
    src: &Arc<Algebra>,
    dst: &Arc<Algebra>,
    sub: &Substitution,
) -> Result<SubstitutionCheck, PresentationError> {
    if sub.images.len() != src.k() {
        return Err(PresentationError::IncompleteSubstitution {
            expected: src.k(),
            got: sub.images.len(),
        });
    }
    let ctx = dst.ctx();
    for (j, i, rule) in src.table().rule_entries() {
        // L = g_j·g_i,  R = phase·correction·g_i·g_j
        let mut lhs = Word::generator(j);
        lhs.append(&Word::generator(i), ctx);
        let mut rhs = Word::identity().with_scalar(Scalar::from_phase(rule.phase.clone()));
        for (g, &e) in rule.correction.exps().iter().enumerate() {
            if e != 0 {
                rhs.append(&Word::generator_pow(g, e), ctx);
            }
        }
        rhs.append(&Word::generator(i), ctx);
        rhs.append(&Word::generator(j), ctx);

        let test = sub.apply(&lhs, ctx).mul(&sub.apply(&rhs, ctx).inverse(ctx), ctx);
        let residue = normal_form(&test, dst);
        let is_identity = match residue.as_monomial() {
            Some((m, s)) => m.is_identity() && s.is_one(dst.mode()),
            None => false,
        };
        if !is_identity {
            let relation = format!(
                "{}·{} = {}·{}·{}·{}",
                src.names()[j],
                src.names()[i],
                rule.phase,
                display_monomial(src, &rule.correction),
                src.names()[i],
                src.names()[j],
            );
            return Ok(SubstitutionCheck { ok: false, witness: Some((relation, residue)) });
        }
    }
    Ok(SubstitutionCheck { ok: true, witness: None })
}

fn display_monomial(algebra: &Algebra, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(g, &e)| {
            if e == 1 {
                algebra.names()[g].clone()
            } else {
                format!("{}^{}", algebra.names()[g], e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Report of reducing random words under both strategies.
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub trials: usize,
    pub seed: u64,
    pub mismatches: usize,
    pub budget_failures: usize,
    /// up to 5 rendered witnesses
    pub examples: Vec<String>,
}

/// Reduce `trials` random words (length ≤ 24, exponents in [−3, 3]) by the
/// leftmost-innermost and rightmost-outermost strategies and compare.
pub fn confluence_probe(algebra: &Arc<Algebra>, trials: usize, seed: u64) -> ConfluenceReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConfluenceReport {
        trials,
        seed,
        mismatches: 0,
        budget_failures: 0,
        examples: Vec::new(),
    };
    let budget = 1 << 22;
    for _ in 0..trials {
        let len = rng.random_range(1..=24);
        let mut word = Word::identity();
        for _ in 0..len {
            let g = rng.random_range(0..algebra.k());
            let e = loop {
                let e = rng.random_range(-3i64..=3);
                if e != 0 {
                    break e;
                }
            };
            push_letter(&mut word.letters, g, e);
        }
        let left = algebra.try_reduce(&word.letters, ReductionStrategy::Leftmost, budget);
        let right = algebra.try_reduce(&word.letters, ReductionStrategy::Rightmost, budget);
        match (left, right) {
            (Ok(l), Ok(r)) => {
                if l != r {
                    report.mismatches += 1;
                    if report.examples.len() < 5 {
                        report.examples.push(format!(
                            "{}: leftmost {}·{:?} vs rightmost {}·{:?}",
                            word.display(algebra),
                            l.0,
                            l.1,
                            r.0,
                            r.1
                        ));
                    }
                }
            }
            _ => report.budget_failures += 1,
        }
    }
    report
}

/// Serialize a presentation: a `generators` header, then one rule per line
/// `j i -> phase(p,q,r) m1 … mk`.
pub fn presentation_to_text(algebra: &Algebra) -> String {
    let mut out = String::new();
    out.push_str("generators ");
    out.push_str(&algebra.names().join(" "));
    out.push('\n');
    for (j, i, rule) in algebra.table().rule_entries() {
        let exps: Vec<String> = rule.correction.exps().iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("{} {} -> {} {}\n", j, i, rule.phase, exps.join(" ")));
    }
    out
}

pub fn presentation_from_text(
    text: &str,
    mode: IndependenceMode,
    ctx: EvalCtx,
) -> Result<Arc<Algebra>, PresentationError> {
    let mut names: Option<Vec<String>> = None;
    let mut table: Option<TwistTable> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("generators") {
            let ns: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if ns.is_empty() {
                return Err(PresentationError::Parse { line, msg: "no generator names".into() });
            }
            table = Some(TwistTable::new(ns.len()));
            names = Some(ns);
            continue;
        }
        let table = table.as_mut().ok_or_else(|| PresentationError::Parse {
            line,
            msg: "rule before generators header".into(),
        })?;
        let (pair, rest) = body.split_once("->").ok_or_else(|| PresentationError::Parse {
            line,
            msg: "expected `j i -> phase(p,q,r) m1 … mk`".into(),
        })?;
        let idx: Vec<&str> = pair.split_whitespace().collect();
        if idx.len() != 2 {
            return Err(PresentationError::Parse { line, msg: "expected two indices".into() });
        }
        let j = idx[0].parse::<usize>().map_err(|e| PresentationError::Parse {
            line,
            msg: e.to_string(),
        })?;
        let i = idx[1].parse::<usize>().map_err(|e| PresentationError::Parse {
            line,
            msg: e.to_string(),
        })?;
        let mut tokens = rest.split_whitespace();
        let phase: Phase = tokens
            .next()
            .ok_or_else(|| PresentationError::Parse { line, msg: "missing phase".into() })?
            .parse()
            .map_err(|msg| PresentationError::Parse { line, msg })?;
        let exps: Vec<i64> = tokens
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| PresentationError::Parse { line, msg: e.to_string() })?;
        if exps.len() != table.k() {
            return Err(PresentationError::Parse {
                line,
                msg: format!("expected {} exponents, got {}", table.k(), exps.len()),
            });
        }
        table.set_rule(j, i, SwapRule { phase, correction: Monomial(exps) })?;
    }
    let names = names.ok_or_else(|| PresentationError::Parse {
        line: 0,
        msg: "missing generators header".into(),
    })?;
    Ok(Algebra::new(names, table.unwrap(), mode, ctx))
}

// ---------------------------------------------------------------------------
// The specific decompositions verified in the test suites.

fn generic_ctx() -> EvalCtx {
    EvalCtx { theta: std::f64::consts::SQRT_2 - 1.0, gamma: crate::golden_conjugate() }
}

/// Change of variables: the crossed product of A_θ by α_{θ,γ,d,ρ} maps into
/// the crossed product of A_γ by α_{γ,θ,−d,−ρ} via u ↦ u, v ↦ w, w ↦ v.
pub fn changeofvar_check(d: i64, rho: &Phase) -> (Arc<Algebra>, Arc<Algebra>, Substitution) {
    let mode = IndependenceMode::Independent;
    let src = standard_crossed(d, rho, mode.clone(), generic_ctx());
    let dst = crossed_presentation(
        &Phase::gamma_pow(1),
        &Phase::theta_pow(1),
        -d,
        &rho.conj(),
        mode,
        generic_ctx(),
    );
    let sub = Substitution::new(vec![
        Word::generator(0),
        Word::generator(2),
        Word::generator(1),
    ])
    .unwrap();
    (src, dst, sub)
}

fn b53_presentation(r1: i64, r2: i64, r3: i64, mode: IndependenceMode) -> Arc<Algebra> {
    // generators u, v, x with u v = λ^{r2} x^{r1} v u, u x = λ^{r3} x u, v x = x v
    let mut table = TwistTable::new(3);
    table
        .set_rule(1, 0, SwapRule {
            phase: Phase::theta_pow(-r2),
            correction: Monomial(vec![0, 0, -r1]),
        })
        .unwrap();
    table.set_rule(2, 0, SwapRule::phase_only(Phase::theta_pow(-r3), 3)).unwrap();
    table.set_rule(2, 1, SwapRule::phase_only(Phase::trivial(), 3)).unwrap();
    Algebra::new(
        vec!["u".into(), "v".into(), "x".into()],
        table,
        mode,
        generic_ctx(),
    )
}

/// A^{5,3}(r₁,…,r₅) as the crossed product of B = ⟨u, v, x⟩ by
/// α = Ad(w*)|_B, i.e. α(u) = λ^{r₅}u, α(v) = λ^{r₄}v, α(x) = x, with the
/// implementing letter t ↦ w*. Returns (src = A^{5,3}(r), dst, σ).
pub fn mw3param_check(r: [i64; 5]) -> (Arc<Algebra>, Arc<Algebra>, Substitution) {
    let mode = IndependenceMode::Independent;
    let src = mw_presentation(MwAlgebra::A53Param(r), mode.clone(), generic_ctx());
    let base = b53_presentation(r[0], r[1], r[2], mode);
    let dst = skew_extension(
        &base,
        &[
            (Phase::theta_pow(r[4]), Monomial(vec![0, 0, 0])),
            (Phase::theta_pow(r[3]), Monomial(vec![0, 0, 0])),
            (Phase::trivial(), Monomial(vec![0, 0, 0])),
        ],
        "t",
    )
    .unwrap();
    // u ↦ u, v ↦ v, w ↦ t^{-1}, x ↦ x
    let sub = Substitution::new(vec![
        Word::generator(0),
        Word::generator(1),
        Word::generator_pow(3, -1),
        Word::generator(2),
    ])
    .unwrap();
    (src, dst, sub)
}

pub fn mw3_check() -> (Arc<Algebra>, Arc<Algebra>, Substitution) {
    let (_, dst, sub) = mw3param_check([1, 0, 1, 1, 0]);
    let src = mw_presentation(MwAlgebra::A53, IndependenceMode::Independent, generic_ctx());
    (src, dst, sub)
}

/// The deliberately broken variant of [`mw3_check`]: the phase on α(v) is
/// negated, so the relation v·w = λ·w·v fails.
pub fn mw3_check_broken() -> (Arc<Algebra>, Arc<Algebra>, Substitution) {
    let mode = IndependenceMode::Independent;
    let src = mw_presentation(MwAlgebra::A53, mode.clone(), generic_ctx());
    let base = b53_presentation(1, 0, 1, mode);
    let dst = skew_extension(
        &base,
        &[
            (Phase::trivial(), Monomial(vec![0, 0, 0])),
            (Phase::theta_pow(-1), Monomial(vec![0, 0, 0])), // should be +1
            (Phase::trivial(), Monomial(vec![0, 0, 0])),
        ],
        "t",
    )
    .unwrap();
    let sub = Substitution::new(vec![
        Word::generator(0),
        Word::generator(1),
        Word::generator_pow(3, -1),
        Word::generator(2),
    ])
    .unwrap();
    (src, dst, sub)
}

/// A^{5,6} as the crossed product of B = ⟨u, w, x⟩ (u w = x w u, u x = λ x u,
/// w x = x w) by α(u) = w*u, α(w) = λw, α(x) = x, implementing letter t ↦ v.
pub fn mw6_check() -> (Arc<Algebra>, Arc<Algebra>, Substitution) {
    let mode = IndependenceMode::Independent;
    let src = mw_presentation(MwAlgebra::A56, mode.clone(), generic_ctx());
    let mut table = TwistTable::new(3);
    // generators u, w, x
    table
        .set_rule(1, 0, SwapRule {
            phase: Phase::trivial(),
            correction: Monomial(vec![0, 0, -1]),
        })
        .unwrap();
    table.set_rule(2, 0, SwapRule::phase_only(Phase::theta_pow(-1), 3)).unwrap();
    table.set_rule(2, 1, SwapRule::phase_only(Phase::trivial(), 3)).unwrap();
    let base = Algebra::new(
        vec!["u".into(), "w".into(), "x".into()],
        table,
        mode,
        generic_ctx(),
    );
    let dst = skew_extension(
        &base,
        &[
            (Phase::trivial(), Monomial(vec![0, -1, 0])), // α(u) = w^{-1}·u
            (Phase::theta_pow(1), Monomial(vec![0, 0, 0])), // α(w) = λ·w
            (Phase::trivial(), Monomial(vec![0, 0, 0])),
        ],
        "t",
    )
    .unwrap();
    // src generators u, v, w, x ↦ u, t, w, x
    let sub = Substitution::new(vec![
        Word::generator(0),
        Word::generator(3),
        Word::generator(1),
        Word::generator(2),
    ])
    .unwrap();
    (src, dst, sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rat;
    use proptest::prelude::*;

    fn ind() -> IndependenceMode {
        IndependenceMode::Independent
    }

    fn a_theta() -> Arc<Algebra> {
        Algebra::a_theta_independent()
    }

    #[test]
    fn normal_form_vu_in_a_theta() {
        let alg = a_theta();
        let w = Word::parse(&alg, "v u").unwrap();
        let nf = normal_form(&w, &alg);
        let (m, s) = nf.as_monomial().unwrap();
        assert_eq!(m, &Monomial(vec![1, 1]));
        assert_eq!(s, &Scalar::from_phase(Phase::theta_pow(1)));
    }

    #[test]
    fn normal_form_vu_in_a53() {
        // v·u = λ·u·v·x^{-1} in A^{5,3}
        let alg = mw_presentation(MwAlgebra::A53, ind(), generic_ctx());
        let w = Word::parse(&alg, "v u").unwrap();
        let nf = normal_form(&w, &alg);
        let (m, s) = nf.as_monomial().unwrap();
        assert_eq!(m, &Monomial(vec![1, 1, 0, -1]));
        assert_eq!(s, &Scalar::from_phase(Phase::theta_pow(1)));
    }

    #[test]
    fn normal_form_wxw_inverse_in_a53() {
        let alg = mw_presentation(MwAlgebra::A53, ind(), generic_ctx());
        let w = Word::parse(&alg, "w x w^-1").unwrap();
        let nf = normal_form(&w, &alg);
        let (m, s) = nf.as_monomial().unwrap();
        assert_eq!(m, &Monomial(vec![0, 0, 0, 1]));
        assert!(s.is_one(alg.mode()));
    }

    #[test]
    fn a53_has_six_rules_and_param_specializes() {
        let a53 = mw_presentation(MwAlgebra::A53, ind(), generic_ctx());
        assert_eq!(a53.table().rule_count(), 6);
        let param = mw_presentation(MwAlgebra::A53Param([1, 0, 1, 1, 0]), ind(), generic_ctx());
        assert_eq!(a53.table(), param.table());
        assert!(mw_param_simplicity(&[1, 0, 1, 1, 0]));
        assert!(!mw_param_simplicity(&[0, 0, 1, 1, 0]));
    }

    #[test]
    fn crossed_relation_round_trip() {
        // w·v·w^{-1} = ρ·u^d·v  and  w v w^{-1}·(ρ u^d v)^{-1} = 1
        let rho = Phase::of_rational(rat(2, 7));
        let alg = standard_crossed(3, &rho, ind(), generic_ctx());
        let conj = Word::parse(&alg, "w v w^-1").unwrap();
        let nf = normal_form(&conj, &alg);
        let expect = Element::from_term(
            &alg,
            Monomial(vec![3, 1, 0]),
            Scalar::from_phase(rho.clone()),
        );
        assert_eq!(nf, expect);

        let image = Word::parse(&alg, "u^3 v").unwrap().with_scalar(Scalar::from_phase(rho));
        let test = conj.mul(&image.inverse(alg.ctx()), alg.ctx());
        let nf = normal_form(&test, &alg);
        let (m, s) = nf.as_monomial().unwrap();
        assert!(m.is_identity() && s.is_one(alg.mode()));
    }

    #[test]
    fn crossed_without_twist_has_plain_rule() {
        let alg = standard_crossed(0, &Phase::trivial(), ind(), generic_ctx());
        let rule = alg.table().rule(2, 1, ReductionStrategy::Leftmost);
        assert!(rule.correction.is_identity());
    }

    #[test]
    fn changeofvar_substitution_holds() {
        let (src, dst, sub) = changeofvar_check(2, &Phase::of_rational(rat(1, 5)));
        let check = check_substitution(&src, &dst, &sub).unwrap();
        assert!(check.ok, "witness: {:?}", check.witness.map(|(r, e)| (r, e.to_string())));
    }

    #[test]
    fn mw3_and_mw6_decompositions_hold() {
        for (name, (src, dst, sub)) in [
            ("mw3", mw3_check()),
            ("mw6", mw6_check()),
            ("mw3param", mw3param_check([2, 1, 3, 1, 2])),
        ] {
            let check = check_substitution(&src, &dst, &sub).unwrap();
            assert!(
                check.ok,
                "{name} witness: {:?}",
                check.witness.map(|(r, e)| (r, e.to_string()))
            );
        }
    }

    #[test]
    fn broken_substitution_reports_witness() {
        let (src, dst, sub) = mw3_check_broken();
        let check = check_substitution(&src, &dst, &sub).unwrap();
        assert!(!check.ok);
        let (relation, residue) = check.witness.unwrap();
        // the offending relation is v·w = λ·w·v, stored as w·v = λ^{-1}·v·w
        assert!(relation.contains("w·v"), "relation: {relation}");
        assert!(!residue.is_zero());
    }

    #[test]
    fn identity_substitution_on_all_builtins() {
        let builtins: Vec<Arc<Algebra>> = vec![
            a_theta(),
            standard_crossed(2, &Phase::of_rational(rat(1, 3)), ind(), generic_ctx()),
            mw_presentation(MwAlgebra::A53, ind(), generic_ctx()),
            mw_presentation(MwAlgebra::A56, ind(), generic_ctx()),
            mw_presentation(MwAlgebra::A53Param([2, 1, 1, 3, 0]), ind(), generic_ctx()),
        ];
        for alg in builtins {
            let sub = Substitution::identity(alg.k());
            let check = check_substitution(&alg, &alg, &sub).unwrap();
            assert!(check.ok, "identity fails on {:?}", alg.names());
        }
    }

    #[test]
    fn confluence_of_builtins() {
        let builtins: Vec<(&str, Arc<Algebra>)> = vec![
            ("a_theta", a_theta()),
            ("crossed", standard_crossed(2, &Phase::of_rational(rat(1, 3)), ind(), generic_ctx())),
            ("a53", mw_presentation(MwAlgebra::A53, ind(), generic_ctx())),
            ("a56", mw_presentation(MwAlgebra::A56, ind(), generic_ctx())),
        ];
        for (name, alg) in builtins {
            let report = confluence_probe(&alg, 300, 17);
            assert_eq!(report.mismatches, 0, "{name}: {:?}", report.examples);
            assert_eq!(report.budget_failures, 0, "{name}");
        }
    }

    #[test]
    fn inconsistent_rule_set_is_detected() {
        // vu → uv and vu → −uv at once
        let mut table = TwistTable::new(2);
        table.push_rule(1, 0, SwapRule::phase_only(Phase::trivial(), 2)).unwrap();
        table.push_rule(1, 0, SwapRule::phase_only(Phase::half_turn(), 2)).unwrap();
        let alg = Algebra::new(default_names(2), table, ind(), generic_ctx());
        let report = confluence_probe(&alg, 200, 3);
        assert!(report.mismatches > 0);
    }

    #[test]
    fn presentation_file_round_trip() {
        let alg = mw_presentation(MwAlgebra::A53Param([2, 1, 3, 1, 2]), ind(), generic_ctx());
        let text = presentation_to_text(&alg);
        let parsed = presentation_from_text(&text, ind(), generic_ctx()).unwrap();
        assert_eq!(parsed.table(), alg.table());
        assert_eq!(parsed.names(), alg.names());

        let dup = "generators u v\n1 0 -> phase(0,1,0) 0 0\n1 0 -> phase(0,0,0) 0 0\n";
        assert!(matches!(
            presentation_from_text(dup, ind(), generic_ctx()),
            Err(PresentationError::Table(TableError::DuplicateRule { .. }))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn word_times_inverse_collects_to_one(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let algebras = [
                a_theta(),
                standard_crossed(2, &Phase::of_rational(rat(1, 3)), ind(), generic_ctx()),
                mw_presentation(MwAlgebra::A56, ind(), generic_ctx()),
            ];
            let alg = &algebras[rng.random_range(0..algebras.len())];
            let mut word = Word::identity();
            for _ in 0..rng.random_range(1..10) {
                push_letter(&mut word.letters, rng.random_range(0..alg.k()), rng.random_range(-3i64..=3));
            }
            let test = word.mul(&word.inverse(alg.ctx()), alg.ctx());
            let nf = normal_form(&test, alg);
            let (m, s) = nf.as_monomial().unwrap();
            prop_assert!(m.is_identity());
            prop_assert!(s.is_one(alg.mode()));
        }

        #[test]
        fn normal_form_is_idempotent(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let alg = mw_presentation(MwAlgebra::A53, ind(), generic_ctx());
            let mut word = Word::identity();
            for _ in 0..rng.random_range(1..12) {
                push_letter(&mut word.letters, rng.random_range(0..alg.k()), rng.random_range(-3i64..=3));
            }
            let nf = normal_form(&word, &alg);
            if let Some((m, s)) = nf.as_monomial() {
                let again = Word { scalar: s.clone(), letters: m.exps().iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)).collect() };
                prop_assert_eq!(normal_form(&again, &alg), nf);
            }
        }
    }
}
