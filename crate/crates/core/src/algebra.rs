//! Twisted monomial algebras over Z^k and their normal-ordering engine.
//!
//! Generators g_0 < g_1 < … < g_{k−1} are unitaries subject to polycyclic
//! swap rules
//!
//! ```text
//!     g_j g_i = phase · (correction monomial) · g_i g_j      (j > i)
//! ```
//!
//! where the correction is an exponent vector not involving g_i or g_j. Every
//! word then collects to a unique form `scalar · g_0^{a_0} ··· g_{k−1}^{a_{k−1}}`
//! provided the rule set is polycyclic; collection is performed by adjacent
//! transpositions with a step budget so that a malformed rule set fails loudly
//! instead of spinning.
//!
//! The rotation algebra A_θ is the case k = 2 with the single rule
//! v·u = e^{2πiθ}·u·v.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::phase::{IndependenceMode, Phase};
use crate::scalar::EvalCtx;

/// Exponent vector of an ordered monomial g_0^{a_0} ··· g_{k−1}^{a_{k−1}}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn identity(k: usize) -> Self {
        Monomial(vec![0; k])
    }

    pub fn generator(k: usize, index: usize) -> Self {
        let mut e = vec![0; k];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Run-length letters in ascending generator order.
    fn runs(&self) -> Vec<(usize, i64)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| (g, e))
            .collect()
    }

    /// Letters of the word inverse (descending order, negated exponents).
    fn inverse_runs(&self) -> Vec<(usize, i64)> {
        let mut runs = self.runs();
        runs.reverse();
        for r in &mut runs {
            r.1 = -r.1;
        }
        runs
    }
}

/// One swap rule g_j g_i = phase · correction · g_i g_j.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapRule {
    pub phase: Phase,
    pub correction: Monomial,
}

impl SwapRule {
    pub fn phase_only(phase: Phase, k: usize) -> Self {
        SwapRule { phase, correction: Monomial::identity(k) }
    }
}

/// The full rule table for k generators. Pairs without an entry commute.
///
/// Each pair may carry several rules; well-formed tables have exactly one,
/// but the raw [`TwistTable::push_rule`] constructor admits duplicates so the
/// confluence probe can exhibit inconsistent systems (the two reduction
/// strategies then resolve a pair through different rules).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistTable {
    k: usize,
    rules: BTreeMap<(usize, usize), Vec<SwapRule>>,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("rule indices ({j},{i}) need k > j > i, got k = {k}")]
    BadIndices { j: usize, i: usize, k: usize },
    #[error("correction of rule ({j},{i}) must not involve g_{j} or g_{i}")]
    CorrectionTouchesPair { j: usize, i: usize },
    #[error("duplicate rule for pair ({j},{i})")]
    DuplicateRule { j: usize, i: usize },
}

impl TwistTable {
    pub fn new(k: usize) -> Self {
        TwistTable { k, rules: BTreeMap::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn validate(&self, j: usize, i: usize, rule: &SwapRule) -> Result<(), TableError> {
        if !(i < j && j < self.k) {
            return Err(TableError::BadIndices { j, i, k: self.k });
        }
        if rule.correction.0.len() != self.k {
            return Err(TableError::BadIndices { j, i, k: self.k });
        }
        if rule.correction.0[i] != 0 || rule.correction.0[j] != 0 {
            return Err(TableError::CorrectionTouchesPair { j, i });
        }
        Ok(())
    }

    /// Install the unique rule for the pair (j, i).
    pub fn set_rule(&mut self, j: usize, i: usize, rule: SwapRule) -> Result<(), TableError> {
        self.validate(j, i, &rule)?;
        if self.rules.contains_key(&(j, i)) {
            return Err(TableError::DuplicateRule { j, i });
        }
        self.rules.insert((j, i), vec![rule]);
        Ok(())
    }

    /// Append a rule without the uniqueness check. Diagnostic use only.
    pub fn push_rule(&mut self, j: usize, i: usize, rule: SwapRule) -> Result<(), TableError> {
        self.validate(j, i, &rule)?;
        self.rules.entry((j, i)).or_default().push(rule);
        Ok(())
    }

    pub fn rule(&self, j: usize, i: usize, strategy: ReductionStrategy) -> SwapRule {
        match self.rules.get(&(j, i)) {
            Some(rs) => match strategy {
                ReductionStrategy::Leftmost => rs.first().unwrap().clone(),
                ReductionStrategy::Rightmost => rs.last().unwrap().clone(),
            },
            None => SwapRule::phase_only(Phase::trivial(), self.k),
        }
    }

    pub fn rule_entries(&self) -> impl Iterator<Item = (usize, usize, &SwapRule)> {
        self.rules.iter().flat_map(|(&(j, i), rs)| rs.iter().map(move |r| (j, i, r)))
    }

    pub fn rule_count(&self) -> usize {
        self.rules.values().map(Vec::len).sum()
    }
}

/// Which adjacent out-of-order pair is collected first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStrategy {
    /// Always rewrite the leftmost disordered pair.
    Leftmost,
    /// Always rewrite the rightmost disordered pair.
    Rightmost,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rewriting exceeded the step budget of {budget} (rule table not polycyclic?)")]
    StepLimit { budget: u64 },
    #[error("rewriting recursion exceeded depth {depth}")]
    DepthLimit { depth: usize },
}

const DEFAULT_BUDGET: u64 = 1 << 26;
const MAX_DEPTH: usize = 64;

/// Algebra handle: rule table, declared independence mode, numeric witnesses
/// for θ and γ, and the drop tolerance for approximate coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    names: Vec<String>,
    table: TwistTable,
    mode: IndependenceMode,
    ctx: EvalCtx,
    drop_tol: f64,
}

pub fn default_names(k: usize) -> Vec<String> {
    let base = ["u", "v", "w", "x"];
    (0..k)
        .map(|i| if i < base.len() { base[i].to_string() } else { format!("g{i}") })
        .collect()
}

impl Algebra {
    pub fn new(names: Vec<String>, table: TwistTable, mode: IndependenceMode, ctx: EvalCtx) -> Arc<Self> {
        assert_eq!(names.len(), table.k(), "one name per generator");
        Arc::new(Algebra { names, table, mode, ctx, drop_tol: 1e-14 })
    }

    /// The rotation algebra A_θ on generators u, v with v·u = e^{2πiθ}·u·v.
    pub fn a_theta(mode: IndependenceMode, ctx: EvalCtx) -> Arc<Self> {
        let mut table = TwistTable::new(2);
        table.set_rule(1, 0, SwapRule::phase_only(Phase::theta_pow(1), 2)).unwrap();
        Algebra::new(default_names(2), table, mode, ctx)
    }

    /// A_θ with 1, θ, γ declared independent and generic numeric witnesses.
    pub fn a_theta_independent() -> Arc<Self> {
        Algebra::a_theta(
            IndependenceMode::Independent,
            EvalCtx { theta: std::f64::consts::SQRT_2 - 1.0, gamma: crate::golden_conjugate() },
        )
    }

    pub fn with_drop_tol(self: &Arc<Self>, drop_tol: f64) -> Arc<Self> {
        let mut a = (**self).clone();
        a.drop_tol = drop_tol;
        Arc::new(a)
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> &TwistTable {
        &self.table
    }

    pub fn mode(&self) -> &IndependenceMode {
        &self.mode
    }

    pub fn ctx(&self) -> EvalCtx {
        self.ctx
    }

    pub fn drop_tol(&self) -> f64 {
        self.drop_tol
    }

    /// Collect a run-length word into `phase · monomial`.
    pub fn try_reduce(
        &self,
        letters: &[(usize, i64)],
        strategy: ReductionStrategy,
        budget: u64,
    ) -> Result<(Phase, Monomial), RewriteError> {
        let mut steps = budget;
        let (phase, runs) = self.collect(letters.to_vec(), strategy, &mut steps, 0, budget)?;
        let mut exps = vec![0i64; self.k()];
        for (g, e) in runs {
            exps[g] += e;
        }
        Ok((phase, Monomial(exps)))
    }

    pub fn reduce(&self, letters: &[(usize, i64)], strategy: ReductionStrategy) -> (Phase, Monomial) {
        self.try_reduce(letters, strategy, DEFAULT_BUDGET)
            .expect("normal form of a built-in polycyclic presentation")
    }

    /// Product of two ordered monomials as `phase · monomial`.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> (Phase, Monomial) {
        let mut word = a.runs();
        word.extend(b.runs());
        self.reduce(&word, ReductionStrategy::Leftmost)
    }

    /// Normal form of m^{−1} as `phase · monomial`.
    pub fn inv_monomial(&self, m: &Monomial) -> (Phase, Monomial) {
        self.reduce(&m.inverse_runs(), ReductionStrategy::Leftmost)
    }

    fn collect(
        &self,
        mut word: Vec<(usize, i64)>,
        strategy: ReductionStrategy,
        steps: &mut u64,
        depth: usize,
        budget: u64,
    ) -> Result<(Phase, Vec<(usize, i64)>), RewriteError> {
        if depth > MAX_DEPTH {
            return Err(RewriteError::DepthLimit { depth });
        }
        let mut phase = Phase::trivial();
        normalize_runs(&mut word);
        loop {
            let pos = find_disorder(&word, strategy);
            let Some(idx) = pos else {
                return Ok((phase, word));
            };
            if *steps == 0 {
                return Err(RewriteError::StepLimit { budget });
            }
            *steps -= 1;

            let (gj, a) = word[idx];
            let (gi, b) = word[idx + 1];
            let rule = self.table.rule(gj, gi, strategy);
            let seg = if rule.correction.is_identity() {
                // whole runs swap at once, contributing phase^(a·b)
                phase = phase.mul(&rule.phase.pow(a * b));
                vec![(gi, b), (gj, a)]
            } else {
                let sa = a.signum();
                let sb = b.signum();
                let mut seg: Vec<(usize, i64)> = Vec::new();
                if a - sa != 0 {
                    seg.push((gj, a - sa));
                }
                match (sa > 0, sb > 0) {
                    (true, true) => {
                        phase = phase.mul(&rule.phase);
                        seg.extend(rule.correction.runs());
                        seg.push((gi, 1));
                        seg.push((gj, 1));
                    }
                    (true, false) => {
                        phase = phase.mul(&rule.phase.conj());
                        seg.push((gi, -1));
                        seg.extend(rule.correction.inverse_runs());
                        seg.push((gj, 1));
                    }
                    (false, true) => {
                        // g_j^{-1} g_i = phase^{-1} · Ad(g_j^{-1})(corr)^{-1} · g_i g_j^{-1}
                        let mut conj_word = vec![(gj, -1)];
                        conj_word.extend(rule.correction.runs());
                        conj_word.push((gj, 1));
                        let (conj_phase, conj_runs) =
                            self.collect(conj_word, strategy, steps, depth + 1, budget)?;
                        phase = phase.mul(&rule.phase.conj()).mul(&conj_phase.conj());
                        let mut inv = conj_runs;
                        inv.reverse();
                        for r in &mut inv {
                            r.1 = -r.1;
                        }
                        seg.extend(inv);
                        seg.push((gi, 1));
                        seg.push((gj, -1));
                    }
                    (false, false) => {
                        phase = phase.mul(&rule.phase);
                        seg.push((gi, -1));
                        seg.push((gj, -1));
                        seg.extend(rule.correction.runs());
                    }
                }
                if b - sb != 0 {
                    seg.push((gi, b - sb));
                }
                seg
            };
            word.splice(idx..idx + 2, seg);
            normalize_runs(&mut word);
        }
    }
}

fn normalize_runs(word: &mut Vec<(usize, i64)>) {
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(word.len());
    for &(g, e) in word.iter() {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    *word = out;
}

fn find_disorder(word: &[(usize, i64)], strategy: ReductionStrategy) -> Option<usize> {
    match strategy {
        ReductionStrategy::Leftmost => (0..word.len().saturating_sub(1)).find(|&i| word[i].0 > word[i + 1].0),
        ReductionStrategy::Rightmost => {
            (0..word.len().saturating_sub(1)).rev().find(|&i| word[i].0 > word[i + 1].0)
        }
    }
}
