//! Executable catalog of the enumeration claims about the bijection.
//!
//! Every claim runs exhaustively within its bounds and produces a [`ClaimReport`].
//! A failing report carries the first counterexample met in the deterministic
//! iteration order; [`recheck`] reruns the claim at the witness's `n` alone.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bijection::{
    corollary_q, even_positions, grow_even_to_odd, p132, phi, phi_inverse, phi_pattern,
    reduce_pattern_for_even, shrink_odd_to_even, validate_q, CorollaryFamily, PatternPair,
};
use crate::enumerate::{
    brute_alternating_avoiders, brute_avoiders, catalan, catalan_by_recursion, closed_form,
    count_a, count_s, gen_all, gen_alternating_avoiders_132, gen_avoiders_132, Guards,
    SequenceSpec,
};
use crate::error::{Error, Result};
use crate::perm::{standardize_u32, Pattern, Permutation};

pub const SCHEMA_VERSION: u32 = 1;

/// Statements the full suite must exercise, each with the claim that covers it.
pub const COVERAGE_MANIFEST: &[(&str, &str)] = &[
    ("s-recursion", "recursions"),
    ("a-recursion", "recursions"),
    ("bijection", "bijection"),
    ("transport-forward", "transport"),
    ("transport-converse", "transport"),
    ("theorem", "theorem"),
    ("corollary-12k", "corollary-12k"),
    ("corollary-12k-lis", "corollary-12k"),
    ("corollary-21k", "corollary-21k"),
    ("corollary-k21", "corollary-k21"),
    ("parity-count", "parity"),
    ("parity-pattern", "parity"),
];

/// Bounds for the suite. Lengths are permutation lengths; everything else is `n`.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub recursion_max_n: usize,
    pub structural_count_max_n: usize,
    pub brute_set_max_n: usize,
    pub a_recursion_max_len: usize,
    pub bijection_max_n: usize,
    pub alternating_brute_max_len: usize,
    pub double_max_n: usize,
    pub transport_max_n: usize,
    pub transport_max_k: usize,
    pub parity_max_n: usize,
    pub parity_exhaustive_max_n: usize,
    pub parity_pattern_max_len: usize,
    /// Restricts the corollary suites to one `k`.
    pub corollary_k: Option<usize>,
    pub guards: Guards,
    /// Test mode: the Catalan oracle reports `C_n + 1` for `n >= 2`.
    pub corrupt_oracle: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            recursion_max_n: 14,
            structural_count_max_n: 10,
            brute_set_max_n: 8,
            a_recursion_max_len: 13,
            bijection_max_n: 8,
            alternating_brute_max_len: 9,
            double_max_n: 7,
            transport_max_n: 6,
            transport_max_k: 4,
            parity_max_n: 10,
            parity_exhaustive_max_n: 5,
            parity_pattern_max_len: 4,
            corollary_k: None,
            guards: Guards::default(),
            corrupt_oracle: false,
        }
    }
}

impl VerifyConfig {
    /// Caps every `n` bound at `n` and every length bound at `2n + 1`.
    pub fn capped(mut self, n: usize) -> Self {
        for bound in [
            &mut self.recursion_max_n,
            &mut self.structural_count_max_n,
            &mut self.brute_set_max_n,
            &mut self.bijection_max_n,
            &mut self.double_max_n,
            &mut self.transport_max_n,
            &mut self.parity_max_n,
            &mut self.parity_exhaustive_max_n,
        ] {
            *bound = (*bound).min(n);
        }
        for bound in [
            &mut self.a_recursion_max_len,
            &mut self.alternating_brute_max_len,
        ] {
            *bound = (*bound).min(2 * n + 1);
        }
        self
    }

    fn catalan_oracle(&self, n: usize) -> Result<u64> {
        let c = catalan(n)?;
        Ok(if self.corrupt_oracle && n >= 2 {
            c + 1
        } else {
            c
        })
    }
}

/// A concrete failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Pattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Pattern>,
    pub reason: String,
}

impl Witness {
    fn at(n: usize, reason: impl Into<String>) -> Self {
        Witness {
            n,
            w: None,
            p: None,
            q: None,
            reason: reason.into(),
        }
    }

    fn with_w(mut self, w: &Permutation) -> Self {
        self.w = Some(w.clone());
        self
    }

    fn with_p(mut self, p: &Pattern) -> Self {
        self.p = Some(p.clone());
        self
    }

    fn with_q(mut self, q: &Pattern) -> Self {
        self.q = Some(q.clone());
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for (name, v) in [("w", &self.w), ("p", &self.p), ("q", &self.q)] {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        write!(f, ": {}", self.reason)
    }
}

/// Which claim a report came from, with the arguments needed to rerun it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    Recursions,
    Bijection,
    Transport { k_max: usize },
    Theorem { pairs: Vec<PatternPair> },
    Corollary { family: CorollaryFamily, k: usize },
    Parity { patterns: Vec<Pattern> },
    Coverage,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub params: BTreeMap<String, Value>,
    /// Per-`n` tallies (or instance counts for implication claims).
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    #[serde(skip)]
    pub kind: ClaimKind,
}

/// Accumulates one claim's tallies and its first failure.
struct Run {
    lhs: Vec<u64>,
    rhs: Vec<u64>,
    witness: Option<Witness>,
    notices: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Run {
            lhs: Vec::new(),
            rhs: Vec::new(),
            witness: None,
            notices: Vec::new(),
        }
    }

    fn fail(&mut self, w: Witness) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn tally(&mut self, n: usize, lhs: u64, rhs: u64, what: &str) {
        self.lhs.push(lhs);
        self.rhs.push(rhs);
        if lhs != rhs {
            self.fail(Witness::at(n, format!("{what}: {lhs} != {rhs}")));
        }
    }

    fn finish(
        self,
        claim_id: &str,
        params: BTreeMap<String, Value>,
        kind: ClaimKind,
        started: Instant,
    ) -> ClaimReport {
        ClaimReport {
            claim_id: claim_id.to_string(),
            params,
            lhs: self.lhs,
            rhs: self.rhs,
            pass: self.witness.is_none(),
            witness: self.witness,
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
            notices: self.notices,
            kind,
        }
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn patterns_json(ps: &[Pattern]) -> Value {
    Value::from(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

/// Catalan closed form against the convolution recursion; structural, brute-force
/// and bijective-image counts against the closed form; and the convolution for
/// odd-length alternating counts.
pub fn verify_recursions(n_max: usize, config: &VerifyConfig) -> Result<ClaimReport> {
    recursions_over(0..=n_max, config)
}

fn recursions_over(ns: RangeInclusive<usize>, config: &VerifyConfig) -> Result<ClaimReport> {
    let started = Instant::now();
    let n_max = *ns.end();
    let mut run = Run::new();
    let guards = &config.guards;
    for n in ns {
        let oracle = config.catalan_oracle(n)?;
        run.tally(
            n,
            catalan_by_recursion(n)?,
            oracle,
            "convolution recursion vs closed form",
        );
        if n <= config.structural_count_max_n {
            let generated = gen_avoiders_132(n, guards)?.count() as u64;
            if generated != oracle {
                run.fail(Witness::at(
                    n,
                    format!("|S_n(132)| = {generated}, expected {oracle}"),
                ));
            }
            let images: HashSet<Permutation> =
                gen_alternating_avoiders_132(2 * n + 1, guards)?.collect();
            let counted = count_a(2 * n + 1, &[], guards)?.count;
            if images.len() as u64 != oracle || counted != oracle {
                run.fail(Witness::at(
                    n,
                    format!(
                        "|A_(2n+1)(132)| by image = {}, by counter = {counted}, expected {oracle}",
                        images.len()
                    ),
                ));
            }
        }
        if n <= config.brute_set_max_n {
            let generated: BTreeSet<Permutation> = gen_avoiders_132(n, guards)?.collect();
            let brute: BTreeSet<Permutation> =
                brute_avoiders(n, &[], guards)?.into_iter().collect();
            if let Some(w) = generated.symmetric_difference(&brute).next() {
                run.fail(
                    Witness::at(
                        n,
                        "structural generation disagrees with brute-force filtering",
                    )
                    .with_w(w),
                );
            }
        }
        if 2 * n + 3 <= config.a_recursion_max_len {
            let a = |len: usize| count_a(len, &[], guards).map(|t| t.count);
            let mut convolution = 0u64;
            for k in 0..=n {
                convolution += a(2 * k + 1)? * a(2 * n - 2 * k + 1)?;
            }
            let direct = a(2 * n + 3)?;
            if direct != convolution {
                run.fail(Witness::at(
                    n,
                    format!("a_(2n+3) = {direct} but the convolution gives {convolution}"),
                ));
            }
        }
    }
    Ok(run.finish(
        "recursions",
        params(&[
            ("n_max", json!(n_max)),
            ("structural_max_n", json!(config.structural_count_max_n)),
            ("brute_max_n", json!(config.brute_set_max_n)),
            ("a_recursion_max_len", json!(config.a_recursion_max_len)),
        ]),
        ClaimKind::Recursions,
        started,
    ))
}

/// Per-instance properties of the bijection on every `w ∈ S_n(132)`, `n ≤ n_max`,
/// plus image counts against the Catalan oracle and, for short lengths, set
/// equality with brute-force `A_{2n+1}(132)`.
pub fn verify_bijection(n_max: usize, config: &VerifyConfig) -> Result<ClaimReport> {
    bijection_over(0..=n_max, config)
}

fn check_phi_instance(n: usize, w: &Permutation) -> Result<Option<Witness>> {
    let fail = |reason: &str| Ok(Some(Witness::at(n, reason).with_w(w)));
    let v = phi(w)?;
    if v.len() != 2 * n + 1 {
        return fail("image has wrong length");
    }
    if !v.is_alternating() {
        return fail("image is not alternating");
    }
    if v.contains(&p132()) {
        return fail("image contains 132");
    }
    if phi_inverse(&v)? != *w {
        return fail("inverse does not recover w");
    }
    if even_positions(&v) != *w {
        return fail("even-position entries are not order-isomorphic to w");
    }
    let odds: Vec<u32> = v.entries().iter().step_by(2).copied().collect();
    if odds.windows(2).any(|p| p[0] <= p[1]) {
        return fail("odd-position entries are not decreasing");
    }
    if v.entries().last() != Some(&1) {
        return fail("image does not end in 1");
    }
    Ok(None)
}

fn bijection_over(ns: RangeInclusive<usize>, config: &VerifyConfig) -> Result<ClaimReport> {
    let started = Instant::now();
    let n_max = *ns.end();
    let mut run = Run::new();
    let guards = &config.guards;
    for n in ns {
        let mut images = BTreeSet::new();
        for w in gen_avoiders_132(n, guards)? {
            if let Some(witness) = check_phi_instance(n, &w)? {
                run.fail(witness);
            }
            images.insert(phi(&w)?);
        }
        run.tally(
            n,
            images.len() as u64,
            config.catalan_oracle(n)?,
            "image size vs C_n",
        );
        if 2 * n < config.alternating_brute_max_len {
            let brute: BTreeSet<Permutation> = brute_alternating_avoiders(2 * n + 1, &[], guards)?
                .into_iter()
                .collect();
            if let Some(v) = images.symmetric_difference(&brute).next() {
                run.fail(Witness::at(n, "image differs from brute-force A_(2n+1)(132)").with_w(v));
            }
        }
    }
    Ok(run.finish(
        "bijection",
        params(&[
            ("n_max", json!(n_max)),
            ("brute_max_len", json!(config.alternating_brute_max_len)),
        ]),
        ClaimKind::Bijection,
        started,
    ))
}

/// Distinct standardized subsequences of `phi(p)` that pass [`validate_q`].
pub fn valid_q_patterns(p: &Pattern) -> Result<Vec<Pattern>> {
    let image = phi_pattern(p)?;
    let len = image.len();
    let mut candidates = BTreeSet::new();
    for mask in 1u32..(1 << len) {
        let values: Vec<u32> = (0..len)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| image.entries()[i])
            .collect();
        candidates.insert(standardize_u32(&values));
    }
    let mut out = Vec::new();
    for q in candidates {
        if validate_q(p, &q)? {
            out.push(q);
        }
    }
    Ok(out)
}

/// Containment transport in both directions, and the generalized converse for
/// every valid `q` derived from `phi(p)`, over all `w ∈ S_n(132)` and 132-avoiding
/// `p` of length `1..=k_max`.
pub fn verify_transport(n_max: usize, k_max: usize, config: &VerifyConfig) -> Result<ClaimReport> {
    transport_over(0..=n_max, k_max, config)
}

fn transport_over(
    ns: RangeInclusive<usize>,
    k_max: usize,
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    let started = Instant::now();
    let n_max = *ns.end();
    let guards = &config.guards;
    let mut run = Run::new();

    let mut families = Vec::new();
    for k in 1..=k_max {
        for p in gen_avoiders_132(k, guards)? {
            let image = phi_pattern(&p)?;
            let qs = valid_q_patterns(&p)?;
            families.push((p, image, qs));
        }
    }

    // spot instance: 6423 in 5647231 is a 4312
    let (w, p) = (
        Permutation::new(vec![5, 6, 4, 7, 2, 3, 1])?,
        Permutation::new(vec![4, 3, 1, 2])?,
    );
    if !(w.contains(&p) && phi(&w)?.contains(&phi_pattern(&p)?)) {
        run.fail(
            Witness::at(7, "spot instance lost containment")
                .with_w(&w)
                .with_p(&p),
        );
    }

    let mut checked = 0u64;
    let mut held = 0u64;
    for n in ns {
        for w in gen_avoiders_132(n, guards)? {
            let v = phi(&w)?;
            for (p, image, qs) in &families {
                let before = w.contains(p);
                let after = v.contains(image);
                checked += 2;
                if !before || after {
                    held += 1;
                } else {
                    run.fail(
                        Witness::at(n, "w contains p but phi(w) avoids phi(p)")
                            .with_w(&w)
                            .with_p(p),
                    );
                }
                if !after || before {
                    held += 1;
                } else {
                    run.fail(
                        Witness::at(n, "phi(w) contains phi(p) but w avoids p")
                            .with_w(&w)
                            .with_p(p),
                    );
                }
                for q in qs {
                    checked += 1;
                    if before || !v.contains(q) {
                        held += 1;
                    } else {
                        run.fail(
                            Witness::at(n, "phi(w) contains valid q but w avoids p")
                                .with_w(&w)
                                .with_p(p)
                                .with_q(q),
                        );
                    }
                }
            }
        }
    }
    run.lhs.push(checked);
    run.rhs.push(held);
    let q_total: usize = families.iter().map(|f| f.2.len()).sum();
    Ok(run.finish(
        "transport",
        params(&[
            ("n_max", json!(n_max)),
            ("k_max", json!(k_max)),
            ("patterns", json!(families.len())),
            ("valid_q", json!(q_total)),
        ]),
        ClaimKind::Transport { k_max },
        started,
    ))
}

/// For each `n ≤ n_max`, the bijection maps `S_n(132, p_1, ...)` exactly onto
/// `A_{2n+1}(132, q_1, ...)`. Every pair must be valid.
pub fn verify_theorem(
    n_max: usize,
    pairs: &[PatternPair],
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    check_pairs(pairs)?;
    let started = Instant::now();
    let mut run = Run::new();
    theorem_counts(0..=n_max, pairs, config, &mut run)?;
    Ok(run.finish(
        "theorem",
        pair_params(n_max, pairs),
        ClaimKind::Theorem {
            pairs: pairs.to_vec(),
        },
        started,
    ))
}

fn check_pairs(pairs: &[PatternPair]) -> Result<()> {
    for pair in pairs {
        if !validate_q(&pair.p, &pair.q)? {
            return Err(Error::InvalidPair {
                p: pair.p.clone(),
                q: pair.q.clone(),
            });
        }
    }
    Ok(())
}

fn pair_params(n_max: usize, pairs: &[PatternPair]) -> BTreeMap<String, Value> {
    let ps: Vec<Pattern> = pairs.iter().map(|x| x.p.clone()).collect();
    let qs: Vec<Pattern> = pairs.iter().map(|x| x.q.clone()).collect();
    params(&[
        ("n_max", json!(n_max)),
        ("p", patterns_json(&ps)),
        ("q", patterns_json(&qs)),
    ])
}

/// Set-level check shared by the theorem and corollary claims. Pushes
/// `|S_n(132, p...)|` and `|A_{2n+1}(132, q...)|` per `n`.
fn theorem_counts(
    ns: RangeInclusive<usize>,
    pairs: &[PatternPair],
    config: &VerifyConfig,
    run: &mut Run,
) -> Result<()> {
    let guards = &config.guards;
    let ps: Vec<Pattern> = pairs.iter().map(|x| x.p.clone()).collect();
    let qs: Vec<Pattern> = pairs.iter().map(|x| x.q.clone()).collect();
    for n in ns {
        let left: Vec<Permutation> = gen_avoiders_132(n, guards)?
            .filter(|w| w.avoids_all(&ps))
            .collect();
        let right: BTreeSet<Permutation> = gen_alternating_avoiders_132(2 * n + 1, guards)?
            .filter(|v| v.avoids_all(&qs))
            .collect();
        let mut image = BTreeSet::new();
        for w in &left {
            let v = phi(w)?;
            if !right.contains(&v) {
                run.fail(Witness::at(n, "phi(w) is not in the q-avoiding class").with_w(w));
            }
            image.insert(v);
        }
        if let Some(v) = right.difference(&image).next() {
            run.fail(
                Witness::at(n, "q-avoiding alternating permutation has no preimage").with_w(v),
            );
        }
        run.tally(
            n,
            left.len() as u64,
            right.len() as u64,
            "|S_n(132,p)| vs |A_(2n+1)(132,q)|",
        );

        let fast_s = count_s(n, &ps, guards)?.count;
        let fast_a = count_a(2 * n + 1, &qs, guards)?.count;
        if fast_s != left.len() as u64 || fast_a != right.len() as u64 {
            run.fail(Witness::at(
                n,
                format!("parallel counters disagree with listing: {fast_s}, {fast_a}"),
            ));
        }
    }
    Ok(())
}

type Formula = Box<dyn Fn(usize) -> Option<Result<u64>>>;

/// Closed form the corollary supplies for `(family, k)`, if any, as a function of `n`.
fn corollary_closed_form(family: CorollaryFamily, k: usize) -> Option<(String, Formula)> {
    let constant_one = || -> Formula { Box::new(|_| Some(Ok(1))) };
    let sequence = |spec: SequenceSpec| -> Formula {
        Box::new(move |n| (n >= spec.first_index()).then(|| closed_form(spec, n)))
    };
    match (family, k) {
        // p = 1 is contained in every nonempty permutation
        (CorollaryFamily::Increasing, 1) => Some((
            "empty only".into(),
            Box::new(|n| Some(Ok(u64::from(n == 0)))),
        )),
        (CorollaryFamily::Increasing, 2) => Some(("constant 1".into(), constant_one())),
        (CorollaryFamily::Increasing, 3) => {
            Some(("pow2-ceiling".into(), sequence(SequenceSpec::Pow2Ceiling)))
        }
        (CorollaryFamily::Increasing, 4) => Some((
            "even-fibonacci".into(),
            sequence(SequenceSpec::EvenFibonacci),
        )),
        (CorollaryFamily::Decreasing, 2) => Some(("constant 1".into(), constant_one())),
        (CorollaryFamily::Decreasing, 3) => {
            Some(("quadratic".into(), sequence(SequenceSpec::Quadratic)))
        }
        _ => None,
    }
}

/// The corollary's count identity via the set-level check, its closed form where
/// one is given, and for `12k` the longest-increasing-subsequence shift.
pub fn verify_corollary(
    family: CorollaryFamily,
    k: usize,
    n_max: usize,
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    corollary_over(family, k, 0..=n_max, config)
}

fn corollary_over(
    family: CorollaryFamily,
    k: usize,
    ns: RangeInclusive<usize>,
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    let started = Instant::now();
    let n_max = *ns.end();
    let pair = corollary_q(family, k)?;
    let mut run = Run::new();
    theorem_counts(ns.clone(), std::slice::from_ref(&pair), config, &mut run)?;

    let mut closed_name = Value::Null;
    match corollary_closed_form(family, k) {
        Some((name, formula)) => {
            for (i, n) in ns.clone().enumerate() {
                if let Some(expected) = formula(n) {
                    let expected = expected?;
                    if run.lhs[i] != expected {
                        run.fail(Witness::at(
                            n,
                            format!("count {} differs from {name} value {expected}", run.lhs[i]),
                        ));
                    }
                }
            }
            closed_name = json!(name);
        }
        None => run.notices.push(format!(
            "no closed form for ({family}, k={k}); checked count equality only"
        )),
    }

    if family == CorollaryFamily::Increasing {
        for n in ns {
            for w in gen_avoiders_132(n, &config.guards)? {
                if phi(&w)?.lis_length() != w.lis_length() + 1 {
                    run.fail(Witness::at(n, "LIS of phi(w) is not LIS(w) + 1").with_w(&w));
                }
            }
        }
    }

    Ok(run.finish(
        &format!("corollary-{family}"),
        params(&[
            ("family", json!(family.name())),
            ("k", json!(k)),
            ("n_max", json!(n_max)),
            ("p", json!(pair.p.to_string())),
            ("q", json!(pair.q.to_string())),
            ("closed_form", closed_name),
        ]),
        ClaimKind::Corollary { family, k },
        started,
    ))
}

/// Every permutation of length `1..=max_len`.
pub fn all_patterns(max_len: usize, guards: &Guards) -> Result<Vec<Pattern>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        out.extend(gen_all(len, guards)?);
    }
    Ok(out)
}

/// Odd/even reduction: round trips, the plain count equality, and for each sample
/// pattern the per-permutation avoidance transfer and count equality. Even-length
/// classes come from brute force while `n ≤ parity_exhaustive_max_n`, otherwise
/// from the image of the reduction.
pub fn verify_parity(
    n_max: usize,
    sample_patterns: &[Pattern],
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    parity_over(0..=n_max, sample_patterns, config)
}

fn parity_over(
    ns: RangeInclusive<usize>,
    sample_patterns: &[Pattern],
    config: &VerifyConfig,
) -> Result<ClaimReport> {
    let started = Instant::now();
    let n_max = *ns.end();
    let guards = &config.guards;
    let mut run = Run::new();
    let mut patterns = Vec::new();
    for p in sample_patterns {
        let reduced = reduce_pattern_for_even(p);
        if reduced.is_empty() {
            run.notices
                .push(format!("skipped {p}: it reduces to the empty pattern"));
        } else {
            patterns.push((p.clone(), reduced));
        }
    }

    for n in ns {
        let odd: Vec<Permutation> = gen_alternating_avoiders_132(2 * n + 1, guards)?.collect();
        let mut shrunk = BTreeSet::new();
        for w in &odd {
            match shrink_odd_to_even(w) {
                Ok(e) => {
                    if grow_even_to_odd(&e).ok().as_ref() != Some(w) {
                        run.fail(Witness::at(n, "grow(shrink(w)) != w").with_w(w));
                    }
                    shrunk.insert(e);
                }
                Err(err) => run.fail(Witness::at(n, format!("shrink failed: {err}")).with_w(w)),
            }
        }
        let exhaustive = n <= config.parity_exhaustive_max_n;
        let even: BTreeSet<Permutation> = if exhaustive {
            let brute: BTreeSet<Permutation> = brute_alternating_avoiders(2 * n, &[], guards)?
                .into_iter()
                .collect();
            if let Some(e) = brute.symmetric_difference(&shrunk).next() {
                run.fail(
                    Witness::at(n, "reduction image differs from brute-force A_2n(132)").with_w(e),
                );
            }
            brute
        } else {
            shrunk
        };
        for e in &even {
            let round = grow_even_to_odd(e).and_then(|w| shrink_odd_to_even(&w));
            if round.ok().as_ref() != Some(e) {
                run.fail(Witness::at(n, "shrink(grow(e)) != e").with_w(e));
            }
        }
        run.tally(
            n,
            odd.len() as u64,
            even.len() as u64,
            "a_(2n+1)(132) vs a_2n(132)",
        );

        if !exhaustive {
            continue;
        }
        for (p, reduced) in &patterns {
            let mut odd_count = 0u64;
            for w in &odd {
                let avoids_odd = w.avoids(p);
                odd_count += u64::from(avoids_odd);
                let e = shrink_odd_to_even(w)?;
                if avoids_odd != e.avoids(reduced) {
                    run.fail(
                        Witness::at(n, "avoidance not transferred by the reduction")
                            .with_w(w)
                            .with_p(p),
                    );
                }
            }
            let even_count = even.iter().filter(|e| e.avoids(reduced)).count() as u64;
            if odd_count != even_count {
                run.fail(
                    Witness::at(
                        n,
                        format!("a_(2n+1)(132,p) = {odd_count} but a_2n(132,p') = {even_count}"),
                    )
                    .with_p(p)
                    .with_q(reduced),
                );
            }
        }
    }
    Ok(run.finish(
        "parity",
        params(&[
            ("n_max", json!(n_max)),
            ("exhaustive_max_n", json!(config.parity_exhaustive_max_n)),
            ("patterns", json!(patterns.len())),
        ]),
        ClaimKind::Parity {
            patterns: sample_patterns.to_vec(),
        },
        started,
    ))
}

/// Groups of claims selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Recursions,
    Bijection,
    Transport,
    Theorem,
    Corollary(CorollaryFamily),
    Parity,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "all",
        "recursions",
        "bijection",
        "transport",
        "theorem",
        "corollary-12k",
        "corollary-21k",
        "corollary-k21",
        "parity",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "recursions" => Suite::Recursions,
            "bijection" => Suite::Bijection,
            "transport" => Suite::Transport,
            "theorem" => Suite::Theorem,
            "parity" => Suite::Parity,
            other => match other.strip_prefix("corollary-") {
                Some(family) => Suite::Corollary(family.parse()?),
                None => {
                    return Err(Error::OutOfDomain(format!(
                        "unknown suite {other:?} (expected one of {})",
                        Suite::NAMES.join(", ")
                    )))
                }
            },
        })
    }
}

/// Theorem instances run by default: each 132-avoiding `p` of length ≤ 3 with
/// `q = phi(p)`, and one two-pattern class.
pub fn default_theorem_pairs(guards: &Guards) -> Result<Vec<Vec<PatternPair>>> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for p in gen_avoiders_132(k, guards)? {
            out.push(vec![PatternPair::with_image(p)?]);
        }
    }
    out.push(vec![
        PatternPair::with_image(Permutation::identity(3))?,
        PatternPair::with_image(Permutation::decreasing(3))?,
    ]);
    Ok(out)
}

fn corollary_ks(family: CorollaryFamily, config: &VerifyConfig) -> Vec<usize> {
    match config.corollary_k {
        Some(k) => vec![k],
        None => match family {
            CorollaryFamily::Increasing => vec![1, 2, 3, 4],
            _ => vec![2, 3],
        },
    }
}

type Job = Box<dyn Fn() -> Result<ClaimReport> + Send + Sync>;

fn jobs(suite: Suite, config: &VerifyConfig) -> Result<Vec<Job>> {
    let mut jobs: Vec<Job> = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Recursions {
        let c = config.clone();
        jobs.push(Box::new(move || verify_recursions(c.recursion_max_n, &c)));
    }
    if all || suite == Suite::Bijection {
        let c = config.clone();
        jobs.push(Box::new(move || verify_bijection(c.bijection_max_n, &c)));
    }
    if all || suite == Suite::Transport {
        let c = config.clone();
        jobs.push(Box::new(move || {
            verify_transport(c.transport_max_n, c.transport_max_k, &c)
        }));
    }
    if all || suite == Suite::Theorem {
        for pairs in default_theorem_pairs(&config.guards)? {
            let c = config.clone();
            jobs.push(Box::new(move || verify_theorem(c.double_max_n, &pairs, &c)));
        }
    }
    for family in CorollaryFamily::ALL {
        if all || suite == Suite::Corollary(family) {
            for k in corollary_ks(family, config) {
                let c = config.clone();
                jobs.push(Box::new(move || {
                    verify_corollary(family, k, c.double_max_n, &c)
                }));
            }
        }
    }
    if all || suite == Suite::Parity {
        let c = config.clone();
        let patterns = all_patterns(config.parity_pattern_max_len, &config.guards)?;
        jobs.push(Box::new(move || {
            verify_parity(c.parity_max_n, &patterns, &c)
        }));
    }
    Ok(jobs)
}

/// Runs the selected claims in parallel; reports keep catalog order. The full
/// suite ends with a coverage report checked against [`COVERAGE_MANIFEST`].
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<ClaimReport>> {
    let jobs = jobs(suite, config)?;
    let mut reports = jobs
        .par_iter()
        .map(|job| job())
        .collect::<Result<Vec<_>>>()?;
    if suite == Suite::All {
        let coverage = coverage_report(&reports);
        reports.push(coverage);
    }
    Ok(reports)
}

pub fn run_all(config: &VerifyConfig) -> Result<Vec<ClaimReport>> {
    run_suite(Suite::All, config)
}

fn coverage_report(reports: &[ClaimReport]) -> ClaimReport {
    let started = Instant::now();
    let ran: BTreeSet<&str> = reports.iter().map(|r| r.claim_id.as_str()).collect();
    let mut run = Run::new();
    let covered = COVERAGE_MANIFEST
        .iter()
        .filter(|(_, claim)| ran.contains(claim))
        .count();
    if let Some((statement, claim)) = COVERAGE_MANIFEST.iter().find(|(_, c)| !ran.contains(c)) {
        run.fail(Witness::at(
            0,
            format!("statement {statement} not covered (claim {claim} did not run)"),
        ));
    }
    run.lhs.push(covered as u64);
    run.rhs.push(COVERAGE_MANIFEST.len() as u64);
    run.finish("coverage", BTreeMap::new(), ClaimKind::Coverage, started)
}

/// Reruns the claim behind a failing report at the witness's `n` only. Returns
/// `None` when the report has no witness, otherwise whether the failure recurs.
pub fn recheck(report: &ClaimReport, config: &VerifyConfig) -> Result<Option<bool>> {
    let Some(witness) = &report.witness else {
        return Ok(None);
    };
    let n = witness.n..=witness.n;
    let again = match &report.kind {
        ClaimKind::Recursions => recursions_over(n, config)?,
        ClaimKind::Bijection => bijection_over(n, config)?,
        ClaimKind::Transport { k_max } => transport_over(n, *k_max, config)?,
        ClaimKind::Theorem { pairs } => {
            let started = Instant::now();
            let mut run = Run::new();
            theorem_counts(n, pairs, config, &mut run)?;
            run.finish("theorem", BTreeMap::new(), report.kind.clone(), started)
        }
        ClaimKind::Corollary { family, k } => corollary_over(*family, *k, n, config)?,
        ClaimKind::Parity { patterns } => parity_over(n, patterns, config)?,
        ClaimKind::Coverage => return Ok(Some(true)),
    };
    Ok(Some(!again.pass))
}

/// `{"schema_version": 1, "reports": [...]}`. Timings are dropped unless asked for,
/// so repeated runs serialize identically.
pub fn reports_to_json(reports: &[ClaimReport], timings: bool) -> Value {
    let reports: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("report serializes");
            if !timings {
                v["elapsed_ms"] = Value::Null;
            }
            v
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "reports": reports })
}

fn join(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    parts.join(",")
}

fn param_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(param_text).collect();
            parts.join("|")
        }
        other => other.to_string(),
    }
}

/// One line per report plus a totals line.
pub fn summary_table(reports: &[ClaimReport], timings: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let params: Vec<String> = r
            .params
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| format!("{k}={}", param_text(v)))
            .collect();
        out.push_str(&format!(
            "{:<4}  {:<14}  {}  lhs=[{}] rhs=[{}]",
            if r.pass { "PASS" } else { "FAIL" },
            r.claim_id,
            params.join(" "),
            join(&r.lhs),
            join(&r.rhs),
        ));
        if timings {
            if let Some(ms) = r.elapsed_ms {
                out.push_str(&format!("  {ms}ms"));
            }
        }
        out.push('\n');
        if let Some(w) = &r.witness {
            out.push_str(&format!("      witness: {w}\n"));
        }
        for notice in &r.notices {
            out.push_str(&format!("      note: {notice}\n"));
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} claims passed\n", reports.len()));
    out
}
