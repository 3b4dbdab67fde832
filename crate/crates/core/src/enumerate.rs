//! Generators and counters for `S_n(132)` and `A_m(132)` classes, plus the
//! Catalan recursion and the closed-form sequences used as oracles.
//!
//! Brute-force scans of all of `S_n` and structural generation are each capped by
//! a [`Guards`] value; raising a cap above its default needs an explicit
//! acknowledgment.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bijection::{lift_pattern_for_odd, p132, phi_unchecked};
use crate::error::{Error, Result};
use crate::perm::{Matcher, Pattern, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Largest `n` for which all of `S_n` may be scanned.
    pub brute_force: usize,
    /// Largest `n` for which `S_n(132)` may be generated.
    pub structural: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            brute_force: Guards::DEFAULT_BRUTE_FORCE,
            structural: Guards::DEFAULT_STRUCTURAL,
        }
    }
}

impl Guards {
    pub const DEFAULT_BRUTE_FORCE: usize = 10;
    pub const DEFAULT_STRUCTURAL: usize = 16;

    /// Guards with optional overrides. Lowering is always allowed; raising above a
    /// default fails unless `acknowledged` is set.
    pub fn with_overrides(
        brute_force: Option<usize>,
        structural: Option<usize>,
        acknowledged: bool,
    ) -> Result<Guards> {
        let pick = |what, value: Option<usize>, default: usize| match value {
            Some(v) if v > default && !acknowledged => Err(Error::GuardNotAcknowledged {
                what,
                requested: v,
                default,
            }),
            Some(v) => Ok(v),
            None => Ok(default),
        };
        Ok(Guards {
            brute_force: pick("brute-force", brute_force, Self::DEFAULT_BRUTE_FORCE)?,
            structural: pick("structural", structural, Self::DEFAULT_STRUCTURAL)?,
        })
    }

    pub fn check_brute_force(&self, n: usize) -> Result<()> {
        if n > self.brute_force {
            return Err(Error::GuardExceeded {
                what: "brute-force",
                requested: n,
                limit: self.brute_force,
            });
        }
        Ok(())
    }

    pub fn check_structural(&self, n: usize) -> Result<()> {
        if n > self.structural {
            return Err(Error::GuardExceeded {
                what: "structural",
                requested: n,
                limit: self.structural,
            });
        }
        Ok(())
    }
}

/// All of `S_n` in lexicographic order.
pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation::from_vec_unchecked(current))
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v
        .iter()
        .rposition(|&x| x > v[i])
        .expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub fn gen_all(n: usize, guards: &Guards) -> Result<AllPermutations> {
    guards.check_brute_force(n)?;
    Ok(AllPermutations {
        next: Some((1..=n as u32).collect()),
    })
}

type EntryStream = Box<dyn Iterator<Item = Vec<u32>> + Send>;

/// `S_n(132)` in lexicographic order, built from the block decomposition: with the
/// maximum at position `k + 1`, the first `k` entries are a 132-avoider on the top
/// values and the rest a 132-avoider on the bottom values. Each block is a sorted
/// stream; the blocks are merged lazily.
pub struct Avoiders132 {
    inner: EntryStream,
}

impl Iterator for Avoiders132 {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.inner.next().map(Permutation::from_vec_unchecked)
    }
}

fn avoider_stream(n: usize) -> EntryStream {
    if n == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    let mut streams: Vec<EntryStream> = (0..n).map(|k| block_stream(n, k)).collect();
    let heads = streams.iter_mut().map(Iterator::next).collect();
    Box::new(LexMerge {
        streams,
        heads,
        last: None,
    })
}

fn block_stream(n: usize, k: usize) -> EntryStream {
    let right_len = n - 1 - k;
    let shift = right_len as u32;
    Box::new(avoider_stream(k).flat_map(move |left| {
        avoider_stream(right_len).map(move |right| {
            let mut v: Vec<u32> = left.iter().map(|x| x + shift).collect();
            v.push(n as u32);
            v.extend(right);
            v
        })
    }))
}

struct LexMerge {
    streams: Vec<EntryStream>,
    heads: Vec<Option<Vec<u32>>>,
    last: Option<Vec<u32>>,
}

impl Iterator for LexMerge {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        loop {
            let best = self
                .heads
                .iter()
                .enumerate()
                .filter_map(|(i, h)| h.as_ref().map(|h| (i, h)))
                .min_by(|a, b| a.1.cmp(b.1))
                .map(|(i, _)| i)?;
            let item = std::mem::replace(&mut self.heads[best], self.streams[best].next())
                .expect("head present");
            if self.last.as_ref() != Some(&item) {
                self.last = Some(item.clone());
                return Some(item);
            }
        }
    }
}

pub fn gen_avoiders_132(n: usize, guards: &Guards) -> Result<Avoiders132> {
    guards.check_structural(n)?;
    Ok(Avoiders132 {
        inner: avoider_stream(n),
    })
}

/// `A_m(132)` for odd `m = 2n + 1`, as the image of `S_n(132)` under the bijection.
/// The bijection preserves lexicographic order, so the stream is sorted.
pub fn gen_alternating_avoiders_132(
    m: usize,
    guards: &Guards,
) -> Result<impl Iterator<Item = Permutation>> {
    if m.is_multiple_of(2) {
        return Err(Error::OutOfDomain(format!(
            "length {m} is even; even lengths go through the parity reduction"
        )));
    }
    let avoiders = gen_avoiders_132((m - 1) / 2, guards)?;
    Ok(avoiders.map(|w| {
        let v = phi_unchecked(&w);
        debug_assert!(v.is_alternating() && v.avoids(&p132()));
        v
    }))
}

#[derive(Clone, Copy)]
struct Segment {
    offset: usize,
    len: usize,
    base: u32,
}

/// Visits every member of `S_n(132)` whose maximum sits at 0-based position `k`.
/// Order is deterministic but not lexicographic.
fn visit_avoiders_with_max_at(n: usize, k: usize, f: &mut dyn FnMut(&[u32])) {
    let mut buf = vec![0u32; n];
    buf[k] = n as u32;
    let mut pending = vec![
        Segment {
            offset: k + 1,
            len: n - 1 - k,
            base: 0,
        },
        Segment {
            offset: 0,
            len: k,
            base: (n - 1 - k) as u32,
        },
    ];
    fill(&mut buf, &mut pending, f);
}

fn fill(buf: &mut [u32], pending: &mut Vec<Segment>, f: &mut dyn FnMut(&[u32])) {
    let Some(seg) = pending.pop() else {
        f(buf);
        return;
    };
    if seg.len == 0 {
        fill(buf, pending, f);
    } else {
        for k in 0..seg.len {
            buf[seg.offset + k] = seg.base + seg.len as u32;
            pending.push(Segment {
                offset: seg.offset + k + 1,
                len: seg.len - 1 - k,
                base: seg.base,
            });
            pending.push(Segment {
                offset: seg.offset,
                len: k,
                base: seg.base + (seg.len - 1 - k) as u32,
            });
            fill(buf, pending, f);
            pending.pop();
            pending.pop();
        }
    }
    pending.push(seg);
}

/// Counts members of `S_n(132)` accepted by `keep`, one worker per position of the
/// maximum. The sum does not depend on scheduling.
fn count_avoiders<F>(n: usize, keep: F) -> Result<u64>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    if n == 0 {
        return Ok(u64::from(keep(&[])));
    }
    let per_block: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut count = 0u64;
            visit_avoiders_with_max_at(n, k, &mut |w| {
                if keep(w) {
                    count += 1;
                }
            });
            count
        })
        .collect();
    per_block
        .into_iter()
        .try_fold(0u64, |acc, c| acc.checked_add(c))
        .ok_or_else(|| Error::Overflow(format!("count over S_{n}(132)")))
}

/// A count together with the extra patterns that were dropped because they
/// contain 132 (and so are avoided by every member of the class anyway).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub count: u64,
    pub dropped: Vec<Pattern>,
}

fn split_patterns(extra: &[Pattern]) -> Result<(Vec<Pattern>, Vec<Pattern>)> {
    if extra.iter().any(Permutation::is_empty) {
        return Err(Error::EmptyPattern);
    }
    let p132 = p132();
    let (dropped, kept) = extra.iter().cloned().partition(|p| p.contains(&p132));
    Ok((kept, dropped))
}

/// `s_n(132, extra...)`; 132 is always implied.
pub fn count_s(n: usize, extra: &[Pattern], guards: &Guards) -> Result<Tally> {
    guards.check_structural(n)?;
    let (kept, dropped) = split_patterns(extra)?;
    let matchers: Vec<Matcher> = kept.iter().map(Matcher::new).collect();
    let count = count_avoiders(n, |w| !matchers.iter().any(|m| m.matches(w)))?;
    Ok(Tally { count, dropped })
}

/// `a_m(132, extra...)`; 132 is always implied.
///
/// Odd `m` filters the bijective image of `S_{(m-1)/2}(132)`. Even `m` counts at
/// length `m + 1` against the lifted patterns `(p+1)1`, which the parity reduction
/// turns back into exactly `extra`.
pub fn count_a(m: usize, extra: &[Pattern], guards: &Guards) -> Result<Tally> {
    let (kept, dropped) = split_patterns(extra)?;
    if m.is_multiple_of(2) {
        let lifted: Vec<Pattern> = kept.iter().map(lift_pattern_for_odd).collect();
        let tally = count_a(m + 1, &lifted, guards)?;
        return Ok(Tally {
            count: tally.count,
            dropped,
        });
    }
    let n = (m - 1) / 2;
    guards.check_structural(n)?;
    let matchers: Vec<Matcher> = kept.iter().map(Matcher::new).collect();
    let count = count_avoiders(n, |w| {
        if matchers.is_empty() {
            return true;
        }
        let image = phi_unchecked(&Permutation::from_vec_unchecked(w.to_vec()));
        !matchers.iter().any(|m| m.matches(image.entries()))
    })?;
    Ok(Tally { count, dropped })
}

/// Members of `S_n` avoiding 132 and every pattern in `extra`, by scanning all of `S_n`.
pub fn brute_avoiders(n: usize, extra: &[Pattern], guards: &Guards) -> Result<Vec<Permutation>> {
    brute_filter(n, false, extra, guards)
}

/// Alternating members of `S_m` avoiding 132 and `extra`, by scanning all of `S_m`.
pub fn brute_alternating_avoiders(
    m: usize,
    extra: &[Pattern],
    guards: &Guards,
) -> Result<Vec<Permutation>> {
    brute_filter(m, true, extra, guards)
}

fn brute_filter(
    n: usize,
    alternating: bool,
    extra: &[Pattern],
    guards: &Guards,
) -> Result<Vec<Permutation>> {
    if extra.iter().any(Permutation::is_empty) {
        return Err(Error::EmptyPattern);
    }
    let p132 = p132();
    Ok(gen_all(n, guards)?
        .filter(|w| !alternating || w.is_alternating())
        .filter(|w| w.avoids(&p132) && w.avoids_all(extra))
        .collect())
}

/// Permutations of length `n` matching `alternating` and avoiding exactly `patterns`
/// (no implicit 132), by scanning all of `S_n`.
pub fn raw_filter(
    n: usize,
    alternating: bool,
    patterns: &[Pattern],
    guards: &Guards,
) -> Result<Vec<Permutation>> {
    if patterns.iter().any(Permutation::is_empty) {
        return Err(Error::EmptyPattern);
    }
    Ok(gen_all(n, guards)?
        .filter(|w| !alternating || w.is_alternating())
        .filter(|w| w.avoids_all(patterns))
        .collect())
}

/// `C_n = binom(2n, n) / (n + 1)`, exact.
pub fn catalan(n: usize) -> Result<u64> {
    let overflow = || Error::Overflow(format!("catalan({n})"));
    let mut binom: u128 = 1;
    for i in 0..n as u128 {
        // binom(n + i + 1, i + 1) from binom(n + i, i); always divides exactly
        binom = binom.checked_mul(n as u128 + i + 1).ok_or_else(overflow)? / (i + 1);
    }
    u64::try_from(binom / (n as u128 + 1)).map_err(|_| overflow())
}

/// Catalan numbers via `s_{n+1} = Σ_{k=0}^{n} s_k s_{n-k}` with `s_0 = 1`.
pub fn catalan_by_recursion(n: usize) -> Result<u64> {
    let mut s: Vec<u64> = vec![1];
    for m in 0..n {
        let mut next = 0u64;
        for k in 0..=m {
            let term = s[k]
                .checked_mul(s[m - k])
                .and_then(|t| next.checked_add(t))
                .ok_or_else(|| Error::Overflow(format!("catalan_by_recursion({n})")))?;
            next = term;
        }
        s.push(next);
    }
    Ok(s[n])
}

/// Closed-form integer sequences attached to the corollary counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceSpec {
    /// `C_n`, from `n = 0`
    Catalan,
    /// `⌈2^(n-1)⌉`, from `n = 0`
    Pow2Ceiling,
    /// `F_(2n-2)` with `F_0 = F_1 = 1`, from `n = 1`
    EvenFibonacci,
    /// `(n² - n + 2) / 2`, from `n = 1`
    Quadratic,
}

impl SequenceSpec {
    pub const ALL: [SequenceSpec; 4] = [
        SequenceSpec::Catalan,
        SequenceSpec::Pow2Ceiling,
        SequenceSpec::EvenFibonacci,
        SequenceSpec::Quadratic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceSpec::Catalan => "catalan",
            SequenceSpec::Pow2Ceiling => "pow2-ceiling",
            SequenceSpec::EvenFibonacci => "even-fibonacci",
            SequenceSpec::Quadratic => "quadratic",
        }
    }

    /// Smallest `n` at which the formula applies.
    pub fn first_index(self) -> usize {
        match self {
            SequenceSpec::Catalan | SequenceSpec::Pow2Ceiling => 0,
            SequenceSpec::EvenFibonacci | SequenceSpec::Quadratic => 1,
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceSpec::ALL
            .into_iter()
            .find(|spec| spec.name() == s)
            .ok_or_else(|| Error::OutOfDomain(format!("unknown sequence family {s:?}")))
    }
}

pub fn closed_form(spec: SequenceSpec, n: usize) -> Result<u64> {
    if n < spec.first_index() {
        return Err(Error::OutOfDomain(format!(
            "{spec} is defined from n = {}, got {n}",
            spec.first_index()
        )));
    }
    let overflow = || Error::Overflow(format!("{spec}({n})"));
    match spec {
        SequenceSpec::Catalan => catalan(n),
        SequenceSpec::Pow2Ceiling => {
            if n == 0 {
                Ok(1)
            } else {
                1u64.checked_shl(n as u32 - 1).ok_or_else(overflow)
            }
        }
        SequenceSpec::EvenFibonacci => {
            let (mut a, mut b) = (1u64, 1u64);
            for _ in 0..2 * n - 2 {
                let c = a.checked_add(b).ok_or_else(overflow)?;
                a = b;
                b = c;
            }
            Ok(a)
        }
        SequenceSpec::Quadratic => {
            let n = n as u64;
            n.checked_mul(n)
                .and_then(|sq| sq.checked_sub(n))
                .and_then(|v| v.checked_add(2))
                .map(|v| v / 2)
                .ok_or_else(overflow)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_permutation;

    fn perm(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    fn strings<I: Iterator<Item = Permutation>>(it: I) -> Vec<String> {
        it.map(|p| p.to_string()).collect()
    }

    #[test]
    fn gen_all_small() {
        let g = Guards::default();
        assert_eq!(
            gen_all(0, &g).unwrap().collect::<Vec<_>>(),
            vec![Permutation::empty()]
        );
        assert_eq!(strings(gen_all(2, &g).unwrap()), vec!["12", "21"]);
        assert_eq!(
            strings(gen_all(3, &g).unwrap()),
            vec!["123", "132", "213", "231", "312", "321"]
        );
        assert!(matches!(gen_all(11, &g), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn avoiders_small() {
        let g = Guards::default();
        assert_eq!(
            strings(gen_avoiders_132(3, &g).unwrap()),
            vec!["123", "213", "231", "312", "321"]
        );
        assert_eq!(
            gen_avoiders_132(0, &g).unwrap().collect::<Vec<_>>(),
            vec![Permutation::empty()]
        );
        assert_eq!(gen_avoiders_132(4, &g).unwrap().count(), 14);
        assert!(matches!(
            gen_avoiders_132(17, &g),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn alternating_avoiders_small() {
        let g = Guards::default();
        assert_eq!(
            strings(gen_alternating_avoiders_132(3, &g).unwrap()),
            vec!["231"]
        );
        assert_eq!(
            strings(gen_alternating_avoiders_132(5, &g).unwrap()),
            vec!["34251", "45231"]
        );
        assert_eq!(
            strings(gen_alternating_avoiders_132(1, &g).unwrap()),
            vec!["1"]
        );
        assert!(gen_alternating_avoiders_132(4, &g).is_err());
    }

    #[test]
    fn count_examples() {
        let g = Guards::default();
        assert_eq!(count_s(3, &[], &g).unwrap().count, 5);
        assert_eq!(count_s(3, &[perm("123")], &g).unwrap().count, 4);
        for n in 1..=8 {
            assert_eq!(count_s(n, &[perm("12")], &g).unwrap().count, 1);
        }
        assert_eq!(count_a(7, &[], &g).unwrap().count, 5);
        assert_eq!(count_a(7, &[perm("3412")], &g).unwrap().count, 1);
        assert_eq!(count_a(6, &[], &g).unwrap().count, 5);
        assert_eq!(count_a(7, &[perm("563412")], &g).unwrap().count, 4);
    }

    #[test]
    fn counts_drop_patterns_containing_132() {
        let g = Guards::default();
        let t = count_s(4, &[perm("1432"), perm("123")], &g).unwrap();
        assert_eq!(t.dropped, vec![perm("1432")]);
        assert_eq!(t.count, count_s(4, &[perm("123")], &g).unwrap().count);
        assert_eq!(
            count_s(3, &[Permutation::empty()], &g),
            Err(Error::EmptyPattern)
        );
    }

    #[test]
    fn even_count_matches_brute_force() {
        let g = Guards::default();
        for m in [0, 2, 4, 6, 8] {
            for pats in [
                vec![],
                vec![perm("12")],
                vec![perm("2413")],
                vec![perm("231"), perm("12")],
            ] {
                let fast = count_a(m, &pats, &g).unwrap().count;
                let brute = brute_alternating_avoiders(m, &pats, &g).unwrap().len() as u64;
                assert_eq!(fast, brute, "m={m} pats={pats:?}");
            }
        }
    }

    #[test]
    fn guards_need_acknowledgment_to_rise() {
        assert!(Guards::with_overrides(Some(5), Some(8), false).is_ok());
        assert!(matches!(
            Guards::with_overrides(Some(11), None, false),
            Err(Error::GuardNotAcknowledged { .. })
        ));
        let g = Guards::with_overrides(None, Some(20), true).unwrap();
        assert_eq!(g.structural, 20);
        assert_eq!(g.brute_force, 10);
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(3).unwrap(), 5);
        assert_eq!(catalan(10).unwrap(), 16796);
        assert_eq!(catalan_by_recursion(1).unwrap(), 1);
        assert_eq!(catalan_by_recursion(4).unwrap(), 14);
        assert_eq!(catalan_by_recursion(6).unwrap(), 132);
        assert_eq!(catalan(35).unwrap(), catalan_by_recursion(35).unwrap());
        assert!(matches!(catalan(40), Err(Error::Overflow(_))));
        assert!(matches!(catalan_by_recursion(40), Err(Error::Overflow(_))));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form(SequenceSpec::Pow2Ceiling, 0).unwrap(), 1);
        assert_eq!(closed_form(SequenceSpec::Pow2Ceiling, 4).unwrap(), 8);
        assert_eq!(closed_form(SequenceSpec::EvenFibonacci, 3).unwrap(), 5);
        assert_eq!(closed_form(SequenceSpec::Quadratic, 3).unwrap(), 4);
        assert_eq!(closed_form(SequenceSpec::Catalan, 5).unwrap(), 42);
        assert!(closed_form(SequenceSpec::Quadratic, 0).is_err());
        assert!(closed_form(SequenceSpec::EvenFibonacci, 0).is_err());
        assert!(matches!(
            closed_form(SequenceSpec::Pow2Ceiling, 70),
            Err(Error::Overflow(_))
        ));
        let fib: Vec<u64> = (1..=4)
            .map(|n| closed_form(SequenceSpec::EvenFibonacci, n).unwrap())
            .collect();
        assert_eq!(fib, vec![1, 2, 5, 13]);
        let quad: Vec<u64> = (1..=5)
            .map(|n| closed_form(SequenceSpec::Quadratic, n).unwrap())
            .collect();
        assert_eq!(quad, vec![1, 2, 4, 7, 11]);
    }

    #[test]
    fn sequence_names_round_trip() {
        for spec in SequenceSpec::ALL {
            assert_eq!(spec.name().parse::<SequenceSpec>().unwrap(), spec);
        }
    }
}
