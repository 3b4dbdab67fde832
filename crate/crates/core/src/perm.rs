//! Permutations in one-line notation and classical pattern containment.
//!
//! Positions and values are 1-based in everything this module exposes.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, ParseError, Result};

/// A rearrangement of `1..=n`. The empty permutation is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

/// A permutation used in the containment role.
pub type Pattern = Permutation;

impl Permutation {
    /// Validates that `entries` is exactly `{1, ..., n}`.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v == 0 {
                return Err(ParseError::NonPositive(0).into());
            }
            let idx = v as usize;
            if idx <= n {
                if seen[idx] {
                    return Err(ParseError::Duplicate(v).into());
                }
                seen[idx] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&i| !seen[i]) {
            // an out-of-range value may also be a duplicate of another out-of-range value
            let mut dup = HashSet::new();
            for &v in &entries {
                if !dup.insert(v) {
                    return Err(ParseError::Duplicate(v).into());
                }
            }
            return Err(ParseError::Gap {
                n,
                missing: missing as u32,
            }
            .into());
        }
        Ok(Permutation(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// `n (n-1) ... 1`
    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n as u32).rev().collect())
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    /// Entry at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// `w_1 < w_2 > w_3 < ...`; lengths 0 and 1 are vacuously alternating.
    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).enumerate().all(|(i, pair)| {
            if i % 2 == 0 {
                pair[0] < pair[1]
            } else {
                pair[0] > pair[1]
            }
        })
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u32;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn contains(&self, pattern: &Pattern) -> bool {
        self.first_occurrence(pattern).is_some()
    }

    /// Lexicographically first occurrence of `pattern`, if any.
    pub fn first_occurrence(&self, pattern: &Pattern) -> Option<Occurrence> {
        let mut found = None;
        Matcher::new(pattern).run(&self.0, &mut |idx| {
            found = Some(Occurrence::from_zero_based(idx));
            true
        });
        found
    }

    /// Every occurrence of `pattern`, in lexicographic order of index tuples.
    pub fn occurrences(&self, pattern: &Pattern) -> Vec<Occurrence> {
        let mut all = Vec::new();
        Matcher::new(pattern).run(&self.0, &mut |idx| {
            all.push(Occurrence::from_zero_based(idx));
            false
        });
        all
    }

    pub fn avoids(&self, pattern: &Pattern) -> bool {
        !self.contains(pattern)
    }

    pub fn avoids_all<'a, I>(&self, patterns: I) -> bool
    where
        I: IntoIterator<Item = &'a Pattern>,
    {
        patterns.into_iter().all(|p| self.avoids(p))
    }

    /// 1-based positions `i` with `w_i < w_j` for every `j < i`.
    pub fn left_to_right_minima(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut min = u32::MAX;
        for (i, &v) in self.0.iter().enumerate() {
            if v < min {
                min = v;
                out.push(i + 1);
            }
        }
        out
    }

    /// Length of the longest strictly increasing subsequence (patience sorting).
    pub fn lis_length(&self) -> usize {
        let mut tails: Vec<u32> = Vec::new();
        for &v in &self.0 {
            match tails.binary_search(&v) {
                Ok(_) => {}
                Err(pos) if pos == tails.len() => tails.push(v),
                Err(pos) => tails[pos] = v,
            }
        }
        tails.len()
    }

    /// Entries at the given 1-based positions, standardized.
    pub fn restrict(&self, positions: &[usize]) -> Permutation {
        let values: Vec<u32> = positions.iter().map(|&i| self.0[i - 1]).collect();
        standardize_u32(&values)
    }

    /// Comma-separated form, used for any length.
    pub fn to_comma_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        parts.join(",")
    }

    /// Digit-string form when every entry is a single digit, comma form otherwise.
    pub fn to_compact_string(&self) -> String {
        if self.len() <= 9 {
            self.0.iter().map(u32::to_string).collect()
        } else {
            self.to_comma_string()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact_string())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_compact_string())
    }
}

/// Strictly increasing 1-based positions into a host permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence(Vec<usize>);

impl Occurrence {
    fn from_zero_based(idx: &[usize]) -> Self {
        Occurrence(idx.iter().map(|i| i + 1).collect())
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn is_disjoint_from(&self, positions: &[usize]) -> bool {
        self.0.iter().all(|i| !positions.contains(i))
    }
}

impl From<Vec<usize>> for Occurrence {
    fn from(v: Vec<usize>) -> Self {
        Occurrence(v)
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses either a digit string (`2341`, length ≤ 9) or a comma list (`12,13,11,...`).
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let text = text.trim();
    let values: Vec<i64> = if text.contains(',') {
        text.split(',')
            .enumerate()
            .map(|(i, tok)| {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(ParseError::EmptyToken(i + 1));
                }
                tok.parse::<i64>()
                    .map_err(|_| ParseError::Malformed(tok.to_string()))
            })
            .collect::<std::result::Result<_, _>>()?
    } else {
        if !text.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseError::Malformed(text.to_string()).into());
        }
        if text.len() > 9 {
            return Err(ParseError::DigitsTooLong.into());
        }
        text.bytes().map(|b| i64::from(b - b'0')).collect()
    };
    let mut entries = Vec::with_capacity(values.len());
    for v in values {
        if v <= 0 {
            return Err(ParseError::NonPositive(v).into());
        }
        let v = u32::try_from(v).map_err(|_| ParseError::Malformed(v.to_string()))?;
        entries.push(v);
    }
    Permutation::new(entries)
}

/// Replaces each value by its rank among `values`.
pub fn standardize(values: &[i64]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| values[i]);
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::DuplicateValue(values[w[0]]));
    }
    let mut out = vec![0u32; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Ok(Permutation(out))
}

/// `standardize` for values already known to be distinct.
pub(crate) fn standardize_u32(values: &[u32]) -> Permutation {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&i| values[i]);
    let mut out = vec![0u32; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Permutation(out)
}

/// Backtracking embedding of a pattern into a host sequence.
///
/// When pattern position `j` is placed, its host value only has to sit strictly
/// between the host values already assigned to the pattern entries immediately
/// below and above `p_j` among `p_1..p_{j-1}`; that is enough for order-isomorphism.
/// Worst case is exponential in the pattern length. A partial embedding is
/// abandoned once the host suffix is shorter than the unplaced part of the pattern.
pub(crate) struct Matcher {
    len: usize,
    lower: Vec<Option<usize>>,
    upper: Vec<Option<usize>>,
}

impl Matcher {
    pub(crate) fn new(pattern: &Pattern) -> Self {
        let p = pattern.entries();
        let mut lower = Vec::with_capacity(p.len());
        let mut upper = Vec::with_capacity(p.len());
        for j in 0..p.len() {
            let below = (0..j).filter(|&i| p[i] < p[j]).max_by_key(|&i| p[i]);
            let above = (0..j).filter(|&i| p[i] > p[j]).min_by_key(|&i| p[i]);
            lower.push(below);
            upper.push(above);
        }
        Matcher {
            len: p.len(),
            lower,
            upper,
        }
    }

    pub(crate) fn matches(&self, host: &[u32]) -> bool {
        let mut hit = false;
        self.run(host, &mut |_| {
            hit = true;
            true
        });
        hit
    }

    /// Calls `visit` on each embedding in lexicographic order until it returns true.
    fn run(&self, host: &[u32], visit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut chosen = Vec::with_capacity(self.len);
        self.extend(host, 0, &mut chosen, visit);
    }

    fn extend(
        &self,
        host: &[u32],
        start: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let j = chosen.len();
        if j == self.len {
            return visit(chosen);
        }
        let lo = self.lower[j].map(|i| host[chosen[i]]);
        let hi = self.upper[j].map(|i| host[chosen[i]]);
        let remaining = self.len - j;
        if host.len() < remaining {
            return false;
        }
        for i in start..=host.len() - remaining {
            let v = host[i];
            if lo.is_some_and(|lo| v <= lo) || hi.is_some_and(|hi| v >= hi) {
                continue;
            }
            chosen.push(i);
            let stop = self.extend(host, i + 1, chosen, visit);
            chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    #[test]
    fn parses_digit_and_comma_forms() {
        assert_eq!(perm("2341").entries(), &[2, 3, 4, 1]);
        let long = perm("12,13,11,14,9,10,8,15,5,6,4,7,2,3,1");
        assert_eq!(long.len(), 15);
        assert_eq!(long.at(8), 15);
        assert_eq!(perm(" 3, 1 ,2 ").entries(), &[3, 1, 2]);
        assert!(perm("").is_empty());
    }

    #[test]
    fn parse_errors_are_distinct() {
        let err = |s: &str| match parse_permutation(s).unwrap_err() {
            Error::Parse(e) => e,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(err("1,3,3"), ParseError::Duplicate(3));
        assert_eq!(err("133"), ParseError::Duplicate(3));
        assert_eq!(err("1,2,4"), ParseError::Gap { n: 3, missing: 3 });
        assert_eq!(err("0,1"), ParseError::NonPositive(0));
        assert_eq!(err("1,-2"), ParseError::NonPositive(-2));
        assert_eq!(err("1,x"), ParseError::Malformed("x".into()));
        assert_eq!(err("12a"), ParseError::Malformed("12a".into()));
        assert_eq!(err("1,,2"), ParseError::EmptyToken(2));
        assert_eq!(err("1234567891"), ParseError::DigitsTooLong);
        assert_eq!(err("5,5,9"), ParseError::Duplicate(5));
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[7, 8, 9, 3]).unwrap(), perm("2341"));
        assert_eq!(standardize(&[6, 4, 2, 3]).unwrap(), perm("4312"));
        assert_eq!(standardize(&[1, 2, 3]).unwrap(), perm("123"));
        assert_eq!(standardize(&[-5, 10, 0]).unwrap(), perm("132"));
        assert_eq!(standardize(&[4, 1, 4]), Err(Error::DuplicateValue(4)));
    }

    #[test]
    fn alternating_examples() {
        assert!(perm("675849231").is_alternating());
        assert!(perm("1").is_alternating());
        assert!(Permutation::empty().is_alternating());
        assert!(!perm("213").is_alternating());
        assert!(perm("1324").is_alternating());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(perm("132").complement(), perm("312"));
        assert_eq!(perm("1").complement(), perm("1"));
        assert_eq!(perm("2341").complement(), perm("3214"));
    }

    #[test]
    fn containment_examples() {
        assert!(perm("5647231").contains(&perm("4312")));
        assert!(!perm("123").contains(&perm("21")));
        assert!(perm("675849231").contains(&perm("2341")));
        assert_eq!(
            perm("5647231").first_occurrence(&perm("4312")),
            Some(Occurrence::from(vec![1, 3, 5, 6]))
        );
        assert!(!Permutation::empty().contains(&perm("1")));
    }

    #[test]
    fn occurrence_examples() {
        let occ = |w: &str, p: &str| -> Vec<Vec<usize>> {
            perm(w)
                .occurrences(&perm(p))
                .into_iter()
                .map(|o| o.positions().to_vec())
                .collect()
        };
        assert_eq!(occ("231", "12"), vec![vec![1, 2]]);
        assert_eq!(occ("123", "12"), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert!(occ("21", "12").is_empty());
    }

    #[test]
    fn avoids_all_examples() {
        let p132 = perm("132");
        assert!(perm("231").avoids_all([&p132]));
        assert!(!perm("132").avoids_all([&p132]));
        assert!(perm("4123").avoids_all(std::iter::empty()));
    }

    #[test]
    fn left_to_right_minima_examples() {
        assert_eq!(
            perm("675849231").left_to_right_minima(),
            vec![1, 3, 5, 7, 9]
        );
        assert_eq!(perm("123").left_to_right_minima(), vec![1]);
        assert_eq!(perm("3412").left_to_right_minima(), vec![1, 3]);
        assert!(Permutation::empty().left_to_right_minima().is_empty());
    }

    #[test]
    fn lis_examples() {
        assert_eq!(perm("2341").lis_length(), 3);
        assert_eq!(perm("675849231").lis_length(), 4);
        assert_eq!(perm("1").lis_length(), 1);
        assert_eq!(Permutation::empty().lis_length(), 0);
    }

    #[test]
    fn display_picks_notation_by_length() {
        assert_eq!(perm("2341").to_string(), "2341");
        assert_eq!(
            perm("12,13,11,14,9,10,8,15,5,6,4,7,2,3,1").to_string(),
            "12,13,11,14,9,10,8,15,5,6,4,7,2,3,1"
        );
    }
}
