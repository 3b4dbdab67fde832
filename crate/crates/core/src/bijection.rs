//! The completion bijection between `S_n(132)` and `A_{2n+1}(132)`, the q-pattern
//! validity test, and the odd/even length reduction for alternating avoiders.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{standardize_u32, Pattern, Permutation};
use crate::tree::LabeledBinaryTree;

/// The pattern `132`.
pub fn p132() -> Pattern {
    Permutation::from_vec_unchecked(vec![1, 3, 2])
}

fn require_avoids_132(w: &Permutation) -> Result<()> {
    match w.first_occurrence(&p132()) {
        Some(occurrence) => Err(Error::Contains132 {
            perm: w.clone(),
            occurrence,
        }),
        None => Ok(()),
    }
}

/// Maps `w ∈ S_n(132)` to the alternating 132-avoider of length `2n + 1` obtained by
/// completing the shape of its decreasing tree and relabeling canonically.
pub fn phi(w: &Permutation) -> Result<Permutation> {
    require_avoids_132(w)?;
    Ok(phi_unchecked(w))
}

/// `phi` without the 132 check, for callers that generate avoiders themselves.
pub(crate) fn phi_unchecked(w: &Permutation) -> Permutation {
    if w.is_empty() {
        return Permutation::identity(1);
    }
    let tree = LabeledBinaryTree::from_permutation(w).expect("nonempty");
    tree.erase_labels()
        .complete()
        .canonical_label()
        .to_permutation()
        .expect("canonical labeling is decreasing on 1..=2n+1")
}

/// The same map, applied to a pattern.
pub fn phi_pattern(p: &Pattern) -> Result<Pattern> {
    phi(p)
}

/// Standardizes the even-position entries of an alternating 132-avoider of odd length.
pub fn phi_inverse(v: &Permutation) -> Result<Permutation> {
    if v.len().is_multiple_of(2) {
        return Err(Error::WrongParity {
            perm: v.clone(),
            expected: "odd",
        });
    }
    if !v.is_alternating() {
        return Err(Error::NotAlternating(v.clone()));
    }
    require_avoids_132(v)?;
    Ok(even_positions(v))
}

pub(crate) fn even_positions(v: &Permutation) -> Permutation {
    let evens: Vec<u32> = v.entries().iter().skip(1).step_by(2).copied().collect();
    standardize_u32(&evens)
}

/// True iff `q` is contained in `phi(p)` and some occurrence of `p` in `q` avoids
/// every left-to-right-minimum position of `q`.
pub fn validate_q(p: &Pattern, q: &Pattern) -> Result<bool> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let image = phi_pattern(p)?;
    if !image.contains(q) {
        return Ok(false);
    }
    let minima = q.left_to_right_minima();
    Ok(q.occurrences(p).iter().any(|o| o.is_disjoint_from(&minima)))
}

/// A 132-avoiding pattern `p` together with a candidate replacement `q` on the
/// alternating side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternPair {
    pub p: Pattern,
    pub q: Pattern,
    pub valid: bool,
}

impl PatternPair {
    pub fn new(p: Pattern, q: Pattern) -> Result<Self> {
        let valid = validate_q(&p, &q)?;
        Ok(PatternPair { p, q, valid })
    }

    /// `(p, phi(p))`, always valid.
    pub fn with_image(p: Pattern) -> Result<Self> {
        let q = phi_pattern(&p)?;
        PatternPair::new(p, q)
    }
}

/// The three single-pattern families worked out as corollaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CorollaryFamily {
    /// `p = 12···k`, `q = 12···(k+1)`
    #[serde(rename = "12k")]
    Increasing,
    /// `p = 2134···k`, `q = 341256···(k+2)`
    #[serde(rename = "21k")]
    TwoOneThree,
    /// `p = k(k-1)···1`, `q = phi(p)` with its final 1 removed
    #[serde(rename = "k21")]
    Decreasing,
}

impl CorollaryFamily {
    pub const ALL: [CorollaryFamily; 3] = [
        CorollaryFamily::Increasing,
        CorollaryFamily::TwoOneThree,
        CorollaryFamily::Decreasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorollaryFamily::Increasing => "12k",
            CorollaryFamily::TwoOneThree => "21k",
            CorollaryFamily::Decreasing => "k21",
        }
    }

    pub fn min_k(self) -> usize {
        match self {
            CorollaryFamily::Increasing => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CorollaryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorollaryFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "12k" => Ok(CorollaryFamily::Increasing),
            "21k" => Ok(CorollaryFamily::TwoOneThree),
            "k21" => Ok(CorollaryFamily::Decreasing),
            other => Err(Error::OutOfDomain(format!(
                "unknown corollary family {other:?} (expected 12k, 21k or k21)"
            ))),
        }
    }
}

/// The `(p, q)` pair of a corollary family at parameter `k`, checked with [`validate_q`].
pub fn corollary_q(family: CorollaryFamily, k: usize) -> Result<PatternPair> {
    if k < family.min_k() {
        return Err(Error::OutOfDomain(format!(
            "family {family} needs k >= {}, got {k}",
            family.min_k()
        )));
    }
    let kk = k as u32;
    let (p, q) = match family {
        CorollaryFamily::Increasing => (Permutation::identity(k), Permutation::identity(k + 1)),
        CorollaryFamily::TwoOneThree => {
            let p: Vec<u32> = [2, 1].into_iter().chain(3..=kk).collect();
            let q: Vec<u32> = [3, 4, 1, 2].into_iter().chain(5..=kk + 2).collect();
            (
                Permutation::from_vec_unchecked(p),
                Permutation::from_vec_unchecked(q),
            )
        }
        CorollaryFamily::Decreasing => {
            let p = Permutation::decreasing(k);
            let image = phi_unchecked(&p);
            let head = &image.entries()[..image.len() - 1];
            (p, standardize_u32(head))
        }
    };
    let pair = PatternPair::new(p, q)?;
    if !pair.valid {
        return Err(Error::InvalidPair {
            p: pair.p,
            q: pair.q,
        });
    }
    Ok(pair)
}

fn require_alternating_avoider(w: &Permutation, expected: &'static str, odd: bool) -> Result<()> {
    if (w.len() % 2 == 1) != odd {
        return Err(Error::WrongParity {
            perm: w.clone(),
            expected,
        });
    }
    if !w.is_alternating() {
        return Err(Error::NotAlternating(w.clone()));
    }
    require_avoids_132(w)
}

/// Drops the trailing 1 of `w ∈ A_{2n+1}(132)` and decrements the rest.
pub fn shrink_odd_to_even(w: &Permutation) -> Result<Permutation> {
    if w.len().is_multiple_of(2) {
        return Err(Error::WrongParity {
            perm: w.clone(),
            expected: "odd",
        });
    }
    if w.entries().last() != Some(&1) {
        return Err(Error::MissingTrailingOne(w.clone()));
    }
    require_alternating_avoider(w, "odd", true)?;
    Ok(shrink_unchecked(w))
}

pub(crate) fn shrink_unchecked(w: &Permutation) -> Permutation {
    let e = w.entries();
    Permutation::from_vec_unchecked(e[..e.len() - 1].iter().map(|v| v - 1).collect())
}

/// Increments every entry of `w ∈ A_{2n}(132)` and appends a 1.
pub fn grow_even_to_odd(w: &Permutation) -> Result<Permutation> {
    require_alternating_avoider(w, "even", false)?;
    Ok(append_one(w))
}

fn append_one(w: &Permutation) -> Permutation {
    let mut e: Vec<u32> = w.entries().iter().map(|v| v + 1).collect();
    e.push(1);
    Permutation::from_vec_unchecked(e)
}

/// Even-side counterpart of an odd-side pattern: a trailing 1 is stripped and the
/// rest decremented; other patterns are unchanged. `1` reduces to the empty pattern.
pub fn reduce_pattern_for_even(p: &Pattern) -> Pattern {
    if p.entries().last() == Some(&1) {
        shrink_unchecked(p)
    } else {
        p.clone()
    }
}

/// Odd-side pattern that reduces to `p`: every entry incremented and a 1 appended.
pub fn lift_pattern_for_odd(p: &Pattern) -> Pattern {
    append_one(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_permutation;

    fn perm(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    #[test]
    fn phi_golden_values() {
        assert_eq!(phi(&perm("2341")).unwrap(), perm("675849231"));
        assert_eq!(
            phi(&perm("5647231")).unwrap(),
            perm("12,13,11,14,9,10,8,15,5,6,4,7,2,3,1")
        );
        assert_eq!(phi(&Permutation::empty()).unwrap(), perm("1"));
    }

    #[test]
    fn phi_rejects_132_with_occurrence() {
        match phi(&perm("132")) {
            Err(Error::Contains132 { occurrence, .. }) => {
                assert_eq!(occurrence.positions(), &[1, 2, 3])
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(phi(&perm("2413")), Err(Error::Contains132 { .. })));
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(&perm("675849231")).unwrap(), perm("2341"));
        assert_eq!(phi_inverse(&perm("1")).unwrap(), Permutation::empty());
        assert_eq!(phi_inverse(&perm("896734251")).unwrap(), perm("4312"));
    }

    #[test]
    fn phi_inverse_rejections() {
        assert!(matches!(
            phi_inverse(&perm("12")),
            Err(Error::WrongParity { .. })
        ));
        assert!(matches!(
            phi_inverse(&perm("213")),
            Err(Error::NotAlternating(_))
        ));
        assert!(matches!(
            phi_inverse(&perm("13254")),
            Err(Error::Contains132 { .. })
        ));
    }

    #[test]
    fn phi_pattern_examples() {
        assert_eq!(phi_pattern(&perm("4312")).unwrap(), perm("896734251"));
        assert_eq!(phi_pattern(&perm("21")).unwrap(), perm("45231"));
        assert_eq!(phi_pattern(&perm("12")).unwrap(), perm("34251"));
    }

    #[test]
    fn validate_q_examples() {
        assert!(validate_q(&perm("12"), &perm("123")).unwrap());
        assert!(validate_q(&perm("21"), &perm("3412")).unwrap());
        assert!(!validate_q(&perm("12"), &perm("12")).unwrap());
        // not contained in phi(21) = 45231
        assert!(!validate_q(&perm("21"), &perm("123")).unwrap());
        assert!(matches!(
            validate_q(&perm("132"), &perm("1")),
            Err(Error::Contains132 { .. })
        ));
        assert_eq!(
            validate_q(&Permutation::empty(), &perm("1")),
            Err(Error::EmptyPattern)
        );
    }

    #[test]
    fn corollary_pairs() {
        let pair = corollary_q(CorollaryFamily::Decreasing, 2).unwrap();
        assert_eq!((pair.p, pair.q), (perm("21"), perm("3412")));
        let pair = corollary_q(CorollaryFamily::TwoOneThree, 3).unwrap();
        assert_eq!((pair.p, pair.q), (perm("213"), perm("34125")));
        let pair = corollary_q(CorollaryFamily::Increasing, 1).unwrap();
        assert_eq!((pair.p, pair.q), (perm("1"), perm("12")));
        assert!(pair.valid);
        let pair = corollary_q(CorollaryFamily::Decreasing, 3).unwrap();
        assert_eq!(pair.q, perm("563412"));
        let pair = corollary_q(CorollaryFamily::TwoOneThree, 2).unwrap();
        assert_eq!((pair.p, pair.q), (perm("21"), perm("3412")));
    }

    #[test]
    fn corollary_k_range() {
        assert!(corollary_q(CorollaryFamily::Increasing, 0).is_err());
        assert!(corollary_q(CorollaryFamily::TwoOneThree, 1).is_err());
        assert!(corollary_q(CorollaryFamily::Decreasing, 1).is_err());
        for family in CorollaryFamily::ALL {
            for k in family.min_k()..=5 {
                assert!(corollary_q(family, k).unwrap().valid, "{family} {k}");
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in CorollaryFamily::ALL {
            assert_eq!(family.name().parse::<CorollaryFamily>().unwrap(), family);
        }
        assert!("123k".parse::<CorollaryFamily>().is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(shrink_odd_to_even(&perm("231")).unwrap(), perm("12"));
        assert_eq!(shrink_odd_to_even(&perm("34251")).unwrap(), perm("2314"));
        assert_eq!(
            shrink_odd_to_even(&perm("1")).unwrap(),
            Permutation::empty()
        );
        assert_eq!(grow_even_to_odd(&perm("12")).unwrap(), perm("231"));
        assert_eq!(grow_even_to_odd(&Permutation::empty()).unwrap(), perm("1"));
        assert_eq!(grow_even_to_odd(&perm("2314")).unwrap(), perm("34251"));
    }

    #[test]
    fn parity_rejections() {
        assert!(matches!(
            shrink_odd_to_even(&perm("12")),
            Err(Error::WrongParity { .. })
        ));
        assert!(matches!(
            shrink_odd_to_even(&perm("132")),
            Err(Error::MissingTrailingOne(_))
        ));
        assert!(matches!(
            shrink_odd_to_even(&perm("321")),
            Err(Error::NotAlternating(_))
        ));
        assert!(matches!(
            grow_even_to_odd(&perm("123")),
            Err(Error::WrongParity { .. })
        ));
        assert!(matches!(
            grow_even_to_odd(&perm("1324")),
            Err(Error::Contains132 { .. })
        ));
    }

    #[test]
    fn pattern_reduction() {
        assert_eq!(reduce_pattern_for_even(&perm("231")), perm("12"));
        assert_eq!(reduce_pattern_for_even(&perm("3412")), perm("3412"));
        assert_eq!(reduce_pattern_for_even(&perm("1")), Permutation::empty());
        assert_eq!(lift_pattern_for_odd(&perm("12")), perm("231"));
        assert_eq!(
            reduce_pattern_for_even(&lift_pattern_for_odd(&perm("3412"))),
            perm("3412")
        );
    }
}
