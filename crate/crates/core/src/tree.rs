//! Decreasing binary trees, label erasure, completion and canonical labeling.
//!
//! Text dumps use `(left)N(right)` with `·` for an absent child, where `N` is the
//! label (or `o` for an unlabeled node). The empty tree dumps as `·`.
//! JSON dumps are nested `{"left": .., "right": ..}` objects (plus `"label"` when
//! labeled) with `null` for absent children; the empty tree is `null`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

const ABSENT: &str = "·";

/// Unlabeled node of a [`BinaryTree`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Node {
    pub left: Option<Box<Node>>,
    pub right: Option<Box<Node>>,
}

impl Node {
    pub fn leaf() -> Box<Node> {
        Box::default()
    }

    pub fn with(left: Option<Box<Node>>, right: Option<Box<Node>>) -> Box<Node> {
        Box::new(Node { left, right })
    }

    fn size(&self) -> usize {
        1 + subtree_size(&self.left) + subtree_size(&self.right)
    }

    fn is_leaf(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }
}

fn subtree_size(node: &Option<Box<Node>>) -> usize {
    node.as_ref().map_or(0, |n| n.size())
}

/// Finite unlabeled rooted binary tree; equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    pub root: Option<Box<Node>>,
}

impl BinaryTree {
    pub fn empty() -> Self {
        BinaryTree { root: None }
    }

    pub fn single() -> Self {
        BinaryTree {
            root: Some(Node::leaf()),
        }
    }

    pub fn from_root(root: Box<Node>) -> Self {
        BinaryTree { root: Some(root) }
    }

    pub fn size(&self) -> usize {
        subtree_size(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// No node has exactly one child. The empty tree counts as complete.
    pub fn is_complete(&self) -> bool {
        fn check(node: &Node) -> bool {
            match (&node.left, &node.right) {
                (None, None) => true,
                (Some(l), Some(r)) => check(l) && check(r),
                _ => false,
            }
        }
        self.root.as_deref().is_none_or(check)
    }

    /// Gives every node two children by attaching new leaves; `2n + 1` nodes result.
    pub fn complete(&self) -> BinaryTree {
        fn fill(node: &Option<Box<Node>>) -> Box<Node> {
            match node {
                None => Node::leaf(),
                Some(n) => Node::with(Some(fill(&n.left)), Some(fill(&n.right))),
            }
        }
        BinaryTree::from_root(fill(&self.root))
    }

    /// Removes every leaf of a complete tree; inverse of [`BinaryTree::complete`].
    pub fn prune_leaves(&self) -> Result<BinaryTree> {
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        fn prune(node: &Node) -> Option<Box<Node>> {
            if node.is_leaf() {
                return None;
            }
            Some(Node::with(
                node.left.as_deref().and_then(prune),
                node.right.as_deref().and_then(prune),
            ))
        }
        Ok(BinaryTree {
            root: self.root.as_deref().and_then(prune),
        })
    }

    /// The unique decreasing labeling in which, at every node, each label in the
    /// left subtree exceeds each label in the right subtree.
    ///
    /// A subtree of size `s` drawing on labels `base+1..=base+s` puts `base+s` at its
    /// root, `base+1..=base+R` on its right subtree (`R` nodes) and the rest on the left.
    pub fn canonical_label(&self) -> LabeledBinaryTree {
        fn label(node: &Node, base: u32) -> Box<LabeledNode> {
            let right_size = subtree_size(&node.right) as u32;
            let size = node.size() as u32;
            Box::new(LabeledNode {
                label: base + size,
                left: node.left.as_deref().map(|l| label(l, base + right_size)),
                right: node.right.as_deref().map(|r| label(r, base)),
            })
        }
        LabeledBinaryTree {
            root: self.root.as_deref().map(|r| label(r, 0)),
        }
    }

    /// Every shape with `n` nodes.
    pub fn all_of_size(n: usize) -> Vec<BinaryTree> {
        fn shapes(n: usize) -> Vec<Option<Box<Node>>> {
            if n == 0 {
                return vec![None];
            }
            let mut out = Vec::new();
            for left in 0..n {
                let right = n - 1 - left;
                let rs = shapes(right);
                for l in shapes(left) {
                    for r in &rs {
                        out.push(Some(Node::with(l.clone(), r.clone())));
                    }
                }
            }
            out
        }
        shapes(n)
            .into_iter()
            .map(|root| BinaryTree { root })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.root).expect("tree serializes")
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write(node: Option<&Node>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            dump(
                node,
                f,
                |_, f| f.write_str("o"),
                |n| (n.left.as_deref(), n.right.as_deref()),
                write,
            )
        }
        write(self.root.as_deref(), f)
    }
}

type Children<'a, N> = (Option<&'a N>, Option<&'a N>);

/// `(left)N(right)`, or `·` for an absent node.
fn dump<'a, N>(
    node: Option<&'a N>,
    f: &mut fmt::Formatter<'_>,
    label: impl Fn(&N, &mut fmt::Formatter<'_>) -> fmt::Result,
    children: impl Fn(&'a N) -> Children<'a, N>,
    recurse: fn(Option<&'a N>, &mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    match node {
        None => f.write_str(ABSENT),
        Some(n) => {
            let (l, r) = children(n);
            f.write_str("(")?;
            recurse(l, f)?;
            f.write_str(")")?;
            label(n, f)?;
            f.write_str("(")?;
            recurse(r, f)?;
            f.write_str(")")
        }
    }
}

/// Node of a [`LabeledBinaryTree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LabeledNode {
    pub label: u32,
    pub left: Option<Box<LabeledNode>>,
    pub right: Option<Box<LabeledNode>>,
}

impl LabeledNode {
    pub fn new(
        label: u32,
        left: Option<Box<LabeledNode>>,
        right: Option<Box<LabeledNode>>,
    ) -> Box<LabeledNode> {
        Box::new(LabeledNode { label, left, right })
    }

    pub fn leaf(label: u32) -> Box<LabeledNode> {
        LabeledNode::new(label, None, None)
    }

    fn size(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |n| n.size()) + self.right.as_ref().map_or(0, |n| n.size())
    }
}

/// Binary tree with labels `1..=n`, decreasing from root to leaves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabeledBinaryTree {
    pub root: Option<Box<LabeledNode>>,
}

impl LabeledBinaryTree {
    /// Root is the maximum entry; left subtree from the prefix before it, right
    /// subtree from the suffix after it.
    pub fn from_permutation(w: &Permutation) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInput);
        }
        fn build(values: &[u32]) -> Option<Box<LabeledNode>> {
            let (k, &max) = values.iter().enumerate().max_by_key(|&(_, v)| *v)?;
            Some(LabeledNode::new(
                max,
                build(&values[..k]),
                build(&values[k + 1..]),
            ))
        }
        Ok(LabeledBinaryTree {
            root: build(w.entries()),
        })
    }

    pub fn size(&self) -> usize {
        self.root.as_ref().map_or(0, |n| n.size())
    }

    /// Symmetric-order readout; inverse of [`LabeledBinaryTree::from_permutation`].
    pub fn to_permutation(&self) -> Result<Permutation> {
        if !self.is_decreasing() {
            return Err(Error::NotDecreasing);
        }
        let mut out = Vec::with_capacity(self.size());
        fn walk(node: &Option<Box<LabeledNode>>, out: &mut Vec<u32>) {
            if let Some(n) = node {
                walk(&n.left, out);
                out.push(n.label);
                walk(&n.right, out);
            }
        }
        walk(&self.root, &mut out);
        Permutation::new(out).map_err(|_| Error::BadLabels)
    }

    pub fn is_decreasing(&self) -> bool {
        fn check(node: &LabeledNode) -> bool {
            [&node.left, &node.right]
                .into_iter()
                .flatten()
                .all(|c| c.label < node.label && check(c))
        }
        self.root.as_deref().is_none_or(check)
    }

    /// At every node, each left-subtree label exceeds each right-subtree label.
    pub fn left_exceeds_right(&self) -> bool {
        // (min, max) of the subtree, or None once the property fails somewhere below
        fn span(node: &LabeledNode) -> Option<(u32, u32)> {
            let left = match node.left.as_deref() {
                Some(c) => Some(span(c)?),
                None => None,
            };
            let right = match node.right.as_deref() {
                Some(c) => Some(span(c)?),
                None => None,
            };
            if let (Some(l), Some(r)) = (left, right) {
                if l.0 <= r.1 {
                    return None;
                }
            }
            let (mut lo, mut hi) = (node.label, node.label);
            for (a, b) in left.into_iter().chain(right) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
            Some((lo, hi))
        }
        self.root.as_deref().is_none_or(|r| span(r).is_some())
    }

    pub fn erase_labels(&self) -> BinaryTree {
        fn erase(node: &LabeledNode) -> Box<Node> {
            Node::with(
                node.left.as_deref().map(erase),
                node.right.as_deref().map(erase),
            )
        }
        BinaryTree {
            root: self.root.as_deref().map(erase),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.root).expect("tree serializes")
    }
}

impl fmt::Display for LabeledBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write(node: Option<&LabeledNode>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            dump(
                node,
                f,
                |n, f| write!(f, "{}", n.label),
                |n| (n.left.as_deref(), n.right.as_deref()),
                write,
            )
        }
        write(self.root.as_deref(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_permutation;

    fn perm(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    fn fig1_labeled() -> LabeledBinaryTree {
        LabeledBinaryTree {
            root: Some(LabeledNode::new(
                4,
                Some(LabeledNode::new(3, Some(LabeledNode::leaf(2)), None)),
                Some(LabeledNode::leaf(1)),
            )),
        }
    }

    fn fig1_shape() -> BinaryTree {
        BinaryTree::from_root(Node::with(
            Some(Node::with(Some(Node::leaf()), None)),
            Some(Node::leaf()),
        ))
    }

    fn fig1_completed_labeled() -> LabeledBinaryTree {
        let l = LabeledNode::leaf;
        LabeledBinaryTree {
            root: Some(LabeledNode::new(
                9,
                Some(LabeledNode::new(
                    8,
                    Some(LabeledNode::new(7, Some(l(6)), Some(l(5)))),
                    Some(l(4)),
                )),
                Some(LabeledNode::new(3, Some(l(2)), Some(l(1)))),
            )),
        }
    }

    fn three_node_complete() -> BinaryTree {
        BinaryTree::from_root(Node::with(Some(Node::leaf()), Some(Node::leaf())))
    }

    #[test]
    fn builds_decreasing_trees() {
        assert_eq!(
            LabeledBinaryTree::from_permutation(&perm("2341")).unwrap(),
            fig1_labeled()
        );
        assert_eq!(
            LabeledBinaryTree::from_permutation(&perm("1"))
                .unwrap()
                .root,
            Some(LabeledNode::leaf(1))
        );
        assert_eq!(
            LabeledBinaryTree::from_permutation(&perm("21"))
                .unwrap()
                .root,
            Some(LabeledNode::new(2, None, Some(LabeledNode::leaf(1))))
        );
        assert_eq!(
            LabeledBinaryTree::from_permutation(&Permutation::empty()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn reads_trees_back() {
        assert_eq!(
            fig1_completed_labeled().to_permutation().unwrap(),
            perm("675849231")
        );
        let single = LabeledBinaryTree {
            root: Some(LabeledNode::leaf(1)),
        };
        assert_eq!(single.to_permutation().unwrap(), perm("1"));
        let two = LabeledBinaryTree {
            root: Some(LabeledNode::new(2, None, Some(LabeledNode::leaf(1)))),
        };
        assert_eq!(two.to_permutation().unwrap(), perm("21"));
    }

    #[test]
    fn rejects_bad_labelings() {
        let rising = LabeledBinaryTree {
            root: Some(LabeledNode::new(1, Some(LabeledNode::leaf(2)), None)),
        };
        assert_eq!(rising.to_permutation(), Err(Error::NotDecreasing));
        let gap = LabeledBinaryTree {
            root: Some(LabeledNode::new(5, Some(LabeledNode::leaf(2)), None)),
        };
        assert_eq!(gap.to_permutation(), Err(Error::BadLabels));
    }

    #[test]
    fn erases_labels() {
        assert_eq!(fig1_labeled().erase_labels(), fig1_shape());
        let single = LabeledBinaryTree {
            root: Some(LabeledNode::leaf(1)),
        };
        assert_eq!(single.erase_labels(), BinaryTree::single());
        let two = LabeledBinaryTree::from_permutation(&perm("21")).unwrap();
        assert_eq!(
            two.erase_labels(),
            BinaryTree::from_root(Node::with(None, Some(Node::leaf())))
        );
    }

    #[test]
    fn canonical_labels() {
        let completed = fig1_shape().complete();
        assert_eq!(completed.canonical_label(), fig1_completed_labeled());
        assert_eq!(
            BinaryTree::single().canonical_label().root,
            Some(LabeledNode::leaf(1))
        );
        assert_eq!(
            three_node_complete().canonical_label().root,
            Some(LabeledNode::new(
                3,
                Some(LabeledNode::leaf(2)),
                Some(LabeledNode::leaf(1))
            ))
        );
        assert_eq!(BinaryTree::empty().canonical_label().root, None);
    }

    #[test]
    fn completes_and_prunes() {
        assert_eq!(BinaryTree::empty().complete(), BinaryTree::single());
        assert_eq!(
            fig1_shape().complete(),
            fig1_completed_labeled().erase_labels()
        );
        let chain =
            BinaryTree::from_root(Node::with(Some(Node::with(Some(Node::leaf()), None)), None));
        let c = chain.complete();
        assert_eq!(c.size(), 7);
        assert!(c.is_complete());

        assert_eq!(
            BinaryTree::single().prune_leaves().unwrap(),
            BinaryTree::empty()
        );
        assert_eq!(
            fig1_completed_labeled()
                .erase_labels()
                .prune_leaves()
                .unwrap(),
            fig1_shape()
        );
        assert_eq!(
            three_node_complete().prune_leaves().unwrap(),
            BinaryTree::single()
        );
        assert_eq!(chain.prune_leaves(), Err(Error::NotComplete));
    }

    #[test]
    fn completeness() {
        assert!(BinaryTree::single().is_complete());
        assert!(BinaryTree::empty().is_complete());
        assert!(!BinaryTree::from_root(Node::with(Some(Node::leaf()), None)).is_complete());
        assert!(fig1_completed_labeled().erase_labels().is_complete());
    }

    #[test]
    fn left_exceeds_right_detects_violations() {
        assert!(fig1_completed_labeled().left_exceeds_right());
        // 132 itself: root 3, left 1, right 2
        let t = LabeledBinaryTree::from_permutation(&perm("132")).unwrap();
        assert!(!t.left_exceeds_right());
        // violation two levels down
        let t = LabeledBinaryTree::from_permutation(&perm("51324")).unwrap();
        assert!(!t.left_exceeds_right());
    }

    #[test]
    fn text_dumps() {
        assert_eq!(fig1_labeled().to_string(), "(((·)2(·))3(·))4((·)1(·))");
        assert_eq!(
            LabeledBinaryTree {
                root: Some(LabeledNode::leaf(1))
            }
            .to_string(),
            "(·)1(·)"
        );
        assert_eq!(fig1_shape().to_string(), "(((·)o(·))o(·))o((·)o(·))");
        assert_eq!(BinaryTree::empty().to_string(), "·");
    }

    #[test]
    fn json_dumps() {
        let j = LabeledBinaryTree::from_permutation(&perm("21"))
            .unwrap()
            .to_json();
        assert_eq!(
            j,
            serde_json::json!({"label": 2, "left": null, "right": {"label": 1, "left": null, "right": null}})
        );
        assert_eq!(BinaryTree::empty().to_json(), serde_json::Value::Null);
    }

    #[test]
    fn shape_counts_are_catalan() {
        let counts: Vec<usize> = (0..7).map(|n| BinaryTree::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
    }
}
