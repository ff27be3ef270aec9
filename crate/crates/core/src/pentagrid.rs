//! The Fibonacci tree spanning a quarter of the pentagrid, and the
//! numeration used to address its nodes.
//!
//! Nodes are numbered from 1 at the root, level by level. A white node has
//! three sons and a black node two; in both cases the leftmost son is black.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Fibonacci numbers with `f_0 = f_1 = 1`.
pub fn fib(n: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

/// Number of nodes on level `n` of the tree (the root is level 0).
pub fn level_size(n: usize) -> u64 {
    fib(2 * n + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    White,
    Black,
}

impl NodeKind {
    /// Kinds of the sons, left to right.
    pub fn sons(self) -> &'static [NodeKind] {
        match self {
            NodeKind::White => &[NodeKind::Black, NodeKind::White, NodeKind::White],
            NodeKind::Black => &[NodeKind::Black, NodeKind::White],
        }
    }

    /// Position among its parent's sons of the son whose coordinate is the
    /// parent's followed by `00`.
    pub fn preferred_position(self) -> usize {
        match self {
            NodeKind::Black => 0,
            NodeKind::White => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            NodeKind::White => 'W',
            NodeKind::Black => 'B',
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::White => "white",
            NodeKind::Black => "black",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibCoordError {
    #[error("coordinate {0:?} is not a non-empty binary string with a leading 1")]
    Malformed(String),
}

/// Binary digits, most significant first. The digit in position `i` from
/// the right weighs `f_{i+1}` (1, 2, 3, 5, 8, …).
///
/// A number may have several representations; [`FibCoord::longest`] picks
/// one of maximal length, the one produced by the greedy algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FibCoord {
    digits: Vec<bool>,
}

impl FibCoord {
    pub fn longest(n: u64) -> Self {
        assert!(n >= 1, "node numbers start at 1");
        let mut weights = vec![];
        let mut i = 1;
        while fib(i) <= n {
            weights.push(fib(i));
            i += 1;
        }
        let mut rest = n;
        let digits = weights
            .iter()
            .rev()
            .map(|&w| {
                let d = w <= rest;
                if d {
                    rest -= w;
                }
                d
            })
            .collect();
        FibCoord { digits }
    }

    pub fn value(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .enumerate()
            .filter(|(_, d)| **d)
            .map(|(i, _)| fib(i + 1))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[bool] {
        &self.digits
    }

    /// The parent's digits followed by two zeros.
    pub fn preferred_son(&self) -> FibCoord {
        let mut digits = self.digits.clone();
        digits.extend([false, false]);
        FibCoord { digits }
    }
}

impl fmt::Display for FibCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            f.write_str(if *d { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for FibCoord {
    type Err = FibCoordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.starts_with('1') || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(FibCoordError::Malformed(s.to_string()));
        }
        Ok(FibCoord {
            digits: s.chars().map(|c| c == '1').collect(),
        })
    }
}

pub fn preferred_son(coord: &FibCoord) -> FibCoord {
    coord.preferred_son()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub number: u64,
    pub kind: NodeKind,
    pub level: usize,
    pub parent: Option<u64>,
    pub sons: Vec<u64>,
    pub coord: FibCoord,
}

/// Breadth-first enumeration of the tree down to a given depth.
#[derive(Debug, Clone)]
pub struct FibonacciTree {
    nodes: Vec<TreeNode>,
    levels: Vec<std::ops::Range<usize>>,
}

impl FibonacciTree {
    pub fn node(&self, number: u64) -> Option<&TreeNode> {
        (number as usize)
            .checked_sub(1)
            .and_then(|i| self.nodes.get(i))
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[TreeNode] {
        &self.nodes[self.levels[n].clone()]
    }

    /// Kinds along level `n` as a word over `a` (white) and `b` (black).
    pub fn level_word(&self, n: usize) -> String {
        self.level(n)
            .iter()
            .map(|node| match node.kind {
                NodeKind::White => 'a',
                NodeKind::Black => 'b',
            })
            .collect()
    }

    /// Sons of `number` whose coordinate is the parent's followed by `00`,
    /// as positions among the sons.
    pub fn preferred_positions(&self, number: u64) -> Vec<usize> {
        let Some(node) = self.node(number) else {
            return vec![];
        };
        let want = node.coord.preferred_son();
        node.sons
            .iter()
            .enumerate()
            .filter(|(_, s)| self.node(**s).is_some_and(|n| n.coord == want))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn enumerate_levels(depth: usize) -> FibonacciTree {
    let mut nodes = vec![TreeNode {
        number: 1,
        kind: NodeKind::White,
        level: 0,
        parent: None,
        sons: vec![],
        coord: FibCoord::longest(1),
    }];
    let mut levels = vec![std::ops::Range { start: 0, end: 1 }];
    for level in 1..=depth {
        let prev = levels[level - 1].clone();
        let start = nodes.len();
        for p in prev {
            let parent_number = nodes[p].number;
            for &kind in nodes[p].kind.sons() {
                let number = nodes.len() as u64 + 1;
                nodes[p].sons.push(number);
                nodes.push(TreeNode {
                    number,
                    kind,
                    level,
                    parent: Some(parent_number),
                    sons: vec![],
                    coord: FibCoord::longest(number),
                });
            }
        }
        levels.push(start..nodes.len());
    }
    FibonacciTree { nodes, levels }
}

/// Prefix of length `k` of the infinite Fibonacci word, the fixed point of
/// `a -> ab, b -> a`.
pub fn fibonacci_word(k: usize) -> String {
    let mut w = String::from("a");
    while w.len() < k {
        w = w
            .chars()
            .map(|c| if c == 'a' { "ab" } else { "a" })
            .collect();
    }
    w.truncate(k);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_numbers() {
        assert_eq!(fib(0), 1);
        assert_eq!(fib(1), 1);
        assert_eq!(fib(5), 8);
        assert_eq!(fib(7), 21);
    }

    #[test]
    fn level_sizes() {
        assert_eq!(level_size(0), 1);
        assert_eq!(level_size(1), 3);
        assert_eq!(level_size(3), 21);
        let tree = enumerate_levels(10);
        for n in 0..=10 {
            assert_eq!(tree.level(n).len() as u64, level_size(n), "level {n}");
        }
    }

    #[test]
    fn longest_representation() {
        assert_eq!(FibCoord::longest(1).to_string(), "1");
        assert_eq!(FibCoord::longest(3).to_string(), "100");
        assert_eq!(FibCoord::longest(4).to_string(), "101");
        assert_eq!(FibCoord::longest(12).to_string(), "10101");
        for n in 1..=10_000 {
            let c = FibCoord::longest(n);
            assert_eq!(c.value(), n);
            assert_eq!(c.to_string().parse::<FibCoord>().unwrap(), c);
        }
        assert!("011".parse::<FibCoord>().is_err());
        assert!("".parse::<FibCoord>().is_err());
    }

    #[test]
    fn numbering_is_breadth_first_and_complete() {
        let tree = enumerate_levels(6);
        for (i, node) in tree.nodes().iter().enumerate() {
            assert_eq!(node.number, i as u64 + 1);
            let expected = if node.level < 6 {
                node.kind.sons().len()
            } else {
                0
            };
            assert_eq!(node.sons.len(), expected);
        }
        assert_eq!(tree.node(1).unwrap().kind, NodeKind::White);
    }

    #[test]
    fn root_preferred_son_is_three() {
        let tree = enumerate_levels(2);
        assert_eq!(preferred_son(&FibCoord::longest(1)).to_string(), "100");
        assert_eq!(tree.node(1).unwrap().sons[1], 3);
        assert_eq!(tree.preferred_positions(1), vec![1]);
    }

    #[test]
    fn fibonacci_word_prefixes() {
        assert_eq!(fibonacci_word(8), "abaababa");
        let long = fibonacci_word(100);
        for k in 1..100 {
            assert!(long.starts_with(&fibonacci_word(k)));
        }
    }
}
