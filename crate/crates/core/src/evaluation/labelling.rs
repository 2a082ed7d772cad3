//! Grounded labelling of an abstract attack framework.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Largest framework the enumeration oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
    #[serde(rename = "UNDEC")]
    Undec,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "IN" => Ok(Label::In),
            "OUT" => Ok(Label::Out),
            "UNDEC" => Ok(Label::Undec),
            _ => Err(format!("unknown label `{s}`")),
        }
    }
}

/// Nodes `0..n` with, for each node, the list of nodes attacking it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Framework {
    attackers: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new(nodes: usize) -> Self {
        Framework {
            attackers: vec![Vec::new(); nodes],
        }
    }

    /// Builds a framework from `(attacker, target)` pairs.
    pub fn from_edges(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut fw = Framework::new(nodes);
        for (a, t) in edges {
            fw.add_attack(a, t);
        }
        fw
    }

    pub fn add_attack(&mut self, attacker: usize, target: usize) {
        assert!(attacker < self.len() && target < self.len(), "node out of range");
        let list = &mut self.attackers[target];
        if !list.contains(&attacker) {
            list.push(attacker);
        }
    }

    pub fn len(&self) -> usize {
        self.attackers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attackers.is_empty()
    }

    pub fn attackers(&self, node: usize) -> &[usize] {
        &self.attackers[node]
    }

    /// Least fixpoint: repeatedly label IN every node whose attackers are
    /// all OUT and OUT every node with an IN attacker; the rest is UNDEC.
    pub fn grounded(&self) -> Vec<Label> {
        let mut labels: Vec<Option<Label>> = vec![None; self.len()];
        loop {
            let mut changed = false;
            for node in 0..self.len() {
                if labels[node].is_some() {
                    continue;
                }
                let attackers = &self.attackers[node];
                if attackers.iter().all(|&a| labels[a] == Some(Label::Out)) {
                    labels[node] = Some(Label::In);
                    changed = true;
                } else if attackers.iter().any(|&a| labels[a] == Some(Label::In)) {
                    labels[node] = Some(Label::Out);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        labels
            .into_iter()
            .map(|l| l.unwrap_or(Label::Undec))
            .collect()
    }

    /// Enumerates every complete labelling and returns the one with the
    /// fewest IN nodes. A complete labelling is fixed by its IN set, so the
    /// enumeration runs over all subsets of nodes.
    pub fn brute_force(&self) -> Option<Vec<Label>> {
        let n = self.len();
        if n > BRUTE_FORCE_CAP {
            return None;
        }
        let masks: Vec<u32> = self
            .attackers
            .iter()
            .map(|list| list.iter().fold(0u32, |m, &a| m | (1 << a)))
            .collect();
        let mut best: Option<(u32, u32)> = None;
        for in_set in 0u32..(1u32 << n) {
            let count = in_set.count_ones();
            if best.is_some_and(|(_, c)| count >= c) {
                continue;
            }
            let out_set = (0..n).fold(0u32, |m, v| {
                if masks[v] & in_set != 0 {
                    m | (1 << v)
                } else {
                    m
                }
            });
            if in_set & out_set != 0 {
                continue;
            }
            let complete = (0..n).all(|v| {
                let all_out = masks[v] & !out_set == 0;
                if in_set & (1 << v) != 0 {
                    all_out
                } else {
                    out_set & (1 << v) != 0 || !all_out
                }
            });
            if complete {
                best = Some((in_set, count));
            }
        }
        let (in_set, _) = best.expect("the grounded labelling is always complete");
        let out_set = (0..n).fold(0u32, |m, v| {
            if masks[v] & in_set != 0 {
                m | (1 << v)
            } else {
                m
            }
        });
        Some(
            (0..n)
                .map(|v| {
                    if in_set & (1 << v) != 0 {
                        Label::In
                    } else if out_set & (1 << v) != 0 {
                        Label::Out
                    } else {
                        Label::Undec
                    }
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::*;

    #[test]
    fn unattacked_node_is_in() {
        let fw = Framework::new(1);
        assert_eq!(fw.grounded(), [In]);
        assert_eq!(fw.brute_force().unwrap(), [In]);
    }

    #[test]
    fn chain_reinstates() {
        // 2 -> 1 -> 0
        let fw = Framework::from_edges(3, [(2, 1), (1, 0)]);
        assert_eq!(fw.grounded(), [In, Out, In]);
        assert_eq!(fw.brute_force().unwrap(), [In, Out, In]);
    }

    #[test]
    fn even_cycle_is_undecided() {
        let fw = Framework::from_edges(2, [(0, 1), (1, 0)]);
        assert_eq!(fw.grounded(), [Undec, Undec]);
        assert_eq!(fw.brute_force().unwrap(), [Undec, Undec]);
    }

    #[test]
    fn self_attack_is_undecided() {
        let fw = Framework::from_edges(2, [(0, 0), (0, 1)]);
        assert_eq!(fw.grounded(), [Undec, Undec]);
        assert_eq!(fw.brute_force().unwrap(), [Undec, Undec]);
    }

    #[test]
    fn empty_framework() {
        let fw = Framework::new(0);
        assert!(fw.grounded().is_empty());
        assert_eq!(fw.brute_force().unwrap(), Vec::<Label>::new());
    }

    #[test]
    fn brute_force_cap() {
        assert!(Framework::new(BRUTE_FORCE_CAP + 1).brute_force().is_none());
    }
}
