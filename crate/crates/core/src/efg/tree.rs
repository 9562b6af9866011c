use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("sequence {0} has no parent decision point")]
    OrphanSequence(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionPoint {
    pub label: String,
    /// Parent sequence `p_j`.
    pub parent: usize,
    /// Child sequences `ja`, one per action.
    pub actions: Vec<usize>,
    pub action_labels: Vec<String>,
}

/// Sequences are `0..num_sequences` with `0` the empty sequence ∅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeFormDecisionProblem {
    pub num_sequences: usize,
    pub decision_points: Vec<DecisionPoint>,
}

/// A tree that passed [`validate_tfdp`], with traversal orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedTree {
    tree: TreeFormDecisionProblem,
    parent_dp: Vec<Option<usize>>,
    action_index: Vec<usize>,
    children: Vec<Vec<usize>>,
    top_down: Vec<usize>,
}

pub fn validate_tfdp(t: TreeFormDecisionProblem) -> Result<ValidatedTree, TreeError> {
    let d = t.num_sequences;
    if d == 0 {
        return Err(TreeError::NotATree("no root sequence".into()));
    }
    let mut parent_dp = vec![None; d];
    let mut action_index = vec![0; d];
    let mut children = vec![Vec::new(); d];
    for (j, dp) in t.decision_points.iter().enumerate() {
        if dp.parent >= d {
            return Err(TreeError::NotATree(format!("decision point {j} has unknown parent {}", dp.parent)));
        }
        if dp.actions.is_empty() {
            return Err(TreeError::NotATree(format!("decision point {j} has no actions")));
        }
        if dp.action_labels.len() != dp.actions.len() {
            return Err(TreeError::NotATree(format!("decision point {j} has mismatched labels")));
        }
        children[dp.parent].push(j);
        for (k, &s) in dp.actions.iter().enumerate() {
            if s == 0 || s >= d {
                return Err(TreeError::NotATree(format!("decision point {j} lists invalid sequence {s}")));
            }
            if parent_dp[s].is_some() {
                return Err(TreeError::NotATree(format!("sequence {s} has two parent decision points")));
            }
            parent_dp[s] = Some(j);
            action_index[s] = k;
        }
    }
    if let Some(s) = (1..d).find(|&s| parent_dp[s].is_none()) {
        return Err(TreeError::OrphanSequence(s));
    }
    let mut top_down = Vec::with_capacity(t.decision_points.len());
    let mut stack: Vec<usize> = children[0].iter().rev().copied().collect();
    while let Some(j) = stack.pop() {
        top_down.push(j);
        for &s in t.decision_points[j].actions.iter().rev() {
            stack.extend(children[s].iter().rev());
        }
    }
    if top_down.len() != t.decision_points.len() {
        return Err(TreeError::NotATree("decision points unreachable from the root".into()));
    }
    Ok(ValidatedTree { tree: t, parent_dp, action_index, children, top_down })
}

impl ValidatedTree {
    pub fn num_sequences(&self) -> usize {
        self.tree.num_sequences
    }

    pub fn decision_points(&self) -> &[DecisionPoint] {
        &self.tree.decision_points
    }

    pub fn dp(&self, j: usize) -> &DecisionPoint {
        &self.tree.decision_points[j]
    }

    pub fn raw(&self) -> &TreeFormDecisionProblem {
        &self.tree
    }

    /// Parent decision point of a non-root sequence.
    pub fn parent_dp(&self, s: usize) -> Option<usize> {
        self.parent_dp[s]
    }

    /// Position of sequence `s` among its decision point's actions.
    pub fn action_index(&self, s: usize) -> usize {
        self.action_index[s]
    }

    /// Decision points directly below sequence `s`.
    pub fn children(&self, s: usize) -> &[usize] {
        &self.children[s]
    }

    /// Parents before children.
    pub fn top_down(&self) -> &[usize] {
        &self.top_down
    }

    /// Children before parents.
    pub fn bottom_up(&self) -> impl Iterator<Item = usize> + '_ {
        self.top_down.iter().rev().copied()
    }

    /// Decision points in the subtree rooted at `j`, including `j`.
    pub fn subtree_dps(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![j];
        while let Some(k) = stack.pop() {
            out.push(k);
            for &s in &self.dp(k).actions {
                stack.extend(self.children(s));
            }
        }
        out
    }

    /// Human-readable sequence names: `∅` for the root, `dp:action` otherwise.
    pub fn sequence_names(&self) -> Vec<String> {
        let mut names = vec![String::from("∅"); self.num_sequences()];
        for dp in self.decision_points() {
            for (&s, l) in dp.actions.iter().zip(&dp.action_labels) {
                names[s] = format!("{}:{}", dp.label, l);
            }
        }
        names
    }

    /// 0/1 realization plan of a pure plan choosing action `choice[j]` at every decision point.
    pub fn pure_plan(&self, choice: &[usize]) -> Vec<bool> {
        let mut x = vec![false; self.num_sequences()];
        x[0] = true;
        for &j in self.top_down() {
            let dp = self.dp(j);
            if x[dp.parent] {
                x[dp.actions[choice[j]]] = true;
            }
        }
        x
    }
}

/// Nested description: each sequence lists the decision points that follow it.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct NestedDecision {
    pub label: String,
    pub actions: Vec<NestedAction>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct NestedAction {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub next: Vec<NestedDecision>,
}

/// Builds a tree from the decision points following the root. Sequences are
/// numbered in depth-first order.
pub fn tree_from_nested(root: &[NestedDecision]) -> Result<ValidatedTree, TreeError> {
    let mut t = TreeFormDecisionProblem { num_sequences: 1, decision_points: Vec::new() };
    fn walk(t: &mut TreeFormDecisionProblem, parent: usize, nd: &NestedDecision) {
        let j = t.decision_points.len();
        t.decision_points.push(DecisionPoint {
            label: nd.label.clone(),
            parent,
            actions: Vec::new(),
            action_labels: nd.actions.iter().map(|a| a.label.clone()).collect(),
        });
        let first = t.num_sequences;
        t.num_sequences += nd.actions.len();
        t.decision_points[j].actions = (first..first + nd.actions.len()).collect();
        for (k, a) in nd.actions.iter().enumerate() {
            for child in &a.next {
                walk(t, first + k, child);
            }
        }
    }
    for nd in root {
        walk(&mut t, 0, nd);
    }
    validate_tfdp(t)
}

/// Inverse of [`tree_from_nested`] for trees numbered depth-first.
pub fn tree_to_nested(t: &ValidatedTree) -> Vec<NestedDecision> {
    fn build(t: &ValidatedTree, j: usize) -> NestedDecision {
        let dp = t.dp(j);
        NestedDecision {
            label: dp.label.clone(),
            actions: dp
                .actions
                .iter()
                .zip(&dp.action_labels)
                .map(|(&s, l)| NestedAction {
                    label: l.clone(),
                    next: t.children(s).iter().map(|&k| build(t, k)).collect(),
                })
                .collect(),
        }
    }
    t.children(0).iter().map(|&j| build(t, j)).collect()
}

/// Root with one decision point of `m` actions.
pub fn simplex_tree(m: usize) -> ValidatedTree {
    let nd = NestedDecision {
        label: "d".into(),
        actions: (0..m).map(|k| NestedAction { label: format!("a{k}"), next: Vec::new() }).collect(),
    };
    tree_from_nested(&[nd]).expect("simplex tree is valid")
}

/// `k` independent binary decision points under the root (the hypercube).
pub fn hypercube_tree(k: usize) -> ValidatedTree {
    let nds: Vec<NestedDecision> = (0..k)
        .map(|i| NestedDecision {
            label: format!("b{i}"),
            actions: vec![
                NestedAction { label: "0".into(), next: Vec::new() },
                NestedAction { label: "1".into(), next: Vec::new() },
            ],
        })
        .collect();
    tree_from_nested(&nds).expect("hypercube tree is valid")
}
