use num::{One, Zero};

use super::best_response::{argmax, ResponseError};
use super::tree::ValidatedTree;
use crate::eps::{cmp_lex, EpsPoly, Rat};

/// Pure realization plans sorted by descending utility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningSet {
    /// 0/1 sequence-form vertices `x₀ ≽ x₁ ≽ …`.
    pub vertices: Vec<Vec<Rat>>,
    /// `⟨u, x_i⟩` for each vertex.
    pub values: Vec<EpsPoly>,
    /// Sequence whose constrained best response produced each vertex (0 for ∅).
    pub sources: Vec<usize>,
    pub utility: Vec<EpsPoly>,
}

/// Builds `y^∅` and every `y^σ`: the best pure plan with `y(σ) = 1` that agrees
/// with `y^{p_j}` outside decision point `j`. Duplicate vertices are dropped,
/// keeping the first occurrence, then the list is sorted stably by value.
pub fn optimal_spanning_set(t: &ValidatedTree, u: &[EpsPoly]) -> Result<SpanningSet, ResponseError> {
    if u.len() != t.num_sequences() {
        return Err(ResponseError::Dimension(u.len(), t.num_sequences()));
    }
    let ndp = t.decision_points().len();
    let mut value: Vec<EpsPoly> = u.to_vec();
    let mut best = vec![0usize; ndp];
    for j in t.bottom_up() {
        let dp = t.dp(j);
        let (b, v) = argmax(dp.actions.iter().map(|&s| value[s].clone()));
        best[j] = b;
        value[dp.parent] = &value[dp.parent] + &v;
    }

    let d = t.num_sequences();
    let mut choices: Vec<Option<Vec<usize>>> = vec![None; d];
    choices[0] = Some(best.clone());
    for &j in t.top_down() {
        let dp = t.dp(j);
        let parent = choices[dp.parent].clone().expect("parent assembled first");
        for (a, &s) in dp.actions.iter().enumerate() {
            let mut c = parent.clone();
            for k in t.subtree_dps(j) {
                c[k] = best[k];
            }
            c[j] = a;
            choices[s] = Some(c);
        }
    }

    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let mut sources = Vec::new();
    for (s, c) in choices.iter().enumerate() {
        let plan: Vec<Rat> = t
            .pure_plan(c.as_ref().expect("all sequences assembled"))
            .into_iter()
            .map(|b| if b { Rat::one() } else { Rat::zero() })
            .collect();
        if !vertices.contains(&plan) {
            vertices.push(plan);
            sources.push(s);
        }
    }
    let values: Vec<EpsPoly> = vertices.iter().map(|v| vertex_value(u, v)).collect();
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| cmp_lex(&values[b], &values[a]));
    Ok(SpanningSet {
        vertices: order.iter().map(|&i| vertices[i].clone()).collect(),
        values: order.iter().map(|&i| values[i].clone()).collect(),
        sources: order.iter().map(|&i| sources[i]).collect(),
        utility: u.to_vec(),
    })
}

fn vertex_value(u: &[EpsPoly], v: &[Rat]) -> EpsPoly {
    u.iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| a.scale(c))
        .sum()
}

/// `x₀ + Σ_{i≥1} εⁱ (x_i − x₀)`.
pub fn proper_best_response(s: &SpanningSet) -> Vec<EpsPoly> {
    let x0 = &s.vertices[0];
    (0..x0.len())
        .map(|c| {
            let mut coeffs = vec![x0[c].clone()];
            for xi in &s.vertices[1..] {
                coeffs.push(&xi[c] - &x0[c]);
            }
            EpsPoly::from_coeffs(coeffs)
        })
        .collect()
}
