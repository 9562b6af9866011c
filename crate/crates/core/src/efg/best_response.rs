use std::cmp::Ordering;

use thiserror::Error;

use super::tree::ValidatedTree;
use crate::eps::{cmp_lex, EpsPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResponseError {
    #[error("utility vector has {0} entries, tree has {1} sequences")]
    Dimension(usize, usize),
    #[error("sequence lower bounds require more than unit mass at the root")]
    InfeasibleLowerBounds,
}

fn check_dim(t: &ValidatedTree, u: &[EpsPoly]) -> Result<(), ResponseError> {
    if u.len() != t.num_sequences() {
        return Err(ResponseError::Dimension(u.len(), t.num_sequences()));
    }
    Ok(())
}

/// Index of the lexicographically largest entry; ties to the lowest index.
pub(crate) fn argmax(vals: impl IntoIterator<Item = EpsPoly>) -> (usize, EpsPoly) {
    let mut it = vals.into_iter().enumerate();
    let (mut bi, mut bv) = it.next().expect("nonempty");
    for (i, v) in it {
        if cmp_lex(&v, &bv) == Ordering::Greater {
            bi = i;
            bv = v;
        }
    }
    (bi, bv)
}

/// `⟨u, x⟩`.
pub fn inner(u: &[EpsPoly], x: &[EpsPoly]) -> EpsPoly {
    u.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Best response in the perturbed sequence-form polytope `x[ja] ≥ ε·x[p_j]`.
pub fn efpe_best_response(t: &ValidatedTree, u: &[EpsPoly]) -> Result<Vec<EpsPoly>, ResponseError> {
    check_dim(t, u)?;
    let eps = EpsPoly::eps();
    let mut value: Vec<EpsPoly> = u.to_vec();
    let mut local: Vec<EpsPoly> = vec![EpsPoly::zero(); t.num_sequences()];
    for j in t.bottom_up() {
        let dp = t.dp(j);
        let k = dp.actions.len() as i64;
        let (best, _) = argmax(dp.actions.iter().map(|&s| value[s].clone()));
        let top = EpsPoly::from_ints(&[1, -(k - 1)]);
        let mut vj = EpsPoly::zero();
        for (i, &s) in dp.actions.iter().enumerate() {
            local[s] = if i == best { top.clone() } else { eps.clone() };
            vj = &vj + &(&local[s] * &value[s]);
        }
        value[dp.parent] = &value[dp.parent] + &vj;
    }
    Ok(realize(t, &local))
}

fn realize(t: &ValidatedTree, local: &[EpsPoly]) -> Vec<EpsPoly> {
    let mut x = vec![EpsPoly::zero(); t.num_sequences()];
    x[0] = EpsPoly::one();
    for &j in t.top_down() {
        let dp = t.dp(j);
        for &s in &dp.actions {
            x[s] = &x[dp.parent] * &local[s];
        }
    }
    x
}

/// Best response over `{x in the sequence-form polytope : x[σ] ≥ ℓ(σ)}`.
/// Each sequence first receives the smallest mass its subtree's bounds force;
/// the remaining mass at each decision point goes to the action with the
/// largest marginal value.
pub fn lower_bound_best_response(
    t: &ValidatedTree,
    u: &[EpsPoly],
    lower: &[EpsPoly],
) -> Result<Vec<EpsPoly>, ResponseError> {
    check_dim(t, u)?;
    check_dim(t, lower)?;
    let d = t.num_sequences();
    let mut need: Vec<EpsPoly> = lower.to_vec();
    let mut slope: Vec<EpsPoly> = u.to_vec();
    let mut best = vec![0usize; t.decision_points().len()];
    let mut dp_need = vec![EpsPoly::zero(); t.decision_points().len()];
    for j in t.bottom_up() {
        let dp = t.dp(j);
        let (b, bs) = argmax(dp.actions.iter().map(|&s| slope[s].clone()));
        best[j] = b;
        dp_need[j] = dp.actions.iter().map(|&s| need[s].clone()).sum();
        if cmp_lex(&dp_need[j], &need[dp.parent]) == Ordering::Greater {
            need[dp.parent] = dp_need[j].clone();
        }
        slope[dp.parent] = &slope[dp.parent] + &bs;
    }
    if cmp_lex(&need[0], &EpsPoly::one()) == Ordering::Greater {
        return Err(ResponseError::InfeasibleLowerBounds);
    }
    let mut x = vec![EpsPoly::zero(); d];
    x[0] = EpsPoly::one();
    for &j in t.top_down() {
        let dp = t.dp(j);
        let slack = &x[dp.parent] - &dp_need[j];
        for (i, &s) in dp.actions.iter().enumerate() {
            x[s] = if i == best[j] { &need[s] + &slack } else { need[s].clone() };
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::tree::simplex_tree;

    #[test]
    fn efpe_single_decision_point() {
        let t = simplex_tree(2);
        let u = vec![EpsPoly::zero(), EpsPoly::from_ints(&[5]), EpsPoly::from_ints(&[3])];
        let x = efpe_best_response(&t, &u).unwrap();
        assert_eq!(x, vec![EpsPoly::one(), EpsPoly::from_ints(&[1, -1]), EpsPoly::eps()]);
    }

    #[test]
    fn efpe_uniform_prefers_lowest_index() {
        let t = simplex_tree(3);
        let x = efpe_best_response(&t, &vec![EpsPoly::one(); 4]).unwrap();
        assert_eq!(x[1], EpsPoly::from_ints(&[1, -2]));
    }

    #[test]
    fn lower_bounds_match_efpe_on_one_level() {
        let t = simplex_tree(2);
        let u = vec![EpsPoly::zero(), EpsPoly::from_ints(&[1]), EpsPoly::from_ints(&[4])];
        let l = vec![EpsPoly::zero(), EpsPoly::eps(), EpsPoly::eps()];
        assert_eq!(lower_bound_best_response(&t, &u, &l).unwrap(), efpe_best_response(&t, &u).unwrap());
    }

    #[test]
    fn infeasible_lower_bounds() {
        let t = simplex_tree(2);
        let u = vec![EpsPoly::zero(); 3];
        let l = vec![EpsPoly::zero(), EpsPoly::one(), EpsPoly::one()];
        assert_eq!(lower_bound_best_response(&t, &u, &l), Err(ResponseError::InfeasibleLowerBounds));
    }
}
