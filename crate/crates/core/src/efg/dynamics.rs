//! Symbolic best-response dynamics over sequence-form strategies.

use std::cmp::Ordering;

use serde_json::json;
use thiserror::Error;

use super::best_response::{efpe_best_response, inner, lower_bound_best_response, ResponseError};
use super::spanning::{optimal_spanning_set, proper_best_response};
use super::tree::ValidatedTree;
use crate::circuit::{eval_symbolic_with_bound, multilinear_degree_bound, CircuitError, MultilinearCircuit};
use crate::dynamics::Termination;
use crate::eps::{cmp_lex, EpsPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EfgError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("player {player}: potential expects {expected} coordinates, tree has {got} sequences")]
    ShapeMismatch { player: usize, expected: usize, got: usize },
    #[error("player order is not a permutation of the players")]
    BadOrder,
    #[error("lower bounds missing for player {0}")]
    MissingLowerBounds(usize),
    #[error("potential did not increase at step {0}")]
    PotentialNotIncreasing(usize),
}

/// Potential game whose player `i` picks a point of its tree's sequence-form
/// polytope. Circuit input `(i, σ)` reads coordinate `x_i[σ]`.
#[derive(Clone, Debug)]
pub struct EfgGame {
    trees: Vec<ValidatedTree>,
    potential: MultilinearCircuit,
}

impl EfgGame {
    pub fn new(trees: Vec<ValidatedTree>, potential: MultilinearCircuit) -> Result<Self, EfgError> {
        let acts = potential.actions();
        if acts.len() != trees.len() {
            return Err(EfgError::ShapeMismatch { player: acts.len().min(trees.len()), expected: acts.len(), got: trees.len() });
        }
        for (i, t) in trees.iter().enumerate() {
            if acts[i] != t.num_sequences() {
                return Err(EfgError::ShapeMismatch { player: i, expected: acts[i], got: t.num_sequences() });
            }
        }
        Ok(EfgGame { trees, potential })
    }

    pub fn num_players(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[ValidatedTree] {
        &self.trees
    }

    pub fn potential(&self) -> &MultilinearCircuit {
        &self.potential
    }

    pub fn potential_at(&self, x: &[Vec<EpsPoly>]) -> EpsPoly {
        eval_symbolic_with_bound(&self.potential, x, multilinear_degree_bound(x))
    }

    /// `u[σ] = Φ(e_σ, x₋ᵢ) − Φ(0, x₋ᵢ)`, so that `Φ(x) = ⟨u, x_i⟩ + Φ(0, x₋ᵢ)`.
    pub fn utility_vector(&self, x: &[Vec<EpsPoly>], player: usize) -> Vec<EpsPoly> {
        let d = self.trees[player].num_sequences();
        let mut y = x.to_vec();
        y[player] = vec![EpsPoly::zero(); d];
        let bound = multilinear_degree_bound(&y);
        let base = eval_symbolic_with_bound(&self.potential, &y, bound);
        (0..d)
            .map(|s| {
                y[player][s] = EpsPoly::one();
                let v = eval_symbolic_with_bound(&self.potential, &y, bound);
                y[player][s] = EpsPoly::zero();
                &v - &base
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EfgScheme {
    /// Proper best response built from an optimal spanning set.
    NormalFormProper,
    /// Behavioral trembles `x[ja] ≥ ε·x[p_j]`.
    Efpe,
    /// `x_i[σ] ≥ ℓ_i(σ)`, one bound vector per player.
    LowerBound(Vec<Vec<EpsPoly>>),
}

#[derive(Clone, Debug)]
pub struct EfgConfig {
    pub scheme: EfgScheme,
    pub player_order: Vec<usize>,
    pub max_steps: Option<usize>,
    /// Responses are built in `ε^c` instead of `ε`.
    pub eps_power: usize,
    pub trace: bool,
}

impl EfgConfig {
    pub fn new(scheme: EfgScheme, n: usize) -> Self {
        EfgConfig { scheme, player_order: (0..n).collect(), max_steps: None, eps_power: 1, trace: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfgTraceStep {
    pub step: usize,
    pub player: usize,
    pub strategy: Vec<EpsPoly>,
    pub potential: EpsPoly,
}

impl EfgTraceStep {
    pub fn to_json_line(&self) -> String {
        json!({
            "step": self.step,
            "player": self.player,
            "strategy": self.strategy.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "potential": self.potential.to_string(),
        })
        .to_string()
    }
}

#[derive(Clone, Debug)]
pub struct EfgResult {
    pub profile: Vec<Vec<EpsPoly>>,
    pub steps: usize,
    pub sweeps: usize,
    pub trace: Vec<EfgTraceStep>,
    pub termination: Termination,
    pub potential: EpsPoly,
}

impl EfgResult {
    /// Each player's strategy at `ε = 0`.
    pub fn limit(&self) -> Vec<Vec<crate::eps::Rat>> {
        self.profile.iter().map(|x| x.iter().map(|p| p.coeff(0)).collect()).collect()
    }
}

/// The scheme's best response for `player` against utility vector `u`.
pub fn scheme_response(
    t: &ValidatedTree,
    u: &[EpsPoly],
    scheme: &EfgScheme,
    player: usize,
    eps_power: usize,
) -> Result<Vec<EpsPoly>, EfgError> {
    let x = match scheme {
        EfgScheme::NormalFormProper => proper_best_response(&optimal_spanning_set(t, u)?),
        EfgScheme::Efpe => efpe_best_response(t, u)?,
        EfgScheme::LowerBound(l) => {
            let li = l.get(player).ok_or(EfgError::MissingLowerBounds(player))?;
            return Ok(lower_bound_best_response(t, u, li)?);
        }
    };
    Ok(if eps_power == 1 { x } else { x.iter().map(|p| p.compose_power(eps_power)).collect() })
}

/// Starting profile: every player's response to a zero utility vector.
pub fn default_start(g: &EfgGame, cfg: &EfgConfig) -> Result<Vec<Vec<EpsPoly>>, EfgError> {
    g.trees
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let zero = vec![EpsPoly::zero(); t.num_sequences()];
            scheme_response(t, &zero, &cfg.scheme, i, cfg.eps_power)
        })
        .collect()
}

pub fn run_efg_dynamics(g: &EfgGame, start: Option<Vec<Vec<EpsPoly>>>, cfg: &EfgConfig) -> Result<EfgResult, EfgError> {
    let n = g.num_players();
    let mut seen = vec![false; n];
    if cfg.player_order.len() != n || cfg.player_order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(EfgError::BadOrder);
    }
    let mut x = match start {
        Some(s) => s,
        None => default_start(g, cfg)?,
    };
    for (i, t) in g.trees.iter().enumerate() {
        if x.get(i).map(Vec::len) != Some(t.num_sequences()) {
            return Err(EfgError::ShapeMismatch { player: i, expected: t.num_sequences(), got: x.get(i).map_or(0, Vec::len) });
        }
    }
    let mut potential = g.potential_at(&x);
    let mut steps = 0;
    let mut sweeps = 0;
    let mut trace = Vec::new();
    loop {
        sweeps += 1;
        let mut moved = false;
        for &i in &cfg.player_order {
            let u = g.utility_vector(&x, i);
            let br = scheme_response(&g.trees[i], &u, &cfg.scheme, i, cfg.eps_power)?;
            if cmp_lex(&inner(&u, &br), &inner(&u, &x[i])) != Ordering::Greater {
                continue;
            }
            if cfg.max_steps.is_some_and(|cap| steps >= cap) {
                return Ok(EfgResult { profile: x, steps, sweeps, trace, termination: Termination::StepCapHit, potential });
            }
            x[i] = br;
            steps += 1;
            moved = true;
            let next = g.potential_at(&x);
            if cmp_lex(&next, &potential) != Ordering::Greater {
                return Err(EfgError::PotentialNotIncreasing(steps));
            }
            potential = next;
            if cfg.trace {
                trace.push(EfgTraceStep { step: steps, player: i, strategy: x[i].clone(), potential: potential.clone() });
            }
        }
        if !moved {
            return Ok(EfgResult { profile: x, steps, sweeps, trace, termination: Termination::Converged, potential });
        }
    }
}

/// Two players with one decision point each; `Φ = Σ A[a][b]·x₁[a+1]·x₂[b+1]`.
pub fn bimatrix_efg(a: &[Vec<i64>]) -> EfgGame {
    use super::tree::simplex_tree;
    use crate::circuit::CircuitBuilder;
    let (r, c) = (a.len(), a[0].len());
    let mut b = CircuitBuilder::new(vec![r + 1, c + 1]);
    let mut terms = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                let p = b.input(0, i + 1);
                let q = b.input(1, j + 1);
                let m = b.mul(p, q);
                let k = b.int(v);
                terms.push(b.mul(k, m));
            }
        }
    }
    let out = if terms.is_empty() { b.int(0) } else { b.sum(&terms) };
    let circuit = b.finish(out).expect("bimatrix circuit is multilinear");
    EfgGame::new(vec![simplex_tree(r), simplex_tree(c)], circuit).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::efg::tree::simplex_tree;
    use crate::eps::rat_int;

    fn fig2() -> EfgGame {
        bimatrix_efg(&[vec![1, 0, -9], vec![0, 0, -7], vec![-9, -7, -7]])
    }

    fn favored(limit: &[crate::eps::Rat]) -> usize {
        (1..limit.len()).find(|&s| limit[s] == rat_int(1)).expect("pure limit") - 1
    }

    #[test]
    fn single_player_one_step() {
        let mut b = CircuitBuilder::new(vec![4]);
        let xs: Vec<usize> = (1..4).map(|s| b.input(0, s)).collect();
        let w: Vec<usize> = [1, 3, 2]
            .iter()
            .zip(&xs)
            .map(|(&c, &x)| {
                let k = b.int(c);
                b.mul(k, x)
            })
            .collect();
        let out = b.sum(&w);
        let g = EfgGame::new(vec![simplex_tree(3)], b.finish(out).unwrap()).unwrap();
        let r = run_efg_dynamics(&g, None, &EfgConfig::new(EfgScheme::NormalFormProper, 1)).unwrap();
        assert_eq!(r.steps, 1);
        assert_eq!(r.profile[0][2], EpsPoly::from_ints(&[1, -1, -1]));
    }

    #[test]
    fn fig2_proper_reaches_r1c1() {
        let g = fig2();
        let r = run_efg_dynamics(&g, None, &EfgConfig::new(EfgScheme::NormalFormProper, 2)).unwrap();
        assert_eq!(r.termination, Termination::Converged);
        let lim = r.limit();
        assert_eq!((favored(&lim[0]), favored(&lim[1])), (0, 0));
    }

    #[test]
    fn fig2_efpe_rests_at_r2c2() {
        let g = fig2();
        let x1 = vec![EpsPoly::one(), EpsPoly::eps(), EpsPoly::from_ints(&[1, -2]), EpsPoly::eps()];
        let r = run_efg_dynamics(&g, Some(vec![x1.clone(), x1]), &EfgConfig::new(EfgScheme::Efpe, 2)).unwrap();
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn fig2_proper_escapes_r2c2() {
        let g = fig2();
        let x1 = vec![EpsPoly::one(), EpsPoly::eps(), EpsPoly::from_ints(&[1, -2]), EpsPoly::eps()];
        let r = run_efg_dynamics(&g, Some(vec![x1.clone(), x1]), &EfgConfig::new(EfgScheme::NormalFormProper, 2)).unwrap();
        let lim = r.limit();
        assert_eq!((favored(&lim[0]), favored(&lim[1])), (0, 0));
    }

    #[test]
    fn nested_powers_share_fixed_points() {
        let g = fig2();
        let base = run_efg_dynamics(&g, None, &EfgConfig::new(EfgScheme::NormalFormProper, 2)).unwrap();
        for c in 2..=3 {
            let mut cfg = EfgConfig::new(EfgScheme::NormalFormProper, 2);
            cfg.eps_power = c;
            let r = run_efg_dynamics(&g, None, &cfg).unwrap();
            assert_eq!(r.limit(), base.limit());
            let expect: Vec<Vec<EpsPoly>> =
                base.profile.iter().map(|x| x.iter().map(|p| p.compose_power(c)).collect()).collect();
            assert_eq!(r.profile, expect);
        }
    }
}
