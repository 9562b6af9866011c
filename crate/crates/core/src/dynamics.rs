//! ε-symbolic best-response dynamics and the exhaustive solver.
//!
//! Players move round-robin in a fixed order. A player switches only when its
//! symbolic utility strictly improves under the ε→0⁺ ordering; ties keep the
//! current strategy and argmax ties go to the lowest action index.

use std::cmp::Ordering;

use serde_json::json;
use thiserror::Error;

use crate::circuit::{eval_pure, eval_symbolic_with_bound, CircuitError};
use crate::eps::{cmp_lex, pow2_neg, EpsPoly, Rat};
use crate::game::{
    embed_profile, embed_strategy, perturbed_potential, ConcisePotentialGame, EpsPureProfile, GameError,
    PerturbScheme, PureStrategy,
};

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Enumeration cap, overridable through `REFINERY_ENUM_CAP`.
pub fn enum_cap() -> u64 {
    std::env::var("REFINERY_ENUM_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("player order is not a permutation of the players")]
    BadOrder,
    #[error("enumeration of {0} profiles exceeds the cap {1}")]
    EnumerationCapExceeded(u64, u64),
    #[error("potential did not increase at step {0}; the game is not an exact potential game")]
    PotentialNotIncreasing(usize),
}

#[derive(Clone, Debug)]
pub struct DynamicsConfig {
    pub scheme: PerturbScheme,
    pub player_order: Vec<usize>,
    pub max_steps: Option<usize>,
    pub trace: bool,
}

impl DynamicsConfig {
    pub fn new(scheme: PerturbScheme, n: usize) -> Self {
        DynamicsConfig {
            scheme,
            player_order: (0..n).collect(),
            max_steps: None,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    StepCapHit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub player: usize,
    pub old: PureStrategy,
    pub new: PureStrategy,
    pub potential: EpsPoly,
}

fn strategy_json(s: &PureStrategy) -> serde_json::Value {
    match s {
        PureStrategy::Favored(a) => json!({ "favored": a }),
        PureStrategy::Ranked(pi) => json!({ "ranks": pi }),
    }
}

impl TraceStep {
    /// One JSON-lines record.
    pub fn to_json_line(&self) -> String {
        json!({
            "step": self.step,
            "player": self.player,
            "old": strategy_json(&self.old),
            "new": strategy_json(&self.new),
            "potential": self.potential.to_string(),
        })
        .to_string()
    }
}

#[derive(Clone, Debug)]
pub struct DynamicsResult {
    pub final_profile: EpsPureProfile,
    pub steps: usize,
    /// Sweeps executed, including the final sweep without moves.
    pub sweeps: usize,
    pub trace: Vec<TraceStep>,
    pub termination: Termination,
    pub potential: EpsPoly,
}

fn strategy_degree(scheme: PerturbScheme, m: usize) -> usize {
    match scheme {
        PerturbScheme::PerfectBox => usize::from(m > 1),
        PerturbScheme::ProperPermutahedron => m - 1,
    }
}

/// Player `i`'s utility for each of its pure actions against the others' embedded strategies.
pub fn action_utilities(
    g: &ConcisePotentialGame,
    profile: &EpsPureProfile,
    scheme: PerturbScheme,
    player: usize,
) -> Result<Vec<EpsPoly>, DynamicsError> {
    let m = g.actions();
    let mut x = embed_profile(profile, scheme, m)?;
    let bound: usize = (0..m.len())
        .filter(|&j| j != player)
        .map(|j| strategy_degree(scheme, m[j]))
        .sum();
    let u = g.utility(player);
    Ok((0..m[player])
        .map(|a| {
            x[player] = (0..m[player])
                .map(|b| if a == b { EpsPoly::one() } else { EpsPoly::zero() })
                .collect();
            eval_symbolic_with_bound(u, &x, bound)
        })
        .collect())
}

fn combine(weights: &[EpsPoly], utils: &[EpsPoly]) -> EpsPoly {
    weights.iter().zip(utils).map(|(w, u)| w * u).sum()
}

/// Utility of playing strategy `s` given the per-action utility vector.
pub fn strategy_utility(s: &PureStrategy, scheme: PerturbScheme, utils: &[EpsPoly]) -> Result<EpsPoly, GameError> {
    let w = embed_strategy(s, scheme, utils.len())?;
    Ok(combine(&w, utils))
}

fn argmax_lex(vals: &[EpsPoly]) -> usize {
    let mut best = 0;
    for (a, v) in vals.iter().enumerate().skip(1) {
        if cmp_lex(v, &vals[best]) == Ordering::Greater {
            best = a;
        }
    }
    best
}

/// Favored action maximizing the ε-pure deviation utility, with that utility.
pub fn symbolic_br_perfect(
    g: &ConcisePotentialGame,
    profile: &EpsPureProfile,
    player: usize,
) -> Result<(usize, EpsPoly), DynamicsError> {
    let utils = action_utilities(g, profile, PerturbScheme::PerfectBox, player)?;
    let devs: Vec<EpsPoly> = (0..utils.len())
        .map(|a| strategy_utility(&PureStrategy::Favored(a), PerturbScheme::PerfectBox, &utils))
        .collect::<Result<_, _>>()?;
    let best = argmax_lex(&devs);
    Ok((best, devs[best].clone()))
}

/// Ranks from sorting a utility vector descending; ties keep lower indices first.
pub fn ranks_by_utility(utils: &[EpsPoly]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..utils.len()).collect();
    order.sort_by(|&a, &b| cmp_lex(&utils[b], &utils[a]));
    let mut pi = vec![0; utils.len()];
    for (rank, &a) in order.iter().enumerate() {
        pi[a] = rank;
    }
    pi
}

/// Permutation vertex maximizing the player's utility, with that utility.
pub fn symbolic_br_proper(
    g: &ConcisePotentialGame,
    profile: &EpsPureProfile,
    player: usize,
) -> Result<(Vec<usize>, EpsPoly), DynamicsError> {
    let utils = action_utilities(g, profile, PerturbScheme::ProperPermutahedron, player)?;
    let pi = ranks_by_utility(&utils);
    let v = strategy_utility(&PureStrategy::Ranked(pi.clone()), PerturbScheme::ProperPermutahedron, &utils)?;
    Ok((pi, v))
}

fn check_order(order: &[usize], n: usize) -> Result<(), DynamicsError> {
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(DynamicsError::BadOrder);
    }
    Ok(())
}

pub fn run_dynamics(
    g: &ConcisePotentialGame,
    start: &EpsPureProfile,
    cfg: &DynamicsConfig,
) -> Result<DynamicsResult, DynamicsError> {
    check_order(&cfg.player_order, g.num_players())?;
    let scheme = cfg.scheme;
    let mut profile = start.clone();
    let mut potential = perturbed_potential(g, &profile, scheme)?;
    let mut steps = 0;
    let mut sweeps = 0;
    let mut trace = Vec::new();
    loop {
        sweeps += 1;
        let mut moved = false;
        for &i in &cfg.player_order {
            let utils = action_utilities(g, &profile, scheme, i)?;
            let current = strategy_utility(&profile.strategies[i], scheme, &utils)?;
            let candidate = match scheme {
                PerturbScheme::PerfectBox => {
                    let devs: Vec<EpsPoly> = (0..utils.len())
                        .map(|a| strategy_utility(&PureStrategy::Favored(a), scheme, &utils))
                        .collect::<Result<_, _>>()?;
                    let best = argmax_lex(&devs);
                    (PureStrategy::Favored(best), devs[best].clone())
                }
                PerturbScheme::ProperPermutahedron => {
                    let pi = ranks_by_utility(&utils);
                    let s = PureStrategy::Ranked(pi);
                    let v = strategy_utility(&s, scheme, &utils)?;
                    (s, v)
                }
            };
            if cmp_lex(&candidate.1, &current) != Ordering::Greater {
                continue;
            }
            if cfg.max_steps.is_some_and(|cap| steps >= cap) {
                return Ok(DynamicsResult {
                    final_profile: profile,
                    steps,
                    sweeps,
                    trace,
                    termination: Termination::StepCapHit,
                    potential,
                });
            }
            let old = std::mem::replace(&mut profile.strategies[i], candidate.0);
            steps += 1;
            moved = true;
            let next = perturbed_potential(g, &profile, scheme)?;
            if cmp_lex(&next, &potential) != Ordering::Greater {
                return Err(DynamicsError::PotentialNotIncreasing(steps));
            }
            potential = next;
            if cfg.trace {
                trace.push(TraceStep {
                    step: steps,
                    player: i,
                    old,
                    new: profile.strategies[i].clone(),
                    potential: potential.clone(),
                });
            }
        }
        if !moved {
            return Ok(DynamicsResult {
                final_profile: profile,
                steps,
                sweeps,
                trace,
                termination: Termination::Converged,
                potential,
            });
        }
    }
}

/// Advances `idx` as an odometer over `radix` (last position fastest). Returns false on wrap.
pub(crate) fn odometer(idx: &mut [usize], radix: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < radix[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

fn factorial(m: usize) -> u64 {
    (1..=m as u64).fold(1u64, |a, b| a.saturating_mul(b))
}

/// All permutations of `0..m` in lexicographic order.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Profile maximizing the perturbed potential, by enumeration.
pub fn solve_exhaustive(g: &ConcisePotentialGame, scheme: PerturbScheme) -> Result<EpsPureProfile, DynamicsError> {
    let cap = enum_cap();
    let m = g.actions();
    match scheme {
        PerturbScheme::PerfectBox => {
            let total = m.iter().fold(1u64, |a, &b| a.saturating_mul(b as u64));
            if total > cap {
                return Err(DynamicsError::EnumerationCapExceeded(total, cap));
            }
            let mut idx = vec![0; m.len()];
            let mut best: Option<(EpsPoly, Vec<usize>)> = None;
            loop {
                let v = perturbed_potential(g, &EpsPureProfile::favored(&idx), scheme)?;
                if best.as_ref().is_none_or(|(b, _)| cmp_lex(&v, b) == Ordering::Greater) {
                    best = Some((v, idx.clone()));
                }
                if !odometer(&mut idx, m) {
                    break;
                }
            }
            Ok(EpsPureProfile::favored(&best.expect("at least one profile").1))
        }
        PerturbScheme::ProperPermutahedron => {
            let total = m.iter().fold(1u64, |a, &b| a.saturating_mul(factorial(b)));
            if total > cap {
                let cfg = DynamicsConfig::new(scheme, m.len());
                let start = EpsPureProfile::default_start(scheme, m);
                return Ok(run_dynamics(g, &start, &cfg)?.final_profile);
            }
            let perms: Vec<Vec<Vec<usize>>> = m.iter().map(|&mi| permutations(mi)).collect();
            let radix: Vec<usize> = perms.iter().map(Vec::len).collect();
            let mut idx = vec![0; m.len()];
            let mut best: Option<(EpsPoly, EpsPureProfile)> = None;
            loop {
                let p = EpsPureProfile {
                    strategies: idx
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| PureStrategy::Ranked(perms[i][k].clone()))
                        .collect(),
                };
                let v = perturbed_potential(g, &p, scheme)?;
                if best.as_ref().is_none_or(|(b, _)| cmp_lex(&v, b) == Ordering::Greater) {
                    best = Some((v, p));
                }
                if !odometer(&mut idx, &radix) {
                    break;
                }
            }
            Ok(best.expect("at least one profile").1)
        }
    }
}

/// Result of unperturbed pure best-response dynamics.
#[derive(Clone, Debug)]
pub struct PlainResult {
    pub final_profile: Vec<usize>,
    pub steps: usize,
    pub converged: bool,
    /// `(player, new action)` for every move, in order.
    pub moves: Vec<(usize, usize)>,
}

/// Round-robin best-response dynamics on pure profiles without trembles.
pub fn run_plain_dynamics(
    g: &ConcisePotentialGame,
    start: &[usize],
    order: &[usize],
    max_steps: usize,
) -> Result<PlainResult, DynamicsError> {
    check_order(order, g.num_players())?;
    let m = g.actions();
    let mut a = start.to_vec();
    let mut moves = Vec::new();
    loop {
        let mut moved = false;
        for &i in order {
            if moves.len() >= max_steps {
                return Ok(PlainResult { final_profile: a, steps: moves.len(), converged: false, moves });
            }
            let u = g.utility(i);
            let cur = eval_pure(u, &a)?;
            let mut best = (a[i], cur.clone());
            for b in 0..m[i] {
                let mut dev = a.clone();
                dev[i] = b;
                let v = eval_pure(u, &dev)?;
                if v > best.1 {
                    best = (b, v);
                }
            }
            if best.1 > cur {
                a[i] = best.0;
                moves.push((i, best.0));
                moved = true;
            }
        }
        if !moved {
            return Ok(PlainResult { final_profile: a, steps: moves.len(), converged: true, moves });
        }
    }
}

/// Numeric ε at which every pairwise comparison of the players' action utilities
/// at `profile` has the same sign as in the ε→0⁺ limit.
pub fn certifying_epsilon(
    g: &ConcisePotentialGame,
    profile: &EpsPureProfile,
    scheme: PerturbScheme,
) -> Result<Rat, DynamicsError> {
    let mmax = g.actions().iter().copied().max().unwrap_or(1) as u32;
    let mut eps = pow2_neg(mmax.next_power_of_two().trailing_zeros() + 1);
    for i in 0..g.num_players() {
        let utils = action_utilities(g, profile, scheme, i)?;
        for a in 0..utils.len() {
            for b in a + 1..utils.len() {
                let e = (&utils[a] - &utils[b]).safe_epsilon();
                if e < eps {
                    eps = e;
                }
            }
        }
    }
    Ok(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_from_tensor;
    use crate::eps::rat_int;

    fn game(actions: &[usize], v: &[i64]) -> ConcisePotentialGame {
        let vals: Vec<Rat> = v.iter().map(|&x| rat_int(x)).collect();
        ConcisePotentialGame::identical_interest(circuit_from_tensor(actions, &vals).unwrap())
    }

    fn fig1() -> ConcisePotentialGame {
        game(&[2, 2], &[1, 0, 0, 0])
    }

    fn fig2() -> ConcisePotentialGame {
        game(&[3, 3], &[1, 0, -9, 0, 0, -7, -9, -7, -7])
    }

    #[test]
    fn fig1_column_prefers_c1() {
        let p = EpsPureProfile::favored(&[0, 1]);
        let (a, v) = symbolic_br_perfect(&fig1(), &p, 1).unwrap();
        assert_eq!(a, 0);
        assert_eq!(v, EpsPoly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn fig2_row_prefers_r2_against_c2() {
        let p = EpsPureProfile::favored(&[0, 1]);
        let (a, _) = symbolic_br_perfect(&fig2(), &p, 0).unwrap();
        assert_eq!(a, 1);
    }

    #[test]
    fn single_action_player() {
        let g = game(&[1, 2], &[3, 4]);
        let p = EpsPureProfile::favored(&[0, 0]);
        assert_eq!(symbolic_br_perfect(&g, &p, 0).unwrap().0, 0);
    }

    #[test]
    fn proper_br_matches_exhaustive_permutation_search() {
        let g = fig2();
        let col = PureStrategy::from_order(&[1, 0, 2]);
        let p = EpsPureProfile { strategies: vec![PureStrategy::identity(3), col] };
        let (pi, v) = symbolic_br_proper(&g, &p, 0).unwrap();
        let utils = action_utilities(&g, &p, PerturbScheme::ProperPermutahedron, 0).unwrap();
        let best = permutations(3)
            .into_iter()
            .map(|q| strategy_utility(&PureStrategy::Ranked(q), PerturbScheme::ProperPermutahedron, &utils).unwrap())
            .max_by(cmp_lex)
            .unwrap();
        assert_eq!(v, best);
        assert_eq!(pi, vec![0, 1, 2]);
    }

    #[test]
    fn all_equal_utilities_keep_identity() {
        let g = game(&[3, 2], &[0; 6]);
        let p = EpsPureProfile::default_start(PerturbScheme::ProperPermutahedron, &[3, 2]);
        assert_eq!(symbolic_br_proper(&g, &p, 0).unwrap().0, vec![0, 1, 2]);
    }

    #[test]
    fn fig1_from_r2c2_reaches_r1c1() {
        let g = fig1();
        let cfg = DynamicsConfig::new(PerturbScheme::PerfectBox, 2);
        let r = run_dynamics(&g, &EpsPureProfile::favored(&[1, 1]), &cfg).unwrap();
        assert_eq!(r.termination, Termination::Converged);
        assert_eq!(r.final_profile.tops(), vec![0, 0]);
    }

    #[test]
    fn step_cap_is_reported() {
        let g = fig1();
        let mut cfg = DynamicsConfig::new(PerturbScheme::PerfectBox, 2);
        cfg.max_steps = Some(1);
        let r = run_dynamics(&g, &EpsPureProfile::favored(&[1, 1]), &cfg).unwrap();
        assert_eq!(r.termination, Termination::StepCapHit);
        assert_eq!(r.steps, 1);
    }

    #[test]
    fn exhaustive_on_single_profile() {
        let g = game(&[1, 1], &[5]);
        assert_eq!(solve_exhaustive(&g, PerturbScheme::PerfectBox).unwrap().tops(), vec![0, 0]);
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn plain_dynamics_stops_at_any_nash() {
        let g = fig1();
        let r = run_plain_dynamics(&g, &[1, 1], &[0, 1], 100).unwrap();
        assert!(r.converged);
        assert_eq!(r.final_profile, vec![1, 1]);
    }
}
