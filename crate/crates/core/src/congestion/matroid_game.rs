use std::cmp::Ordering;

use num::BigUint;
use serde_json::json;

use super::delay::perturbed_delay_table;
use super::matroid::Matroid;
use super::CongestionError;
use crate::dynamics::Termination;
use crate::eps::{cmp_lex, EpsPoly, Rat};

/// Symmetric congestion game whose strategies are the bases of a matroid.
#[derive(Clone, Debug)]
pub struct MatroidCongestionGame {
    n: usize,
    matroid: Matroid,
    /// `delays[r][k-1] = d_r(k)`.
    delays: Vec<Vec<Rat>>,
    total: BigUint,
    per: Vec<BigUint>,
}

impl MatroidCongestionGame {
    pub fn new(n: usize, matroid: Matroid, delays: Vec<Vec<Rat>>) -> Result<Self, CongestionError> {
        matroid.validate().map_err(CongestionError::BadMatroid)?;
        if n == 0 {
            return Err(CongestionError::BadDelays("at least one player required".into()));
        }
        if delays.len() != matroid.size() {
            return Err(CongestionError::BadDelays(format!(
                "{} delay tables for {} resources",
                delays.len(),
                matroid.size()
            )));
        }
        for (r, d) in delays.iter().enumerate() {
            if d.len() != n || d.iter().any(|v| *v <= Rat::from_integer(0.into())) {
                return Err(CongestionError::BadDelays(format!("resource {r} needs {n} positive delays")));
            }
        }
        let (total, per) = matroid.basis_counts();
        Ok(MatroidCongestionGame { n, matroid, delays, total, per })
    }

    pub fn num_players(&self) -> usize {
        self.n
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn delays(&self) -> &[Vec<Rat>] {
        &self.delays
    }

    pub fn basis_counts(&self) -> (&BigUint, &[BigUint]) {
        (&self.total, &self.per)
    }

    /// `table[r][k] = d̃_r(k)` for `k = 0..=n`.
    pub fn perturbed_delays(&self) -> Result<Vec<Vec<EpsPoly>>, CongestionError> {
        (0..self.matroid.size())
            .map(|r| perturbed_delay_table(self.n, &self.total, &self.per[r], &self.delays[r]))
            .collect()
    }

    /// `n²·|R|·rk(M)`.
    pub fn step_bound(&self) -> usize {
        self.n * self.n * self.matroid.size() * self.matroid.rank()
    }
}

/// Greedy minimum-cost basis; ties go to the lower resource index.
pub fn matroid_br(m: &Matroid, cost: &[EpsPoly]) -> Result<Vec<usize>, CongestionError> {
    let mut order: Vec<usize> = (0..m.size()).collect();
    order.sort_by(|&a, &b| cmp_lex(&cost[a], &cost[b]));
    let rank = m.rank();
    let mut basis = Vec::with_capacity(rank);
    for r in order {
        basis.push(r);
        if !m.is_independent(&basis) {
            basis.pop();
        }
        if basis.len() == rank {
            break;
        }
    }
    if basis.len() != rank {
        return Err(CongestionError::OracleInconsistency);
    }
    basis.sort_unstable();
    Ok(basis)
}

pub fn loads(profile: &[Vec<usize>], resources: usize) -> Vec<usize> {
    let mut l = vec![0; resources];
    for &r in profile.iter().flatten() {
        l[r] += 1;
    }
    l
}

/// `Σ_r Σ_{k=1}^{n_r} table[r][k]`.
pub fn rosenthal_potential(table: &[Vec<EpsPoly>], loads: &[usize]) -> EpsPoly {
    table.iter().zip(loads).flat_map(|(t, &l)| t[1..=l].iter().cloned()).sum()
}

fn set_cost(table: &[Vec<EpsPoly>], set: &[usize], others: &[usize]) -> EpsPoly {
    set.iter().map(|&r| table[r][others[r] + 1].clone()).sum()
}

#[derive(Clone, Debug)]
pub struct MatroidConfig {
    pub player_order: Vec<usize>,
    pub max_steps: Option<usize>,
    pub trace: bool,
}

impl MatroidConfig {
    pub fn new(n: usize) -> Self {
        MatroidConfig { player_order: (0..n).collect(), max_steps: None, trace: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidTraceStep {
    pub step: usize,
    pub player: usize,
    pub basis: Vec<usize>,
    pub potential: EpsPoly,
}

impl MatroidTraceStep {
    pub fn to_json_line(&self) -> String {
        json!({
            "step": self.step,
            "player": self.player,
            "basis": self.basis,
            "potential": self.potential.to_string(),
        })
        .to_string()
    }
}

#[derive(Clone, Debug)]
pub struct MatroidResult {
    /// Favored basis of each player, sorted ascending.
    pub profile: Vec<Vec<usize>>,
    pub steps: usize,
    pub potential: EpsPoly,
    pub termination: Termination,
    pub trace: Vec<MatroidTraceStep>,
}

/// Round-robin best responses in the game with delays `d̃_r`. Every player
/// starts at the greedy basis in index order.
pub fn run_matroid_dynamics(g: &MatroidCongestionGame, cfg: &MatroidConfig) -> Result<MatroidResult, CongestionError> {
    let n = g.n;
    let nr = g.matroid.size();
    let mut seen = vec![false; n];
    if cfg.player_order.len() != n || cfg.player_order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(CongestionError::BadOrder);
    }
    let table = g.perturbed_delays()?;
    let first = matroid_br(&g.matroid, &vec![EpsPoly::zero(); nr])?;
    let mut profile = vec![first; n];
    let mut load = loads(&profile, nr);
    let mut potential = rosenthal_potential(&table, &load);
    let bound = g.step_bound();
    let mut steps = 0;
    let mut trace = Vec::new();
    loop {
        let mut moved = false;
        for &i in &cfg.player_order {
            for &r in &profile[i] {
                load[r] -= 1;
            }
            let cost: Vec<EpsPoly> = (0..nr).map(|r| table[r][load[r] + 1].clone()).collect();
            let br = matroid_br(&g.matroid, &cost)?;
            let better = cmp_lex(&set_cost(&table, &br, &load), &set_cost(&table, &profile[i], &load)) == Ordering::Less;
            if better && cfg.max_steps.is_some_and(|cap| steps >= cap) {
                for &r in &profile[i] {
                    load[r] += 1;
                }
                return Ok(MatroidResult { profile, steps, potential, termination: Termination::StepCapHit, trace });
            }
            if better {
                profile[i] = br;
            }
            for &r in &profile[i] {
                load[r] += 1;
            }
            if !better {
                continue;
            }
            steps += 1;
            moved = true;
            if steps > bound {
                return Err(CongestionError::BoundViolation { steps, bound });
            }
            let next = rosenthal_potential(&table, &load);
            if cmp_lex(&next, &potential) != Ordering::Less {
                return Err(CongestionError::PotentialNotDecreasing(steps));
            }
            potential = next;
            if cfg.trace {
                trace.push(MatroidTraceStep { step: steps, player: i, basis: profile[i].clone(), potential: potential.clone() });
            }
        }
        if !moved {
            return Ok(MatroidResult { profile, steps, potential, termination: Termination::Converged, trace });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps::rat_int;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| rat_int(c)).collect()
    }

    #[test]
    fn singleton_argmin() {
        let m = Matroid::Uniform { rank: 1, size: 3 };
        let c: Vec<EpsPoly> = [2, 1, 5].iter().map(|&v| EpsPoly::from_ints(&[v])).collect();
        assert_eq!(matroid_br(&m, &c).unwrap(), vec![1]);
    }

    #[test]
    fn greedy_follows_lex_order() {
        let m = Matroid::Graphic { vertices: 3, edges: vec![(0, 1), (1, 2), (0, 2)] };
        let c = vec![EpsPoly::from_ints(&[1, 2]), EpsPoly::from_ints(&[1, 1]), EpsPoly::from_ints(&[1, 3])];
        assert_eq!(matroid_br(&m, &c).unwrap(), vec![0, 1]);
    }

    #[test]
    fn one_player_one_step() {
        let g = MatroidCongestionGame::new(1, Matroid::Uniform { rank: 1, size: 3 }, vec![ints(&[4]), ints(&[2]), ints(&[3])])
            .unwrap();
        let r = run_matroid_dynamics(&g, &MatroidConfig::new(1)).unwrap();
        assert!(r.steps <= 1);
        assert_eq!(r.profile, vec![vec![1]]);
    }

    #[test]
    fn balanced_singletons() {
        let g = MatroidCongestionGame::new(3, Matroid::Uniform { rank: 1, size: 2 }, vec![ints(&[1, 2, 3]); 2]).unwrap();
        let r = run_matroid_dynamics(&g, &MatroidConfig::new(3)).unwrap();
        let mut l = loads(&r.profile, 2);
        l.sort_unstable();
        assert_eq!(l, vec![1, 2]);
        assert_eq!(r.termination, Termination::Converged);
    }

    #[test]
    fn rejects_nonpositive_delay() {
        let e = MatroidCongestionGame::new(1, Matroid::Uniform { rank: 1, size: 1 }, vec![ints(&[0])]);
        assert!(matches!(e, Err(CongestionError::BadDelays(_))));
    }
}
