//! Concise potential games, perturbation schemes and ε-pure profiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{eval_pure, eval_symbolic, CircuitError, MultilinearCircuit};
use crate::eps::{EpsPoly, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("profile does not match the perturbation scheme: {0}")]
    SchemeMismatch(String),
    #[error("utility circuit {0} has a different shape from the potential")]
    ShapeMismatch(usize),
}

/// Normal-form game whose potential (and optionally each utility) is a multilinear circuit.
#[derive(Clone, Debug)]
pub struct ConcisePotentialGame {
    potential: MultilinearCircuit,
    utilities: Option<Vec<MultilinearCircuit>>,
}

impl ConcisePotentialGame {
    /// Identical-interest game: every player's utility is the potential.
    pub fn identical_interest(potential: MultilinearCircuit) -> Self {
        ConcisePotentialGame { potential, utilities: None }
    }

    pub fn with_utilities(
        potential: MultilinearCircuit,
        utilities: Vec<MultilinearCircuit>,
    ) -> Result<Self, GameError> {
        for (i, u) in utilities.iter().enumerate() {
            if u.actions() != potential.actions() {
                return Err(GameError::ShapeMismatch(i));
            }
        }
        if utilities.len() != potential.num_players() {
            return Err(GameError::ShapeMismatch(utilities.len()));
        }
        Ok(ConcisePotentialGame { potential, utilities: Some(utilities) })
    }

    pub fn num_players(&self) -> usize {
        self.potential.num_players()
    }

    pub fn actions(&self) -> &[usize] {
        self.potential.actions()
    }

    pub fn potential(&self) -> &MultilinearCircuit {
        &self.potential
    }

    pub fn explicit_utilities(&self) -> Option<&[MultilinearCircuit]> {
        self.utilities.as_deref()
    }

    /// Player `i`'s utility circuit (the potential for identical-interest games).
    pub fn utility(&self, i: usize) -> &MultilinearCircuit {
        match &self.utilities {
            Some(us) => &us[i],
            None => &self.potential,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerturbScheme {
    PerfectBox,
    ProperPermutahedron,
}

/// One player's ε-pure strategy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PureStrategy {
    /// Favored action of a box-perturbed strategy.
    Favored(usize),
    /// Ranks `π[a]` of a permutahedron vertex; action `a` gets weight ε^{π[a]}.
    Ranked(Vec<usize>),
}

impl PureStrategy {
    /// Action carrying the most weight.
    pub fn top(&self) -> usize {
        match self {
            PureStrategy::Favored(a) => *a,
            PureStrategy::Ranked(pi) => pi.iter().position(|&r| r == 0).expect("permutation has rank 0"),
        }
    }

    /// Identity ranking on `m` actions.
    pub fn identity(m: usize) -> Self {
        PureStrategy::Ranked((0..m).collect())
    }

    /// Ranking listing actions best-first.
    pub fn from_order(order: &[usize]) -> Self {
        let mut pi = vec![0; order.len()];
        for (rank, &a) in order.iter().enumerate() {
            pi[a] = rank;
        }
        PureStrategy::Ranked(pi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsPureProfile {
    pub strategies: Vec<PureStrategy>,
}

impl EpsPureProfile {
    pub fn favored(actions: &[usize]) -> Self {
        EpsPureProfile {
            strategies: actions.iter().map(|&a| PureStrategy::Favored(a)).collect(),
        }
    }

    /// The default start: action 0 favored / identity rankings.
    pub fn default_start(scheme: PerturbScheme, actions: &[usize]) -> Self {
        EpsPureProfile {
            strategies: actions
                .iter()
                .map(|&m| match scheme {
                    PerturbScheme::PerfectBox => PureStrategy::Favored(0),
                    PerturbScheme::ProperPermutahedron => PureStrategy::identity(m),
                })
                .collect(),
        }
    }

    pub fn tops(&self) -> Vec<usize> {
        self.strategies.iter().map(PureStrategy::top).collect()
    }
}

/// One player's strategy vector under the scheme.
pub fn embed_strategy(
    s: &PureStrategy,
    scheme: PerturbScheme,
    m: usize,
) -> Result<Vec<EpsPoly>, GameError> {
    match (s, scheme) {
        (PureStrategy::Favored(a), PerturbScheme::PerfectBox) => {
            if *a >= m {
                return Err(GameError::SchemeMismatch(format!("action {a} out of range {m}")));
            }
            let top = EpsPoly::from_ints(&[1, -(m as i64 - 1)]);
            Ok((0..m).map(|b| if b == *a { top.clone() } else { EpsPoly::eps() }).collect())
        }
        (PureStrategy::Ranked(pi), PerturbScheme::ProperPermutahedron) => {
            let mut seen = vec![false; m];
            if pi.len() != m || pi.iter().any(|&r| r >= m || std::mem::replace(&mut seen[r], true)) {
                return Err(GameError::SchemeMismatch(format!("{pi:?} is not a permutation of {m}")));
            }
            Ok(pi.iter().map(|&r| EpsPoly::monomial(Rat::from_integer(1.into()), r)).collect())
        }
        _ => Err(GameError::SchemeMismatch(format!("{s:?} under {scheme:?}"))),
    }
}

/// Embeds a profile into per-player polynomial strategy vectors. The permutahedron
/// is used unnormalized.
pub fn embed_profile(
    p: &EpsPureProfile,
    scheme: PerturbScheme,
    actions: &[usize],
) -> Result<Vec<Vec<EpsPoly>>, GameError> {
    if p.strategies.len() != actions.len() {
        return Err(GameError::SchemeMismatch(format!(
            "{} strategies for {} players",
            p.strategies.len(),
            actions.len()
        )));
    }
    p.strategies
        .iter()
        .zip(actions)
        .map(|(s, &m)| embed_strategy(s, scheme, m))
        .collect()
}

/// Per-coordinate degree of the scheme's embedded strategies.
pub fn scheme_degree(scheme: PerturbScheme, actions: &[usize]) -> usize {
    match scheme {
        PerturbScheme::PerfectBox => 1,
        PerturbScheme::ProperPermutahedron => actions.iter().map(|m| m - 1).max().unwrap_or(0),
    }
}

pub fn perturbed_potential(
    g: &ConcisePotentialGame,
    p: &EpsPureProfile,
    scheme: PerturbScheme,
) -> Result<EpsPoly, GameError> {
    let x = embed_profile(p, scheme, g.actions())?;
    Ok(eval_symbolic(g.potential(), &x, scheme_degree(scheme, g.actions()))?)
}

/// Numeric strategies at a concrete ε, each normalized to sum to 1.
pub fn embed_numeric(
    p: &EpsPureProfile,
    scheme: PerturbScheme,
    actions: &[usize],
    eps: &Rat,
) -> Result<Vec<Vec<Rat>>, GameError> {
    let x = embed_profile(p, scheme, actions)?;
    Ok(x.iter()
        .map(|xi| {
            let v: Vec<Rat> = xi.iter().map(|e| e.eval(eps)).collect();
            let s: Rat = v.iter().sum();
            v.into_iter().map(|c| c / &s).collect()
        })
        .collect())
}

/// First sampled deviation whose potential change differs from the deviator's utility change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialWitness {
    pub profile: Vec<usize>,
    pub player: usize,
    pub deviation: usize,
    pub potential_change: Rat,
    pub utility_change: Rat,
}

/// Samples random unilateral deviations and checks the exact potential property.
/// Returns `None` on pass. Identical-interest games pass trivially.
pub fn check_potential_property(
    g: &ConcisePotentialGame,
    trials: usize,
    seed: u64,
) -> Result<Option<PotentialWitness>, GameError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.actions();
    for _ in 0..trials {
        let profile: Vec<usize> = m.iter().map(|&mi| rng.gen_range(0..mi)).collect();
        let player = rng.gen_range(0..m.len());
        let deviation = rng.gen_range(0..m[player]);
        let mut dev = profile.clone();
        dev[player] = deviation;
        let dphi = eval_pure(g.potential(), &dev)? - eval_pure(g.potential(), &profile)?;
        let u = g.utility(player);
        let du = eval_pure(u, &dev)? - eval_pure(u, &profile)?;
        if dphi != du {
            return Ok(Some(PotentialWitness {
                profile,
                player,
                deviation,
                potential_change: dphi,
                utility_change: du,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_from_tensor;
    use crate::eps::{rat_int, EpsPoly};

    fn table(actions: &[usize], v: &[i64]) -> MultilinearCircuit {
        circuit_from_tensor(actions, &v.iter().map(|&x| rat_int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn box_embedding_two_actions() {
        let x = embed_strategy(&PureStrategy::Favored(0), PerturbScheme::PerfectBox, 2).unwrap();
        assert_eq!(x, vec![EpsPoly::from_ints(&[1, -1]), EpsPoly::eps()]);
    }

    #[test]
    fn proper_embedding_vertex() {
        let x = embed_strategy(&PureStrategy::identity(3), PerturbScheme::ProperPermutahedron, 3).unwrap();
        assert_eq!(x, vec![EpsPoly::one(), EpsPoly::eps(), EpsPoly::from_ints(&[0, 0, 1])]);
    }

    #[test]
    fn box_embedding_sums_to_one() {
        for m in 1..=10 {
            for a in 0..m {
                let x = embed_strategy(&PureStrategy::Favored(a), PerturbScheme::PerfectBox, m).unwrap();
                assert_eq!(x.into_iter().sum::<EpsPoly>(), EpsPoly::one());
            }
        }
    }

    #[test]
    fn scheme_mismatch() {
        assert!(matches!(
            embed_strategy(&PureStrategy::Favored(0), PerturbScheme::ProperPermutahedron, 2),
            Err(GameError::SchemeMismatch(_))
        ));
        assert!(matches!(
            embed_strategy(&PureStrategy::Ranked(vec![0, 0]), PerturbScheme::ProperPermutahedron, 2),
            Err(GameError::SchemeMismatch(_))
        ));
    }

    #[test]
    fn fig3_off_diagonal_potential() {
        let g = ConcisePotentialGame::identical_interest(table(&[2, 2], &[1, 1, 1, 0]));
        let p = EpsPureProfile::favored(&[0, 1]);
        let v = perturbed_potential(&g, &p, PerturbScheme::PerfectBox).unwrap();
        assert_eq!(v, EpsPoly::from_ints(&[1, -1, 1]));
    }

    #[test]
    fn zero_potential() {
        let g = ConcisePotentialGame::identical_interest(table(&[2, 3], &[0; 6]));
        let p = EpsPureProfile::favored(&[1, 2]);
        assert!(perturbed_potential(&g, &p, PerturbScheme::PerfectBox).unwrap().is_zero());
    }

    #[test]
    fn broken_utility_is_caught() {
        let phi = table(&[2, 2], &[1, 0, 0, 0]);
        let u0 = table(&[2, 2], &[1, 0, 0, 0]);
        let u1 = table(&[2, 2], &[1, 0, 5, 0]);
        let g = ConcisePotentialGame::with_utilities(phi.clone(), vec![u0, u1]).unwrap();
        let w = check_potential_property(&g, 500, 3).unwrap().expect("violation found");
        assert_eq!(w.player, 1);
        assert_eq!(w.profile[0], 1);
        let ok = ConcisePotentialGame::identical_interest(phi);
        assert_eq!(check_potential_property(&ok, 200, 3).unwrap(), None);
    }
}
