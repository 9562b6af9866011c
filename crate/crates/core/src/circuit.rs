//! Multilinear arithmetic circuits over per-player strategy coordinates.
//!
//! A circuit is a topologically ordered list of gates. Multiplication gates may
//! only combine sub-circuits whose player sets are disjoint, which keeps every
//! gate multilinear in the players' strategy vectors.

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eps::{fmt_rat, interpolate_at_naturals, parse_rat, rat_int, EpsPoly, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {0} multiplies sub-circuits that share a player")]
    MultilinearityViolation(usize),
    #[error("gate {0} references a gate that is not earlier in the list")]
    CycleDetected(usize),
    #[error("gate {gate} reads invalid coordinate (player {player}, action {action})")]
    InvalidInput { gate: usize, player: usize, action: usize },
    #[error("output gate {0} does not exist")]
    InvalidOutput(usize),
    #[error("input has wrong shape: {0}")]
    DimensionMismatch(String),
    #[error("entry degree {0} exceeds the declared bound {1}")]
    DegreeBound(usize, usize),
    #[error("bad constant `{0}`")]
    BadConstant(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Input { player: usize, action: usize },
    Const(Rat),
    Add(usize, usize),
    Mul(usize, usize),
}

/// Fixed-width player set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlayerSet(Vec<u64>);

impl PlayerSet {
    fn with_player(n: usize, p: usize) -> Self {
        let mut s = PlayerSet(vec![0; n.div_ceil(64)]);
        s.0[p / 64] |= 1 << (p % 64);
        s
    }

    fn empty(n: usize) -> Self {
        PlayerSet(vec![0; n.div_ceil(64)])
    }

    fn union(&self, o: &Self) -> Self {
        PlayerSet(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }

    fn disjoint(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == 0)
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.get(p / 64).is_some_and(|w| w & (1 << (p % 64)) != 0)
    }

    pub fn players(&self) -> Vec<usize> {
        (0..self.0.len() * 64).filter(|&p| self.contains(p)).collect()
    }
}

/// Circuit as supplied by a caller, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCircuit {
    pub actions: Vec<usize>,
    pub gates: Vec<Gate>,
    pub output: usize,
}

/// A validated multilinear circuit with per-gate player sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearCircuit {
    actions: Vec<usize>,
    gates: Vec<Gate>,
    output: usize,
    player_sets: Vec<PlayerSet>,
}

pub fn validate_multilinear(raw: RawCircuit) -> Result<MultilinearCircuit, CircuitError> {
    let n = raw.actions.len();
    let mut sets: Vec<PlayerSet> = Vec::with_capacity(raw.gates.len());
    for (id, g) in raw.gates.iter().enumerate() {
        let s = match *g {
            Gate::Input { player, action } => {
                if player >= n || action >= raw.actions[player] {
                    return Err(CircuitError::InvalidInput { gate: id, player, action });
                }
                PlayerSet::with_player(n, player)
            }
            Gate::Const(_) => PlayerSet::empty(n),
            Gate::Add(a, b) | Gate::Mul(a, b) => {
                if a >= id || b >= id {
                    return Err(CircuitError::CycleDetected(id));
                }
                if matches!(g, Gate::Mul(..)) && !sets[a].disjoint(&sets[b]) {
                    return Err(CircuitError::MultilinearityViolation(id));
                }
                sets[a].union(&sets[b])
            }
        };
        sets.push(s);
    }
    if raw.output >= raw.gates.len() {
        return Err(CircuitError::InvalidOutput(raw.output));
    }
    Ok(MultilinearCircuit {
        actions: raw.actions,
        gates: raw.gates,
        output: raw.output,
        player_sets: sets,
    })
}

impl MultilinearCircuit {
    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn player_set(&self, gate: usize) -> &PlayerSet {
        &self.player_sets[gate]
    }

    pub fn to_raw(&self) -> RawCircuit {
        RawCircuit {
            actions: self.actions.clone(),
            gates: self.gates.clone(),
            output: self.output,
        }
    }

    fn check_shape<T>(&self, x: &[Vec<T>]) -> Result<(), CircuitError> {
        if x.len() != self.actions.len() {
            return Err(CircuitError::DimensionMismatch(format!(
                "{} players given, circuit has {}",
                x.len(),
                self.actions.len()
            )));
        }
        for (i, (xi, &m)) in x.iter().zip(&self.actions).enumerate() {
            if xi.len() != m {
                return Err(CircuitError::DimensionMismatch(format!(
                    "player {i} has {} coordinates, expected {m}",
                    xi.len()
                )));
            }
        }
        Ok(())
    }

    fn eval_unchecked(&self, x: &[Vec<Rat>]) -> Rat {
        let mut vals: Vec<Rat> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input { player, action } => x[*player][*action].clone(),
                Gate::Const(c) => c.clone(),
                Gate::Add(a, b) => &vals[*a] + &vals[*b],
                Gate::Mul(a, b) => {
                    if vals[*a].is_zero() || vals[*b].is_zero() {
                        Rat::zero()
                    } else {
                        &vals[*a] * &vals[*b]
                    }
                }
            };
            vals.push(v);
        }
        vals.swap_remove(self.output)
    }
}

/// Exact value of the circuit at rational inputs.
pub fn eval_rational(c: &MultilinearCircuit, x: &[Vec<Rat>]) -> Result<Rat, CircuitError> {
    c.check_shape(x)?;
    Ok(c.eval_unchecked(x))
}

/// Value at a pure profile (one-hot inputs).
pub fn eval_pure(c: &MultilinearCircuit, profile: &[usize]) -> Result<Rat, CircuitError> {
    let x: Vec<Vec<Rat>> = c
        .actions
        .iter()
        .zip(profile)
        .map(|(&m, &a)| {
            (0..m)
                .map(|b| if a == b { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    eval_rational(c, &x)
}

/// Composite polynomial of the circuit at polynomial inputs whose entries have
/// degree at most `degree_x`: evaluates at `0..=degree_x·n` and interpolates.
pub fn eval_symbolic(
    c: &MultilinearCircuit,
    x: &[Vec<EpsPoly>],
    degree_x: usize,
) -> Result<EpsPoly, CircuitError> {
    c.check_shape(x)?;
    for xi in x {
        for e in xi {
            let d = e.degree().unwrap_or(0);
            if d > degree_x {
                return Err(CircuitError::DegreeBound(d, degree_x));
            }
        }
    }
    Ok(eval_symbolic_with_bound(c, x, degree_x * c.num_players()))
}

/// As [`eval_symbolic`] with an explicit composite degree bound. Because each
/// monomial of a multilinear circuit reads at most one coordinate per player,
/// `Σ_i max_a deg x_i(a)` is always a valid bound.
pub fn eval_symbolic_with_bound(c: &MultilinearCircuit, x: &[Vec<EpsPoly>], bound: usize) -> EpsPoly {
    let values: Vec<Rat> = (0..=bound)
        .map(|j| {
            let pt = rat_int(j as i64);
            let xr: Vec<Vec<Rat>> = x
                .iter()
                .map(|xi| xi.iter().map(|e| e.eval(&pt)).collect())
                .collect();
            c.eval_unchecked(&xr)
        })
        .collect();
    interpolate_at_naturals(&values)
}

/// `Σ_i max_a deg x_i(a)`.
pub fn multilinear_degree_bound(x: &[Vec<EpsPoly>]) -> usize {
    x.iter()
        .map(|xi| xi.iter().filter_map(|e| e.degree()).max().unwrap_or(0))
        .sum()
}

/// Incremental circuit construction. Validation happens in [`CircuitBuilder::finish`].
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    actions: Vec<usize>,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(actions: Vec<usize>) -> Self {
        CircuitBuilder { actions, gates: Vec::new() }
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn input(&mut self, player: usize, action: usize) -> usize {
        self.push(Gate::Input { player, action })
    }

    pub fn constant(&mut self, c: Rat) -> usize {
        self.push(Gate::Const(c))
    }

    pub fn int(&mut self, c: i64) -> usize {
        self.constant(rat_int(c))
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Add(a, b))
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Mul(a, b))
    }

    pub fn scale(&mut self, c: Rat, a: usize) -> usize {
        let k = self.constant(c);
        self.mul(k, a)
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        let nb = self.scale(rat_int(-1), b);
        self.add(a, nb)
    }

    /// `1 − a`.
    pub fn one_minus(&mut self, a: usize) -> usize {
        let one = self.int(1);
        self.sub(one, a)
    }

    pub fn sum(&mut self, ids: &[usize]) -> usize {
        match ids.split_first() {
            None => self.int(0),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &b| self.add(acc, b)),
        }
    }

    pub fn product(&mut self, ids: &[usize]) -> usize {
        match ids.split_first() {
            None => self.int(1),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &b| self.mul(acc, b)),
        }
    }

    pub fn finish(self, output: usize) -> Result<MultilinearCircuit, CircuitError> {
        validate_multilinear(RawCircuit {
            actions: self.actions,
            gates: self.gates,
            output,
        })
    }
}

/// Circuit computing the multilinear extension of an explicit payoff tensor.
/// `values` is row-major over action profiles (last player fastest).
pub fn circuit_from_tensor(actions: &[usize], values: &[Rat]) -> Result<MultilinearCircuit, CircuitError> {
    let total: usize = actions.iter().product();
    if values.len() != total {
        return Err(CircuitError::DimensionMismatch(format!(
            "tensor has {} entries, expected {total}",
            values.len()
        )));
    }
    let mut b = CircuitBuilder::new(actions.to_vec());
    let out = tensor_rec(&mut b, actions, values, 0);
    let out = match out {
        Some(g) => g,
        None => b.int(0),
    };
    b.finish(out)
}

fn tensor_rec(b: &mut CircuitBuilder, actions: &[usize], values: &[Rat], player: usize) -> Option<usize> {
    if player == actions.len() {
        let v = &values[0];
        return (!v.is_zero()).then(|| b.constant(v.clone()));
    }
    let block = values.len() / actions[player];
    let mut terms = Vec::new();
    for a in 0..actions[player] {
        if let Some(sub) = tensor_rec(b, actions, &values[a * block..(a + 1) * block], player + 1) {
            let x = b.input(player, a);
            terms.push(b.mul(x, sub));
        }
    }
    (!terms.is_empty()).then(|| b.sum(&terms))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum GateJson {
    In { player: usize, action: usize },
    Const { value: String },
    Add { args: [usize; 2] },
    Mul { args: [usize; 2] },
}

/// Circuit JSON: `{"players": n, "actions": [..], "gates": [..], "output": id}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CircuitJson {
    pub players: usize,
    pub actions: Vec<usize>,
    pub gates: Vec<GateJson>,
    pub output: usize,
}

impl CircuitJson {
    pub fn from_circuit(c: &MultilinearCircuit) -> Self {
        CircuitJson {
            players: c.num_players(),
            actions: c.actions.clone(),
            gates: c
                .gates
                .iter()
                .map(|g| match g {
                    Gate::Input { player, action } => GateJson::In { player: *player, action: *action },
                    Gate::Const(r) => GateJson::Const { value: fmt_rat(r) },
                    Gate::Add(a, b) => GateJson::Add { args: [*a, *b] },
                    Gate::Mul(a, b) => GateJson::Mul { args: [*a, *b] },
                })
                .collect(),
            output: c.output,
        }
    }

    pub fn to_circuit(&self) -> Result<MultilinearCircuit, CircuitError> {
        if self.players != self.actions.len() {
            return Err(CircuitError::DimensionMismatch(format!(
                "players = {} but {} action counts",
                self.players,
                self.actions.len()
            )));
        }
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Ok(match g {
                    GateJson::In { player, action } => Gate::Input { player: *player, action: *action },
                    GateJson::Const { value } => {
                        Gate::Const(parse_rat(value).map_err(|_| CircuitError::BadConstant(value.clone()))?)
                    }
                    GateJson::Add { args } => Gate::Add(args[0], args[1]),
                    GateJson::Mul { args } => Gate::Mul(args[0], args[1]),
                })
            })
            .collect::<Result<Vec<_>, CircuitError>>()?;
        validate_multilinear(RawCircuit {
            actions: self.actions.clone(),
            gates,
            output: self.output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps::rat;

    fn fig1() -> MultilinearCircuit {
        circuit_from_tensor(&[2, 2], &[rat_int(1), rat_int(0), rat_int(0), rat_int(0)]).unwrap()
    }

    #[test]
    fn disjoint_product_is_valid() {
        let mut b = CircuitBuilder::new(vec![2, 2]);
        let x = b.input(0, 0);
        let y = b.input(1, 1);
        let m = b.mul(x, y);
        let c = b.finish(m).unwrap();
        assert_eq!(c.player_set(x).players(), vec![0]);
        assert_eq!(c.player_set(y).players(), vec![1]);
        assert_eq!(c.player_set(m).players(), vec![0, 1]);
    }

    #[test]
    fn shared_player_product_rejected() {
        let mut b = CircuitBuilder::new(vec![2]);
        let x = b.input(0, 0);
        let y = b.input(0, 1);
        let m = b.mul(x, y);
        assert_eq!(b.finish(m), Err(CircuitError::MultilinearityViolation(m)));
    }

    #[test]
    fn constants_allowed_on_both_sides() {
        let mut b = CircuitBuilder::new(vec![2]);
        let k = b.constant(rat(1, 2));
        let x = b.input(0, 0);
        let kx = b.mul(k, x);
        let m = b.mul(kx, k);
        assert!(b.finish(m).is_ok());
    }

    #[test]
    fn forward_reference_rejected() {
        let raw = RawCircuit {
            actions: vec![1],
            gates: vec![Gate::Add(1, 1), Gate::Const(rat_int(1))],
            output: 0,
        };
        assert_eq!(validate_multilinear(raw), Err(CircuitError::CycleDetected(0)));
    }

    #[test]
    fn fig1_pure_value() {
        assert_eq!(eval_pure(&fig1(), &[0, 0]).unwrap(), rat_int(1));
        assert_eq!(eval_pure(&fig1(), &[1, 0]).unwrap(), rat_int(0));
    }

    #[test]
    fn zero_input_without_constants() {
        let mut b = CircuitBuilder::new(vec![2, 2]);
        let x = b.input(0, 0);
        let y = b.input(1, 1);
        let s = b.add(x, y);
        let m = b.mul(x, y);
        let o = b.add(s, m);
        let c = b.finish(o).unwrap();
        let zero = vec![vec![Rat::zero(); 2]; 2];
        assert_eq!(eval_rational(&c, &zero).unwrap(), Rat::zero());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            eval_rational(&fig1(), &[vec![rat_int(1)]]),
            Err(CircuitError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = fig1();
        let j = CircuitJson::from_circuit(&c);
        let s = serde_json::to_string(&j).unwrap();
        let back: CircuitJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_circuit().unwrap(), c);
    }
}
