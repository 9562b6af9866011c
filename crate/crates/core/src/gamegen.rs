//! Constructors for the example and counterexample games.

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{circuit_from_tensor, CircuitBuilder, CircuitError, MultilinearCircuit};
use crate::efg::dynamics::bimatrix_efg;
use crate::efg::tree::{tree_from_nested, NestedAction, NestedDecision, ValidatedTree};
use crate::efg::EfgGame;
use crate::eps::{rat, rat_int, EpsPoly, Rat};
use crate::game::ConcisePotentialGame;
use crate::polymatrix::{PolyError, PolymatrixGame};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no reference solution for {0}")]
    NoReferenceAvailable(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    pub vertices: usize,
    /// `(u, v, weight)` with positive integer weights.
    pub edges: Vec<(usize, usize, u64)>,
}

impl WeightedGraph {
    fn validate(&self) -> Result<(), GenError> {
        if self.vertices == 0 {
            return Err(GenError::InvalidParameter("graph needs a vertex".into()));
        }
        for &(u, v, w) in &self.edges {
            if u >= self.vertices || v >= self.vertices || u == v || w == 0 {
                return Err(GenError::InvalidParameter(format!("bad edge ({u},{v},{w})")));
            }
        }
        Ok(())
    }

    /// Weight of the cut; `side[v]` is true for vertices in `B`.
    pub fn cut_weight(&self, side: &[bool]) -> u64 {
        self.edges.iter().filter(|&&(u, v, _)| side[u] != side[v]).map(|e| e.2).sum()
    }

    /// No single vertex move increases the cut.
    pub fn is_flip_local_optimum(&self, side: &[bool]) -> bool {
        let w = self.cut_weight(side);
        (0..self.vertices).all(|v| {
            let mut s = side.to_vec();
            s[v] = !s[v];
            self.cut_weight(&s) <= w
        })
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    Fig1,
    Fig2Myerson,
    Fig3MaxPayoff,
    Fig4RandomGd,
    Fig6SymbolicGd,
    MpChristmas,
    DoubleExp { n: usize },
    DoubleExp3Player { n: usize },
    MaxCutTriplet { graph: WeightedGraph },
    MaxCutEscape { graph: WeightedGraph },
    /// `values` is the adversary's payoff, row-major over `actions` (team first, adversary last).
    TeamBot { actions: Vec<usize>, values: Vec<String>, r: String, delta: String },
    KnapsackHypercube { weights: Vec<u64>, capacity: i64 },
}

impl GenSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GenSpec::Fig1 => "fig1",
            GenSpec::Fig2Myerson => "fig2_myerson",
            GenSpec::Fig3MaxPayoff => "fig3_max_payoff",
            GenSpec::Fig4RandomGd => "fig4_random_gd",
            GenSpec::Fig6SymbolicGd => "fig6_symbolic_gd",
            GenSpec::MpChristmas => "mp_christmas",
            GenSpec::DoubleExp { .. } => "double_exp",
            GenSpec::DoubleExp3Player { .. } => "double_exp3_player",
            GenSpec::MaxCutTriplet { .. } => "max_cut_triplet",
            GenSpec::MaxCutEscape { .. } => "max_cut_escape",
            GenSpec::TeamBot { .. } => "team_bot",
            GenSpec::KnapsackHypercube { .. } => "knapsack_hypercube",
        }
    }
}

/// Two-player zero-sum sequence-form game; `payoff` lists `(σ₁, σ₂, u₁)` for player 1.
#[derive(Clone, Debug)]
pub struct ZeroSumEfg {
    pub trees: [ValidatedTree; 2],
    pub payoff: Vec<(usize, usize, Rat)>,
}

impl ZeroSumEfg {
    /// Utility vector of `player` against the other's realization plan.
    pub fn utility_vector(&self, player: usize, other: &[EpsPoly]) -> Vec<EpsPoly> {
        let mut u = vec![EpsPoly::zero(); self.trees[player].num_sequences()];
        for (s1, s2, v) in &self.payoff {
            let (mine, theirs, val) = if player == 0 { (*s1, *s2, v.clone()) } else { (*s2, *s1, -v.clone()) };
            u[mine] = &u[mine] + &other[theirs].scale(&val);
        }
        u
    }
}

#[derive(Clone, Debug)]
pub enum Generated {
    NormalForm {
        game: ConcisePotentialGame,
        /// Suggested round-robin order.
        player_order: Option<Vec<usize>>,
    },
    Polymatrix(PolymatrixGame),
    Efg(EfgGame),
    ZeroSumEfg(ZeroSumEfg),
    Hypercube {
        utility: Vec<Rat>,
        /// Number of `z ∈ {0,1}^d` with `⟨w, z⟩ ≤ W`.
        knapsack_count: u64,
    },
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&c| rat_int(c)).collect()
}

fn identical(actions: &[usize], values: &[i64]) -> Result<Generated, GenError> {
    let c = circuit_from_tensor(actions, &ints(values))?;
    Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: None })
}

pub const FIG1: [[i64; 2]; 2] = [[1, 0], [0, 0]];
pub const FIG2: [[i64; 3]; 3] = [[1, 0, -9], [0, 0, -7], [-9, -7, -7]];
pub const FIG3: [[i64; 2]; 2] = [[1, 1], [1, 0]];
pub const FIG4_ROW: [[i64; 2]; 2] = [[12, 2], [11, 0]];
pub const FIG4_COL: [[i64; 2]; 2] = [[2, 2], [1, 0]];
pub const FIG6: [[i64; 2]; 2] = [[0, 0], [0, 1]];

fn mat<const N: usize>(m: &[[i64; N]]) -> Vec<Vec<Rat>> {
    m.iter().map(|r| ints(r)).collect()
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    match spec {
        GenSpec::Fig1 => identical(&[2, 2], &FIG1.concat()),
        GenSpec::Fig2Myerson => identical(&[3, 3], &FIG2.concat()),
        GenSpec::Fig3MaxPayoff => identical(&[2, 2], &FIG3.concat()),
        GenSpec::Fig4RandomGd => Ok(Generated::Polymatrix(PolymatrixGame::bimatrix(mat(&FIG4_ROW), mat(&FIG4_COL))?)),
        GenSpec::Fig6SymbolicGd => Ok(Generated::Polymatrix(PolymatrixGame::identical_interest(mat(&FIG6))?)),
        GenSpec::MpChristmas => Ok(Generated::ZeroSumEfg(mp_christmas())),
        GenSpec::DoubleExp { n } => {
            let c = double_exp_circuit(*n)?;
            Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: None })
        }
        GenSpec::DoubleExp3Player { n } => {
            let c = double_exp_3player_circuit(*n)?;
            Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: None })
        }
        GenSpec::MaxCutTriplet { graph } => {
            let c = maxcut_triplet_circuit(graph)?;
            Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: None })
        }
        GenSpec::MaxCutEscape { graph } => {
            let c = maxcut_escape_circuit(graph)?;
            let v = graph.vertices;
            let mut order = vec![v, v + 1];
            order.extend(0..v);
            Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: Some(order) })
        }
        GenSpec::TeamBot { actions, values, r, delta } => {
            let parse = |s: &str| {
                crate::eps::parse_rat(s).map_err(|e| GenError::InvalidParameter(e.to_string()))
            };
            let vals: Vec<Rat> = values.iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
            let c = team_bot_circuit(actions, &vals, &parse(r)?, &parse(delta)?)?;
            Ok(Generated::NormalForm { game: ConcisePotentialGame::identical_interest(c), player_order: None })
        }
        GenSpec::KnapsackHypercube { weights, capacity } => {
            let (utility, knapsack_count) = knapsack_hypercube(weights, *capacity)?;
            Ok(Generated::Hypercube { utility, knapsack_count })
        }
    }
}

/// The Myerson game as a two-player extensive-form game with one decision point each.
pub fn fig2_efg() -> EfgGame {
    bimatrix_efg(&FIG2.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn leaf(label: &str) -> NestedAction {
    NestedAction { label: label.into(), next: Vec::new() }
}

/// Player 1 picks a side then decides on the gift; player 2 observes only the gift.
pub fn mp_christmas() -> ZeroSumEfg {
    let gift = |side: &str| NestedDecision { label: format!("gift@{side}"), actions: vec![leaf("Gift"), leaf("NoGift")] };
    let p1 = tree_from_nested(&[NestedDecision {
        label: "coin".into(),
        actions: vec![
            NestedAction { label: "Heads".into(), next: vec![gift("Heads")] },
            NestedAction { label: "Tails".into(), next: vec![gift("Tails")] },
        ],
    }])
    .expect("valid tree");
    let guess = |obs: &str| NestedDecision { label: format!("guess@{obs}"), actions: vec![leaf("Heads"), leaf("Tails")] };
    let p2 = tree_from_nested(&[guess("Gift"), guess("NoGift")]).expect("valid tree");
    // p1 sequences: 1 H, 2 T, 3 H·Gift, 4 H·NoGift, 5 T·Gift, 6 T·NoGift
    // p2 sequences: 1 Gift·H, 2 Gift·T, 3 NoGift·H, 4 NoGift·T
    let mut payoff = Vec::new();
    for (s1, side, gift) in [(3, 0, true), (4, 0, false), (5, 1, true), (6, 1, false)] {
        for guess in 0..2 {
            let s2 = if gift { 1 + guess } else { 3 + guess };
            let received = i64::from(guess == side) + i64::from(gift);
            payoff.push((s1, s2, rat_int(-received)));
        }
    }
    ZeroSumEfg { trees: [p1, p2], payoff }
}

/// Player layout: `x` at `0..n`, `x'` at `n..2n`, `c` at `2n..3n`, `d` at
/// `3n..4n`, `t` at `4n`. Each player's coordinate is the probability of action 0.
pub fn double_exp_circuit(n: usize) -> Result<MultilinearCircuit, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameter("n must be at least 1".into()));
    }
    let mut b = CircuitBuilder::new(vec![2; 4 * n + 1]);
    let xs: Vec<usize> = (0..4 * n + 1).map(|p| b.input(p, 0)).collect();
    let (x, xp, c, d, t) = (&xs[..n], &xs[n..2 * n], &xs[2 * n..3 * n], &xs[3 * n..4 * n], xs[4 * n]);
    let mut terms = Vec::new();
    for i in 0..n {
        let tc = b.sub(t, c[i]);
        let prev = if i == 0 { b.constant(rat(1, 4)) } else { b.mul(x[i - 1], xp[i - 1]) };
        let gap = b.sub(x[i], prev);
        terms.push(b.mul(tc, gap));
        let half = b.constant(rat(1, 2));
        let dh = b.sub(d[i], half);
        let diff = b.sub(x[i], xp[i]);
        terms.push(b.mul(dh, diff));
    }
    terms.push(b.scale(rat_int(-2), x[n - 1]));
    terms.push(b.scale(rat_int(-2), xp[n - 1]));
    terms.push(b.scale(rat_int(-2 * n as i64), t));
    let out = b.sum(&terms);
    Ok(b.finish(out)?)
}

/// Three players: `x ∈ Δ(n+1)`, `x' ∈ Δ(n+1)`, and `(c, d, t, s) ∈ Δ(2n+2)`.
/// Player 3's actions are `c_i = i`, `d_i = n + i`, `t = 2n`, `s = 2n + 1`.
pub fn double_exp_3player_circuit(n: usize) -> Result<MultilinearCircuit, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameter("n must be at least 1".into()));
    }
    let mut b = CircuitBuilder::new(vec![n + 1, n + 1, 2 * n + 2]);
    let x: Vec<usize> = (0..n).map(|i| b.input(0, i)).collect();
    let xp: Vec<usize> = (0..n).map(|i| b.input(1, i)).collect();
    let c: Vec<usize> = (0..n).map(|i| b.input(2, i)).collect();
    let d: Vec<usize> = (0..n).map(|i| b.input(2, n + i)).collect();
    let t = b.input(2, 2 * n);
    let mut terms = Vec::new();
    for i in 0..n {
        let tc = b.sub(t, c[i]);
        let prev = if i == 0 { b.constant(rat(1, 4)) } else { b.mul(x[i - 1], xp[i - 1]) };
        let gap = b.sub(x[i], prev);
        terms.push(b.mul(tc, gap));
        let k = b.constant(rat(1, 4 * n as i64));
        let dk = b.sub(d[i], k);
        let diff = b.sub(x[i], xp[i]);
        terms.push(b.mul(dk, diff));
    }
    terms.push(b.scale(rat_int(-2), x[n - 1]));
    terms.push(b.scale(rat_int(-2), xp[n - 1]));
    terms.push(b.scale(rat_int(-2 * n as i64), t));
    let out = b.sum(&terms);
    Ok(b.finish(out)?)
}

/// Perturbed equilibrium of the binary construction for a numeric `ε`: per
/// player, the probability of action 0 (`t = ε`, `d = 1/2`, `c = ε`, `x_i = x'_i = max{ε, 2^{-2^i}}`).
pub fn double_exp_reference(n: usize, eps: &Rat) -> Vec<Rat> {
    let mut p = Vec::with_capacity(4 * n + 1);
    let xs: Vec<Rat> = (1..=n)
        .map(|i| {
            let v = Rat::new(BigInt::one(), BigInt::one() << (1usize << i));
            v.max(eps.clone())
        })
        .collect();
    p.extend(xs.iter().cloned());
    p.extend(xs);
    p.extend(std::iter::repeat(eps.clone()).take(n));
    p.extend(std::iter::repeat(rat(1, 2)).take(n));
    p.push(eps.clone());
    p
}

fn cut_expr(b: &mut CircuitBuilder, g: &WeightedGraph, side: &[usize]) -> usize {
    let mut terms = Vec::new();
    for &(u, v, w) in &g.edges {
        let p = b.mul(side[u], side[v]);
        let s = b.add(side[u], side[v]);
        let two_p = b.scale(rat_int(2), p);
        let diff = b.sub(s, two_p);
        terms.push(b.scale(rat_int(w as i64), diff));
    }
    if terms.is_empty() {
        b.int(0)
    } else {
        b.sum(&terms)
    }
}

/// Players `3v + i` for `i ∈ 0..3`; action 0 puts a vote for `B`, action 1 for `C`.
/// Utility: cut weight of the majority partition, minus `ψ/λ` when at least
/// two triplets disagree internally, with `λ = 6|V|`.
pub fn maxcut_triplet_circuit(g: &WeightedGraph) -> Result<MultilinearCircuit, GenError> {
    g.validate()?;
    let nv = g.vertices;
    let mut b = CircuitBuilder::new(vec![2; 3 * nv]);
    let mut maj = Vec::with_capacity(nv);
    let mut nu = Vec::with_capacity(nv);
    for v in 0..nv {
        let [p, q, r] = [0, 1, 2].map(|i| b.input(3 * v + i, 0));
        let pq = b.mul(p, q);
        let qr = b.mul(q, r);
        let pr = b.mul(p, r);
        let pqr = b.mul(pq, r);
        let s = b.sum(&[pq, qr, pr]);
        let two = b.scale(rat_int(2), pqr);
        maj.push(b.sub(s, two));
        let [np, nq, nr] = [p, q, r].map(|z| b.one_minus(z));
        let npq = b.mul(np, nq);
        let none = b.mul(npq, nr);
        let unanimous = b.add(pqr, none);
        nu.push(b.one_minus(unanimous));
    }
    let cut = cut_expr(&mut b, g, &maj);
    let psi = b.sum(&nu);
    let exactly_one: Vec<usize> = (0..nv)
        .map(|v| {
            let mut f = vec![nu[v]];
            for (u, &n) in nu.iter().enumerate() {
                if u != v {
                    f.push(b.one_minus(n));
                }
            }
            b.product(&f)
        })
        .collect();
    let one_flag = b.sum(&exactly_one);
    let pen = b.sub(psi, one_flag);
    let lambda = rat_int(6 * nv as i64);
    let scaled = b.scale(-lambda.recip(), pen);
    let out = b.add(cut, scaled);
    Ok(b.finish(out)?)
}

/// Majority partition of a triplet-game profile (true = `B`).
pub fn triplet_partition(profile: &[usize], vertices: usize) -> Vec<bool> {
    (0..vertices)
        .map(|v| (0..3).filter(|&i| profile[3 * v + i] == 0).count() >= 2)
        .collect()
}

/// Vertex players `0..|V|` (action 0 = `b`), then `w = |V|` and `w' = |V|+1`
/// (action 0 = `d`, action 1 = `e`). Under `(e, e)` the utility is
/// `M + |{v : a_v = b}|` with `M = |V|²·max w + 1`; otherwise the cut weight.
pub fn maxcut_escape_circuit(g: &WeightedGraph) -> Result<MultilinearCircuit, GenError> {
    g.validate()?;
    let nv = g.vertices;
    let mut b = CircuitBuilder::new(vec![2; nv + 2]);
    let side: Vec<usize> = (0..nv).map(|v| b.input(v, 0)).collect();
    let cut = cut_expr(&mut b, g, &side);
    let m = b.int((nv * nv) as i64 * g.max_weight() as i64 + 1);
    let bonus = b.sum(&side);
    let high = b.add(m, bonus);
    let delta = b.sub(high, cut);
    let ew = b.input(nv, 1);
    let ew2 = b.input(nv + 1, 1);
    let both = b.mul(ew, ew2);
    let esc = b.mul(both, delta);
    let out = b.add(cut, esc);
    Ok(b.finish(out)?)
}

/// Adds a `⊥` action (the last index) for each of the three players of a team
/// game whose adversary is the last player.
pub fn team_bot_circuit(actions: &[usize], values: &[Rat], r: &Rat, delta: &Rat) -> Result<MultilinearCircuit, GenError> {
    if actions.len() != 3 {
        return Err(GenError::InvalidParameter("team game must have three players".into()));
    }
    if delta <= &Rat::zero() {
        return Err(GenError::InvalidParameter("delta must be positive".into()));
    }
    if values.len() != actions.iter().product::<usize>() {
        return Err(GenError::InvalidParameter("payoff tensor has the wrong size".into()));
    }
    let ext: Vec<usize> = actions.iter().map(|m| m + 1).collect();
    let half = delta / rat_int(2);
    let mut out = Vec::with_capacity(ext.iter().product());
    for a in 0..ext[0] {
        for b in 0..ext[1] {
            for c in 0..ext[2] {
                let bot = [a == actions[0], b == actions[1], c == actions[2]];
                let v = if !bot.iter().any(|&x| x) {
                    values[(a * actions[1] + b) * actions[2] + c].clone()
                } else if bot[2] && (bot[0] != bot[1]) {
                    r - &half
                } else {
                    r.clone()
                };
                out.push(v);
            }
        }
    }
    Ok(circuit_from_tensor(&ext, &out)?)
}

/// Hypercube utility `(−(W + 1/2), −w)` and the number of `z` with `⟨w, z⟩ ≤ W`.
pub fn knapsack_hypercube(weights: &[u64], capacity: i64) -> Result<(Vec<Rat>, u64), GenError> {
    if weights.len() > 20 {
        return Err(GenError::InvalidParameter("brute-force count supports at most 20 weights".into()));
    }
    let mut u = vec![-(rat_int(capacity) + rat(1, 2))];
    u.extend(weights.iter().map(|&w| rat_int(-(w as i64))));
    let d = weights.len();
    let count = (0u64..1 << d)
        .filter(|z| {
            let s: i128 = (0..d).filter(|&i| z >> i & 1 == 1).map(|i| weights[i] as i128).sum();
            s <= capacity as i128
        })
        .count() as u64;
    Ok((u, count))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub refinement: String,
    /// Favored pure profile, when the answer is pure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<usize>>,
    /// Mixed or numeric answer, per player, as rational strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Vec<String>>>,
    pub note: String,
}

fn pure(refinement: &str, profile: &[usize], note: &str) -> Reference {
    Reference { refinement: refinement.into(), profile: Some(profile.to_vec()), point: None, note: note.into() }
}

/// Equilibria stated for each kind.
pub fn reference_solutions(spec: &GenSpec) -> Result<Vec<Reference>, GenError> {
    use crate::eps::fmt_rat;
    Ok(match spec {
        GenSpec::Fig1 => vec![pure("perfect", &[0, 0], "only (R1,C1) is perfect")],
        GenSpec::Fig2Myerson => vec![
            pure("proper", &[0, 0], "unique proper equilibrium"),
            pure("perfect", &[1, 1], "(R2,C2) is also perfect"),
        ],
        GenSpec::Fig3MaxPayoff => vec![pure("perfect", &[0, 0], "unique perfect equilibrium")],
        GenSpec::Fig4RandomGd => vec![pure("perfect", &[0, 0], "unique perfect equilibrium")],
        GenSpec::MpChristmas => vec![Reference {
            refinement: "nf-proper".into(),
            profile: None,
            point: Some(vec![
                ["1", "1/2", "1/2", "0", "1/2", "0", "1/2"].map(String::from).to_vec(),
                ["1", "1", "0", "1/2", "1/2"].map(String::from).to_vec(),
            ]),
            note: "player 1 mixes evenly and never gives the gift; player 2's off-path guess is not pinned down".into(),
        }],
        GenSpec::DoubleExp { n } => {
            let eps = Rat::new(BigInt::one(), BigInt::one() << (1usize << n));
            vec![Reference {
                refinement: "perturbed-nash".into(),
                profile: None,
                point: Some(vec![double_exp_reference(*n, &eps).iter().map(fmt_rat).collect()]),
                note: format!("equilibrium of the perturbed game at eps = {}", fmt_rat(&eps)),
            }]
        }
        other => return Err(GenError::NoReferenceAvailable(other.name().into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{eval_pure, eval_rational};

    #[test]
    fn fig2_table() {
        let Generated::NormalForm { game, .. } = generate(&GenSpec::Fig2Myerson).unwrap() else { panic!() };
        assert_eq!(eval_pure(game.potential(), &[0, 2]).unwrap(), rat_int(-9));
        assert_eq!(eval_pure(game.potential(), &[2, 1]).unwrap(), rat_int(-7));
    }

    #[test]
    fn double_exp_one() {
        let c = double_exp_circuit(1).unwrap();
        assert_eq!(c.num_players(), 5);
        // x=1, x'=1, c=0, d=0, t=1: (1-0)(1-1/4) + (0-1/2)(0) - 2 - 2 - 2
        let x: Vec<Vec<Rat>> = [1, 1, 0, 0, 1].iter().map(|&p| vec![rat_int(p), rat_int(1 - p)]).collect();
        assert_eq!(eval_rational(&c, &x).unwrap(), rat(3, 4) - rat_int(6));
    }

    #[test]
    fn reference_n2() {
        let r = double_exp_reference(2, &rat(1, 16));
        assert_eq!(&r[..2], &[rat(1, 4), rat(1, 16)]);
        assert_eq!(&r[2..4], &[rat(1, 4), rat(1, 16)]);
    }

    #[test]
    fn triangle_triplets() {
        let g = WeightedGraph { vertices: 3, edges: vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)] };
        let c = maxcut_triplet_circuit(&g).unwrap();
        assert_eq!(c.num_players(), 9);
        let prof = [0, 0, 0, 0, 0, 0, 1, 1, 1];
        assert_eq!(eval_pure(&c, &prof).unwrap(), rat_int(2));
        // one split triplet: no penalty
        assert_eq!(eval_pure(&c, &[0, 0, 1, 0, 0, 0, 1, 1, 1]).unwrap(), rat_int(2));
        // two split triplets: penalty 2/18
        assert_eq!(eval_pure(&c, &[0, 0, 1, 0, 1, 0, 1, 1, 1]).unwrap(), rat_int(2) - rat(2, 18));
        assert_eq!(triplet_partition(&prof, 3), vec![true, true, false]);
    }

    #[test]
    fn escape_payoffs() {
        let g = WeightedGraph { vertices: 2, edges: vec![(0, 1, 3)] };
        let c = maxcut_escape_circuit(&g).unwrap();
        assert_eq!(eval_pure(&c, &[0, 1, 0, 1]).unwrap(), rat_int(3));
        // M = 4·3 + 1, both vertices on b
        assert_eq!(eval_pure(&c, &[0, 0, 1, 1]).unwrap(), rat_int(15));
    }

    #[test]
    fn team_bot_cases() {
        let vals: Vec<Rat> = (0..8).map(rat_int).collect();
        let c = team_bot_circuit(&[2, 2, 2], &vals, &rat_int(5), &rat(1, 2)).unwrap();
        assert_eq!(eval_pure(&c, &[1, 0, 1]).unwrap(), rat_int(5));
        assert_eq!(eval_pure(&c, &[2, 0, 2]).unwrap(), rat(19, 4));
        assert_eq!(eval_pure(&c, &[2, 2, 2]).unwrap(), rat_int(5));
        assert_eq!(eval_pure(&c, &[2, 0, 1]).unwrap(), rat_int(5));
    }

    #[test]
    fn knapsack_count() {
        let (u, k) = knapsack_hypercube(&[1, 2, 3], 3).unwrap();
        assert_eq!(u[0], rat(-7, 2));
        // subsets with sum ≤ 3: {}, {1}, {2}, {3}, {1,2}
        assert_eq!(k, 5);
    }

    #[test]
    fn christmas_tree_sizes() {
        let g = mp_christmas();
        assert_eq!(g.trees[0].num_sequences(), 7);
        assert_eq!(g.trees[1].num_sequences(), 5);
    }

    #[test]
    fn fig1_reference() {
        assert_eq!(reference_solutions(&GenSpec::Fig1).unwrap()[0].profile, Some(vec![0, 0]));
        assert!(reference_solutions(&GenSpec::Fig6SymbolicGd).is_err());
    }
}
