//! Projected gradient ascent for polymatrix potential games, in exact rationals,
//! plus the symbolic variant for two-action players.

use std::cmp::Ordering;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitBuilder, CircuitError, MultilinearCircuit};
use crate::eps::{cmp_lex, fmt_rat, parse_rat, rat_bits, EpsPoly, Rat};

pub type Matrix = Vec<Vec<Rat>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("edge {0} is not a bimatrix potential game")]
    NotPotential(usize),
    #[error("floor ε·m exceeds 1")]
    InfeasibleFloor,
    #[error("ascent inequality violated at iteration {0}; step size too large")]
    StepSizeTooLarge(usize),
    #[error("symbolic projection supports two actions; player {0} has {1}")]
    UnsupportedDimension(usize, usize),
    #[error("invalid start: {0}")]
    BadStart(String),
    #[error("bad number: {0}")]
    BadNumber(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Edge `(i, j)` with payoffs `u_i += x_iᵀ P_ij x_j` and `u_j += x_jᵀ P_ji x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyEdge {
    pub i: usize,
    pub j: usize,
    pub p_ij: Matrix,
    pub p_ji: Matrix,
}

#[derive(Clone, Debug)]
pub struct PolymatrixGame {
    actions: Vec<usize>,
    edges: Vec<PolyEdge>,
    /// Edge potentials `Q_e` (rows: player `i`, columns: player `j`).
    potentials: Vec<Matrix>,
}

fn dims(m: &Matrix) -> (usize, usize) {
    (m.len(), m.first().map_or(0, Vec::len))
}

/// Potential of a bimatrix game, normalized so that row 0 carries the column player's payoffs.
pub fn bimatrix_potential(a: &Matrix, b_t: &Matrix) -> Option<Matrix> {
    let (r, c) = dims(a);
    let q: Matrix = (0..r)
        .map(|x| (0..c).map(|y| &(&a[x][y] + &b_t[y][0]) - &a[0][y]).collect())
        .collect();
    // row player's differences hold by construction; check the column player's
    let ok = (0..r).all(|x| (0..c).all(|y| &q[x][y] - &q[x][0] == &b_t[y][x] - &b_t[0][x]));
    ok.then_some(q)
}

impl PolymatrixGame {
    pub fn new(actions: Vec<usize>, edges: Vec<PolyEdge>) -> Result<Self, PolyError> {
        let mut potentials = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            if e.i >= actions.len() || e.j >= actions.len() || e.i == e.j {
                return Err(PolyError::Shape(format!("edge {k} joins invalid players")));
            }
            let (mi, mj) = (actions[e.i], actions[e.j]);
            let rect = |m: &Matrix, r: usize, c: usize| m.len() == r && m.iter().all(|row| row.len() == c);
            if !rect(&e.p_ij, mi, mj) || !rect(&e.p_ji, mj, mi) {
                return Err(PolyError::Shape(format!("edge {k} matrices do not match action counts")));
            }
            potentials.push(bimatrix_potential(&e.p_ij, &e.p_ji).ok_or(PolyError::NotPotential(k))?);
        }
        if actions.iter().any(|&m| m == 0) {
            return Err(PolyError::Shape("every player needs an action".into()));
        }
        Ok(PolymatrixGame { actions, edges, potentials })
    }

    /// Two players sharing one edge with payoff matrices `a` (row) and `b` (column, row-indexed).
    pub fn bimatrix(a: Matrix, b: Matrix) -> Result<Self, PolyError> {
        let (r, c) = dims(&a);
        let b_t: Matrix = (0..c).map(|y| (0..r).map(|x| b[x][y].clone()).collect()).collect();
        PolymatrixGame::new(vec![r, c], vec![PolyEdge { i: 0, j: 1, p_ij: a, p_ji: b_t }])
    }

    pub fn identical_interest(q: Matrix) -> Result<Self, PolyError> {
        PolymatrixGame::bimatrix(q.clone(), q)
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn edges(&self) -> &[PolyEdge] {
        &self.edges
    }

    pub fn edge_potentials(&self) -> &[Matrix] {
        &self.potentials
    }

    /// `u_i(x) = Σ_{e ∋ i} x_iᵀ P x_other`.
    pub fn utility(&self, x: &[Vec<Rat>], i: usize) -> Rat {
        let mut s = Rat::zero();
        for e in &self.edges {
            if e.i == i {
                s += bilinear(&e.p_ij, &x[e.i], &x[e.j]);
            }
            if e.j == i {
                s += bilinear(&e.p_ji, &x[e.j], &x[e.i]);
            }
        }
        s
    }

    pub fn potential(&self, x: &[Vec<Rat>]) -> Rat {
        self.edges
            .iter()
            .zip(&self.potentials)
            .map(|(e, q)| bilinear(q, &x[e.i], &x[e.j]))
            .sum()
    }

    /// `∇_{x_i} Φ`.
    pub fn gradient(&self, x: &[Vec<Rat>], i: usize) -> Vec<Rat> {
        let mut g = vec![Rat::zero(); self.actions[i]];
        for (e, q) in self.edges.iter().zip(&self.potentials) {
            if e.i == i {
                for (a, ga) in g.iter_mut().enumerate() {
                    *ga += dot(&q[a], &x[e.j]);
                }
            }
            if e.j == i {
                for (b, gb) in g.iter_mut().enumerate() {
                    *gb += q.iter().zip(&x[e.i]).map(|(row, xa)| &row[b] * xa).sum::<Rat>();
                }
            }
        }
        g
    }

    /// Rational upper bound on the smoothness constant: the largest per-player
    /// sum of incident Frobenius norms.
    pub fn smoothness_bound(&self) -> Rat {
        let mut per = vec![Rat::zero(); self.actions.len()];
        for (e, q) in self.edges.iter().zip(&self.potentials) {
            let f = sqrt_upper(&q.iter().flatten().map(|v| v * v).sum(), 20);
            per[e.i] += f.clone();
            per[e.j] += f;
        }
        per.into_iter().max().unwrap_or_else(Rat::zero)
    }

    /// Identical-interest circuit for the potential.
    pub fn potential_circuit(&self) -> Result<MultilinearCircuit, PolyError> {
        let mut b = CircuitBuilder::new(self.actions.clone());
        let mut terms = Vec::new();
        for (e, q) in self.edges.iter().zip(&self.potentials) {
            for (a, row) in q.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        let xa = b.input(e.i, a);
                        let xc = b.input(e.j, c);
                        let m = b.mul(xa, xc);
                        terms.push(b.scale(v.clone(), m));
                    }
                }
            }
        }
        let out = if terms.is_empty() { b.int(0) } else { b.sum(&terms) };
        Ok(b.finish(out)?)
    }

    /// Total bit size of the payoff entries.
    pub fn bit_size(&self) -> u64 {
        self.edges
            .iter()
            .flat_map(|e| e.p_ij.iter().chain(&e.p_ji).flatten())
            .map(rat_bits)
            .sum()
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bilinear(m: &Matrix, x: &[Rat], y: &[Rat]) -> Rat {
    m.iter().zip(x).map(|(row, xa)| xa * &dot(row, y)).sum()
}

/// Smallest `k/2^bits ≥ √r`.
pub fn sqrt_upper(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << (2 * bits);
    let target = (r * Rat::from_integer(scale)).ceil().to_integer();
    let mut k = target.sqrt();
    if &k * &k < target {
        k += 1;
    }
    Rat::new(k, BigInt::one() << bits)
}

/// `2^-(bits(game) + 16)`.
pub fn default_numeric_eps(g: &PolymatrixGame) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << (g.bit_size() + 16))
}

/// Euclidean projection onto `{x : x ≥ ε, Σx = 1}`.
pub fn project_truncated_simplex(v: &[Rat], eps: &Rat) -> Result<Vec<Rat>, PolyError> {
    let m = v.len();
    let s = Rat::one() - eps * Rat::from_integer(m.into());
    if s.is_negative() || m == 0 {
        return Err(PolyError::InfeasibleFloor);
    }
    let u: Vec<Rat> = v.iter().map(|x| x - eps).collect();
    let mut sorted = u.clone();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut acc = Rat::zero();
    let mut tau = Rat::zero();
    for (j, uj) in sorted.iter().enumerate() {
        acc += uj;
        let t = (&acc - &s) / Rat::from_integer((j + 1).into());
        if uj > &t {
            tau = t;
        }
    }
    Ok(u.iter().map(|x| eps + (x - &tau).max(Rat::zero())).collect())
}

/// `max_{x' ∈ truncated simplex} ⟨g, x' − x⟩`.
pub fn linear_gap(g: &[Rat], x: &[Rat], eps: &Rat) -> Rat {
    let best = (0..g.len()).fold(0, |b, a| if g[a] > g[b] { a } else { b });
    let top = Rat::one() - eps * Rat::from_integer((g.len() - 1).into());
    let mut v = Rat::zero();
    for (a, ga) in g.iter().enumerate() {
        let xa = if a == best { &top } else { eps };
        v += ga * (xa - &x[a]);
    }
    v
}

/// Rounds to multiples of `1/den`, keeping the sum at 1 by adjusting the largest coordinate.
fn round_simplex(x: &[Rat], den: &BigInt) -> Vec<Rat> {
    let d = Rat::from_integer(den.clone());
    let big = (0..x.len()).fold(0, |b, a| if x[a] > x[b] { a } else { b });
    let mut out: Vec<Rat> = x.iter().map(|v| (v * &d).round() / &d).collect();
    let rest: Rat = out.iter().enumerate().filter(|&(a, _)| a != big).map(|(_, v)| v.clone()).sum();
    out[big] = Rat::one() - rest;
    out
}

#[derive(Clone, Debug)]
pub struct GdConfig {
    pub eps: Rat,
    /// Defaults to `1/L` with `L` from [`PolymatrixGame::smoothness_bound`].
    pub eta: Option<Rat>,
    pub max_iters: usize,
    /// Iterates are rounded to multiples of `1/(den(ε)·2^grid_bits)`.
    pub grid_bits: u32,
    pub record: bool,
}

impl GdConfig {
    pub fn new(eps: Rat, max_iters: usize) -> Self {
        GdConfig { eps, eta: None, max_iters, grid_bits: 40, record: false }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryRow {
    pub iter: usize,
    pub x: Vec<Vec<Rat>>,
    pub potential: Rat,
    pub gap: Rat,
}

#[derive(Clone, Debug)]
pub struct GdResult {
    pub x: Vec<Vec<Rat>>,
    pub iters: usize,
    /// The last step left the point unchanged.
    pub fixed_point: bool,
    pub gap: Rat,
    pub potential: Rat,
    pub eta: Rat,
    /// Largest per-coordinate change introduced by grid rounding.
    pub max_rounding: Rat,
    pub trajectory: Vec<TrajectoryRow>,
}

fn stationarity_gap(g: &PolymatrixGame, x: &[Vec<Rat>], eps: &Rat) -> Rat {
    (0..x.len())
        .map(|i| linear_gap(&g.gradient(x, i), &x[i], eps))
        .max()
        .unwrap_or_else(Rat::zero)
}

fn check_start(g: &PolymatrixGame, x: &[Vec<Rat>], eps: &Rat) -> Result<(), PolyError> {
    if x.len() != g.actions.len() || x.iter().zip(&g.actions).any(|(xi, &m)| xi.len() != m) {
        return Err(PolyError::BadStart("shape does not match the game".into()));
    }
    for (i, xi) in x.iter().enumerate() {
        if xi.iter().sum::<Rat>() != Rat::one() || xi.iter().any(|v| v < eps) {
            return Err(PolyError::BadStart(format!("player {i} is outside the truncated simplex")));
        }
    }
    Ok(())
}

/// Simultaneous projected gradient ascent `x ← Π(x + η∇Φ(x))`.
pub fn run_gd(g: &PolymatrixGame, start: &[Vec<Rat>], cfg: &GdConfig) -> Result<GdResult, PolyError> {
    check_start(g, start, &cfg.eps)?;
    let eta = match &cfg.eta {
        Some(e) => e.clone(),
        None => {
            let l = g.smoothness_bound();
            if l.is_zero() {
                Rat::one()
            } else {
                l.recip()
            }
        }
    };
    let den = cfg.eps.denom().clone() << cfg.grid_bits;
    let mut x = start.to_vec();
    let mut phi = g.potential(&x);
    let mut trajectory = Vec::new();
    let mut max_rounding = Rat::zero();
    let mut fixed_point = false;
    let mut iters = 0;
    if cfg.record {
        trajectory.push(TrajectoryRow { iter: 0, x: x.clone(), potential: phi.clone(), gap: stationarity_gap(g, &x, &cfg.eps) });
    }
    while iters < cfg.max_iters {
        let mut next = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let grad = g.gradient(&x, i);
            let v: Vec<Rat> = x[i].iter().zip(&grad).map(|(a, b)| a + &(&eta * b)).collect();
            next.push(project_truncated_simplex(&v, &cfg.eps)?);
        }
        iters += 1;
        if next == x {
            fixed_point = true;
            break;
        }
        let next_phi = g.potential(&next);
        let dist2: Rat = next.iter().flatten().zip(x.iter().flatten()).map(|(a, b)| (a - b) * (a - b)).sum();
        if &next_phi - &phi < dist2 / (Rat::from_integer(2.into()) * &eta) {
            return Err(PolyError::StepSizeTooLarge(iters));
        }
        let rounded: Vec<Vec<Rat>> = next.iter().map(|xi| round_simplex(xi, &den)).collect();
        for (a, b) in rounded.iter().flatten().zip(next.iter().flatten()) {
            let d = (a - b).abs();
            if d > max_rounding {
                max_rounding = d;
            }
        }
        x = rounded;
        phi = g.potential(&x);
        if cfg.record {
            trajectory.push(TrajectoryRow { iter: iters, x: x.clone(), potential: phi.clone(), gap: stationarity_gap(g, &x, &cfg.eps) });
        }
    }
    let gap = stationarity_gap(g, &x, &cfg.eps);
    Ok(GdResult { x, iters, fixed_point, gap, potential: phi, eta, max_rounding, trajectory })
}

/// CSV with one row per recorded iterate.
pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::new();
    if let Some(first) = rows.first() {
        out.push_str("iter");
        for (i, xi) in first.x.iter().enumerate() {
            for a in 0..xi.len() {
                out.push_str(&format!(",x{i}_{a}"));
            }
        }
        out.push_str(",potential,gap\n");
    }
    for r in rows {
        out.push_str(&r.iter.to_string());
        for v in r.x.iter().flatten() {
            out.push_str(&format!(",{}", crate::eps::rat_to_f64(v)));
        }
        out.push_str(&format!(",{},{}\n", crate::eps::rat_to_f64(&r.potential), crate::eps::rat_to_f64(&r.gap)));
    }
    out
}

/// Starts on a `k × k` grid for a two-player game with two actions each:
/// first-action weights `(a + 1/2)/k`, clamped into the truncated simplex.
pub fn grid_starts(k: usize, eps: &Rat) -> Vec<Vec<Vec<Rat>>> {
    let clamp = |p: Rat| p.max(eps.clone()).min(Rat::one() - eps);
    let w = |a: usize| clamp(Rat::new((2 * a + 1).into(), (2 * k).into()));
    let mut out = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let (p, q) = (w(a), w(b));
            out.push(vec![vec![p.clone(), Rat::one() - p], vec![q.clone(), Rat::one() - q]]);
        }
    }
    out
}

/// Runs [`run_gd`] from every start on scoped worker threads; results keep the start order.
pub fn sweep(g: &PolymatrixGame, starts: &[Vec<Vec<Rat>>], cfg: &GdConfig) -> Result<Vec<GdResult>, PolyError> {
    if starts.is_empty() {
        return Ok(Vec::new());
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(starts.len());
    let chunk = starts.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|c| scope.spawn(move || c.iter().map(|s| run_gd(g, s, cfg)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

/// Projection of a two-coordinate symbolic point onto `{x ≥ ε, x₀ + x₁ = 1}`.
fn project_two(v: &[EpsPoly]) -> Vec<EpsPoly> {
    let tau = (&(&v[0] + &v[1]) - &EpsPoly::one()).scale(&Rat::new(1.into(), 2.into()));
    let w0 = &v[0] - &tau;
    let w1 = &v[1] - &tau;
    let eps = EpsPoly::eps();
    let top = EpsPoly::from_ints(&[1, -1]);
    if cmp_lex(&w1, &eps) == Ordering::Less {
        vec![top, eps]
    } else if cmp_lex(&w0, &eps) == Ordering::Less {
        vec![eps, top]
    } else {
        vec![w0, w1]
    }
}

#[derive(Clone, Debug)]
pub struct SymbolicGdResult {
    /// Iterates `x(0), …, x(T)`.
    pub states: Vec<Vec<Vec<EpsPoly>>>,
    /// `x(T)` at `ε = 0`.
    pub limit: Vec<Vec<Rat>>,
}

/// Symbolic projected gradient ascent; each comparison in the projection
/// is decided for all sufficiently small ε.
pub fn run_symbolic_gd(
    g: &PolymatrixGame,
    start: &[Vec<EpsPoly>],
    eta: &Rat,
    iters: usize,
) -> Result<SymbolicGdResult, PolyError> {
    if let Some((i, &m)) = g.actions.iter().enumerate().find(|&(_, &m)| m != 2) {
        return Err(PolyError::UnsupportedDimension(i, m));
    }
    if start.len() != g.actions.len() || start.iter().any(|s| s.len() != 2) {
        return Err(PolyError::BadStart("shape does not match the game".into()));
    }
    let mut states = vec![start.to_vec()];
    for _ in 0..iters {
        let x = states.last().expect("nonempty");
        let mut next = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let mut grad = vec![EpsPoly::zero(); 2];
            for (e, q) in g.edges.iter().zip(&g.potentials) {
                for a in 0..2 {
                    for b in 0..2 {
                        if e.i == i {
                            grad[a] = &grad[a] + &x[e.j][b].scale(&q[a][b]);
                        }
                        if e.j == i {
                            grad[b] = &grad[b] + &x[e.i][a].scale(&q[a][b]);
                        }
                    }
                }
            }
            let v: Vec<EpsPoly> = x[i].iter().zip(&grad).map(|(xa, ga)| xa + &ga.scale(eta)).collect();
            next.push(project_two(&v));
        }
        states.push(next);
    }
    let limit = states
        .last()
        .expect("nonempty")
        .iter()
        .map(|xi| xi.iter().map(|p| p.coeff(0)).collect())
        .collect();
    Ok(SymbolicGdResult { states, limit })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PolyEdgeJson {
    pub i: usize,
    pub j: usize,
    pub p_ij: Vec<Vec<String>>,
    pub p_ji: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PolymatrixJson {
    pub actions: Vec<usize>,
    pub edges: Vec<PolyEdgeJson>,
}

fn mat_to_json(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}

fn mat_from_json(m: &[Vec<String>]) -> Result<Matrix, PolyError> {
    m.iter()
        .map(|r| r.iter().map(|s| parse_rat(s).map_err(|e| PolyError::BadNumber(e.to_string()))).collect())
        .collect()
}

impl PolymatrixJson {
    pub fn from_game(g: &PolymatrixGame) -> Self {
        PolymatrixJson {
            actions: g.actions.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| PolyEdgeJson { i: e.i, j: e.j, p_ij: mat_to_json(&e.p_ij), p_ji: mat_to_json(&e.p_ji) })
                .collect(),
        }
    }

    pub fn to_game(&self) -> Result<PolymatrixGame, PolyError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(PolyEdge { i: e.i, j: e.j, p_ij: mat_from_json(&e.p_ij)?, p_ji: mat_from_json(&e.p_ji)? }))
            .collect::<Result<_, PolyError>>()?;
        PolymatrixGame::new(self.actions.clone(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps::{rat, rat_int};

    fn m(v: &[&[i64]]) -> Matrix {
        v.iter().map(|r| r.iter().map(|&c| rat_int(c)).collect()).collect()
    }

    #[test]
    fn clamp_two_coordinates() {
        let x = project_truncated_simplex(&[rat_int(2), rat_int(0)], &rat(1, 10)).unwrap();
        assert_eq!(x, vec![rat(9, 10), rat(1, 10)]);
    }

    #[test]
    fn projection_idempotent() {
        let v = vec![rat(1, 2), rat(3, 10), rat(1, 5)];
        assert_eq!(project_truncated_simplex(&v, &rat(1, 10)).unwrap(), v);
    }

    #[test]
    fn infeasible_floor() {
        assert_eq!(project_truncated_simplex(&vec![rat_int(1); 3], &rat(1, 2)), Err(PolyError::InfeasibleFloor));
    }

    #[test]
    fn fig4_potential() {
        let g = PolymatrixGame::bimatrix(m(&[&[12, 2], &[11, 0]]), m(&[&[2, 2], &[1, 0]])).unwrap();
        assert_eq!(g.edge_potentials()[0], m(&[&[2, 2], &[1, 0]]));
        assert_eq!(g.smoothness_bound(), rat_int(3));
    }

    #[test]
    fn non_potential_rejected() {
        let e = PolymatrixGame::bimatrix(m(&[&[1, 0], &[0, 1]]), m(&[&[0, 1], &[1, 0]]));
        assert_eq!(e.unwrap_err(), PolyError::NotPotential(0));
    }

    #[test]
    fn zero_game_stays() {
        let g = PolymatrixGame::identical_interest(m(&[&[0, 0], &[0, 0]])).unwrap();
        let start = vec![vec![rat(1, 3), rat(2, 3)], vec![rat(1, 2), rat(1, 2)]];
        let r = run_gd(&g, &start, &GdConfig::new(rat(1, 100), 10)).unwrap();
        assert_eq!(r.x, start);
        assert!(r.gap.is_zero());
        assert!(r.fixed_point);
    }

    #[test]
    fn fig6_symbolic_first_step() {
        let g = PolymatrixGame::identical_interest(m(&[&[0, 0], &[0, 1]])).unwrap();
        let s = vec![EpsPoly::from_ints(&[1, -1]), EpsPoly::eps()];
        let r = run_symbolic_gd(&g, &[s.clone(), s], &rat_int(1), 1).unwrap();
        let want = vec![EpsPoly::from_coeffs(vec![rat_int(1), rat(-3, 2)]), EpsPoly::monomial(rat(3, 2), 1)];
        assert_eq!(r.states[1], vec![want.clone(), want]);
        assert_eq!(r.limit, vec![vec![rat_int(1), rat_int(0)]; 2]);
    }

    #[test]
    fn json_round_trip() {
        let g = PolymatrixGame::bimatrix(m(&[&[12, 2], &[11, 0]]), m(&[&[2, 2], &[1, 0]])).unwrap();
        let j = PolymatrixJson::from_game(&g);
        let back = j.to_game().unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn sqrt_bound() {
        assert_eq!(sqrt_upper(&rat_int(9), 10), rat_int(3));
        assert!(sqrt_upper(&rat_int(2), 10) * sqrt_upper(&rat_int(2), 10) >= rat_int(2));
    }
}
