//! Brute-force reference checks. Nothing here calls into the solvers; the
//! evaluators, enumerators and projections are written out separately.

use std::cmp::Ordering;

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Gate, MultilinearCircuit};
use crate::congestion::{Digraph, Matroid};
use crate::efg::tree::ValidatedTree;
use crate::eps::{cmp_lex, fmt_rat, rat_bits, EpsPoly, Rat};
use crate::game::{ConcisePotentialGame, EpsPureProfile, PerturbScheme, PureStrategy};
use crate::polymatrix::PolymatrixGame;

pub const MAX_VERTICES: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("player {player} gives action {action} no mass")]
    NotFullyMixed { player: usize, action: usize },
    #[error("strategy of player {0} does not sum to 1")]
    NotDistribution(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0} vertices exceed the cap of {1}")]
    TooManyVertices(usize, usize),
    #[error("enumeration of {0} items exceeds the cap of {1}")]
    EnumerationCapExceeded(u64, u64),
}

/// `(player, worse, better)`: `worse` is strictly worse than `better` yet carries too much mass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub player: usize,
    pub worse: usize,
    pub better: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub eps: Rat,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "pass": self.pass, "eps": fmt_rat(&self.eps), "witness": self.witness })
    }
}

/// `2^(−2·bits)`.
pub fn numeric_eps(bits: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << (2 * bits.max(1)))
}

/// Largest constant bit size in the game's circuits.
pub fn game_bits(g: &ConcisePotentialGame) -> u64 {
    let mut circuits = vec![g.potential()];
    if let Some(us) = g.explicit_utilities() {
        circuits.extend(us.iter());
    }
    circuits
        .iter()
        .flat_map(|c| c.gates().iter())
        .filter_map(|gate| match gate {
            Gate::Const(r) => Some(rat_bits(r)),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

/// Expectation of the circuit under independent mixed strategies, gate by gate.
pub fn expect_value(c: &MultilinearCircuit, x: &[Vec<Rat>]) -> Rat {
    let mut v: Vec<Rat> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let val = match g {
            Gate::Input { player, action } => x[*player][*action].clone(),
            Gate::Const(r) => r.clone(),
            Gate::Add(a, b) => &v[*a] + &v[*b],
            Gate::Mul(a, b) => &v[*a] * &v[*b],
        };
        v.push(val);
    }
    v.swap_remove(c.output())
}

/// Same as [`expect_value`] over ε-polynomials, with no interpolation.
pub fn expect_symbolic(c: &MultilinearCircuit, x: &[Vec<EpsPoly>]) -> EpsPoly {
    let mut v: Vec<EpsPoly> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let val = match g {
            Gate::Input { player, action } => x[*player][*action].clone(),
            Gate::Const(r) => EpsPoly::constant(r.clone()),
            Gate::Add(a, b) => &v[*a] + &v[*b],
            Gate::Mul(a, b) => &v[*a] * &v[*b],
        };
        v.push(val);
    }
    v.swap_remove(c.output())
}

/// Expected utility of each pure action of `player` against the others' mixed strategies.
pub fn action_payoffs(c: &MultilinearCircuit, x: &[Vec<Rat>], player: usize) -> Vec<Rat> {
    let m = x[player].len();
    let mut y = x.to_vec();
    (0..m)
        .map(|a| {
            y[player] = (0..m).map(|b| if a == b { Rat::one() } else { Rat::zero() }).collect();
            expect_value(c, &y)
        })
        .collect()
}

fn validate_profile(x: &[Vec<Rat>], actions: &[usize]) -> Result<(), OracleError> {
    if x.len() != actions.len() {
        return Err(OracleError::Shape(format!("{} strategies for {} players", x.len(), actions.len())));
    }
    for (i, xi) in x.iter().enumerate() {
        if xi.len() != actions[i] {
            return Err(OracleError::Shape(format!("player {i} has {} entries, expected {}", xi.len(), actions[i])));
        }
        if let Some(a) = xi.iter().position(|p| !p.is_positive()) {
            return Err(OracleError::NotFullyMixed { player: i, action: a });
        }
        if xi.iter().sum::<Rat>() != Rat::one() {
            return Err(OracleError::NotDistribution(i));
        }
    }
    Ok(())
}

/// Checks all ordered pairs. `proper` selects `x(a) ≤ ε·x(a′)` instead of `x(a) ≤ ε`.
pub fn check_pairs(x: &[Vec<Rat>], payoffs: &[Vec<Rat>], eps: &Rat, proper: bool) -> Verdict {
    for (i, (xi, ui)) in x.iter().zip(payoffs).enumerate() {
        for a in 0..ui.len() {
            for b in 0..ui.len() {
                if ui[a] < ui[b] {
                    let cap = if proper { eps * &xi[b] } else { eps.clone() };
                    if xi[a] > cap {
                        return Verdict {
                            pass: false,
                            eps: eps.clone(),
                            witness: Some(Witness { player: i, worse: a, better: b }),
                        };
                    }
                }
            }
        }
    }
    Verdict { pass: true, eps: eps.clone(), witness: None }
}

fn game_payoffs(g: &ConcisePotentialGame, x: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    (0..g.num_players()).map(|i| action_payoffs(g.utility(i), x, i)).collect()
}

/// `u(a) < u(a′) ⇒ x(a) ≤ ε` for every player and ordered action pair.
pub fn check_eps_perfect(g: &ConcisePotentialGame, x: &[Vec<Rat>], eps: &Rat) -> Result<Verdict, OracleError> {
    validate_profile(x, g.actions())?;
    Ok(check_pairs(x, &game_payoffs(g, x), eps, false))
}

/// `u(a) < u(a′) ⇒ x(a) ≤ ε·x(a′)`.
pub fn check_eps_proper(g: &ConcisePotentialGame, x: &[Vec<Rat>], eps: &Rat) -> Result<Verdict, OracleError> {
    validate_profile(x, g.actions())?;
    Ok(check_pairs(x, &game_payoffs(g, x), eps, true))
}

/// Action payoffs in a polymatrix game, summed edge by edge.
pub fn polymatrix_payoffs(g: &PolymatrixGame, x: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = g.actions().iter().map(|&m| vec![Rat::zero(); m]).collect();
    for e in g.edges() {
        for (a, row) in e.p_ij.iter().enumerate() {
            out[e.i][a] += row.iter().zip(&x[e.j]).map(|(p, q)| p * q).sum::<Rat>();
        }
        for (b, row) in e.p_ji.iter().enumerate() {
            out[e.j][b] += row.iter().zip(&x[e.i]).map(|(p, q)| p * q).sum::<Rat>();
        }
    }
    out
}

pub fn check_polymatrix(g: &PolymatrixGame, x: &[Vec<Rat>], eps: &Rat, proper: bool) -> Result<Verdict, OracleError> {
    validate_profile(x, g.actions())?;
    Ok(check_pairs(x, &polymatrix_payoffs(g, x), eps, proper))
}

/// Kohlberg–Mertens response: vertices sorted by value, then `Σ εⁱ vᵢ`.
#[derive(Clone, Debug)]
pub struct KmResponse {
    /// Vertex indices, best first; ties keep input order.
    pub order: Vec<usize>,
    pub values: Vec<Rat>,
    /// Unnormalized `Σ εⁱ vᵢ`, one polynomial per coordinate.
    pub symbolic: Vec<EpsPoly>,
    /// Normalized point at the given ε.
    pub point: Vec<Rat>,
}

fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn brute_proper_br(vertices: &[Vec<Rat>], u: &[Rat], eps: &Rat) -> Result<KmResponse, OracleError> {
    if vertices.is_empty() {
        return Err(OracleError::Shape("no vertices".into()));
    }
    if vertices.len() > MAX_VERTICES {
        return Err(OracleError::TooManyVertices(vertices.len(), MAX_VERTICES));
    }
    let d = u.len();
    if let Some(v) = vertices.iter().find(|v| v.len() != d) {
        return Err(OracleError::Shape(format!("vertex of length {} for utility of length {d}", v.len())));
    }
    let values: Vec<Rat> = vertices.iter().map(|v| dot(u, v)).collect();
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]));
    let symbolic: Vec<EpsPoly> = (0..d)
        .map(|c| EpsPoly::from_coeffs(order.iter().map(|&k| vertices[k][c].clone()).collect()))
        .collect();
    let mut point = vec![Rat::zero(); d];
    let mut w = Rat::one();
    let mut total = Rat::zero();
    for &k in &order {
        for (p, c) in point.iter_mut().zip(&vertices[k]) {
            *p += &w * c;
        }
        total += &w;
        w *= eps;
    }
    for p in &mut point {
        *p /= &total;
    }
    let values = order.iter().map(|&k| values[k].clone()).collect();
    Ok(KmResponse { order, values, symbolic, point })
}

/// All pure realization plans of a tree, as 0/1 vectors.
pub fn tree_vertices(t: &ValidatedTree) -> Result<Vec<Vec<Rat>>, OracleError> {
    fn plans(t: &ValidatedTree, s: usize, cap: usize) -> Result<Vec<Vec<usize>>, OracleError> {
        let mut acc: Vec<Vec<usize>> = vec![vec![s]];
        for &j in t.children(s) {
            let mut options = Vec::new();
            for &a in &t.dp(j).actions {
                options.extend(plans(t, a, cap)?);
            }
            if acc.len().saturating_mul(options.len()) > cap {
                return Err(OracleError::TooManyVertices(acc.len().saturating_mul(options.len()), cap));
            }
            acc = acc
                .iter()
                .flat_map(|p| options.iter().map(move |o| p.iter().chain(o).copied().collect()))
                .collect();
        }
        Ok(acc)
    }
    let d = t.num_sequences();
    Ok(plans(t, 0, MAX_VERTICES)?
        .into_iter()
        .map(|p| {
            let mut v = vec![Rat::zero(); d];
            for s in p {
                v[s] = Rat::one();
            }
            v
        })
        .collect())
}

/// Coefficients `c` with `Σ c_k cols[k] = target` and `Σ c_k = 1`, if any.
fn affine_coefficients(cols: &[&Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let n = cols.len();
    let mut rows: Vec<Vec<Rat>> = (0..target.len())
        .map(|r| cols.iter().map(|c| c[r].clone()).chain([target[r].clone()]).collect())
        .collect();
    rows.push(vec![Rat::one(); n + 1]);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in &mut rows[r] {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..=n {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut c = vec![Rat::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = rows[i][n].clone();
    }
    Some(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperCertificate {
    pub pass: bool,
    /// Smallest dominance ratio reached by the reconstructed distribution.
    pub eps_achieved: Option<Rat>,
    /// `ε` for which `ε^{|V|+3} ≥ ε̂` guarantees the construction.
    pub eps_bound: Rat,
    pub reason: Option<String>,
}

/// Certifies that `x = b₀ + Σ ε̂ⁱ(bᵢ − b₀)` is a proper best response by
/// building an explicit full-support distribution over all vertices with
/// mean `x` and checking its dominance ratios. `basis` must be sorted best first.
pub fn certify_proper_response(
    vertices: &[Vec<Rat>],
    u: &[Rat],
    basis: &[Vec<Rat>],
    x: &[Rat],
    eps_hat: &Rat,
) -> Result<ProperCertificate, OracleError> {
    let km = brute_proper_br(vertices, u, eps_hat)?;
    let nv = vertices.len();
    let mut bound = Rat::one();
    loop {
        let next = &bound / Rat::from_integer(2.into());
        if num::pow(next.clone(), nv + 3) >= *eps_hat {
            bound = next;
        } else {
            break;
        }
    }
    let fail = |why: String| ProperCertificate { pass: false, eps_achieved: None, eps_bound: bound.clone(), reason: Some(why) };
    if basis.is_empty() {
        return Ok(fail("empty basis".into()));
    }
    let bval: Vec<Rat> = basis.iter().map(|b| dot(u, b)).collect();
    if bval.windows(2).any(|w| w[0] < w[1]) {
        return Ok(fail("basis is not sorted by value".into()));
    }
    let sorted: Vec<&Vec<Rat>> = km.order.iter().map(|&k| &vertices[k]).collect();
    let in_basis: Vec<Option<usize>> = sorted.iter().map(|v| basis.iter().position(|b| b == *v)).collect();
    for b in basis {
        if !vertices.contains(b) {
            return Ok(fail("basis member is not a vertex".into()));
        }
    }

    let mut claimed = basis[0].clone();
    let mut w = Rat::one();
    for b in &basis[1..] {
        w *= eps_hat;
        for ((c, bi), b0) in claimed.iter_mut().zip(b).zip(&basis[0]) {
            *c += &w * (bi - b0);
        }
    }
    if claimed != x {
        return Ok(fail("point differs from the spanning-set combination".into()));
    }

    // affine data for every non-basis vertex
    struct Outside {
        pos: usize,
        top: usize,
        coef: Vec<Rat>,
    }
    let mut outside = Vec::new();
    for (pos, v) in sorted.iter().enumerate() {
        if in_basis[pos].is_some() {
            continue;
        }
        let better: Vec<&Vec<Rat>> = basis.iter().zip(&bval).filter(|(_, bv)| **bv >= km.values[pos]).map(|(b, _)| b).collect();
        if better.is_empty() {
            return Ok(fail(format!("vertex {} has no weakly better basis member", km.order[pos])));
        }
        let Some(coef) = affine_coefficients(&better, v) else {
            return Ok(fail(format!("vertex {} is outside the affine hull of better basis members", km.order[pos])));
        };
        outside.push(Outside { pos, top: better.len() - 1, coef });
    }

    let mut best: Option<Rat> = None;
    for k in 1..=40u32 {
        let eta = Rat::new(BigInt::one(), BigInt::one() << k);
        let mut mu: Vec<Rat> = (0..basis.len()).map(|i| num::pow(eps_hat.clone(), i)).collect();
        mu[0] = Rat::one() - mu[1..].iter().sum::<Rat>();
        let mut lambda = vec![Rat::zero(); nv];
        for o in &outside {
            let l = num::pow(eps_hat.clone(), o.top) * num::pow(eta.clone(), o.pos + 2);
            for (m, c) in mu.iter_mut().zip(&o.coef) {
                *m -= &l * c;
            }
            lambda[o.pos] = l;
        }
        for (pos, b) in in_basis.iter().enumerate() {
            if let Some(i) = b {
                lambda[pos] = mu[*i].clone();
            }
        }
        if lambda.iter().any(|l| !l.is_positive()) {
            continue;
        }
        let mut mean = vec![Rat::zero(); u.len()];
        for (l, v) in lambda.iter().zip(&sorted) {
            for (m, c) in mean.iter_mut().zip(v.iter()) {
                *m += l * c;
            }
        }
        if mean != x {
            return Ok(fail("reconstructed distribution has the wrong mean".into()));
        }
        // worst ratio λ_v / λ_v′ over strictly better v′
        let mut ratio = Rat::zero();
        let mut min_better: Option<Rat> = None;
        let mut group_min: Option<Rat> = None;
        for pos in 0..nv {
            if pos > 0 && km.values[pos] < km.values[pos - 1] {
                min_better = match (min_better, group_min.take()) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
            if let Some(mb) = &min_better {
                let r = &lambda[pos] / mb;
                if r > ratio {
                    ratio = r;
                }
            }
            group_min = Some(match group_min {
                Some(g) => g.min(lambda[pos].clone()),
                None => lambda[pos].clone(),
            });
        }
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    Ok(match best {
        Some(r) => ProperCertificate { pass: r <= bound, eps_achieved: Some(r), eps_bound: bound, reason: None },
        None => fail("no positive distribution found".into()),
    })
}

fn odometer(idx: &mut [usize], radix: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < radix[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn embed(s: &PureStrategy, m: usize) -> Vec<EpsPoly> {
    match s {
        PureStrategy::Favored(a) => (0..m)
            .map(|b| if b == *a { EpsPoly::from_ints(&[1, -(m as i64 - 1)]) } else { EpsPoly::eps() })
            .collect(),
        PureStrategy::Ranked(pi) => pi.iter().map(|&r| EpsPoly::monomial(Rat::one(), r)).collect(),
    }
}

/// Exhaustive `cmp_lex` argmax of the perturbed potential. The permutahedron
/// is left unnormalized, which scales every profile by the same positive factor.
pub fn brute_max_perturbed_potential(
    g: &ConcisePotentialGame,
    scheme: PerturbScheme,
    cap: u64,
) -> Result<(EpsPureProfile, EpsPoly), OracleError> {
    let m = g.actions();
    let choices: Vec<Vec<PureStrategy>> = m
        .iter()
        .map(|&mi| match scheme {
            PerturbScheme::PerfectBox => (0..mi).map(PureStrategy::Favored).collect(),
            PerturbScheme::ProperPermutahedron => {
                all_permutations(mi).into_iter().map(PureStrategy::Ranked).collect()
            }
        })
        .collect();
    let total = choices.iter().fold(1u64, |a, c| a.saturating_mul(c.len() as u64));
    if total > cap {
        return Err(OracleError::EnumerationCapExceeded(total, cap));
    }
    let radix: Vec<usize> = choices.iter().map(Vec::len).collect();
    let mut idx = vec![0; m.len()];
    let mut best: Option<(EpsPureProfile, EpsPoly)> = None;
    loop {
        let strategies: Vec<PureStrategy> = idx.iter().enumerate().map(|(i, &k)| choices[i][k].clone()).collect();
        let x: Vec<Vec<EpsPoly>> = strategies.iter().zip(m).map(|(s, &mi)| embed(s, mi)).collect();
        let v = expect_symbolic(g.potential(), &x);
        if best.as_ref().is_none_or(|(_, b)| cmp_lex(&v, b) == Ordering::Greater) {
            best = Some((EpsPureProfile { strategies }, v));
        }
        if !odometer(&mut idx, &radix) {
            break;
        }
    }
    Ok(best.expect("at least one profile"))
}

/// Pure profiles where no player has a strictly better unilateral deviation.
pub fn pure_nash_profiles(g: &ConcisePotentialGame, cap: u64) -> Result<Vec<Vec<usize>>, OracleError> {
    let m = g.actions();
    let total = m.iter().fold(1u64, |a, &b| a.saturating_mul(b as u64));
    if total > cap {
        return Err(OracleError::EnumerationCapExceeded(total, cap));
    }
    let point = |p: &[usize]| -> Vec<Vec<Rat>> {
        p.iter()
            .zip(m)
            .map(|(&a, &mi)| (0..mi).map(|b| if a == b { Rat::one() } else { Rat::zero() }).collect())
            .collect()
    };
    let mut idx = vec![0; m.len()];
    let mut out = Vec::new();
    loop {
        let x = point(&idx);
        let stable = (0..m.len()).all(|i| {
            let pay = action_payoffs(g.utility(i), &x, i);
            pay.iter().all(|v| *v <= pay[idx[i]])
        });
        if stable {
            out.push(idx.clone());
        }
        if !odometer(&mut idx, m) {
            break;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- congestion

fn independent(m: &Matroid, set: &[usize]) -> bool {
    match m {
        Matroid::Uniform { rank, .. } => set.len() <= *rank,
        Matroid::Partition { blocks, quotas } => blocks
            .iter()
            .zip(quotas)
            .all(|(b, q)| set.iter().filter(|e| b.contains(e)).count() <= *q),
        Matroid::Graphic { vertices, edges } => {
            // a forest has exactly |V| − |E| components
            let mut comp: Vec<usize> = (0..*vertices).collect();
            for &e in set {
                let (a, b) = edges[e];
                let (ca, cb) = (comp[a], comp[b]);
                if ca == cb {
                    return false;
                }
                for c in comp.iter_mut() {
                    if *c == cb {
                        *c = ca;
                    }
                }
            }
            true
        }
    }
}

/// Every maximum-size independent set, by subset enumeration.
pub fn brute_bases(m: &Matroid) -> Result<Vec<Vec<usize>>, OracleError> {
    let size = m.size();
    if size > 20 {
        return Err(OracleError::EnumerationCapExceeded(1 << size.min(63), 1 << 20));
    }
    let mut best = 0;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << size) {
        let set: Vec<usize> = (0..size).filter(|&e| mask >> e & 1 == 1).collect();
        if set.len() < best || !independent(m, &set) {
            continue;
        }
        if set.len() > best {
            best = set.len();
            out.clear();
        }
        out.push(set);
    }
    Ok(out)
}

/// Every simple `s → t` path as an edge list, by depth-first search.
pub fn brute_paths(g: &Digraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(g: &Digraph, at: usize, t: usize, seen: &mut Vec<bool>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == t {
            out.push(path.clone());
            return;
        }
        for (e, &(a, b)) in g.edges.iter().enumerate() {
            if a == at && !seen[b] {
                seen[b] = true;
                path.push(e);
                go(g, b, t, seen, path, out);
                path.pop();
                seen[b] = false;
            }
        }
    }
    let mut seen = vec![false; g.nodes];
    seen[s] = true;
    let mut out = Vec::new();
    go(g, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Cheapest simple path under `cmp_lex`; ties keep the first path found.
pub fn brute_shortest_path(g: &Digraph, s: usize, t: usize, cost: &[EpsPoly]) -> Option<(Vec<usize>, EpsPoly)> {
    brute_paths(g, s, t)
        .into_iter()
        .map(|p| {
            let c: EpsPoly = p.iter().map(|&e| cost[e].clone()).sum();
            (p, c)
        })
        .fold(None, |acc: Option<(Vec<usize>, EpsPoly)>, (p, c)| match acc {
            Some((bp, bc)) if cmp_lex(&c, &bc) != Ordering::Less => Some((bp, bc)),
            _ => Some((p, c)),
        })
}

/// Symmetric congestion game described by its explicit strategy list.
#[derive(Clone, Debug)]
pub struct ExplicitCongestion {
    pub players: usize,
    pub resources: usize,
    /// Each pure strategy as a set of resources.
    pub strategies: Vec<Vec<usize>>,
    /// `delays[r][k-1] = d_r(k)`.
    pub delays: Vec<Vec<Rat>>,
}

impl ExplicitCongestion {
    fn usage(&self) -> Vec<usize> {
        let mut c = vec![0; self.resources];
        for s in &self.strategies {
            for &r in s {
                c[r] += 1;
            }
        }
        c
    }

    /// `d̃_r(k)` by summing over all `2^n` usage outcomes: `k` players use `r`
    /// with probability `h`, the rest with probability `f`.
    pub fn perturbed_delay(&self, r: usize, k: usize) -> EpsPoly {
        let n = self.players;
        let total = Rat::from_integer(BigInt::from(self.strategies.len()));
        let br = Rat::from_integer(BigInt::from(self.usage()[r]));
        let h = EpsPoly::from_coeffs(vec![Rat::one(), &br - &total]);
        let f = EpsPoly::monomial(br, 1);
        let one = EpsPoly::one();
        let mut acc = EpsPoly::zero();
        for mask in 0u32..(1 << n) {
            let mut p = EpsPoly::one();
            for l in 0..n {
                let w = if l < k { &h } else { &f };
                p = if mask >> l & 1 == 1 { &p * w } else { &p * &(&one - w) };
            }
            let users = mask.count_ones() as usize;
            if users > 0 {
                acc = &acc + &p.scale(&self.delays[r][users - 1]);
            }
        }
        acc
    }

    fn table(&self) -> Vec<Vec<EpsPoly>> {
        (0..self.resources).map(|r| (0..=self.players).map(|k| self.perturbed_delay(r, k)).collect()).collect()
    }

    fn loads(&self, choice: &[usize]) -> Vec<usize> {
        let mut l = vec![0; self.resources];
        for &s in choice {
            for &r in &self.strategies[s] {
                l[r] += 1;
            }
        }
        l
    }

    /// Minimum of the perturbed Rosenthal potential over all multisets of strategies.
    pub fn brute_min_potential(&self, cap: u64) -> Result<(Vec<usize>, EpsPoly), OracleError> {
        let k = self.strategies.len();
        let n = self.players;
        let count = num::integer::binomial(BigInt::from(k + n - 1), BigInt::from(n));
        if count > BigInt::from(cap) {
            return Err(OracleError::EnumerationCapExceeded(u64::MAX, cap));
        }
        let table = self.table();
        let mut idx = vec![0usize; n];
        let mut best: Option<(Vec<usize>, EpsPoly)> = None;
        loop {
            let l = self.loads(&idx);
            let phi: EpsPoly = (0..self.resources).flat_map(|r| (1..=l[r]).map(move |j| (r, j))).map(|(r, j)| table[r][j].clone()).sum();
            if best.as_ref().is_none_or(|(_, b)| cmp_lex(&phi, b) == Ordering::Less) {
                best = Some((idx.clone(), phi));
            }
            // next non-decreasing tuple
            let Some(p) = (0..n).rev().find(|&p| idx[p] + 1 < k) else { break };
            let v = idx[p] + 1;
            for q in idx.iter_mut().skip(p) {
                *q = v;
            }
        }
        Ok(best.expect("at least one profile"))
    }

    /// Numeric no-deviation check at `eps`: no favored strategy is strictly
    /// cheaper than the current one. `profile[i]` indexes `strategies`.
    pub fn check_no_deviation(&self, profile: &[usize], eps: &Rat) -> Result<CongestionVerdict, OracleError> {
        if profile.len() != self.players || profile.iter().any(|&s| s >= self.strategies.len()) {
            return Err(OracleError::Shape("profile does not index the strategy list".into()));
        }
        let table: Vec<Vec<Rat>> = self.table().iter().map(|row| row.iter().map(|p| p.eval(eps)).collect()).collect();
        let l = self.loads(profile);
        for (i, &si) in profile.iter().enumerate() {
            let mut others = l.clone();
            for &r in &self.strategies[si] {
                others[r] -= 1;
            }
            let cost = |s: usize| -> Rat { self.strategies[s].iter().map(|&r| table[r][others[r] + 1].clone()).sum() };
            let current = cost(si);
            for s in 0..self.strategies.len() {
                let c = cost(s);
                if c < current {
                    return Ok(CongestionVerdict { pass: false, eps: eps.clone(), witness: Some((i, s, current - c)) });
                }
            }
        }
        Ok(CongestionVerdict { pass: true, eps: eps.clone(), witness: None })
    }

    /// Index of `set` in the strategy list, comparing as sets.
    pub fn strategy_index(&self, set: &[usize]) -> Option<usize> {
        let mut a = set.to_vec();
        a.sort_unstable();
        self.strategies.iter().position(|s| {
            let mut b = s.clone();
            b.sort_unstable();
            a == b
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongestionVerdict {
    pub pass: bool,
    pub eps: Rat,
    /// `(player, cheaper strategy, improvement)`.
    pub witness: Option<(usize, usize, Rat)>,
}

// ---------------------------------------------------------------- projection

/// Euclidean projection onto `{x ≥ ε, Σx = 1}` by trying every clamped set.
pub fn project_active_set(v: &[Rat], eps: &Rat) -> Result<Vec<Rat>, OracleError> {
    let k = v.len();
    if k == 0 || k > 16 {
        return Err(OracleError::Shape(format!("active-set projection supports 1..=16 coordinates, got {k}")));
    }
    for mask in 0u32..(1 << k) {
        let free: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).collect();
        if free.is_empty() {
            continue;
        }
        let clamped = Rat::from_integer(BigInt::from(k - free.len())) * eps;
        let rest: Rat = free.iter().map(|&i| v[i].clone()).sum();
        let tau = (Rat::one() - clamped - rest) / Rat::from_integer(BigInt::from(free.len()));
        let ok_free = free.iter().all(|&i| &v[i] + &tau >= *eps);
        let ok_clamped = (0..k).filter(|&i| mask >> i & 1 == 1).all(|i| &v[i] + &tau <= *eps);
        if ok_free && ok_clamped {
            return Ok((0..k)
                .map(|i| if mask >> i & 1 == 1 { eps.clone() } else { &v[i] + &tau })
                .collect());
        }
    }
    Err(OracleError::Shape("empty feasible set".into()))
}

/// `max_i |a_i − b_i|` over all coordinates.
pub fn linf_distance(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Rat {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}
