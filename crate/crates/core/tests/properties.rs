use std::cmp::Ordering;

use num::{BigInt, One, Zero};
use proptest::prelude::*;

use refinery_core::circuit::{circuit_from_tensor, eval_pure, eval_rational, eval_symbolic, MultilinearCircuit};
use refinery_core::congestion::delay::perturbed_count_probs;
use refinery_core::congestion::{perturbed_delay_table, run_matroid_dynamics, tremble_probs, Matroid, MatroidCongestionGame, MatroidConfig};
use refinery_core::dynamics::{run_dynamics, DynamicsConfig, Termination};
use refinery_core::efg::tree::{tree_from_nested, NestedAction, NestedDecision, ValidatedTree};
use refinery_core::efg::{efpe_best_response, inner, optimal_spanning_set};
use refinery_core::eps::{cmp_lex, interpolate_at_naturals, interpolate_poly, pow2_neg, psi_map, rat, rat_bits, rat_int, EpsPoly, Rat};
use refinery_core::game::{embed_numeric, embed_profile, embed_strategy, perturbed_potential, ConcisePotentialGame, EpsPureProfile, PerturbScheme, PureStrategy};
use refinery_core::oracles::{self, ExplicitCongestion};
use refinery_core::polymatrix::{linear_gap, project_truncated_simplex, run_gd, GdConfig, PolymatrixGame};
use refinery_core::strongpoly::{run_symbolic, BellmanFord, SymbolicConfig};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = EpsPoly> {
    prop::collection::vec(small_rat(), 0..=max_len).prop_map(EpsPoly::from_coeffs)
}

fn is_canonical(p: &EpsPoly) -> bool {
    p.coeffs().last().is_none_or(|c| !c.is_zero())
}

/// Identical-interest table game: `(actions, values)`.
fn table(max_players: usize, max_actions: usize) -> impl Strategy<Value = (Vec<usize>, Vec<i64>)> {
    prop::collection::vec(2..=max_actions, 1..=max_players).prop_flat_map(|actions| {
        let size = actions.iter().product::<usize>();
        (Just(actions), prop::collection::vec(-6i64..=6, size))
    })
}

fn game_of(actions: &[usize], values: &[i64]) -> ConcisePotentialGame {
    let v: Vec<Rat> = values.iter().map(|&c| rat_int(c)).collect();
    ConcisePotentialGame::identical_interest(circuit_from_tensor(actions, &v).unwrap())
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for r in 0..m {
            if !prefix.contains(&r) {
                prefix.push(r);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}

fn alternatives(scheme: PerturbScheme, m: usize) -> Vec<PureStrategy> {
    match scheme {
        PerturbScheme::PerfectBox => (0..m).map(PureStrategy::Favored).collect(),
        PerturbScheme::ProperPermutahedron => permutations(m).into_iter().map(PureStrategy::Ranked).collect(),
    }
}

fn scheme() -> impl Strategy<Value = PerturbScheme> {
    prop_oneof![Just(PerturbScheme::PerfectBox), Just(PerturbScheme::ProperPermutahedron)]
}

// ------------------------------------------------------------------ eps

proptest! {
    #[test]
    fn arithmetic_stays_canonical(p in poly(5), q in poly(5), c in small_rat()) {
        prop_assert!(is_canonical(&(&p + &q)));
        prop_assert!(is_canonical(&(&p - &q)));
        prop_assert!(is_canonical(&(&p * &q)));
        prop_assert!(is_canonical(&-&p));
        prop_assert!(is_canonical(&p.scale(&c)));
    }

    #[test]
    fn lexicographic_order_is_sound(p in poly(4), q in poly(4)) {
        let d = &q - &p;
        if cmp_lex(&p, &q) == Ordering::Less {
            let bits = d.coeffs().iter().map(rat_bits).max().unwrap_or(0);
            let deg = d.degree().unwrap_or(0) as u64;
            let eps = pow2_neg((2 * bits + 2 * deg).max(1) as u32);
            prop_assert!(p.eval(&eps) < q.eval(&eps));
        }
        prop_assert_eq!(cmp_lex(&p, &q), cmp_lex(&q, &p).reverse());
    }

    #[test]
    fn lagrange_is_exact(p in poly(6), extra in 0usize..3) {
        let d = p.degree().unwrap_or(0) + extra;
        let values: Vec<Rat> = (0..=d).map(|i| p.eval(&rat_int(i as i64))).collect();
        prop_assert_eq!(interpolate_at_naturals(&values), p.clone());
        let samples: Vec<(Rat, Rat)> = (0..=d + 2).map(|i| {
            let x = rat(i as i64 + 1, 3);
            let y = p.eval(&x);
            (x, y)
        }).collect();
        prop_assert_eq!(interpolate_poly(&samples, d).unwrap(), p);
    }

    #[test]
    fn psi_embeds_the_order(ps in prop::collection::vec(
        prop::collection::vec((-7i64..=7, 1i64..=7), 0..=4).prop_map(|cs| EpsPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect())),
        2..8,
    )) {
        let l = 4;
        let psi: Vec<_> = ps.iter().map(|p| psi_map(p, l).unwrap()).collect();
        for a in 0..ps.len() {
            for b in 0..ps.len() {
                prop_assert_eq!(cmp_lex(&ps[a], &ps[b]), psi[a].cmp(&psi[b]));
            }
        }
    }
}

// ------------------------------------------------------------------ circuits

/// Gate-free oracle: symbolic multilinear expectation over the full payoff table.
fn tensor_expectation(actions: &[usize], values: &[i64], x: &[Vec<EpsPoly>]) -> EpsPoly {
    let mut acc = EpsPoly::zero();
    for (k, &v) in values.iter().enumerate() {
        let mut rest = k;
        let mut w = EpsPoly::constant(rat_int(v));
        for i in (0..actions.len()).rev() {
            let a = rest % actions[i];
            rest /= actions[i];
            w = &w * &x[i][a];
        }
        acc = &acc + &w;
    }
    acc
}

fn symbolic_inputs(actions: &[usize]) -> impl Strategy<Value = Vec<Vec<EpsPoly>>> {
    actions.iter().map(|&m| prop::collection::vec(poly(2), m)).collect::<Vec<_>>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbolic_evaluation_matches_oracles(
        (actions, values, x) in table(3, 3).prop_flat_map(|(a, v)| {
            let xs = symbolic_inputs(&a);
            (Just(a), Just(v), xs)
        }),
        e in (1i64..=9, 2i64..=20).prop_map(|(n, d)| rat(n, d)),
    ) {
        let c: MultilinearCircuit = circuit_from_tensor(&actions, &values.iter().map(|&v| rat_int(v)).collect::<Vec<_>>()).unwrap();
        let sym = eval_symbolic(&c, &x, 2).unwrap();
        prop_assert_eq!(&sym, &tensor_expectation(&actions, &values, &x));
        prop_assert_eq!(&sym, &oracles::expect_symbolic(&c, &x));
        let xn: Vec<Vec<Rat>> = x.iter().map(|xi| xi.iter().map(|p| p.eval(&e)).collect()).collect();
        prop_assert_eq!(sym.eval(&e), eval_rational(&c, &xn).unwrap());
    }
}

// ------------------------------------------------------------------ embeddings and dynamics

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_embedding_is_a_distribution(m in 2usize..6, a in 0usize..6, k in 1i64..50) {
        let a = a % m;
        let eps = rat(1, (m as i64) * (k + 1));
        let x = embed_strategy(&PureStrategy::Favored(a), PerturbScheme::PerfectBox, m).unwrap();
        let v: Vec<Rat> = x.iter().map(|p| p.eval(&eps)).collect();
        prop_assert!(v.iter().all(|c| c > &Rat::zero()));
        prop_assert_eq!(v.iter().sum::<Rat>(), Rat::one());
    }

    #[test]
    fn permutahedron_embedding_limits(pi in (2usize..6).prop_flat_map(|m| Just((0..m).collect::<Vec<_>>()).prop_shuffle())) {
        let m = pi.len();
        let x = embed_strategy(&PureStrategy::Ranked(pi.clone()), PerturbScheme::ProperPermutahedron, m).unwrap();
        prop_assert!(x.iter().all(|p| p.eval(&Rat::one()) == Rat::one()));
        let top = pi.iter().position(|&r| r == 0).unwrap();
        for (a, p) in x.iter().enumerate() {
            prop_assert_eq!(p.eval(&Rat::zero()), if a == top { Rat::one() } else { Rat::zero() });
        }
    }

    #[test]
    fn perturbed_potential_at_zero_is_the_pure_potential((actions, values) in table(3, 3), seed in any::<u64>(), sch in scheme()) {
        let g = game_of(&actions, &values);
        let tops: Vec<usize> = actions.iter().enumerate().map(|(i, &m)| (seed >> (4 * i)) as usize % m).collect();
        let p = EpsPureProfile {
            strategies: tops.iter().zip(&actions).map(|(&a, &m)| match sch {
                PerturbScheme::PerfectBox => PureStrategy::Favored(a),
                PerturbScheme::ProperPermutahedron => {
                    PureStrategy::Ranked((0..m).map(|b| if b == a { 0 } else if b < a { b + 1 } else { b }).collect())
                }
            }).collect(),
        };
        let phi = perturbed_potential(&g, &p, sch).unwrap();
        prop_assert_eq!(phi.eval(&Rat::zero()), eval_pure(g.potential(), &tops).unwrap());
    }

    #[test]
    fn dynamics_invariants((actions, values) in table(3, 3), sch in scheme()) {
        let g = game_of(&actions, &values);
        let mut cfg = DynamicsConfig::new(sch, actions.len());
        cfg.trace = true;
        let start = EpsPureProfile::default_start(sch, &actions);
        let r = run_dynamics(&g, &start, &cfg).unwrap();
        prop_assert_eq!(r.termination, Termination::Converged);
        // strictly increasing potential along the trace
        let mut prev = perturbed_potential(&g, &start, sch).unwrap();
        for s in &r.trace {
            prop_assert_eq!(cmp_lex(&s.potential, &prev), Ordering::Greater);
            prev = s.potential.clone();
        }
        // no alternative strategy improves any player's symbolic utility
        let x = embed_profile(&r.final_profile, sch, &actions).unwrap();
        let current = oracles::expect_symbolic(g.potential(), &x);
        for i in 0..actions.len() {
            for alt in alternatives(sch, actions[i]) {
                let mut y = x.clone();
                y[i] = embed_strategy(&alt, sch, actions[i]).unwrap();
                prop_assert_ne!(cmp_lex(&oracles::expect_symbolic(g.potential(), &y), &current), Ordering::Greater);
            }
        }
        // numeric substitution at 2^(-2·bits) satisfies the refinement's definition
        let eps = oracles::numeric_eps(oracles::game_bits(&g));
        let xn = embed_numeric(&r.final_profile, sch, &actions, &eps).unwrap();
        let v = match sch {
            PerturbScheme::PerfectBox => oracles::check_eps_perfect(&g, &xn, &eps).unwrap(),
            PerturbScheme::ProperPermutahedron => oracles::check_eps_proper(&g, &xn, &eps).unwrap(),
        };
        prop_assert!(v.pass, "witness {:?}", v.witness);
    }

    #[test]
    fn two_action_schemes_agree(n in 1usize..=4, values in prop::collection::vec(-6i64..=6, 16), start in prop::collection::vec(0usize..2, 4)) {
        let actions = vec![2; n];
        let g = game_of(&actions, &values[..1 << n]);
        let run = |sch: PerturbScheme| {
            let mut cfg = DynamicsConfig::new(sch, n);
            cfg.trace = true;
            let s = EpsPureProfile {
                strategies: start[..n].iter().map(|&a| match sch {
                    PerturbScheme::PerfectBox => PureStrategy::Favored(a),
                    PerturbScheme::ProperPermutahedron => PureStrategy::Ranked(vec![a, 1 - a]),
                }).collect(),
            };
            let r = run_dynamics(&g, &s, &cfg).unwrap();
            r.trace.iter().map(|t| (t.player, t.new.top())).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(PerturbScheme::PerfectBox), run(PerturbScheme::ProperPermutahedron));
    }
}

// ------------------------------------------------------------------ trees

fn nested(depth: u32) -> impl Strategy<Value = NestedDecision> {
    let leaf = (2usize..=3).prop_map(|m| NestedDecision {
        label: "d".into(),
        actions: (0..m).map(|k| NestedAction { label: format!("a{k}"), next: Vec::new() }).collect(),
    });
    leaf.prop_recursive(depth, 8, 3, |inner| {
        prop::collection::vec(prop::option::weighted(0.4, inner), 2..=3).prop_map(|kids| NestedDecision {
            label: "d".into(),
            actions: kids
                .into_iter()
                .enumerate()
                .map(|(k, c)| NestedAction { label: format!("a{k}"), next: c.into_iter().collect() })
                .collect(),
        })
    })
}

fn tree() -> impl Strategy<Value = ValidatedTree> {
    prop::collection::vec(nested(2), 1..=2)
        .prop_map(|roots| tree_from_nested(&roots).unwrap())
        .prop_filter("at most 16 sequences", |t| t.num_sequences() <= 16)
}

fn tree_and_utility() -> impl Strategy<Value = (ValidatedTree, Vec<EpsPoly>)> {
    tree().prop_flat_map(|t| {
        let d = t.num_sequences();
        (Just(t), prop::collection::vec(poly(2), d))
    })
}

/// Behavioral plan favoring `choice[j]` at each decision point, trembling `ε` elsewhere.
fn favored_plan(t: &ValidatedTree, choice: &[usize]) -> Vec<EpsPoly> {
    let mut x = vec![EpsPoly::zero(); t.num_sequences()];
    x[0] = EpsPoly::one();
    for &j in t.top_down() {
        let dp = t.dp(j);
        let m = dp.actions.len() as i64;
        let parent = x[dp.parent].clone();
        for (k, &s) in dp.actions.iter().enumerate() {
            let w = if k == choice[j] { EpsPoly::from_ints(&[1, 1 - m]) } else { EpsPoly::eps() };
            x[s] = &parent * &w;
        }
    }
    x
}

fn choices(t: &ValidatedTree) -> Vec<Vec<usize>> {
    let radix: Vec<usize> = t.decision_points().iter().map(|d| d.actions.len()).collect();
    let mut out = vec![Vec::new()];
    for &r in &radix {
        out = out.into_iter().flat_map(|c| (0..r).map(move |a| [c.clone(), vec![a]].concat())).collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn efpe_response_is_feasible_and_optimal((t, u) in tree_and_utility()) {
        let x = efpe_best_response(&t, &u).unwrap();
        prop_assert_eq!(&x[0], &EpsPoly::one());
        for dp in t.decision_points() {
            let flow: EpsPoly = dp.actions.iter().map(|&s| x[s].clone()).sum();
            prop_assert_eq!(&flow, &x[dp.parent]);
        }
        if t.decision_points().len() <= 10 {
            let v = inner(&u, &x);
            for c in choices(&t) {
                let y = favored_plan(&t, &c);
                prop_assert_ne!(cmp_lex(&inner(&u, &y), &v), Ordering::Greater);
            }
        }
    }

    #[test]
    fn spanning_set_members_are_constrained_optima((t, u) in tree_and_utility()) {
        let s = optimal_spanning_set(&t, &u).unwrap();
        prop_assert!(s.vertices.len() <= t.num_sequences());
        for w in s.values.windows(2) {
            prop_assert_ne!(cmp_lex(&w[0], &w[1]), Ordering::Less);
        }
        let all = oracles::tree_vertices(&t).unwrap();
        let val = |v: &[Rat]| -> EpsPoly { u.iter().zip(v).map(|(p, c)| p.scale(c)).sum() };
        let best = all.iter().map(|v| val(v)).max_by(cmp_lex).unwrap();
        prop_assert_eq!(&s.values[0], &best);
        for (v, &sigma) in s.vertices.iter().zip(&s.sources) {
            prop_assert!(v[sigma].is_one());
            let best_with = all.iter().filter(|w| w[sigma].is_one()).map(|w| val(w)).max_by(cmp_lex).unwrap();
            prop_assert_eq!(val(v), best_with);
        }
    }
}

// ------------------------------------------------------------------ congestion

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_probabilities_sum_to_one(n in 1usize..=6, k in 0usize..=6, total in 1u32..=12, br in 0u32..=12) {
        let k = k.min(n);
        let br = br.min(total);
        let (h, f) = tremble_probs(&total.into(), &br.into());
        let probs = perturbed_count_probs(n, k, &h, &f);
        prop_assert_eq!(probs.into_iter().sum::<EpsPoly>(), EpsPoly::one());
    }

    #[test]
    fn perturbed_delay_limit(n in 1usize..=5, total in 1u32..=10, br in 0u32..=10, d in prop::collection::vec(1i64..=20, 5)) {
        let br = br.min(total);
        let delays: Vec<Rat> = d[..n].iter().map(|&v| rat_int(v)).collect();
        let table = perturbed_delay_table(n, &total.into(), &br.into(), &delays).unwrap();
        for k in 1..=n {
            prop_assert_eq!(table[k].eval(&Rat::zero()), delays[k - 1].clone());
            prop_assert!(table[k].degree().unwrap_or(0) <= n);
        }
    }

    #[test]
    fn matroid_limit_is_pure_nash(rank in 1usize..=4, extra in 0usize..=3, n in 1usize..=4, d in prop::collection::vec(1i64..=9, 7 * 4)) {
        let size = rank + extra;
        let m = Matroid::Uniform { rank, size };
        let delays: Vec<Vec<Rat>> = (0..size).map(|r| (0..n).map(|k| rat_int(d[r * 4 + k])).collect()).collect();
        let g = MatroidCongestionGame::new(n, m.clone(), delays.clone()).unwrap();
        let r = run_matroid_dynamics(&g, &MatroidConfig::new(n)).unwrap();
        let ec = ExplicitCongestion { players: n, resources: size, strategies: oracles::brute_bases(&m).unwrap(), delays };
        let idx: Vec<usize> = r.profile.iter().map(|b| ec.strategy_index(b).unwrap()).collect();
        prop_assert!(ec.check_no_deviation(&idx, &Rat::zero()).unwrap().pass);
    }
}

// ------------------------------------------------------------------ polymatrix

fn sq_norm(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Rat {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y) * (x - y)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gradient_ascent_is_monotone(
        q in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 3),
        e in 1i64..=20,
    ) {
        let q: Vec<Vec<Rat>> = q.iter().map(|r| r.iter().map(|&c| rat_int(c)).collect()).collect();
        let g = PolymatrixGame::identical_interest(q).unwrap();
        let eps = rat(1, 10 * e);
        let third = rat(1, 3);
        let start = vec![vec![third.clone(); 3], vec![third.clone(); 3]];
        let mut cfg = GdConfig::new(eps.clone(), 40);
        cfg.record = true;
        let r = run_gd(&g, &start, &cfg).unwrap();
        for w in r.trajectory.windows(2) {
            let gain = &w[1].potential - &w[0].potential;
            prop_assert!(gain >= sq_norm(&w[1].x, &w[0].x) / (rat_int(2) * &r.eta), "step {}", w[1].iter);
        }
        // reported gap equals a direct maximization over the vertices of the truncated simplex
        let direct = (0..2).map(|i| {
            let grad = g.gradient(&r.x, i);
            (0..3).map(|a| {
                let y: Vec<Rat> = (0..3).map(|b| if a == b { Rat::one() - &eps * rat_int(2) } else { eps.clone() }).collect();
                grad.iter().zip(y.iter().zip(&r.x[i])).map(|(gv, (yv, xv))| gv * (yv - xv)).sum::<Rat>()
            }).max().unwrap()
        }).max().unwrap();
        prop_assert_eq!(r.gap.clone(), direct.clone());
        prop_assert_eq!(linear_gap(&g.gradient(&r.x, 0), &r.x[0], &eps).max(linear_gap(&g.gradient(&r.x, 1), &r.x[1], &eps)), direct);
    }

    #[test]
    fn projection_is_optimal(v in prop::collection::vec(small_rat(), 2..=5), ws in prop::collection::vec(prop::collection::vec(1i64..=20, 5), 1..6)) {
        let m = v.len();
        let eps = rat(1, 4 * m as i64);
        let p = project_truncated_simplex(&v, &eps).unwrap();
        prop_assert_eq!(&p, &oracles::project_active_set(&v, &eps).unwrap());
        for w in ws {
            // a feasible point: ε plus a scaled positive weight vector
            let total: i64 = w[..m].iter().sum();
            let free = Rat::one() - &eps * rat_int(m as i64);
            let x: Vec<Rat> = w[..m].iter().map(|&c| &eps + &free * rat(c, total)).collect();
            let ip: Rat = v.iter().zip(&p).zip(&x).map(|((vi, pi), xi)| (vi - pi) * (xi - pi)).sum();
            prop_assert!(ip <= Rat::zero());
        }
    }
}

// ------------------------------------------------------------------ strongly polynomial

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn interpolation_matches_samples_and_is_stable(
        extra in prop::collection::vec((0usize..5, 0usize..5), 0..6),
        costs in prop::collection::vec((1i64..=4, -3i64..=3), 10),
    ) {
        let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        edges.extend(extra.into_iter().filter(|(a, b)| a < b));
        let cost: Vec<EpsPoly> = edges.iter().zip(costs.iter().cycle()).map(|(_, &(c0, c1))| EpsPoly::from_ints(&[c0, c1])).collect();
        let bf = BellmanFord { nodes: 5, edges, source: 0, target: 4 };
        let run = run_symbolic(&bf, &cost, 1, &SymbolicConfig::default()).unwrap();
        for k in 1..=3 {
            let pt = &run.scale * rat(k, 3);
            let x: Vec<Rat> = cost.iter().map(|c| c.eval(&pt)).collect();
            let mut t = refinery_core::strongpoly::Tracer::new();
            let (dist, _) = bf.labels(&mut t, &x).unwrap();
            prop_assert_eq!(run.outputs[0].eval(&pt), dist[4].clone());
        }
        let finer = SymbolicConfig { initial_scale: &run.scale / Rat::from_integer(BigInt::from(256)), ..SymbolicConfig::default() };
        let again = run_symbolic(&bf, &cost, 1, &finer).unwrap();
        prop_assert_eq!(&again.signature, &run.signature);
        prop_assert!(again.outputs[0].same_function(&run.outputs[0]));
    }
}

// ------------------------------------------------------------------ extensive form

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn efg_fixed_points_invariant_under_eps_power(
        a in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 2..=3),
        efpe in any::<bool>(),
    ) {
        use refinery_core::efg::dynamics::bimatrix_efg;
        use refinery_core::efg::{run_efg_dynamics, EfgConfig, EfgScheme};
        let g = bimatrix_efg(&a);
        let scheme = if efpe { EfgScheme::Efpe } else { EfgScheme::NormalFormProper };
        let base = run_efg_dynamics(&g, None, &EfgConfig::new(scheme.clone(), 2)).unwrap();
        prop_assert_eq!(base.termination, Termination::Converged);
        for c in 2..=3 {
            let mut cfg = EfgConfig::new(scheme.clone(), 2);
            cfg.eps_power = c;
            let r = run_efg_dynamics(&g, None, &cfg).unwrap();
            let want: Vec<Vec<EpsPoly>> = base.profile.iter().map(|x| x.iter().map(|p| p.compose_power(c)).collect()).collect();
            prop_assert_eq!(&r.profile, &want);
        }
    }
}
