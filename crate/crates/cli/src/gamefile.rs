//! Versioned JSON game files. Rationals are `"num/den"` strings.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use refinery_core::circuit::{circuit_from_tensor, CircuitJson};
use refinery_core::congestion::{Digraph, Matroid, MatroidCongestionGame, NetworkCongestionGame};
use refinery_core::efg::tree::{tree_from_nested, tree_to_nested, NestedDecision};
use refinery_core::efg::EfgGame;
use refinery_core::eps::{fmt_rat, parse_rat, Rat};
use refinery_core::game::ConcisePotentialGame;
use refinery_core::gamegen::ZeroSumEfg;
use refinery_core::polymatrix::{PolymatrixGame, PolymatrixJson};

pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub version: u32,
    #[serde(flatten)]
    pub body: GameBody,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CountsJson {
    pub total: String,
    pub per_resource: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameBody {
    /// Identical-interest game given by its full payoff table, row-major with the last player fastest.
    Table {
        actions: Vec<usize>,
        potential: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        player_order: Option<Vec<usize>>,
    },
    Circuit {
        potential: CircuitJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        utilities: Option<Vec<CircuitJson>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        player_order: Option<Vec<usize>>,
    },
    Efg {
        trees: Vec<Vec<NestedDecision>>,
        /// Over the concatenated sequence coordinates of all players.
        potential: CircuitJson,
    },
    ZeroSumEfg {
        trees: Vec<Vec<NestedDecision>>,
        /// `(σ₁, σ₂, u₁)`.
        payoff: Vec<(usize, usize, String)>,
    },
    MatroidCongestion {
        players: usize,
        matroid: Matroid,
        /// `delays[r][k-1] = d_r(k)`.
        delays: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis_counts: Option<CountsJson>,
    },
    NetworkCongestion {
        graph: Digraph,
        source: usize,
        sink: usize,
        players: usize,
        delays: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path_counts: Option<CountsJson>,
    },
    Polymatrix {
        game: PolymatrixJson,
    },
    Hypercube {
        utility: Vec<String>,
        knapsack_count: u64,
    },
}

impl GameBody {
    pub fn kind(&self) -> &'static str {
        match self {
            GameBody::Table { .. } => "table",
            GameBody::Circuit { .. } => "circuit",
            GameBody::Efg { .. } => "efg",
            GameBody::ZeroSumEfg { .. } => "zero_sum_efg",
            GameBody::MatroidCongestion { .. } => "matroid_congestion",
            GameBody::NetworkCongestion { .. } => "network_congestion",
            GameBody::Polymatrix { .. } => "polymatrix",
            GameBody::Hypercube { .. } => "hypercube",
        }
    }
}

/// A validated game.
pub enum Game {
    Normal { game: ConcisePotentialGame, player_order: Option<Vec<usize>> },
    Efg(EfgGame),
    ZeroSumEfg(ZeroSumEfg),
    Matroid(MatroidCongestionGame),
    Network(NetworkCongestionGame),
    Polymatrix(PolymatrixGame),
    Hypercube { utility: Vec<Rat>, knapsack_count: u64 },
}

fn rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s).map_err(|e| anyhow!("bad rational {s:?}: {e}"))).collect()
}

fn rat_rows(v: &[Vec<String>]) -> Result<Vec<Vec<Rat>>> {
    v.iter().map(|r| rats(r)).collect()
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn counts(c: &CountsJson) -> Result<(BigUint, Vec<BigUint>)> {
    let p = |s: &String| s.parse::<BigUint>().map_err(|e| anyhow!("bad count {s:?}: {e}"));
    Ok((p(&c.total)?, c.per_resource.iter().map(p).collect::<Result<_>>()?))
}

pub fn from_circuit_game(g: &ConcisePotentialGame, player_order: Option<Vec<usize>>) -> GameBody {
    GameBody::Circuit {
        potential: CircuitJson::from_circuit(g.potential()),
        utilities: g.explicit_utilities().map(|us| us.iter().map(CircuitJson::from_circuit).collect()),
        player_order,
    }
}

pub fn table_body(actions: &[usize], values: &[Rat]) -> GameBody {
    GameBody::Table { actions: actions.to_vec(), potential: strs(values), player_order: None }
}

pub fn efg_body(g: &EfgGame) -> GameBody {
    GameBody::Efg {
        trees: g.trees().iter().map(tree_to_nested).collect(),
        potential: CircuitJson::from_circuit(g.potential()),
    }
}

pub fn zero_sum_body(g: &ZeroSumEfg) -> GameBody {
    GameBody::ZeroSumEfg {
        trees: g.trees.iter().map(tree_to_nested).collect(),
        payoff: g.payoff.iter().map(|(a, b, v)| (*a, *b, fmt_rat(v))).collect(),
    }
}

pub fn polymatrix_body(g: &PolymatrixGame) -> GameBody {
    GameBody::Polymatrix { game: PolymatrixJson::from_game(g) }
}

pub fn hypercube_body(u: &[Rat], k: u64) -> GameBody {
    GameBody::Hypercube { utility: strs(u), knapsack_count: k }
}

impl GameFile {
    pub fn new(body: GameBody) -> Self {
        GameFile { version: VERSION, body }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game files serialize");
        s.push('\n');
        s
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<Game> {
        if self.version != VERSION {
            bail!("unsupported version {}", self.version);
        }
        Ok(match &self.body {
            GameBody::Table { actions, potential, player_order } => {
                let c = circuit_from_tensor(actions, &rats(potential)?)?;
                Game::Normal { game: ConcisePotentialGame::identical_interest(c), player_order: player_order.clone() }
            }
            GameBody::Circuit { potential, utilities, player_order } => {
                let c = potential.to_circuit()?;
                let game = match utilities {
                    None => ConcisePotentialGame::identical_interest(c),
                    Some(us) => {
                        let us = us.iter().map(CircuitJson::to_circuit).collect::<Result<Vec<_>, _>>()?;
                        ConcisePotentialGame::with_utilities(c, us)?
                    }
                };
                Game::Normal { game, player_order: player_order.clone() }
            }
            GameBody::Efg { trees, potential } => {
                let ts = trees.iter().map(|t| tree_from_nested(t)).collect::<Result<Vec<_>, _>>()?;
                Game::Efg(EfgGame::new(ts, potential.to_circuit()?)?)
            }
            GameBody::ZeroSumEfg { trees, payoff } => {
                if trees.len() != 2 {
                    bail!("zero-sum game needs exactly two trees");
                }
                let t0 = tree_from_nested(&trees[0])?;
                let t1 = tree_from_nested(&trees[1])?;
                let mut p = Vec::with_capacity(payoff.len());
                for (a, b, v) in payoff {
                    if *a >= t0.num_sequences() || *b >= t1.num_sequences() {
                        bail!("payoff entry ({a},{b}) is out of range");
                    }
                    p.push((*a, *b, parse_rat(v).map_err(|e| anyhow!("bad rational {v:?}: {e}"))?));
                }
                Game::ZeroSumEfg(ZeroSumEfg { trees: [t0, t1], payoff: p })
            }
            GameBody::MatroidCongestion { players, matroid, delays, basis_counts } => {
                let g = MatroidCongestionGame::new(*players, matroid.clone(), rat_rows(delays)?)?;
                if let Some(c) = basis_counts {
                    let (total, per) = counts(c)?;
                    if let Some(r) = per.iter().position(|b| b > &total) {
                        bail!("resource {r} lies in more bases than exist");
                    }
                    let (t, p) = g.basis_counts();
                    if &total != t || per.as_slice() != p {
                        bail!("declared basis counts disagree with the matroid");
                    }
                }
                Game::Matroid(g)
            }
            GameBody::NetworkCongestion { graph, source, sink, players, delays, path_counts } => {
                let pc = match path_counts {
                    Some(c) => {
                        let (total, per) = counts(c)?;
                        if let Some(r) = per.iter().position(|b| b > &total) {
                            bail!("edge {r} lies on more paths than exist");
                        }
                        Some((total, per))
                    }
                    None => None,
                };
                Game::Network(NetworkCongestionGame::new(graph.clone(), *source, *sink, *players, rat_rows(delays)?, pc)?)
            }
            GameBody::Polymatrix { game } => Game::Polymatrix(game.to_game()?),
            GameBody::Hypercube { utility, knapsack_count } => {
                Game::Hypercube { utility: rats(utility)?, knapsack_count: *knapsack_count }
            }
        })
    }
}

/// Reads and parses a game file; schema errors carry the line and column.
pub fn parse_game_file(path: &Path) -> Result<(GameFile, Game)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: GameFile = serde_json::from_str(&text)
        .map_err(|e| anyhow!("schema error in {} at line {} column {}: {e}", path.display(), e.line(), e.column()))?;
    let game = file.validate().with_context(|| format!("validation error in {}", path.display()))?;
    Ok((file, game))
}
