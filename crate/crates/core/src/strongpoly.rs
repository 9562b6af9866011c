//! Symbolic execution of arithmetic programs by sampling ε and interpolating.

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::eps::{interpolate_rational, EpsError, EpsPoly, EpsRational, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("division by zero at instruction {0}")]
    DivisionByZero(usize),
    #[error("program expects {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("bad program: {0}")]
    Malformed(String),
    #[error("sampled runs took different branches after {0} refinements")]
    BranchInstability(usize),
    #[error(transparent)]
    Interpolation(#[from] EpsError),
    #[error("interpolant disagrees with the run at sample {0}")]
    SampleMismatch(usize),
}

/// Records every comparison outcome of one run.
#[derive(Clone, Debug, Default)]
pub struct Tracer {
    branches: Vec<bool>,
    ops: usize,
}

impl Tracer {
    pub fn new() -> Self {
        Self::default()
    }

    /// `a < b`, logged.
    pub fn less(&mut self, a: &Rat, b: &Rat) -> bool {
        let r = a < b;
        self.branches.push(r);
        r
    }

    pub fn add(&mut self, a: &Rat, b: &Rat) -> Rat {
        self.ops += 1;
        a + b
    }

    pub fn sub(&mut self, a: &Rat, b: &Rat) -> Rat {
        self.ops += 1;
        a - b
    }

    pub fn mul(&mut self, a: &Rat, b: &Rat) -> Rat {
        self.ops += 1;
        a * b
    }

    /// Division guarded by a logged comparison against zero.
    pub fn div(&mut self, a: &Rat, b: &Rat, at: usize) -> Result<Rat, ProgramError> {
        self.ops += 1;
        let neg = self.less(b, &Rat::zero());
        let pos = self.less(&Rat::zero(), b);
        if !neg && !pos {
            return Err(ProgramError::DivisionByZero(at));
        }
        Ok(a / b)
    }

    pub fn branches(&self) -> &[bool] {
        &self.branches
    }

    pub fn ops(&self) -> usize {
        self.ops
    }
}

/// A program over `{+, −, ×, ÷, <}` run on rational inputs.
pub trait ArithmeticProgram {
    fn num_inputs(&self) -> usize;
    fn execute(&self, t: &mut Tracer, inputs: &[Rat]) -> Result<Vec<Rat>, ProgramError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    Input(usize),
    Const(Rat),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    /// Smaller operand; the comparison is logged.
    Min(usize, usize),
    Max(usize, usize),
}

/// Registers are the instruction indices; operands refer to earlier ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraightLineProgram {
    pub inputs: usize,
    pub instrs: Vec<Instr>,
    pub outputs: Vec<usize>,
}

impl StraightLineProgram {
    pub fn validate(&self) -> Result<(), ProgramError> {
        for (k, ins) in self.instrs.iter().enumerate() {
            let ok = match ins {
                Instr::Input(i) => *i < self.inputs,
                Instr::Const(_) => true,
                Instr::Add(a, b)
                | Instr::Sub(a, b)
                | Instr::Mul(a, b)
                | Instr::Div(a, b)
                | Instr::Min(a, b)
                | Instr::Max(a, b) => *a < k && *b < k,
            };
            if !ok {
                return Err(ProgramError::Malformed(format!("instruction {k} has a bad operand")));
            }
        }
        if self.outputs.iter().any(|&o| o >= self.instrs.len()) {
            return Err(ProgramError::Malformed("output refers to a missing register".into()));
        }
        Ok(())
    }
}

impl ArithmeticProgram for StraightLineProgram {
    fn num_inputs(&self) -> usize {
        self.inputs
    }

    fn execute(&self, t: &mut Tracer, inputs: &[Rat]) -> Result<Vec<Rat>, ProgramError> {
        self.validate()?;
        let mut r: Vec<Rat> = Vec::with_capacity(self.instrs.len());
        for (k, ins) in self.instrs.iter().enumerate() {
            let v = match ins {
                Instr::Input(i) => inputs[*i].clone(),
                Instr::Const(c) => c.clone(),
                Instr::Add(a, b) => t.add(&r[*a], &r[*b]),
                Instr::Sub(a, b) => t.sub(&r[*a], &r[*b]),
                Instr::Mul(a, b) => t.mul(&r[*a], &r[*b]),
                Instr::Div(a, b) => t.div(&r[*a], &r[*b], k)?,
                Instr::Min(a, b) => {
                    if t.less(&r[*b], &r[*a]) {
                        r[*b].clone()
                    } else {
                        r[*a].clone()
                    }
                }
                Instr::Max(a, b) => {
                    if t.less(&r[*a], &r[*b]) {
                        r[*b].clone()
                    } else {
                        r[*a].clone()
                    }
                }
            };
            r.push(v);
        }
        Ok(self.outputs.iter().map(|&o| r[o].clone()).collect())
    }
}

/// Bellman–Ford from `source` with one input per edge cost; outputs the
/// distance to `target`. Edges relax in list order and only strict
/// improvements replace a label.
#[derive(Clone, Debug)]
pub struct BellmanFord {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub source: usize,
    pub target: usize,
}

impl BellmanFord {
    /// Distance labels and predecessor edges of one run.
    pub fn labels(&self, t: &mut Tracer, cost: &[Rat]) -> Result<(Vec<Option<Rat>>, Vec<Option<usize>>), ProgramError> {
        if cost.len() != self.edges.len() {
            return Err(ProgramError::Arity { expected: self.edges.len(), got: cost.len() });
        }
        let mut dist: Vec<Option<Rat>> = vec![None; self.nodes];
        let mut pred = vec![None; self.nodes];
        dist[self.source] = Some(Rat::zero());
        for _ in 1..self.nodes {
            let mut changed = false;
            for (e, &(u, v)) in self.edges.iter().enumerate() {
                let Some(du) = dist[u].clone() else { continue };
                let cand = t.add(&du, &cost[e]);
                let better = match &dist[v] {
                    None => true,
                    Some(dv) => t.less(&cand, dv),
                };
                if better {
                    dist[v] = Some(cand);
                    pred[v] = Some(e);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok((dist, pred))
    }

    /// Edge path to the target read off the predecessor labels.
    pub fn path(&self, pred: &[Option<usize>]) -> Option<Vec<usize>> {
        let mut path = Vec::new();
        let mut at = self.target;
        while at != self.source {
            let e = pred[at]?;
            path.push(e);
            at = self.edges[e].0;
            if path.len() > self.nodes {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

impl ArithmeticProgram for BellmanFord {
    fn num_inputs(&self) -> usize {
        self.edges.len()
    }

    fn execute(&self, t: &mut Tracer, inputs: &[Rat]) -> Result<Vec<Rat>, ProgramError> {
        let (dist, _) = self.labels(t, inputs)?;
        dist[self.target]
            .clone()
            .map(|d| vec![d])
            .ok_or_else(|| ProgramError::Malformed("target unreachable".into()))
    }
}

#[derive(Clone, Debug)]
pub struct SymbolicConfig {
    /// Largest sample point.
    pub initial_scale: Rat,
    pub max_refinements: usize,
    /// Bits between the sampling scale and the confirming finer scale.
    pub confirm_bits: u32,
}

impl Default for SymbolicConfig {
    fn default() -> Self {
        SymbolicConfig { initial_scale: Rat::new(BigInt::one(), BigInt::from(256)), max_refinements: 48, confirm_bits: 16 }
    }
}

#[derive(Clone, Debug)]
pub struct SymbolicRun {
    pub outputs: Vec<EpsRational>,
    pub signature: Vec<bool>,
    /// Scale at which all samples agreed.
    pub scale: Rat,
    pub refinements: usize,
}

impl SymbolicRun {
    pub fn signature_string(&self) -> String {
        self.signature.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn sample_points(scale: &Rat, n: usize) -> Vec<Rat> {
    (1..=n).map(|k| scale * Rat::new(BigInt::from(k), BigInt::from(n))).collect()
}

fn run_at(prog: &dyn ArithmeticProgram, input: &[EpsPoly], pts: &[Rat]) -> Result<Option<(Vec<bool>, Vec<Vec<Rat>>)>, ProgramError> {
    let mut sig: Option<Vec<bool>> = None;
    let mut outs = Vec::with_capacity(pts.len());
    for p in pts {
        let x: Vec<Rat> = input.iter().map(|c| c.eval(p)).collect();
        let mut t = Tracer::new();
        let out = match prog.execute(&mut t, &x) {
            Ok(o) => o,
            Err(ProgramError::DivisionByZero(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        match &sig {
            None => sig = Some(t.branches),
            Some(s) if *s != t.branches => return Ok(None),
            Some(_) => {}
        }
        outs.push(out);
    }
    Ok(sig.map(|s| (s, outs)))
}

/// Runs `prog` at `2·d_A + 1` sample points below the current scale, halving
/// the scale until every sample, and a confirming run at a finer scale, take
/// the same branches. Each output is then interpolated as a rational function
/// of total degree at most `degree_bound`.
pub fn run_symbolic(
    prog: &dyn ArithmeticProgram,
    input: &[EpsPoly],
    degree_bound: usize,
    cfg: &SymbolicConfig,
) -> Result<SymbolicRun, ProgramError> {
    if input.len() != prog.num_inputs() {
        return Err(ProgramError::Arity { expected: prog.num_inputs(), got: input.len() });
    }
    let n = 2 * degree_bound + 1;
    let mut scale = cfg.initial_scale.clone();
    let finer = Rat::new(BigInt::one(), BigInt::one() << cfg.confirm_bits);
    for refinement in 0..=cfg.max_refinements {
        let pts = sample_points(&scale, n);
        if let Some((sig, outs)) = run_at(prog, input, &pts)? {
            let confirm = run_at(prog, input, &sample_points(&(&scale * &finer), 1))?;
            if confirm.is_some_and(|(s, _)| s == sig) {
                let mut outputs = Vec::new();
                for o in 0..outs.first().map_or(0, Vec::len) {
                    let samples: Vec<(Rat, Rat)> = pts.iter().cloned().zip(outs.iter().map(|v| v[o].clone())).collect();
                    let f = interpolate_rational(&samples, degree_bound)?;
                    if let Some(k) = samples.iter().position(|(x, y)| f.eval(x).as_ref() != Some(y)) {
                        return Err(ProgramError::SampleMismatch(k));
                    }
                    outputs.push(f);
                }
                return Ok(SymbolicRun { outputs, signature: sig, scale, refinements: refinement });
            }
        }
        scale /= Rat::from_integer(BigInt::from(2));
    }
    Err(ProgramError::BranchInstability(cfg.max_refinements))
}
