//! Polynomials and rational functions in a single infinitesimal parameter ε.
//!
//! Every comparison uses the ε→0⁺ ordering: two polynomials are compared by
//! their coefficients, lowest power first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg;

/// Exact rational number, always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^-k`.
pub fn pow2_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Formats as `num/den`, or just `num` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EpsError {
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("cannot parse polynomial `{0}`")]
    BadPolynomial(String),
    #[error("polynomial exceeds the size bound L = {0}")]
    BoundExceeded(u32),
    #[error("duplicate interpolation point {0}")]
    DuplicatePoint(String),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("samples are not consistent with degree bound {0}")]
    InconsistentSamples(usize),
    #[error("rational interpolation system has no admissible nonzero solution")]
    DegenerateSystem,
}

/// Parses `a`, `-a`, or `a/b` (decimal integers).
pub fn parse_rat(s: &str) -> Result<Rat, EpsError> {
    let bad = || EpsError::BadRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn bitlen(n: &BigInt) -> u64 {
    n.bits().max(1)
}

/// Bit length of a rational: the larger of numerator and denominator lengths.
pub fn rat_bits(r: &Rat) -> u64 {
    bitlen(r.numer()).max(bitlen(r.denom()))
}

/// Polynomial in ε with rational coefficients; index `i` holds the coefficient of ε^i.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsPoly {
    coeffs: Vec<Rat>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial ε.
    pub fn eps() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    /// `c · ε^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EpsPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of ε^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest-order nonzero term `(k, c_k)`.
    pub fn lowest_term(&self) -> Option<(usize, &Rat)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Sign in the ε→0⁺ limit.
    pub fn signum(&self) -> Ordering {
        match self.lowest_term() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes ε ↦ ε^c.
    pub fn compose_power(&self, c: usize) -> Self {
        assert!(c >= 1);
        let mut coeffs = vec![Rat::zero(); self.coeffs.len().saturating_sub(1) * c + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[i * c] = a.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Substitutes ε ↦ `q(ε)`.
    pub fn compose(&self, q: &EpsPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    /// Largest coefficient bit length (0 for the zero polynomial).
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(rat_bits).max().unwrap_or(0)
    }

    /// A numeric ε at which the sign of `self` equals its ε→0⁺ sign:
    /// `2^-(2·maxbits + 2·degree)`.
    pub fn safe_epsilon(&self) -> Rat {
        let d = self.degree().unwrap_or(0) as u64;
        pow2_neg((2 * self.max_bits() + 2 * d).max(1) as u32)
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self, EpsError> {
        let bad = || EpsError::BadPolynomial(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut coeffs: Vec<Rat> = Vec::new();
        for term in s.split(" + ") {
            let term = term.trim();
            let (c, k) = if let Some((c, p)) = term.split_once("*e") {
                let k = match p.strip_prefix('^') {
                    Some(k) => k.parse::<usize>().map_err(|_| bad())?,
                    None if p.is_empty() => 1,
                    None => return Err(bad()),
                };
                (parse_rat(c).map_err(|_| bad())?, k)
            } else {
                (parse_rat(term).map_err(|_| bad())?, 0)
            };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rat::zero());
            }
            coeffs[k] += c;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_rat(c),
                1 => format!("{}*e", fmt_rat(c)),
                _ => format!("{}*e^{}", fmt_rat(c), i),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly({self})")
    }
}

impl From<Rat> for EpsPoly {
    fn from(c: Rat) -> Self {
        EpsPoly::constant(c)
    }
}

impl<'a> Add<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        EpsPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        EpsPoly::from_coeffs(coeffs)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<EpsPoly> for EpsPoly {
            type Output = EpsPoly;
            fn $m(self, rhs: EpsPoly) -> EpsPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a EpsPoly> for EpsPoly {
            type Output = EpsPoly;
            fn $m(self, rhs: &EpsPoly) -> EpsPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<EpsPoly> for &'a EpsPoly {
            type Output = EpsPoly;
            fn $m(self, rhs: EpsPoly) -> EpsPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        -&self
    }
}

impl std::iter::Sum for EpsPoly {
    fn sum<I: Iterator<Item = EpsPoly>>(iter: I) -> EpsPoly {
        iter.fold(EpsPoly::zero(), |a, b| &a + &b)
    }
}

/// Orders `p` and `q` by their values for all sufficiently small ε > 0.
pub fn cmp_lex(p: &EpsPoly, q: &EpsPoly) -> Ordering {
    let n = p.coeffs.len().max(q.coeffs.len());
    let zero = Rat::zero();
    for i in 0..n {
        let a = p.coeffs.get(i).unwrap_or(&zero);
        let b = q.coeffs.get(i).unwrap_or(&zero);
        match a.cmp(b) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl PartialOrd for EpsPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_lex(self, other)
    }
}

/// Integer encoding whose order matches `cmp_lex` on polynomials of size at most `l`:
/// `Σ_{i≤L} round(4^L (α_i + 2^L)) · 16^{L(L−i)}`.
pub fn psi_map(p: &EpsPoly, l: u32) -> Result<BigUint, EpsError> {
    let lu = l as usize;
    if p.coeffs.len() > lu + 1 {
        return Err(EpsError::BoundExceeded(l));
    }
    let two_l = BigInt::one() << lu;
    for c in &p.coeffs {
        if c.denom() >= &two_l || c.numer().abs() >= &two_l * c.denom() {
            return Err(EpsError::BoundExceeded(l));
        }
    }
    let four_l = Rat::from_integer(BigInt::one() << (2 * lu));
    let shift = Rat::from_integer(two_l);
    let half = rat(1, 2);
    let mut acc = BigInt::zero();
    for i in 0..=lu {
        let a = p.coeff(i);
        let digit = (&four_l * (a + &shift) + &half).floor().to_integer();
        acc += digit << (4 * lu * (lu - i));
    }
    Ok(acc.to_biguint().expect("ψ is nonnegative"))
}

fn check_distinct(points: &[&Rat]) -> Result<(), EpsError> {
    let mut sorted: Vec<&Rat> = points.to_vec();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(EpsError::DuplicatePoint(fmt_rat(w[0])));
        }
    }
    Ok(())
}

/// Newton-form interpolation through exactly the given points.
fn newton(points: &[Rat], values: &[Rat]) -> EpsPoly {
    let n = points.len();
    let mut dd: Vec<Rat> = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i] - &points[i - k]);
        }
    }
    let mut acc = EpsPoly::zero();
    for i in (0..n).rev() {
        let lin = EpsPoly::from_coeffs(vec![-points[i].clone(), Rat::one()]);
        acc = &(&acc * &lin) + &EpsPoly::constant(dd[i].clone());
    }
    acc
}

/// The unique polynomial of degree ≤ `degree_bound` through the samples.
/// Extra samples beyond `degree_bound + 1` must agree with it.
pub fn interpolate_poly(samples: &[(Rat, Rat)], degree_bound: usize) -> Result<EpsPoly, EpsError> {
    if samples.len() < degree_bound + 1 {
        return Err(EpsError::InsufficientSamples {
            needed: degree_bound + 1,
            got: samples.len(),
        });
    }
    check_distinct(&samples.iter().map(|s| &s.0).collect::<Vec<_>>())?;
    let head = &samples[..=degree_bound];
    let pts: Vec<Rat> = head.iter().map(|s| s.0.clone()).collect();
    let vals: Vec<Rat> = head.iter().map(|s| s.1.clone()).collect();
    let p = newton(&pts, &vals);
    if samples[degree_bound + 1..].iter().any(|(x, y)| &p.eval(x) != y) {
        return Err(EpsError::InconsistentSamples(degree_bound));
    }
    Ok(p)
}

/// Interpolation at the nodes `0, 1, …, values.len()−1`.
pub fn interpolate_at_naturals(values: &[Rat]) -> EpsPoly {
    let pts: Vec<Rat> = (0..values.len()).map(|i| rat_int(i as i64)).collect();
    newton(&pts, values)
}

/// Rational function `num/den` in ε. The lowest-order nonzero coefficient of `den` is 1.
#[derive(Clone, Debug)]
pub struct EpsRational {
    num: EpsPoly,
    den: EpsPoly,
}

impl EpsRational {
    pub fn new(num: EpsPoly, den: EpsPoly) -> Option<Self> {
        let (_, lead) = den.lowest_term()?;
        let s = Rat::one() / lead;
        Some(EpsRational {
            num: num.scale(&s),
            den: den.scale(&s),
        })
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        EpsRational {
            num: p,
            den: EpsPoly::one(),
        }
    }

    pub fn num(&self) -> &EpsPoly {
        &self.num
    }

    pub fn den(&self) -> &EpsPoly {
        &self.den
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// The polynomial itself when the denominator is the constant 1.
    pub fn as_poly(&self) -> Option<&EpsPoly> {
        (self.den == EpsPoly::one()).then_some(&self.num)
    }

    /// Equality as rational functions (cross-multiplication).
    pub fn same_function(&self, other: &EpsRational) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialEq for EpsRational {
    fn eq(&self, other: &Self) -> bool {
        self.same_function(other)
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == EpsPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

fn try_split(samples: &[(Rat, Rat)], r: usize, s: usize) -> Option<EpsRational> {
    let rows: Vec<Vec<Rat>> = samples
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(r + s + 2);
            let mut pw = Rat::one();
            for _ in 0..=r {
                row.push(pw.clone());
                pw *= x;
            }
            let mut pw = Rat::one();
            for _ in 0..=s {
                row.push(-(y * &pw));
                pw *= x;
            }
            row
        })
        .collect();
    let z = linalg::nullspace_vector(&rows, r + s + 2)?;
    let num = EpsPoly::from_coeffs(z[..=r].to_vec());
    let den = EpsPoly::from_coeffs(z[r + 1..].to_vec());
    if samples.iter().any(|(x, _)| den.eval(x).is_zero()) {
        return None;
    }
    EpsRational::new(num, den)
}

/// Rational function of total degree (numerator plus denominator) at most
/// `degree_bound` agreeing with every sample. The search runs over increasing
/// total degree, so the lowest-degree representation is returned; it is unique
/// whenever there are at least `2·degree_bound + 1` samples.
pub fn interpolate_rational(
    samples: &[(Rat, Rat)],
    degree_bound: usize,
) -> Result<EpsRational, EpsError> {
    if samples.len() < degree_bound + 1 {
        return Err(EpsError::InsufficientSamples {
            needed: degree_bound + 1,
            got: samples.len(),
        });
    }
    check_distinct(&samples.iter().map(|s| &s.0).collect::<Vec<_>>())?;
    for t in 0..=degree_bound {
        for s in 0..=t {
            if let Some(f) = try_split(samples, t - s, s) {
                return Ok(f);
            }
        }
    }
    Err(EpsError::DegenerateSystem)
}

/// Converts a small rational to `f64` for reporting only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact `floor(r · 2^bits) / 2^bits`, used to keep iterates on a dyadic grid.
pub fn floor_to_grid(r: &Rat, den: &BigInt) -> Rat {
    let scaled = r * Rat::from_integer(den.clone());
    Rat::new(scaled.floor().to_integer(), den.clone())
}

/// Exact nearest grid point (ties upward).
pub fn round_to_grid(r: &Rat, den: &BigInt) -> Rat {
    let scaled = r * Rat::from_integer(den.clone()) + rat(1, 2);
    Rat::new(scaled.floor().to_integer(), den.clone())
}

/// Sign helper for `BigInt` counts.
pub fn is_negative(r: &Rat) -> bool {
    r.numer().sign() == Sign::Minus
}

/// `lcm` of denominators, handy for building grids.
pub fn lcm_den(rs: &[Rat]) -> BigInt {
    rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
