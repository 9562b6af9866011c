use num::{BigInt, BigUint, One, Zero};

use super::CongestionError;
use crate::eps::{EpsPoly, Rat};

pub(crate) fn big_rat(b: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(b.clone()))
}

fn binom(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    big_rat(&num::integer::binomial(BigUint::from(n), BigUint::from(k)))
}

/// Probability that a player uses a resource: `h` when its favored set contains
/// it, `f` otherwise. `h = 1 − (|B| − B_r)ε`, `f = B_r·ε`.
pub fn tremble_probs(total: &BigUint, b_r: &BigUint) -> (EpsPoly, EpsPoly) {
    let t = big_rat(total);
    let b = big_rat(b_r);
    let h = EpsPoly::from_coeffs(vec![Rat::one(), &b - &t]);
    let f = EpsPoly::monomial(b, 1);
    (h, f)
}

/// Distribution of the number of users when player `ℓ` uses the resource with
/// probability `w[ℓ]`. Entry `k` is `P(k users)`, for `k = 0..=n`.
pub fn count_distribution(w: &[EpsPoly]) -> Vec<EpsPoly> {
    let n = w.len();
    let mut s = vec![EpsPoly::zero(); n + 1];
    s[0] = EpsPoly::one();
    for (l, wl) in w.iter().enumerate() {
        let stay = &EpsPoly::one() - wl;
        for k in (0..=l + 1).rev() {
            let mut v = &s[k] * &stay;
            if k > 0 {
                v = &v + &(&s[k - 1] * wl);
            }
            s[k] = v;
        }
    }
    s
}

/// `P̃_{r,k}(i)` for `i = 0..=n`: `k` players favor a set containing `r`, the
/// other `n − k` do not.
pub fn perturbed_count_probs(n: usize, k: usize, h: &EpsPoly, f: &EpsPoly) -> Vec<EpsPoly> {
    let one = EpsPoly::one();
    let (nh, nf) = (&one - h, &one - f);
    (0..=n)
        .map(|i| {
            let lo = i.saturating_sub(n - k);
            let hi = i.min(k);
            (lo..=hi)
                .map(|j| {
                    let c = &binom(k, j) * &binom(n - k, i - j);
                    let a = &h.pow(j as u32) * &nh.pow((k - j) as u32);
                    let b = &f.pow((i - j) as u32) * &nf.pow((n - k - (i - j)) as u32);
                    (&a * &b).scale(&c)
                })
                .sum()
        })
        .collect()
}

/// `d̃_r(k) = Σ_{i=1}^{n} P̃_{r,k}(i)·d_r(i)`, where `delays[i-1] = d_r(i)`.
pub fn perturbed_delay(
    n: usize,
    total: &BigUint,
    b_r: &BigUint,
    delays: &[Rat],
    k: usize,
) -> Result<EpsPoly, CongestionError> {
    if k > n {
        return Err(CongestionError::IndexOutOfRange(k, n));
    }
    if delays.len() != n {
        return Err(CongestionError::BadDelays(format!("expected {n} delay values, got {}", delays.len())));
    }
    let (h, f) = tremble_probs(total, b_r);
    let p = perturbed_count_probs(n, k, &h, &f);
    Ok((1..=n).map(|i| p[i].scale(&delays[i - 1])).sum())
}

/// `d̃_r(k)` for `k = 0..=n`.
pub fn perturbed_delay_table(
    n: usize,
    total: &BigUint,
    b_r: &BigUint,
    delays: &[Rat],
) -> Result<Vec<EpsPoly>, CongestionError> {
    (0..=n).map(|k| perturbed_delay(n, total, b_r, delays, k)).collect()
}
