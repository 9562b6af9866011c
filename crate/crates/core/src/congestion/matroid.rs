use num::{BigUint, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eps::Rat;

/// Matroid over ground set `0..size` given by an independence oracle.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Matroid {
    /// Every set of at most `rank` elements is independent.
    Uniform { rank: usize, size: usize },
    /// Ground set is the edge list; independent sets are forests.
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    /// `blocks` partition the ground set; at most `quotas[j]` elements from block `j`.
    Partition { blocks: Vec<Vec<usize>>, quotas: Vec<usize> },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl Matroid {
    pub fn size(&self) -> usize {
        match self {
            Matroid::Uniform { size, .. } => *size,
            Matroid::Graphic { edges, .. } => edges.len(),
            Matroid::Partition { blocks, .. } => blocks.iter().map(Vec::len).sum(),
        }
    }

    /// Structural checks on the description itself.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Matroid::Uniform { rank, size } => {
                if rank > size {
                    return Err(format!("rank {rank} exceeds ground size {size}"));
                }
            }
            Matroid::Graphic { vertices, edges } => {
                if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= *vertices || v >= *vertices) {
                    return Err(format!("edge ({u},{v}) has an endpoint outside 0..{vertices}"));
                }
            }
            Matroid::Partition { blocks, quotas } => {
                if blocks.len() != quotas.len() {
                    return Err("one quota per block required".into());
                }
                let n = self.size();
                let mut seen = vec![false; n];
                for &e in blocks.iter().flatten() {
                    if e >= n || std::mem::replace(&mut seen[e], true) {
                        return Err(format!("blocks do not partition 0..{n}"));
                    }
                }
            }
        }
        if self.rank() == 0 {
            return Err("matroid has rank 0".into());
        }
        Ok(())
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        let n = self.size();
        let mut seen = vec![false; n];
        if set.iter().any(|&e| e >= n || std::mem::replace(&mut seen[e], true)) {
            return false;
        }
        match self {
            Matroid::Uniform { rank, .. } => set.len() <= *rank,
            Matroid::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                set.iter().all(|&e| uf.union(edges[e].0, edges[e].1))
            }
            Matroid::Partition { blocks, quotas } => blocks
                .iter()
                .zip(quotas)
                .all(|(b, &q)| b.iter().filter(|e| seen[**e]).count() <= q),
        }
    }

    pub fn rank(&self) -> usize {
        let mut set = Vec::new();
        for e in 0..self.size() {
            set.push(e);
            if !self.is_independent(&set) {
                set.pop();
            }
        }
        set.len()
    }

    /// All bases, in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        combinations(self.size(), self.rank())
            .into_iter()
            .filter(|s| self.is_independent(s))
            .collect()
    }

    /// `(|B|, [B_r])`: the number of bases and, per element, the number containing it.
    pub fn basis_counts(&self) -> (BigUint, Vec<BigUint>) {
        let n = self.size();
        match self {
            Matroid::Uniform { rank, size } => {
                let total = num::integer::binomial(BigUint::from(*size), BigUint::from(*rank));
                let per = if *rank == 0 {
                    BigUint::zero()
                } else {
                    num::integer::binomial(BigUint::from(size - 1), BigUint::from(rank - 1))
                };
                (total, vec![per; n])
            }
            Matroid::Partition { blocks, quotas } => {
                let choose: Vec<BigUint> = blocks
                    .iter()
                    .zip(quotas)
                    .map(|(b, &q)| num::integer::binomial(BigUint::from(b.len()), BigUint::from(q.min(b.len()))))
                    .collect();
                let total: BigUint = choose.iter().product();
                let mut per = vec![BigUint::zero(); n];
                for (j, (b, &q)) in blocks.iter().zip(quotas).enumerate() {
                    let q = q.min(b.len());
                    if q == 0 {
                        continue;
                    }
                    let inner = num::integer::binomial(BigUint::from(b.len() - 1), BigUint::from(q - 1));
                    let rest: BigUint =
                        choose.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, c)| c.clone()).product();
                    for &e in b {
                        per[e] = &inner * &rest;
                    }
                }
                (total, per)
            }
            Matroid::Graphic { vertices, edges } => {
                let total = forest_count(*vertices, edges);
                let full = self.rank();
                let per = (0..n)
                    .map(|r| {
                        let rest: Vec<(usize, usize)> =
                            edges.iter().enumerate().filter(|&(k, _)| k != r).map(|(_, &e)| e).collect();
                        let without = Matroid::Graphic { vertices: *vertices, edges: rest.clone() };
                        if edges[r].0 == edges[r].1 {
                            BigUint::zero()
                        } else if without.rank() < full {
                            total.clone()
                        } else {
                            &total - forest_count(*vertices, &rest)
                        }
                    })
                    .collect();
                (total, per)
            }
        }
    }
}

/// Number of maximal spanning forests: the product over components of the
/// reduced-Laplacian determinant.
fn forest_count(vertices: usize, edges: &[(usize, usize)]) -> BigUint {
    let mut uf = UnionFind::new(vertices);
    for &(u, v) in edges {
        uf.union(u, v);
    }
    let mut total = BigUint::one();
    for root in 0..vertices {
        if uf.find(root) != root {
            continue;
        }
        let comp: Vec<usize> = (0..vertices).filter(|&v| uf.find(v) == root).collect();
        if comp.len() < 2 {
            continue;
        }
        let idx = |v: usize| comp.iter().position(|&c| c == v);
        let k = comp.len() - 1;
        let mut lap = vec![vec![Rat::zero(); k]; k];
        for &(u, v) in edges {
            if u == v || uf.find(u) != root {
                continue;
            }
            let (a, b) = (idx(u).unwrap(), idx(v).unwrap());
            for (x, y) in [(a, b), (b, a)] {
                if x < k {
                    lap[x][x] += Rat::one();
                    if y < k {
                        lap[x][y] -= Rat::one();
                    }
                }
            }
        }
        let det = determinant(lap);
        total *= det.to_integer().to_biguint().expect("tree count is nonnegative");
    }
    total
}

fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let d = &f * &m[c][k];
                m[r][k] -= d;
            }
        }
    }
    det
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Spot-checks the hereditary and exchange axioms on random subsets.
/// Returns a description of the first violation.
pub fn check_axioms(m: &Matroid, trials: usize, seed: u64) -> Option<String> {
    let n = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_independent = |rng: &mut ChaCha8Rng| {
        let mut s = Vec::new();
        for e in 0..n {
            if rng.gen_bool(0.5) {
                s.push(e);
                if !m.is_independent(&s) {
                    s.pop();
                }
            }
        }
        s
    };
    for _ in 0..trials {
        let a = random_independent(&mut rng);
        for skip in 0..a.len() {
            let sub: Vec<usize> = a.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &e)| e).collect();
            if !m.is_independent(&sub) {
                return Some(format!("subset {sub:?} of independent {a:?} is dependent"));
            }
        }
        let b = random_independent(&mut rng);
        let (small, big) = if a.len() < b.len() { (a, b) } else { (b, a) };
        if small.len() < big.len() {
            let ok = big.iter().filter(|e| !small.contains(e)).any(|&e| {
                let mut s = small.clone();
                s.push(e);
                m.is_independent(&s)
            });
            if !ok {
                return Some(format!("no element of {big:?} extends {small:?}"));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_counts(m: &Matroid) -> (BigUint, Vec<BigUint>) {
        let bases = m.bases();
        let per = (0..m.size())
            .map(|r| BigUint::from(bases.iter().filter(|b| b.contains(&r)).count()))
            .collect();
        (BigUint::from(bases.len()), per)
    }

    #[test]
    fn uniform_counts() {
        let m = Matroid::Uniform { rank: 2, size: 4 };
        assert_eq!(m.bases().len(), 6);
        assert_eq!(m.basis_counts(), brute_counts(&m));
    }

    #[test]
    fn triangle_has_three_spanning_trees() {
        let m = Matroid::Graphic { vertices: 3, edges: vec![(0, 1), (1, 2), (0, 2)] };
        assert_eq!(m.rank(), 2);
        assert_eq!(m.basis_counts(), brute_counts(&m));
        assert_eq!(m.basis_counts().0, BigUint::from(3u32));
    }

    #[test]
    fn graphic_with_bridge_and_multi_edge() {
        let m = Matroid::Graphic { vertices: 5, edges: vec![(0, 1), (0, 1), (1, 2), (2, 0), (2, 3), (3, 3)] };
        assert_eq!(m.basis_counts(), brute_counts(&m));
    }

    #[test]
    fn partition_counts() {
        let m = Matroid::Partition { blocks: vec![vec![0, 3], vec![1, 2, 4]], quotas: vec![1, 2] };
        assert_eq!(m.basis_counts(), brute_counts(&m));
        assert!(check_axioms(&m, 50, 1).is_none());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn uniform_passes_axioms() {
        assert!(check_axioms(&Matroid::Uniform { rank: 1, size: 4 }, 20, 3).is_none());
    }
}
