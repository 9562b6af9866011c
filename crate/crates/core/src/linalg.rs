//! Exact Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::eps::Rat;

/// Reduced row echelon form in place. Returns the pivot column of each nonzero row.
pub fn rref(m: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rat::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Some nonzero vector `z` with `rows · z = 0`, if one exists.
pub fn nullspace_vector(rows: &[Vec<Rat>], ncols: usize) -> Option<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut z = vec![Rat::zero(); ncols];
    z[free] = Rat::one();
    for (r, &pc) in pivots.iter().enumerate() {
        z[pc] = -m[r][free].clone();
    }
    Some(z)
}

/// Solves `Σ_k coeffs[k] · cols[k] = target`. Free variables are set to zero.
pub fn solve_combination(cols: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = cols.len();
    let dim = target.len();
    let mut m: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps::rat;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 2)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn combination_recovers_coefficients() {
        let cols = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]];
        let x = solve_combination(&cols, &[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(2, 1)]);
        assert!(solve_combination(&cols[..1], &[rat(0, 1), rat(1, 1)]).is_none());
    }
}
