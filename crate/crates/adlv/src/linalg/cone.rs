use num_traits::{Signed, Zero};

use crate::Rat;

/// Decide whether `target` is a non-negative rational combination of the
/// `generators`, by phase-1 simplex with exact arithmetic and Bland's rule.
pub fn in_cone(generators: &[Vec<Rat>], target: &[Rat]) -> bool {
    let m = target.len();
    let n = generators.len();
    for g in generators {
        assert_eq!(g.len(), m);
    }
    if target.iter().all(|c| c.is_zero()) {
        return true;
    }
    // tableau rows: [generator cols | artificial cols | rhs], rhs >= 0
    let mut tab: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let flip = target[i].is_negative();
            let mut row: Vec<Rat> = (0..n)
                .map(|j| if flip { -generators[j][i].clone() } else { generators[j][i].clone() })
                .collect();
            row.extend((0..m).map(|k| if k == i { Rat::from_integer(1) } else { Rat::zero() }));
            row.push(target[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let rhs = n + m;

    loop {
        // reduced costs for the artificial objective: sum of rows whose
        // basic variable is artificial
        let mut obj = vec![Rat::zero(); n + m];
        let mut value = Rat::zero();
        for (i, row) in tab.iter().enumerate() {
            if basis[i] >= n {
                for j in 0..n + m {
                    obj[j] += row[j].clone();
                }
                value += row[rhs].clone();
            }
        }
        if value.is_zero() {
            return true;
        }
        // entering: smallest index with positive reduced cost, never re-entering
        // an artificial column
        let Some(enter) = (0..n).find(|&j| obj[j].is_positive()) else {
            return false;
        };
        // ratio test with Bland tie-breaking on the leaving basic variable
        let mut leave: Option<(usize, Rat)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = row[rhs].clone() / row[enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // unbounded cannot happen in phase 1 (objective bounded below by 0)
            return false;
        };
        // pivot
        let pv = tab[pivot_row][enter].clone();
        for c in tab[pivot_row].iter_mut() {
            *c /= pv.clone();
        }
        let prow = tab[pivot_row].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pivot_row {
                continue;
            }
            let f = row[enter].clone();
            if !f.is_zero() {
                for (a, b) in row.iter_mut().zip(prow.iter()) {
                    *a -= f.clone() * b.clone();
                }
            }
        }
        basis[pivot_row] = enter;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn cone_membership_basics() {
        let gens = vec![rv(&[1, -1, 0]), rv(&[0, 1, -1])];
        assert!(in_cone(&gens, &rv(&[1, 0, -1])));
        assert!(in_cone(&gens, &rv(&[0, 0, 0])));
        assert!(!in_cone(&gens, &rv(&[-1, 1, 0])));
        assert!(!in_cone(&gens, &rv(&[1, 0, 0])));
    }

    #[test]
    fn cone_rational_coefficients() {
        // (1, -1/2, -1/2) = 1*(1,-1,0) - nope; needs coefficient 1 and 1/2
        let gens = vec![rv(&[1, -1, 0]), rv(&[0, 1, -1])];
        let target = vec![rat(1), Rat::new(-1, 2), Rat::new(-1, 2)];
        assert!(in_cone(&gens, &target));
    }

    #[test]
    fn cone_degenerate_generators() {
        let gens = vec![rv(&[1, -1]), rv(&[-1, 1]), rv(&[2, -2])];
        assert!(in_cone(&gens, &rv(&[3, -3])));
        assert!(in_cone(&gens, &rv(&[-3, 3])));
        assert!(!in_cone(&gens, &rv(&[1, 1])));
    }
}
