use num_traits::Zero;

use crate::Rat;

/// Reduced row echelon form of a rational matrix, kept together with its
/// pivot columns so it can be reused as a "reduce modulo this row span"
/// operator.
#[derive(Debug, Clone)]
pub struct RatRref {
    pub rows: Vec<Vec<Rat>>,
    /// pivots[k] = column of the k-th pivot row
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl RatRref {
    /// Row-reduce the span of `vectors` (each of length `ncols`).
    pub fn new(ncols: usize, vectors: &[Vec<Rat>]) -> Self {
        let mut me = RatRref { rows: Vec::new(), pivots: Vec::new(), ncols };
        for v in vectors {
            me.insert(v.clone());
        }
        me
    }

    /// Reduce `v` against the current rows; if a nonzero remainder is left,
    /// add it as a new pivot row and re-reduce earlier rows against it.
    /// Returns true if the span grew.
    pub fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.reduce_in_place(&mut v);
        let Some(lead) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[lead].recip();
        for c in v.iter_mut() {
            *c *= inv;
        }
        // keep rows sorted by pivot column and fully reduced
        let pos = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(pos, lead);
        self.rows.insert(pos, v);
        let new_row = self.rows[pos].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == pos {
                continue;
            }
            let coeff = row[lead].clone();
            if !coeff.is_zero() {
                for (a, b) in row.iter_mut().zip(new_row.iter()) {
                    *a -= coeff.clone() * b.clone();
                }
            }
        }
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtract the row span from `v`, zeroing every pivot coordinate.
    pub fn reduce_in_place(&self, v: &mut [Rat]) {
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            let coeff = v[p].clone();
            if !coeff.is_zero() {
                for (a, b) in v.iter_mut().zip(row.iter()) {
                    *a -= coeff.clone() * b.clone();
                }
            }
        }
    }

    /// Canonical representative of `v` modulo the row span: the reduction,
    /// restricted to non-pivot columns.
    pub fn class_of(&self, v: &[Rat]) -> Vec<Rat> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).map(|c| w[c].clone()).collect()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|c| c.is_zero())
    }
}

/// Solve `A x = b` exactly over Q. `a` is given by rows. Returns one
/// solution or None if the system is inconsistent.
pub fn rat_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map_or(0, |r| r.len());
    // eliminate on the augmented matrix
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prow = 0;
    for col in 0..ncols {
        let Some(r) = (prow..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, r);
        let inv = aug[prow][col].recip();
        for c in aug[prow].iter_mut() {
            *c *= inv.clone();
        }
        let prow_copy = aug[prow].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == prow {
                continue;
            }
            let coeff = row[col].clone();
            if !coeff.is_zero() {
                for (x, y) in row.iter_mut().zip(prow_copy.iter()) {
                    *x -= coeff.clone() * y.clone();
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == aug.len() {
            break;
        }
    }
    // inconsistent iff a zero row has nonzero rhs
    for row in aug.iter().skip(prow) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for &(r, c) in &pivots {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_rank_and_membership() {
        let m = RatRref::new(3, &[rv(&[1, 2, 3]), rv(&[2, 4, 6]), rv(&[0, 1, 1])]);
        assert_eq!(m.rank(), 2);
        assert!(m.contains(&rv(&[1, 3, 4])));
        assert!(!m.contains(&rv(&[0, 0, 1])));
    }

    #[test]
    fn class_representatives_are_stable() {
        let m = RatRref::new(3, &[rv(&[1, 1, 0])]);
        let c1 = m.class_of(&rv(&[2, 0, 5]));
        let c2 = m.class_of(&rv(&[0, -2, 5]));
        assert_eq!(c1, c2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = vec![rv(&[1, 1]), rv(&[1, -1])];
        let x = rat_solve(&a, &rv(&[3, 1])).unwrap();
        assert_eq!(x, rv(&[2, 1]));
        let a2 = vec![rv(&[1, 1]), rv(&[2, 2])];
        assert!(rat_solve(&a2, &rv(&[1, 3])).is_none());
        let x3 = rat_solve(&a2, &rv(&[1, 2])).unwrap();
        assert_eq!(x3[0].clone() + x3[1].clone(), rat(1));
    }
}
