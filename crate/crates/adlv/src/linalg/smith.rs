use num_traits::Zero;

use crate::Rat;

/// Smith normal form `U * A * V = D` with unimodular `U`, `V` and diagonal
/// `D` whose entries satisfy d_1 | d_2 | ... Also carries `U^{-1}` so
/// quotient classes can be lifted back.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub u_inv: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Compute the Smith normal form of `a` (given by rows, may be empty).
pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(m);
    let mut u_inv = identity(m);
    let mut v = identity(n);

    // elementary operations, mirrored into the transforms
    let swap_rows = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, ui: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_row = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, ui: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        // row_dst -= q * row_src
        for c in 0..n {
            a[dst][c] -= q * a[src][c];
        }
        for c in 0..m {
            u[dst][c] -= q * u[src][c];
        }
        for r in ui.iter_mut() {
            r[src] += q * r[dst];
        }
    };
    let swap_cols = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_col = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        // col_dst -= q * col_src
        for row in a.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
    };

    let k = m.min(n);
    let mut t = 0;
    while t < k {
        // pivot: nonzero entry of minimal absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[i][j] != 0 && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        let mut clean = true;
        for i in t + 1..m {
            if a[i][t] != 0 {
                let q = a[i][t] / a[t][t];
                add_row(&mut a, &mut u, &mut u_inv, i, t, q);
                if a[i][t] != 0 {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if a[t][j] != 0 {
                let q = a[t][j] / a[t][t];
                add_col(&mut a, &mut v, j, t, q);
                if a[t][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut fixed = None;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if a[i][j] % a[t][t] != 0 {
                    fixed = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fixed {
            add_row(&mut a, &mut u, &mut u_inv, t, i, -1);
            continue;
        }
        if a[t][t] < 0 {
            for c in 0..n {
                a[t][c] = -a[t][c];
            }
            for c in 0..m {
                u[t][c] = -u[t][c];
            }
            for r in u_inv.iter_mut() {
                r[t] = -r[t];
            }
        }
        t += 1;
    }
    let d = (0..k).map(|i| a[i][i]).collect();
    Smith { d, u, u_inv, v }
}

/// Solve `A x = b` over the integers. Returns one solution or None.
pub fn solve_integral(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    assert_eq!(b.len(), m);
    let s = smith_normal_form(a);
    let c: Vec<i64> = (0..m).map(|i| (0..m).map(|j| s.u[i][j] * b[j]).sum()).collect();
    let k = s.d.len();
    let mut y = vec![0i64; n];
    for i in 0..m {
        if i < k && s.d[i] != 0 {
            if c[i] % s.d[i] != 0 {
                return None;
            }
            y[i] = c[i] / s.d[i];
        } else if c[i] != 0 {
            return None;
        }
    }
    let x: Vec<i64> = (0..n).map(|i| (0..n).map(|j| s.v[i][j] * y[j]).sum()).collect();
    Some(x)
}

/// A finitely generated abelian group `Z^g / <relations>` presented by its
/// invariant factors, with projection and lift maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// number of generators of the ambient free group
    pub ngens: usize,
    /// retained invariant factors: torsion orders (>= 2) first, then one 0
    /// per free factor
    pub factors: Vec<i64>,
    proj_rows: Vec<Vec<i64>>,
    lift_cols: Vec<Vec<i64>>,
}

/// Present `Z^g / im(relations)`. Each relation is a vector of length `g`.
pub fn quotient_presentation(g: usize, relations: &[Vec<i64>]) -> Presentation {
    // relation matrix with the relations as columns
    let r = relations.len();
    let mat: Vec<Vec<i64>> = (0..g).map(|i| (0..r).map(|j| relations[j][i]).collect()).collect();
    let mut s = smith_normal_form(&mat);
    let k = s.d.len();
    // canonical sign for free coordinates: first nonzero projection entry > 0
    for i in 0..g {
        let free = i >= k || s.d[i] == 0;
        if free {
            if let Some(&lead) = s.u[i].iter().find(|&&x| x != 0) {
                if lead < 0 {
                    for c in 0..g {
                        s.u[i][c] = -s.u[i][c];
                    }
                    for row in s.u_inv.iter_mut() {
                        row[i] = -row[i];
                    }
                }
            }
        }
    }
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for i in 0..g {
        let d = if i < k { s.d[i] } else { 0 };
        if d == 1 {
            continue;
        }
        if d == 0 {
            free.push(i);
        } else {
            torsion.push(i);
        }
    }
    let order: Vec<usize> = torsion.iter().chain(free.iter()).copied().collect();
    let factors: Vec<i64> = order.iter().map(|&i| if i < k { s.d[i] } else { 0 }).collect();
    let mut proj_rows: Vec<Vec<i64>> = order.iter().map(|&i| s.u[i].clone()).collect();
    let mut lift_cols: Vec<Vec<i64>> =
        order.iter().map(|&i| (0..g).map(|r| s.u_inv[r][i]).collect()).collect();
    // canonical labeling of each cyclic factor: the first generator whose
    // image is a unit maps to 1 (for the quotient model of adjoint type A
    // this is the coordinate-sum labeling)
    for (idx, &d) in factors.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let unit = proj_rows[idx]
            .iter()
            .map(|&x| x.rem_euclid(d))
            .find(|&x| num_integer::Integer::gcd(&x, &d) == 1);
        if let Some(v) = unit {
            let vinv = (1..d).find(|&w| (v * w).rem_euclid(d) == 1).expect("unit inverse");
            for x in proj_rows[idx].iter_mut() {
                *x = (*x * vinv).rem_euclid(d);
            }
            for x in lift_cols[idx].iter_mut() {
                *x *= v;
            }
        }
    }
    Presentation { ngens: g, factors, proj_rows, lift_cols }
}

impl Presentation {
    /// A free presentation with explicit projection rows and lift columns.
    /// `project(lift(c))` must equal `c`; the caller guarantees that the
    /// projection kills the intended relation lattice.
    pub fn free_presentation(ngens: usize, proj_rows: Vec<Vec<i64>>, lift_cols: Vec<Vec<i64>>) -> Presentation {
        assert_eq!(proj_rows.len(), lift_cols.len());
        for (r, l) in proj_rows.iter().zip(lift_cols.iter()) {
            assert_eq!(r.len(), ngens);
            assert_eq!(l.len(), ngens);
        }
        let factors = vec![0; proj_rows.len()];
        Presentation { ngens, factors, proj_rows, lift_cols }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d != 0).collect()
    }

    /// Class of an integer vector, with torsion coordinates reduced into [0, d).
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.ngens);
        self.proj_rows
            .iter()
            .zip(self.factors.iter())
            .map(|(row, &d)| {
                let val: i64 = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                if d == 0 {
                    val
                } else {
                    val.rem_euclid(d)
                }
            })
            .collect()
    }

    /// Image in the rationalized group (torsion dies): the free coordinates.
    pub fn project_rat(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.ngens);
        self.proj_rows
            .iter()
            .zip(self.factors.iter())
            .filter(|(_, &d)| d == 0)
            .map(|(row, _)| {
                row.iter().zip(x.iter()).fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(*a) * b.clone())
            })
            .collect()
    }

    /// A generator-space lift of a class (torsion coordinates taken mod d).
    pub fn lift(&self, class: &[i64]) -> Vec<i64> {
        assert_eq!(class.len(), self.factors.len());
        let mut x = vec![0i64; self.ngens];
        for (col, &c) in self.lift_cols.iter().zip(class.iter()) {
            for (xi, &ci) in x.iter_mut().zip(col.iter()) {
                *xi += c * ci;
            }
        }
        x
    }

    pub fn normalize(&self, class: &[i64]) -> Vec<i64> {
        class
            .iter()
            .zip(self.factors.iter())
            .map(|(&c, &d)| if d == 0 { c } else { c.rem_euclid(d) })
            .collect()
    }

    pub fn eq_class(&self, a: &[i64], b: &[i64]) -> bool {
        self.normalize(a) == self.normalize(b)
    }
}
