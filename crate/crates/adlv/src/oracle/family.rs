//! One-parameter operator families on a single superbasic block, their
//! window action, limits at infinity, and the reduce-to-J loop.
//!
//! The basis is the chain e_J, J in Z, with e_{J+h} = t e_J. The family
//! a_{i,delta}(x) sends e_J to e_J + x e_{J+delta} for J = i mod h and
//! fixes the other basis vectors.

use std::collections::BTreeMap;

use crate::oracle::field::{Field, K};
use crate::oracle::lattice::{member, FrobTwist, Lattice, Window, WinVec};
use crate::rootdata::Coweight;
use crate::{Error, Result};

/// Result of the delta scan of a lattice: j1 is the smallest chain index
/// carried by a lattice vector, j2 the largest index whose basis vector is
/// missing, delta = j2 - j1. delta = -1 certifies a shift lattice
/// s^{j1} O^h; otherwise `residue` is the unique congruence class where the
/// critical family acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaIndex {
    pub delta: i64,
    pub residue: Option<usize>,
    pub j1: i64,
}

fn chain_index(d: i32, i: usize, h: usize) -> i64 {
    d as i64 * h as i64 + i as i64
}

fn unit_chain(n: usize, win: Window, j: i64) -> Result<WinVec> {
    let h = n as i64;
    let d = j.div_euclid(h) as i32;
    let i = j.rem_euclid(h) as usize;
    let mut v = WinVec::zero(n, win);
    if !win.contains(d) {
        return Err(Error::PrecisionInsufficient(format!("chain index {j} outside the window")));
    }
    v.set(d, i, 1)?;
    Ok(v)
}

/// The invariants (delta, i, j1) of Lemma-style reduction for a lattice in
/// a single block of size h = lat.n.
pub fn delta_index(field: &Field, lat: &Lattice) -> Result<DeltaIndex> {
    let h = lat.n;
    let ech = lat.span(field)?;
    let j1 = lat
        .pivots
        .iter()
        .enumerate()
        .map(|(i, &a)| chain_index(a, i, h))
        .min()
        .expect("nonempty pivot list");
    // all e_J with J >= h * (max pivot) lie in the lattice
    let jtop = h as i64 * *lat.pivots.iter().max().unwrap() as i64;
    let mut j2 = j1 - 1;
    let mut j = jtop - 1;
    while j >= j1 {
        let v = unit_chain(h, lat.win, j)?;
        if !ech.contains(&v) {
            j2 = j;
            break;
        }
        j -= 1;
    }
    let delta = j2 - j1;
    debug_assert!(delta == -1 || delta >= 1, "delta = 0 cannot occur");
    let residue = if delta >= 0 { Some(j1.rem_euclid(h as i64) as usize) } else { None };
    Ok(DeltaIndex { delta, residue, j1 })
}

/// The shift lattice s^j O^h = <e_j, ..., e_{j+h-1}>.
pub fn shift_standard_lattice(field: &Field, h: usize, win: Window, j: i64) -> Result<Lattice> {
    let gens: Vec<WinVec> = (j..j + h as i64).map(|jj| unit_chain(h, win, jj)).collect::<Result<_>>()?;
    Lattice::canonicalize(field, h, win, &gens)
}

/// a_{i,delta}(x) applied to a window vector (top coefficients absorbed by
/// the implicit tail, bottom loss is an error; delta >= 0 never loses
/// bottom).
pub fn family_vec(
    field: &Field,
    v: &WinVec,
    i_res: usize,
    delta: i64,
    x: K,
) -> Result<WinVec> {
    let h = v.n;
    let mut out = v.clone();
    for (d, i, c) in v.iter_nonzero().collect::<Vec<_>>() {
        let j = chain_index(d, i, h);
        if j.rem_euclid(h as i64) != i_res as i64 % h as i64 {
            continue;
        }
        let j2 = j + delta;
        let nd = j2.div_euclid(h as i64) as i32;
        let ni = j2.rem_euclid(h as i64) as usize;
        if nd >= v.win.high {
            continue;
        }
        if nd < v.win.low {
            return Err(Error::PrecisionInsufficient("family shift leaves the window below".into()));
        }
        let cur = out.get(nd, ni);
        out.set(nd, ni, field.add(cur, field.mul(x, c)))?;
    }
    Ok(out)
}

/// a_{i,delta}(x) applied to a lattice.
pub fn apply_family(field: &Field, lat: &Lattice, i_res: usize, delta: i64, x: K) -> Result<Lattice> {
    if delta < 0 || (delta == 0 && x == field.neg(field.one())) {
        return Err(Error::InvalidParameter(format!(
            "a_{{i,{delta}}} is defined on A^1 minus -1 at delta = 0 and requires delta >= 0"
        )));
    }
    let gens: Vec<WinVec> =
        lat.cols.iter().map(|c| family_vec(field, c, i_res, delta, x)).collect::<Result<_>>()?;
    Lattice::canonicalize(field, lat.n, lat.win, &gens)
}

/// A linear operator on the window module, stored by its action on the
/// basis coordinates (top-lossy, as window statements always are).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowOp {
    pub h: usize,
    pub win: Window,
    pub cols: Vec<WinVec>,
}

impl WindowOp {
    pub fn identity(h: usize, win: Window) -> WindowOp {
        let size = h * win.len();
        let cols = (0..size)
            .map(|idx| {
                let mut v = WinVec::zero(h, win);
                v.c[idx] = 1;
                v
            })
            .collect();
        WindowOp { h, win, cols }
    }

    pub fn family(field: &Field, h: usize, win: Window, i_res: usize, delta: i64, x: K) -> Result<WindowOp> {
        let id = WindowOp::identity(h, win);
        let cols = id.cols.iter().map(|c| family_vec(field, c, i_res, delta, x)).collect::<Result<_>>()?;
        Ok(WindowOp { h, win, cols })
    }

    pub fn apply_vec(&self, field: &Field, v: &WinVec) -> WinVec {
        let mut out = WinVec::zero(self.h, self.win);
        for (idx, &c) in v.c.iter().enumerate() {
            if c != 0 {
                out.axpy(field, c, &self.cols[idx]);
            }
        }
        out
    }

    /// self composed after other.
    pub fn compose(&self, field: &Field, other: &WindowOp) -> WindowOp {
        let cols = other.cols.iter().map(|c| self.apply_vec(field, c)).collect();
        WindowOp { h: self.h, win: self.win, cols }
    }

    /// Inverse of an operator of the form identity + strictly chain-raising
    /// nilpotent part.
    pub fn inverse_unipotent(&self, field: &Field) -> WindowOp {
        let id = WindowOp::identity(self.h, self.win);
        let cols = id
            .cols
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                // sum (-N)^k e, N = self - id
                let mut acc = e.clone();
                let mut term = e.clone();
                let mut sign_neg = true;
                loop {
                    // term <- N(term)
                    let mut next = self.apply_vec(field, &term);
                    next.axpy(field, field.neg(1), &term);
                    if next.is_zero() {
                        break;
                    }
                    if sign_neg {
                        acc.axpy(field, field.neg(1), &next);
                    } else {
                        acc.axpy(field, 1, &next);
                    }
                    term = next;
                    sign_neg = !sign_neg;
                }
                let _ = idx;
                acc
            })
            .collect();
        WindowOp { h: self.h, win: self.win, cols }
    }

    pub fn commutator(field: &Field, a: &WindowOp, b: &WindowOp) -> WindowOp {
        let ai = a.inverse_unipotent(field);
        let bi = b.inverse_unipotent(field);
        a.compose(field, b).compose(field, &ai).compose(field, &bi)
    }

    /// Check that (self - identity) maps every basis coordinate e_J into the
    /// span of coordinates with chain index strictly greater than J + bound.
    pub fn raises_chain_index_beyond(&self, bound: i64) -> bool {
        for (idx, col) in self.cols.iter().enumerate() {
            let (d, i) = col.unflat(idx);
            let j = chain_index(d, i, self.h);
            for (dd, ii, c) in col.iter_nonzero() {
                let jj = chain_index(dd, ii, self.h);
                if jj == j && c == 1 {
                    continue; // identity part
                }
                if jj <= j + bound {
                    return false;
                }
            }
        }
        true
    }
}

/// Dense polynomial in one transcendental u over the field, ascending
/// coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<K>);

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn constant(c: K) -> UPoly {
        if c == 0 {
            UPoly::zero()
        } else {
            UPoly(vec![c])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> K {
        self.0.get(k).copied().unwrap_or(0)
    }

    fn trim(mut v: Vec<K>) -> UPoly {
        while v.last() == Some(&0) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn add(f: &Field, a: &UPoly, b: &UPoly) -> UPoly {
        let n = a.0.len().max(b.0.len());
        UPoly::trim((0..n).map(|k| f.add(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn sub(f: &Field, a: &UPoly, b: &UPoly) -> UPoly {
        let n = a.0.len().max(b.0.len());
        UPoly::trim((0..n).map(|k| f.sub(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn mul(f: &Field, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![0 as K; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        UPoly::trim(out)
    }

    pub fn scale(f: &Field, a: &UPoly, s: K) -> UPoly {
        UPoly::trim(a.0.iter().map(|&x| f.mul(x, s)).collect())
    }

    /// Exact division (panics if not exact; used only on gcd divisors).
    pub fn div_exact(f: &Field, a: &UPoly, b: &UPoly) -> UPoly {
        assert!(!b.is_zero(), "division by zero polynomial");
        let mut rem = a.0.clone();
        let db = b.0.len() - 1;
        let lead_inv = f.inv(*b.0.last().unwrap());
        let mut out = vec![0 as K; a.0.len().saturating_sub(db)];
        while rem.iter().any(|&c| c != 0) {
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() < b.0.len() {
                break;
            }
            let d = rem.len() - 1;
            let c = f.mul(rem[d], lead_inv);
            out[d - db] = c;
            for (k, &bk) in b.0.iter().enumerate() {
                let idx = d - db + k;
                rem[idx] = f.sub(rem[idx], f.mul(c, bk));
            }
        }
        assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
        UPoly::trim(out)
    }

    pub fn monic_gcd(f: &Field, a: &UPoly, b: &UPoly) -> UPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            // x mod y
            let mut rem = x.0.clone();
            let dy = y.0.len() - 1;
            let lead_inv = f.inv(*y.0.last().unwrap());
            while rem.len() > dy || (rem.len() == dy + 1 && dy == 0 && rem.iter().any(|&c| c != 0)) {
                while rem.last() == Some(&0) {
                    rem.pop();
                }
                if rem.len() < y.0.len() {
                    break;
                }
                let d = rem.len() - 1;
                let c = f.mul(rem[d], lead_inv);
                for (k, &yk) in y.0.iter().enumerate() {
                    let idx = d - dy + k;
                    rem[idx] = f.sub(rem[idx], f.mul(c, yk));
                }
                while rem.last() == Some(&0) {
                    rem.pop();
                }
            }
            x = y;
            y = UPoly::trim(rem);
        }
        if x.is_zero() {
            return x;
        }
        let inv = f.inv(*x.0.last().unwrap());
        UPoly::scale(f, &x, inv)
    }

    pub fn eval(&self, f: &Field, x: K) -> K {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// Window vector with polynomial coefficients (the family parameter u).
#[derive(Debug, Clone, PartialEq, Eq)]
struct UWinVec {
    n: usize,
    win: Window,
    c: Vec<UPoly>,
}

impl UWinVec {
    fn from_winvec(v: &WinVec) -> UWinVec {
        UWinVec { n: v.n, win: v.win, c: v.c.iter().map(|&x| UPoly::constant(x)).collect() }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|p| p.is_zero())
    }

    fn leading(&self) -> Option<usize> {
        self.c.iter().position(|p| !p.is_zero())
    }

    fn shifted(&self, k: i32) -> Result<UWinVec> {
        let mut out = UWinVec { n: self.n, win: self.win, c: vec![UPoly::zero(); self.c.len()] };
        for (idx, p) in self.c.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d = (idx / self.n) as i32 + self.win.low + k;
            let i = idx % self.n;
            if d >= self.win.high {
                continue;
            }
            if d < self.win.low {
                return Err(Error::PrecisionInsufficient("polynomial t-shift below the window".into()));
            }
            out.c[(d - self.win.low) as usize * self.n + i] = p.clone();
        }
        Ok(out)
    }

    fn max_deg(&self) -> usize {
        self.c.iter().filter_map(|p| p.deg()).max().unwrap_or(0)
    }

    /// coefficient vector at the top u-degree
    fn u_leading(&self) -> WinVec {
        let d = self.max_deg();
        WinVec { n: self.n, win: self.win, c: self.c.iter().map(|p| p.coeff(d)).collect() }
    }

    /// divide out the content and make the leading-coordinate polynomial
    /// monic
    fn normalize(&mut self, f: &Field) {
        let mut content = UPoly::zero();
        for p in &self.c {
            if !p.is_zero() {
                content = UPoly::monic_gcd(f, &content, p);
            }
        }
        if content.is_zero() {
            return;
        }
        if content.deg() != Some(0) || content.coeff(0) != 1 {
            for p in self.c.iter_mut() {
                *p = UPoly::div_exact(f, p, &content);
            }
        }
        if let Some(lead) = self.leading() {
            let lc = *self.c[lead].0.last().unwrap();
            if lc != 1 {
                let inv = f.inv(lc);
                for p in self.c.iter_mut() {
                    *p = UPoly::scale(f, p, inv);
                }
            }
        }
    }
}

/// The limit lattice at u = infinity of the family a_{i,delta}(u) L: the
/// span of the top-u-degree coefficient vectors of the fully reduced
/// polynomial row space. Returns the constancy flag instead of an endpoint
/// when the family does not move L.
pub fn family_endpoint(
    field: &Field,
    lat: &Lattice,
    i_res: usize,
    delta: i64,
) -> Result<(Lattice, bool)> {
    if delta < 1 {
        return Err(Error::InvalidParameter("endpoint requires delta >= 1".into()));
    }
    let h = lat.n;
    // generators of a(u) L with polynomial coefficients
    let mut ugens = Vec::new();
    for col in &lat.cols {
        let mut v = UWinVec::from_winvec(col);
        for (d, i, c) in col.iter_nonzero() {
            let j = chain_index(d, i, h);
            if j.rem_euclid(h as i64) != i_res as i64 % h as i64 {
                continue;
            }
            let j2 = j + delta;
            let nd = j2.div_euclid(h as i64) as i32;
            let ni = j2.rem_euclid(h as i64) as usize;
            if nd >= lat.win.high {
                continue;
            }
            if nd < lat.win.low {
                return Err(Error::PrecisionInsufficient("family shift leaves the window".into()));
            }
            let idx = (nd - lat.win.low) as usize * h + ni;
            // += u * c
            let moved = UPoly::trim(vec![0, c]);
            v.c[idx] = UPoly::add(field, &v.c[idx], &moved);
        }
        ugens.push(v);
    }
    // fraction-free fully reduced row space of the O-span
    let mut rows: BTreeMap<usize, UWinVec> = BTreeMap::new();
    let mut queue: Vec<UWinVec> = Vec::new();
    for g in &ugens {
        for k in 0..lat.win.len() as i32 {
            let s = g.shifted(k)?;
            if s.is_zero() {
                break;
            }
            queue.push(s);
        }
    }
    for mut v in queue {
        loop {
            let Some(lead) = v.leading() else { break };
            let Some(p) = rows.get(&lead) else {
                v.normalize(field);
                // back-reduce existing rows against the new pivot
                let mut updated: Vec<(usize, UWinVec)> = Vec::new();
                for (&l, r) in rows.iter() {
                    if !r.c[lead].is_zero() {
                        let mut nr = UWinVec {
                            n: r.n,
                            win: r.win,
                            c: r
                                .c
                                .iter()
                                .zip(v.c.iter())
                                .map(|(rc, vc)| {
                                    UPoly::sub(
                                        field,
                                        &UPoly::mul(field, rc, &v.c[lead]),
                                        &UPoly::mul(field, &r.c[lead], vc),
                                    )
                                })
                                .collect(),
                        };
                        nr.normalize(field);
                        updated.push((l, nr));
                    }
                }
                for (l, nr) in updated {
                    debug_assert_eq!(nr.leading(), Some(l));
                    rows.insert(l, nr);
                }
                rows.insert(lead, v);
                break;
            };
            // v <- p_lead * v - v_lead * p
            let plead = p.c[lead].clone();
            let vlead = v.c[lead].clone();
            v = UWinVec {
                n: v.n,
                win: v.win,
                c: v
                    .c
                    .iter()
                    .zip(p.c.iter())
                    .map(|(vc, pc)| {
                        UPoly::sub(field, &UPoly::mul(field, vc, &plead), &UPoly::mul(field, &vlead, pc))
                    })
                    .collect(),
            };
        }
    }
    if rows.values().all(|r| r.max_deg() == 0) {
        return Ok((lat.clone(), true));
    }
    // flat limit at u = infinity: while the top-degree coefficient vectors
    // are dependent, a dependency combination (scaled to a common top
    // degree) cancels there and exposes a lower-degree leading; replacing a
    // maximal-degree participant keeps the row space and strictly lowers
    // the total degree, so this terminates with independent leadings
    let mut basis: Vec<UWinVec> = rows.into_values().collect();
    loop {
        let leadings: Vec<WinVec> = basis.iter().map(|r| r.u_leading()).collect();
        let Some(dep) = leading_dependency(field, &leadings) else { break };
        let involved: Vec<usize> = (0..basis.len()).filter(|&i| dep[i] != 0).collect();
        let top = involved.iter().map(|&i| basis[i].max_deg()).max().expect("nonempty dependency");
        let k = *involved.iter().rev().find(|&&i| basis[i].max_deg() == top).expect("max participant");
        let mut z = UWinVec { n: basis[0].n, win: basis[0].win, c: vec![UPoly::zero(); basis[0].c.len()] };
        for &i in &involved {
            let shift = top - basis[i].max_deg();
            for (zc, rc) in z.c.iter_mut().zip(basis[i].c.iter()) {
                let mut scaled = vec![0; shift];
                scaled.extend(rc.0.iter().copied());
                let scaled = UPoly::scale(field, &UPoly(scaled), dep[i]);
                *zc = UPoly::add(field, zc, &scaled);
            }
        }
        debug_assert!(!z.is_zero(), "rows are independent over the function field");
        debug_assert!(z.max_deg() < top);
        z.normalize(field);
        basis[k] = z;
    }
    let leadings: Vec<WinVec> = basis.iter().map(|r| r.u_leading()).collect();
    let endpoint = Lattice::canonicalize(field, h, lat.win, &leadings)?;
    Ok((endpoint, false))
}

/// A nontrivial linear dependency among the vectors, as combination
/// coefficients, or None if they are independent.
fn leading_dependency(field: &Field, vecs: &[WinVec]) -> Option<Vec<K>> {
    let m = vecs.len();
    // eliminate on [vector | companion identity] rows
    let mut rows: Vec<(WinVec, Vec<K>)> = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut cur = v.clone();
        let mut comp = vec![0 as K; m];
        comp[i] = 1;
        for (r, rc) in &rows {
            let Some(lead) = r.leading() else { continue };
            let c = cur.c[lead];
            if c != 0 {
                let factor = field.neg(field.mul(c, field.inv(r.c[lead])));
                cur.axpy(field, factor, r);
                for (a, &b) in comp.iter_mut().zip(rc.iter()) {
                    *a = field.add(*a, field.mul(factor, b));
                }
            }
        }
        if cur.is_zero() {
            return Some(comp);
        }
        rows.push((cur, comp));
    }
    None
}

/// The reduce-to-J run: iterate the critical family endpoint until the
/// lattice is a shift lattice. Every step is checked: delta strictly
/// decreases, membership in the closed stratum is preserved, and the
/// determinant valuation is constant.
#[derive(Debug, Clone)]
pub struct ReduceOutcome {
    /// intermediate endpoints, in order (empty when the input is terminal)
    pub path: Vec<Lattice>,
    pub terminal: Lattice,
    pub terminal_shift: i64,
    /// delta values seen, starting with the input's
    pub deltas: Vec<i64>,
}

pub fn reduce_to_j(field: &Field, lat: &Lattice, b: &FrobTwist, mu: &Coweight) -> Result<ReduceOutcome> {
    if b.blocks.len() != 1 || b.n() != lat.n {
        return Err(Error::InvalidInput("reduce-to-J requires a single superbasic block".into()));
    }
    if !member(field, lat, b, mu, true)? {
        return Err(Error::InvalidInput("lattice is not a member of the closed stratum".into()));
    }
    let mut current = lat.clone();
    let mut path = Vec::new();
    let mut deltas = Vec::new();
    loop {
        let di = delta_index(field, &current)?;
        deltas.push(di.delta);
        if di.delta == -1 {
            debug_assert_eq!(
                current,
                shift_standard_lattice(field, lat.n, lat.win, di.j1)?,
                "delta = -1 must certify a shift lattice"
            );
            return Ok(ReduceOutcome { path, terminal: current, terminal_shift: di.j1, deltas });
        }
        let residue = di.residue.expect("residue exists for delta >= 0");
        let (endpoint, constant) = family_endpoint(field, &current, residue, di.delta)?;
        if constant {
            return Err(Error::InconsistentClass("critical family is constant".into()));
        }
        let di2 = delta_index(field, &endpoint)?;
        if di2.delta >= di.delta {
            return Err(Error::InconsistentClass(format!(
                "delta did not decrease: {} -> {}",
                di.delta, di2.delta
            )));
        }
        if endpoint.kappa() != current.kappa() {
            return Err(Error::InconsistentClass("endpoint changed the determinant valuation".into()));
        }
        if !member(field, &endpoint, b, mu, true)? {
            return Err(Error::InconsistentClass("endpoint left the closed stratum".into()));
        }
        path.push(endpoint.clone());
        current = endpoint;
    }
}

/// Evaluate the family at a finite parameter and compare with the
/// polynomial row space: the rows specialize into the lattice a(x) L.
#[cfg(test)]
fn family_rows_specialize(field: &Field, lat: &Lattice, i_res: usize, delta: i64, x: K) -> bool {
    let specialized = apply_family(field, lat, i_res, delta, x).unwrap();
    let direct: Vec<WinVec> =
        lat.cols.iter().map(|c| family_vec(field, c, i_res, delta, x).unwrap()).collect();
    let again = Lattice::canonicalize(field, lat.n, lat.win, &direct).unwrap();
    specialized == again
}
