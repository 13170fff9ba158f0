//! O_L-lattices in L^n over a truncated t-exponent window.
//!
//! A lattice is represented by its canonical generator matrix: column i has
//! pivot exactly t^{a_i} in row i, every other row-j entry reduced below
//! t^{a_j}. Two window lattices are equal iff their canonical forms are
//! equal. Window coordinates are ordered by (t-valuation, basis index),
//! which for a single block of size h is exactly the chain order of the
//! basis e_J, e_{J+h} = t e_J.

use std::collections::BTreeMap;

use crate::isocrystal::SlopeBlock;
use crate::oracle::field::{Field, K};
use crate::rootdata::Coweight;
use crate::{Error, Result};

/// Half-open t-exponent range [low, high).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub low: i32,
    pub high: i32,
}

impl Window {
    pub fn new(low: i32, high: i32) -> Result<Window> {
        if low >= high {
            return Err(Error::InvalidInput(format!("window [{low}, {high}) is empty")));
        }
        Ok(Window { low, high })
    }

    pub fn len(&self) -> usize {
        (self.high - self.low) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, d: i32) -> bool {
        self.low <= d && d < self.high
    }

    pub fn grow(&self, by: i32) -> Window {
        Window { low: self.low - by, high: self.high + by }
    }
}

/// A vector in L^n supported on a window: coefficient of t^d e_i at flat
/// index (d - low) * n + i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinVec {
    pub n: usize,
    pub win: Window,
    pub c: Vec<K>,
}

impl WinVec {
    pub fn zero(n: usize, win: Window) -> WinVec {
        WinVec { n, win, c: vec![0; n * win.len()] }
    }

    pub fn flat(&self, d: i32, i: usize) -> usize {
        debug_assert!(self.win.contains(d) && i < self.n);
        (d - self.win.low) as usize * self.n + i
    }

    pub fn unflat(&self, idx: usize) -> (i32, usize) {
        ((idx / self.n) as i32 + self.win.low, idx % self.n)
    }

    pub fn get(&self, d: i32, i: usize) -> K {
        if self.win.contains(d) {
            self.c[self.flat(d, i)]
        } else {
            0
        }
    }

    /// Set a coefficient; setting outside the window is an error for nonzero
    /// values (never silently truncate).
    pub fn set(&mut self, d: i32, i: usize, v: K) -> Result<()> {
        if !self.win.contains(d) {
            if v == 0 {
                return Ok(());
            }
            return Err(Error::PrecisionInsufficient(format!("coefficient at t^{d} outside window")));
        }
        let idx = self.flat(d, i);
        self.c[idx] = v;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn leading(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i32, usize, K)> + '_ {
        self.c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(idx, &v)| {
            let (d, i) = self.unflat(idx);
            (d, i, v)
        })
    }

    pub fn scale(&mut self, f: &Field, s: K) {
        for x in self.c.iter_mut() {
            *x = f.mul(*x, s);
        }
    }

    /// self += s * other (same window shape)
    pub fn axpy(&mut self, f: &Field, s: K, other: &WinVec) {
        self.axpy_from(f, s, other, 0);
    }

    /// self += s * other, touching only coordinates from `start` on (other
    /// is zero before `start`)
    pub fn axpy_from(&mut self, f: &Field, s: K, other: &WinVec, start: usize) {
        debug_assert_eq!(self.win, other.win);
        debug_assert_eq!(self.n, other.n);
        debug_assert!(other.c[..start].iter().all(|&x| x == 0));
        if s == 0 {
            return;
        }
        for (a, &b) in self.c[start..].iter_mut().zip(other.c[start..].iter()) {
            if b != 0 {
                *a = f.add(*a, f.mul(s, b));
            }
        }
    }

    /// Multiply by t^k. Coefficients leaving through the top are dropped
    /// (they land in the implicit t^{high} O^n tail); dropping through the
    /// bottom is an error.
    pub fn shifted(&self, k: i32) -> Result<WinVec> {
        let mut out = WinVec::zero(self.n, self.win);
        for (d, i, v) in self.iter_nonzero() {
            let nd = d + k;
            if nd >= self.win.high {
                continue;
            }
            if nd < self.win.low {
                return Err(Error::PrecisionInsufficient(format!(
                    "t-shift by {k} pushes a coefficient below the window"
                )));
            }
            let idx = out.flat(nd, i);
            out.c[idx] = v;
        }
        Ok(out)
    }

    /// Re-embed into another window; nonzero coefficients outside it are an
    /// error.
    pub fn rewindow(&self, win: Window) -> Result<WinVec> {
        let mut out = WinVec::zero(self.n, win);
        for (d, i, v) in self.iter_nonzero() {
            out.set(d, i, v)?;
        }
        Ok(out)
    }

    /// Apply sigma to every coefficient.
    pub fn frobenius(&self, f: &Field) -> WinVec {
        let mut out = self.clone();
        for x in out.c.iter_mut() {
            *x = f.frob(*x);
        }
        out
    }
}

/// Row echelon span of window vectors, fully reduced, keyed by leading flat
/// coordinate.
pub struct Echelon<'f> {
    pub field: &'f Field,
    pub n: usize,
    pub win: Window,
    pub rows: BTreeMap<usize, WinVec>,
}

impl<'f> Echelon<'f> {
    pub fn new(field: &'f Field, n: usize, win: Window) -> Echelon<'f> {
        Echelon { field, n, win, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut WinVec) {
        for (&lead, row) in &self.rows {
            let c = v.c[lead];
            if c != 0 {
                v.axpy_from(self.field, self.field.neg(c), row, lead);
            }
        }
    }

    /// Insert a vector; returns true if the span grew.
    pub fn insert(&mut self, mut v: WinVec) -> bool {
        debug_assert_eq!(v.win, self.win);
        self.reduce(&mut v);
        let Some(lead) = v.leading() else { return false };
        let inv = self.field.inv(v.c[lead]);
        v.scale(self.field, inv);
        for row in self.rows.values_mut() {
            let c = row.c[lead];
            if c != 0 {
                row.axpy_from(self.field, self.field.neg(c), &v, lead);
            }
        }
        self.rows.insert(lead, v);
        true
    }

    pub fn contains(&self, v: &WinVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Insert all t-shifts t^k v for k >= 0 (the O-span closure of v within
    /// the window).
    pub fn insert_span(&mut self, v: &WinVec) -> Result<()> {
        for k in 0..self.win.len() as i32 {
            let shifted = v.shifted(k)?;
            if shifted.is_zero() {
                break;
            }
            self.insert(shifted);
        }
        Ok(())
    }
}

/// A window lattice in canonical form.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub n: usize,
    pub win: Window,
    /// pivot valuations a_i per column
    pub pivots: Vec<i32>,
    /// canonical generator columns; column i has t^{a_i} in row i
    pub cols: Vec<WinVec>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        // canonical forms are window independent; compare sparse content
        self.n == other.n
            && self.pivots == other.pivots
            && self
                .cols
                .iter()
                .zip(other.cols.iter())
                .all(|(a, b)| a.iter_nonzero().collect::<Vec<_>>() == b.iter_nonzero().collect::<Vec<_>>())
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Canonicalize the O-span of `gens` (plus the implicit t^{high} O^n
    /// tail certified by pivot existence). Errors with
    /// `PrecisionInsufficient` when some column has no pivot inside the
    /// window, i.e. the window cannot certify the generators span a full
    /// lattice.
    pub fn canonicalize(field: &Field, n: usize, win: Window, gens: &[WinVec]) -> Result<Lattice> {
        let mut ech = Echelon::new(field, n, win);
        for g in gens {
            debug_assert_eq!(g.n, n);
            let g = if g.win == win { g.clone() } else { g.rewindow(win)? };
            ech.insert_span(&g)?;
        }
        let mut pivots = vec![win.high; n];
        for (&lead, _) in &ech.rows {
            let (d, i) = ech.rows[&lead].unflat(lead);
            if d < pivots[i] {
                pivots[i] = d;
            }
        }
        if let Some(i) = pivots.iter().position(|&a| a >= win.high) {
            return Err(Error::PrecisionInsufficient(format!(
                "no pivot for column {i} inside the window; generators do not certify a lattice"
            )));
        }
        // the span of a full-pivot lattice is the union of the pivot tails
        debug_assert_eq!(
            ech.rank(),
            pivots.iter().map(|&a| (win.high - a) as usize).sum::<usize>()
        );
        let mut cols: Vec<WinVec> = (0..n)
            .map(|i| {
                let lead = (pivots[i] - win.low) as usize * n + i;
                ech.rows[&lead].clone()
            })
            .collect();
        // reduce to the canonical generator matrix: walk coordinates upward;
        // entries at or above a pivot valuation are cleared with the pivot
        // column (clearing against the own column normalizes the pivot entry
        // to exactly t^{a_i})
        for i in 0..n {
            let lead = cols[i].leading().expect("pivot column is nonzero");
            let mut idx = lead + 1;
            while idx < cols[i].c.len() {
                let v = cols[i].c[idx];
                if v != 0 {
                    let (d, j) = cols[i].unflat(idx);
                    if d >= pivots[j] {
                        let sub = cols[j].shifted(d - pivots[j])?;
                        cols[i].axpy(field, field.neg(v), &sub);
                        debug_assert_eq!(cols[i].c[idx], 0);
                    }
                }
                idx += 1;
            }
        }
        Ok(Lattice { n, win, pivots, cols })
    }

    /// The standard lattice O^n.
    pub fn standard(field: &Field, n: usize, win: Window) -> Result<Lattice> {
        let gens: Vec<WinVec> = (0..n)
            .map(|i| {
                let mut v = WinVec::zero(n, win);
                v.set(0, i, 1)?;
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Lattice::canonicalize(field, n, win, &gens)
    }

    /// Kottwitz point: the t-valuation of the determinant, i.e. the sum of
    /// the pivot valuations.
    pub fn kappa(&self) -> i64 {
        self.pivots.iter().map(|&a| a as i64).sum()
    }

    /// Full window span of this lattice.
    pub fn span<'f>(&self, field: &'f Field) -> Result<Echelon<'f>> {
        let mut ech = Echelon::new(field, self.n, self.win);
        for c in &self.cols {
            ech.insert_span(c)?;
        }
        Ok(ech)
    }

    /// Whether the canonical form has all coefficients in the sigma-fixed
    /// base field F_q.
    pub fn is_sigma_fixed(&self, field: &Field) -> bool {
        self.cols.iter().all(|c| c.c.iter().all(|&x| field.frob(x) == x))
    }

    /// Re-canonicalize in another window (must still certify).
    pub fn rewindow(&self, field: &Field, win: Window) -> Result<Lattice> {
        let gens: Vec<WinVec> = self.cols.iter().map(|c| c.rewindow(win)).collect::<Result<_>>()?;
        Lattice::canonicalize(field, self.n, win, &gens)
    }
}

/// The normal-form Frobenius twist b sigma: per block, sigma on coefficients
/// followed by e_J -> e_{J+m} in the chain basis e_{J+h} = t e_J.
#[derive(Debug, Clone)]
pub struct FrobTwist {
    pub blocks: Vec<SlopeBlock>,
    /// (ambient offset, h) per block
    layout: Vec<(usize, usize)>,
    n: usize,
}

impl FrobTwist {
    pub fn new(blocks: &[SlopeBlock]) -> Result<FrobTwist> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlock("empty block list".into()));
        }
        let mut layout = Vec::new();
        let mut off = 0usize;
        for b in blocks {
            layout.push((off, b.h() as usize));
            off += b.h() as usize;
        }
        Ok(FrobTwist { blocks: blocks.to_vec(), layout, n: off })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Upper bound on how far the twist moves t-exponents, for window
    /// padding.
    pub fn shift_bound(&self) -> i32 {
        self.blocks
            .iter()
            .map(|b| (b.m().abs() / b.h() + 2) as i32)
            .max()
            .unwrap_or(2)
    }

    /// b sigma applied to a window vector.
    pub fn apply_vec(&self, field: &Field, v: &WinVec) -> Result<WinVec> {
        debug_assert_eq!(v.n, self.n);
        let mut out = WinVec::zero(self.n, v.win);
        for (d, i, c) in v.iter_nonzero() {
            let (block, &(off, h)) = self
                .layout
                .iter()
                .enumerate()
                .rev()
                .find(|(_, &(o, _))| i >= o)
                .expect("basis index in some block");
            let m = self.blocks[block].m();
            let j = (i - off) as i64 + d as i64 * h as i64;
            let j2 = j + m;
            let nd = j2.div_euclid(h as i64) as i32;
            let ni = off + j2.rem_euclid(h as i64) as usize;
            let cur = out.get(nd, ni);
            if nd >= v.win.high {
                continue; // absorbed by the t^{high} tail
            }
            if nd < v.win.low {
                return Err(Error::PrecisionInsufficient(
                    "Frobenius twist pushes a coefficient below the window".into(),
                ));
            }
            out.set(nd, ni, field.add(cur, field.frob(c)))?;
        }
        Ok(out)
    }

    /// b sigma applied to a lattice.
    pub fn apply(&self, field: &Field, lat: &Lattice) -> Result<Lattice> {
        let gens: Vec<WinVec> = lat.cols.iter().map(|c| self.apply_vec(field, c)).collect::<Result<_>>()?;
        Lattice::canonicalize(field, self.n, lat.win, &gens)
    }
}

/// The J-element s^power per block: e_J -> e_{J+power} on the chosen block,
/// identity elsewhere. O_L-linear and sigma-commuting.
pub fn block_shift_vec(v: &WinVec, blocks: &[SlopeBlock], block: usize, power: i64) -> Result<WinVec> {
    let mut off = 0usize;
    for b in blocks.iter().take(block) {
        off += b.h() as usize;
    }
    let h = blocks[block].h() as usize;
    let mut out = WinVec::zero(v.n, v.win);
    for (d, i, c) in v.iter_nonzero() {
        let (nd, ni) = if i >= off && i < off + h {
            let j = (i - off) as i64 + d as i64 * h as i64 + power;
            (j.div_euclid(h as i64) as i32, off + j.rem_euclid(h as i64) as usize)
        } else {
            (d, i)
        };
        if nd >= v.win.high {
            continue;
        }
        if nd < v.win.low {
            return Err(Error::PrecisionInsufficient("shift pushes a coefficient below the window".into()));
        }
        let cur = out.get(nd, ni);
        out.set(nd, ni, if cur == 0 { c } else { unreachable!("shift is a bijection on coordinates") })?;
        let _ = cur;
    }
    Ok(out)
}

/// Apply s_1^{p_1} ... s_r^{p_r} to a lattice (one power per block).
pub fn shift_lattice(field: &Field, lat: &Lattice, blocks: &[SlopeBlock], powers: &[i64]) -> Result<Lattice> {
    assert_eq!(blocks.len(), powers.len());
    let mut gens = lat.cols.clone();
    for (bi, &p) in powers.iter().enumerate() {
        if p == 0 {
            continue;
        }
        gens = gens.iter().map(|v| block_shift_vec(v, blocks, bi, p)).collect::<Result<_>>()?;
    }
    Lattice::canonicalize(field, lat.n, lat.win, &gens)
}

/// GL_n dominance on integer vectors: b - a has non-negative partial sums
/// and total zero.
pub fn dominance_leq_gl(a: &[i64], b: &[i64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0i64;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += y - x;
        if acc < 0 {
            return false;
        }
    }
    acc == 0
}

/// Relative position inv(L1, L2): the dominant vector of elementary
/// divisors of L2 with respect to L1, computed by rank counting over the
/// window module.
pub fn relative_position(field: &Field, l1: &Lattice, l2: &Lattice) -> Result<Coweight> {
    if l1.n != l2.n || l1.win != l2.win {
        return Err(Error::InvalidInput("lattices live in different windows".into()));
    }
    let n = l1.n;
    // the elementary divisors are pinned to [lo, hi] by the pivot sandwiches
    // t^{max a} O^n <= L <= t^{min a} O^n of both lattices
    let lo = l2.pivots.iter().min().unwrap() - l1.pivots.iter().max().unwrap();
    let hi = l2.pivots.iter().max().unwrap() - l1.pivots.iter().min().unwrap();
    // g(j) = dim((t^j L2 + L1) / L1); N(c) = #{i : d_i <= c} = g(-c-1) - g(-c)
    let mut cache: BTreeMap<i32, i64> = BTreeMap::new();
    let mut gval = |j: i32| -> Result<i64> {
        if let Some(&v) = cache.get(&j) {
            return Ok(v);
        }
        let mut ech = l1.span(field)?;
        let base = ech.rank();
        for col in &l2.cols {
            let shifted = col.shifted(j)?;
            ech.insert_span(&shifted)?;
        }
        let v = (ech.rank() - base) as i64;
        cache.insert(j, v);
        Ok(v)
    };
    let mut divisors: Vec<i64> = Vec::new();
    let mut prev = 0usize; // N(c-1)
    for c in lo..=hi {
        if prev == n {
            break;
        }
        let count = if c == hi { n } else { (gval(-c - 1)? - gval(-c)?).max(0) as usize };
        if count < prev || count > n {
            return Err(Error::PrecisionInsufficient("inconsistent rank profile".into()));
        }
        for _ in prev..count {
            divisors.push(c as i64);
        }
        prev = count;
    }
    if divisors.len() != n {
        return Err(Error::PrecisionInsufficient("window too small to resolve all elementary divisors".into()));
    }
    divisors.sort_unstable_by(|x, y| y.cmp(x));
    // sanity: divisor sum matches the kappa difference
    if divisors.iter().sum::<i64>() != l2.kappa() - l1.kappa() {
        return Err(Error::PrecisionInsufficient("divisor sum does not match determinant valuations".into()));
    }
    Ok(Coweight(divisors))
}

/// Membership of a lattice in X_mu(b) (strict) or X_{<=mu}(b) (closed).
///
/// The relative position of (L, b sigma L) is probed only inside the box of
/// divisor values a member could have, which is determined by mu alone:
/// anything outside the box is a sound rejection. This keeps the required
/// window at the documented bound (mu entries + block shift bound).
pub fn member(
    field: &Field,
    lat: &Lattice,
    b: &FrobTwist,
    mu: &Coweight,
    closed: bool,
) -> Result<bool> {
    let n = lat.n;
    if mu.0.len() != n {
        return Err(Error::InvalidInput("mu length does not match the lattice rank".into()));
    }
    if !mu.0.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("mu must be dominant".into()));
    }
    let image = b.apply(field, lat)?;
    let total: i64 = mu.0.iter().sum();
    if image.kappa() - lat.kappa() != total {
        return Ok(false);
    }
    // any divisor multiset below mu in dominance lies in [dlo, dhi]
    let mu_max = mu.0[0];
    let mu_min = *mu.0.last().unwrap();
    let dhi = mu_max;
    let dlo = mu_min.min(total - (n as i64 - 1) * mu_max);
    let mut cache: BTreeMap<i32, i64> = BTreeMap::new();
    let base_span = lat.span(field)?;
    let base_rank = base_span.rank();
    let mut gval = |j: i32| -> Result<i64> {
        if let Some(&v) = cache.get(&j) {
            return Ok(v);
        }
        let mut ech = Echelon { field, n, win: lat.win, rows: base_span.rows.clone() };
        for col in &image.cols {
            let shifted = col.shifted(j)?;
            ech.insert_span(&shifted)?;
        }
        let v = (ech.rank() - base_rank) as i64;
        cache.insert(j, v);
        Ok(v)
    };
    // the pivot sandwiches bound the divisors a priori
    let piv_lo = (*image.pivots.iter().min().unwrap() - *lat.pivots.iter().max().unwrap()) as i64;
    let piv_hi = (*image.pivots.iter().max().unwrap() - *lat.pivots.iter().min().unwrap()) as i64;
    let mut ncount = |c: i64| -> Result<usize> {
        Ok((gval((-c - 1) as i32)? - gval((-c) as i32)?) as usize)
    };
    if piv_lo < dlo && ncount(dlo - 1)? != 0 {
        return Ok(false); // a divisor below every member's range
    }
    let mut divisors: Vec<i64> = Vec::new();
    let mut prev = 0usize;
    for c in dlo.max(piv_lo)..dhi.min(piv_hi + 1) {
        let count = ncount(c)?;
        if count < prev || count > n {
            return Err(Error::PrecisionInsufficient("inconsistent rank profile".into()));
        }
        for _ in prev..count {
            divisors.push(c);
        }
        prev = count;
        if prev == n {
            break;
        }
    }
    // the divisors not yet located exceed the scanned range; the fixed
    // total pins them to dhi, which must also be attainable
    let remaining = n - prev;
    if remaining > 0 {
        let needed = total - divisors.iter().sum::<i64>();
        if dhi > piv_hi || needed != remaining as i64 * dhi {
            return Ok(false); // some divisor exceeds mu's largest entry
        }
        divisors.extend(std::iter::repeat(dhi).take(remaining));
    }
    divisors.sort_unstable_by(|x, y| y.cmp(x));
    Ok(if closed { dominance_leq_gl(&divisors, &mu.0) } else { divisors == mu.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::field::Field;

    fn win(low: i32, high: i32) -> Window {
        Window::new(low, high).unwrap()
    }

    fn gen(field_n: usize, w: Window, entries: &[(i32, usize, K)]) -> WinVec {
        let mut v = WinVec::zero(field_n, w);
        for &(d, i, c) in entries {
            v.set(d, i, c).unwrap();
        }
        v
    }

    #[test]
    fn canonicalize_standard_lattice() {
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 3);
        let lat = Lattice::standard(&f, 3, w).unwrap();
        assert_eq!(lat.pivots, vec![0, 0, 0]);
        assert_eq!(lat.kappa(), 0);
        for (i, c) in lat.cols.iter().enumerate() {
            let nz: Vec<_> = c.iter_nonzero().collect();
            assert_eq!(nz, vec![(0, i, 1)]);
        }
    }

    #[test]
    fn canonicalize_same_lattice_as_standard() {
        // <e0 + e1, e1> = O^2
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 3);
        let g1 = gen(2, w, &[(0, 0, 1), (0, 1, 1)]);
        let g2 = gen(2, w, &[(0, 1, 1)]);
        let lat = Lattice::canonicalize(&f, 2, w, &[g1, g2]).unwrap();
        assert_eq!(lat, Lattice::standard(&f, 2, w).unwrap());
    }

    #[test]
    fn canonical_form_is_generator_invariant() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let f = Field::new(3, 1).unwrap();
        let w = win(-2, 4);
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..60 {
            // random generators with pivots certain to exist
            let n = 3usize;
            let mut gens = Vec::new();
            for i in 0..n {
                let mut v = WinVec::zero(n, w);
                let piv = rng.gen_range(-1..=2);
                v.set(piv, i, rng.gen_range(1..3)).unwrap();
                for j in 0..n {
                    if j != i && rng.gen_bool(0.6) {
                        v.set(rng.gen_range(-1..=2), j, rng.gen_range(0..3)).unwrap();
                    }
                }
                gens.push(v);
            }
            let Ok(lat) = Lattice::canonicalize(&f, n, w, &gens) else { continue };
            // recombine generators by random unimodular-over-O operations
            let mut recombined = gens.clone();
            for _ in 0..6 {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b {
                    continue;
                }
                let s = rng.gen_range(0..3);
                let k = rng.gen_range(0..2);
                let shifted = recombined[b].shifted(k).unwrap();
                let (fa, rest) = (&mut recombined, s);
                let mut tmp = fa[a].clone();
                tmp.axpy(&f, rest, &shifted);
                fa[a] = tmp;
            }
            let lat2 = Lattice::canonicalize(&f, n, w, &recombined).unwrap();
            assert_eq!(lat, lat2);
        }
    }

    #[test]
    fn canonicalize_insufficient_window() {
        let f = Field::new(2, 1).unwrap();
        let w = win(-1, 2);
        // one generator only: column 1 has no pivot
        let g = gen(2, w, &[(0, 0, 1)]);
        assert!(matches!(
            Lattice::canonicalize(&f, 2, w, &[g]),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn kappa_examples() {
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 3);
        let std3 = Lattice::standard(&f, 3, w).unwrap();
        assert_eq!(std3.kappa(), 0);
        // t O^3
        let gens: Vec<WinVec> = (0..3).map(|i| gen(3, w, &[(1, i, 1)])).collect();
        let t_std = Lattice::canonicalize(&f, 3, w, &gens).unwrap();
        assert_eq!(t_std.kappa(), 3);
        // <e0, t e1> in GL_2
        let lat = Lattice::canonicalize(
            &f,
            2,
            w,
            &[gen(2, w, &[(0, 0, 1)]), gen(2, w, &[(1, 1, 1)])],
        )
        .unwrap();
        assert_eq!(lat.kappa(), 1);
    }

    #[test]
    fn relative_position_examples() {
        let f = Field::new(2, 1).unwrap();
        let w = win(-3, 4);
        let std2 = Lattice::standard(&f, 2, w).unwrap();
        assert_eq!(relative_position(&f, &std2, &std2).unwrap(), Coweight(vec![0, 0]));
        let gens: Vec<WinVec> = (0..2).map(|i| gen(2, w, &[(1, i, 1)])).collect();
        let t_std = Lattice::canonicalize(&f, 2, w, &gens).unwrap();
        assert_eq!(relative_position(&f, &std2, &t_std).unwrap(), Coweight(vec![1, 1]));
        // <t^{-1} e0, t e1>: relative position (1, -1)
        let skew = Lattice::canonicalize(
            &f,
            2,
            w,
            &[gen(2, w, &[(-1, 0, 1)]), gen(2, w, &[(1, 1, 1)])],
        )
        .unwrap();
        assert_eq!(relative_position(&f, &std2, &skew).unwrap(), Coweight(vec![1, -1]));
    }

    #[test]
    fn relative_position_translation_invariance() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let f = Field::new(2, 2).unwrap();
        let w = win(-4, 5);
        let mut rng = StdRng::seed_from_u64(29);
        let n = 2usize;
        for _ in 0..40 {
            let rand_lat = |rng: &mut StdRng| -> Lattice {
                loop {
                    let gens: Vec<WinVec> = (0..n)
                        .map(|i| {
                            let mut v = WinVec::zero(n, w);
                            v.set(rng.gen_range(-1..=1), i, rng.gen_range(1..4)).unwrap();
                            let j = rng.gen_range(0..n);
                            v.set(rng.gen_range(-1..=1), j, rng.gen_range(0..4)).unwrap();
                            v
                        })
                        .collect();
                    if let Ok(l) = Lattice::canonicalize(&f, n, w, &gens) {
                        return l;
                    }
                }
            };
            let l1 = rand_lat(&mut rng);
            let l2 = rand_lat(&mut rng);
            let Ok(pos) = relative_position(&f, &l1, &l2) else { continue };
            // g = unit lower-triangular times a small diagonal t-power
            let apply_g = |lat: &Lattice| -> Result<Lattice> {
                let c = rng.clone().gen_range(0..4);
                let gens: Vec<WinVec> = lat
                    .cols
                    .iter()
                    .map(|v| {
                        let mut outv = v.clone();
                        // row1 += c * t * row0
                        for (d, i, val) in v.iter_nonzero().collect::<Vec<_>>() {
                            if i == 0 && d + 1 < w.high {
                                let cur = outv.get(d + 1, 1);
                                outv.set(d + 1, 1, f.add(cur, f.mul(c, val))).unwrap();
                            }
                        }
                        Ok(outv)
                    })
                    .collect::<Result<_>>()?;
                Lattice::canonicalize(&f, n, w, &gens)
            };
            let (Ok(g1), Ok(g2)) = (apply_g(&l1), apply_g(&l2)) else { continue };
            if let Ok(pos2) = relative_position(&f, &g1, &g2) {
                assert_eq!(pos, pos2);
            }
        }
    }

    #[test]
    fn frob_twist_on_standard_lattice() {
        // b = t^{(1,1)} central in GL_2: b sigma(O^2) = t O^2
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 4);
        let b = FrobTwist::new(&[
            SlopeBlock::new(1, 1).unwrap(),
            SlopeBlock::new(1, 1).unwrap(),
        ])
        .unwrap();
        let std2 = Lattice::standard(&f, 2, w).unwrap();
        let img = b.apply(&f, &std2).unwrap();
        assert_eq!(img.pivots, vec![1, 1]);
        assert!(member(&f, &std2, &b, &Coweight(vec![1, 1]), false).unwrap());
    }

    #[test]
    fn member_gl2_block_example() {
        // block (1,2): L = <e0, t e1> = <e0, e3>; b sigma(L) = <e1, t e2> =
        // <e1, t^2 e0>, so with f1 = e0, f2 = t e1 the image is
        // O t^2 f1 + O t^{-1} f2: relative position (2, -1)
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 4);
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let lat = Lattice::canonicalize(
            &f,
            2,
            w,
            &[gen(2, w, &[(0, 0, 1)]), gen(2, w, &[(1, 1, 1)])],
        )
        .unwrap();
        let img = b.apply(&f, &lat).unwrap();
        assert_eq!(img.pivots, vec![2, 0]);
        let pos = relative_position(&f, &lat, &img).unwrap();
        assert_eq!(pos, Coweight(vec![2, -1]));
        assert!(member(&f, &lat, &b, &Coweight(vec![2, -1]), false).unwrap());
        assert!(member(&f, &lat, &b, &Coweight(vec![2, -1]), true).unwrap());
        // not in the closed stratum of mu_min = (1, 0)
        assert!(!member(&f, &lat, &b, &Coweight(vec![1, 0]), false).unwrap());
        assert!(!member(&f, &lat, &b, &Coweight(vec![1, 0]), true).unwrap());
        // the identity coset is the strict (1, 0) member
        let std2 = Lattice::standard(&f, 2, w).unwrap();
        assert!(member(&f, &std2, &b, &Coweight(vec![1, 0]), false).unwrap());
    }

    #[test]
    fn shift_commutes_with_twist_and_preserves_membership() {
        let f = Field::new(2, 2).unwrap();
        let w = win(-3, 5);
        let blocks = [SlopeBlock::new(1, 2).unwrap()];
        let b = FrobTwist::new(&blocks).unwrap();
        // s and b sigma commute on window vectors
        for i in 0..2usize {
            for d in -1..=1i32 {
                let mut v = WinVec::zero(2, w);
                v.set(d, i, 2).unwrap();
                let sv = block_shift_vec(&v, &blocks, 0, 1).unwrap();
                let bs = b.apply_vec(&f, &sv).unwrap();
                let bv = b.apply_vec(&f, &v).unwrap();
                let sb = block_shift_vec(&bv, &blocks, 0, 1).unwrap();
                assert_eq!(bs, sb);
            }
        }
        let lat = Lattice::canonicalize(
            &f,
            2,
            w,
            &[gen(2, w, &[(0, 0, 1)]), gen(2, w, &[(1, 1, 1)])],
        )
        .unwrap();
        let mu = Coweight(vec![2, -1]);
        assert!(member(&f, &lat, &b, &mu, true).unwrap());
        let shifted = shift_lattice(&f, &lat, &blocks, &[1]).unwrap();
        assert_eq!(shifted.kappa(), lat.kappa() + 1);
        assert!(member(&f, &shifted, &b, &mu, true).unwrap());
    }

    #[test]
    fn window_stability_of_core_quantities() {
        let f = Field::new(2, 1).unwrap();
        let w = win(-2, 3);
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let lat = Lattice::canonicalize(
            &f,
            2,
            w,
            &[gen(2, w, &[(0, 0, 1), (0, 1, 1)]), gen(2, w, &[(1, 1, 1)])],
        )
        .unwrap();
        let big = lat.rewindow(&f, w.grow(1)).unwrap();
        assert_eq!(lat, big);
        assert_eq!(lat.kappa(), big.kappa());
        let mu = Coweight(vec![1, 0]);
        assert_eq!(
            member(&f, &lat, &b, &mu, true).unwrap(),
            member(&f, &big, &b, &mu, true).unwrap()
        );
    }
}
