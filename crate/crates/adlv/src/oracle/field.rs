//! Table-backed finite fields F_{q^s} for small prime powers q.
//!
//! The base field F_q is F_p[x]/(e) for the lexicographically least monic
//! irreducible e of degree k (q = p^k), and F_{q^s} is F_q[y]/(f) likewise.
//! Elements are dense indices: the digits of an index in base q are the
//! F_q-coordinates, so the base-field elements are exactly the indices
//! below q. sigma is the q-power Frobenius.

use crate::{Error, Result};

/// Field element: an index into the tables of a [`Field`].
pub type K = u16;

const MAX_SIZE: usize = 2048;

#[derive(Debug)]
pub struct Field {
    p: u32,
    q: u32,
    s: u32,
    size: usize,
    add: Vec<K>,
    mul: Vec<K>,
    neg: Vec<K>,
    inv: Vec<K>,
    frob: Vec<K>,
    /// modulus of F_{q^s} over F_q: monic, coefficients as base-field indices
    ext_modulus: Vec<u32>,
}

/// polynomial helpers over a generic multiply/add, coefficients as indices
struct PolyCtx<'a> {
    add: &'a dyn Fn(u32, u32) -> u32,
    neg: &'a dyn Fn(u32) -> u32,
    mul: &'a dyn Fn(u32, u32) -> u32,
}

impl PolyCtx<'_> {
    fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (self.add)(out[i + j], (self.mul)(x, y));
            }
        }
        truncate_zeros(&mut out);
        out
    }

    /// remainder of a modulo the monic polynomial m
    fn poly_rem(&self, a: &[u32], m: &[u32], inv_lead: impl Fn(u32) -> u32) -> Vec<u32> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = inv_lead(m[dm]);
        while r.len() > dm {
            let d = r.len() - 1;
            let c = (self.mul)(r[d], lead_inv);
            if c != 0 {
                for (k, &mk) in m.iter().enumerate() {
                    let idx = d - dm + k;
                    r[idx] = (self.add)(r[idx], (self.neg)((self.mul)(c, mk)));
                }
            }
            r.pop();
            truncate_zeros(&mut r);
            if r.len() <= dm {
                break;
            }
        }
        r
    }
}

fn truncate_zeros(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Least monic irreducible of degree d, coefficients encoded as one base-n
/// integer (constant digit least significant). Scans encodings upward and
/// trial-divides by every smaller monic polynomial of degree >= 1.
fn least_irreducible(n: u32, d: u32, ctx: &PolyCtx, inv: impl Fn(u32) -> u32 + Copy) -> Vec<u32> {
    let nn = n as u64;
    let count = nn.pow(d);
    'cand: for enc in 0..count {
        let mut poly: Vec<u32> = Vec::with_capacity(d as usize + 1);
        let mut e = enc;
        for _ in 0..d {
            poly.push((e % nn) as u32);
            e /= nn;
        }
        poly.push(1); // monic
        if poly[0] == 0 {
            continue; // divisible by y
        }
        // trial division by all monic polynomials of degree 1..=d/2
        for dd in 1..=d / 2 {
            for denc in 0..nn.pow(dd) {
                let mut div: Vec<u32> = Vec::with_capacity(dd as usize + 1);
                let mut e = denc;
                for _ in 0..dd {
                    div.push((e % nn) as u32);
                    e /= nn;
                }
                div.push(1);
                if ctx.poly_rem(&poly, &div, inv).is_empty() {
                    continue 'cand;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

impl Field {
    /// The field with q^s elements; q must be a prime power at most 9.
    pub fn new(q: u32, s: u32) -> Result<Field> {
        let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::InvalidInput("q must be >= 2".into()))?;
        let mut k = 0u32;
        let mut m = q;
        while m > 1 {
            if m % p != 0 {
                return Err(Error::InvalidInput(format!("{q} is not a prime power")));
            }
            m /= p;
            k += 1;
        }
        if q > 9 {
            return Err(Error::InvalidInput(format!("base field order {q} exceeds 9")));
        }
        if s < 1 {
            return Err(Error::InvalidInput("extension degree must be positive".into()));
        }
        let size = (q as u64).pow(s);
        if size as usize > MAX_SIZE {
            return Err(Error::InvalidInput(format!("field order {size} exceeds the table limit {MAX_SIZE}")));
        }
        let size = size as usize;

        // base field F_q = F_p[x]/(e)
        let padd = |a: u32, b: u32| (a + b) % p;
        let pneg = |a: u32| (p - a % p) % p;
        let pmul = |a: u32, b: u32| (a * b) % p;
        let pctx = PolyCtx { add: &padd, neg: &pneg, mul: &pmul };
        let pinv = |a: u32| (1..p).find(|&b| (a * b) % p == 1).expect("prime inverse");
        let base_modulus = if k == 1 { vec![0, 1] } else { least_irreducible(p, k, &pctx, pinv) };

        let enc = |poly: &[u32]| -> u32 { poly.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let dec = |idx: u32| -> Vec<u32> {
            let mut v = Vec::new();
            let mut i = idx;
            while i > 0 {
                v.push(i % p);
                i /= p;
            }
            v
        };
        let badd = |a: u32, b: u32| -> u32 {
            let (pa, pb) = (dec(a), dec(b));
            let mut out = vec![0u32; pa.len().max(pb.len())];
            for (i, slot) in out.iter_mut().enumerate() {
                let x = pa.get(i).copied().unwrap_or(0);
                let y = pb.get(i).copied().unwrap_or(0);
                *slot = padd(x, y);
            }
            truncate_zeros(&mut out);
            enc(&out)
        };
        let bneg = |a: u32| -> u32 {
            let mut pa = dec(a);
            for c in pa.iter_mut() {
                *c = pneg(*c);
            }
            enc(&pa)
        };
        let bmul = |a: u32, b: u32| -> u32 {
            let prod = pctx.poly_mul(&dec(a), &dec(b));
            enc(&pctx.poly_rem(&prod, &base_modulus, pinv))
        };
        let binv = |a: u32| (1..q).find(|&b| bmul(a, b) == 1).expect("base field inverse");

        // extension F_{q^s} = F_q[y]/(f)
        let bctx = PolyCtx { add: &badd, neg: &bneg, mul: &bmul };
        let ext_modulus = if s == 1 { vec![0, 1] } else { least_irreducible(q, s, &bctx, binv) };

        let eenc = |poly: &[u32]| -> u32 { poly.iter().rev().fold(0, |acc, &c| acc * q + c) };
        let edec = |idx: u32| -> Vec<u32> {
            let mut v = Vec::new();
            let mut i = idx;
            while i > 0 {
                v.push(i % q);
                i /= q;
            }
            v
        };
        let eadd = |a: u32, b: u32| -> u32 {
            let (pa, pb) = (edec(a), edec(b));
            let mut out = vec![0u32; pa.len().max(pb.len())];
            for (i, slot) in out.iter_mut().enumerate() {
                let x = pa.get(i).copied().unwrap_or(0);
                let y = pb.get(i).copied().unwrap_or(0);
                *slot = badd(x, y);
            }
            truncate_zeros(&mut out);
            eenc(&out)
        };
        let emul = |a: u32, b: u32| -> u32 {
            let prod = bctx.poly_mul(&edec(a), &edec(b));
            eenc(&bctx.poly_rem(&prod, &ext_modulus, binv))
        };

        let mut add = vec![0 as K; size * size];
        let mut mul = vec![0 as K; size * size];
        for a in 0..size as u32 {
            for b in 0..size as u32 {
                add[a as usize * size + b as usize] = eadd(a, b) as K;
                mul[a as usize * size + b as usize] = emul(a, b) as K;
            }
        }
        let mut neg = vec![0 as K; size];
        let mut inv = vec![0 as K; size];
        for a in 0..size {
            neg[a] = (0..size).find(|&b| add[a * size + b] == 0).expect("additive inverse") as K;
            if a != 0 {
                inv[a] = (1..size).find(|&b| mul[a * size + b] == 1).expect("multiplicative inverse") as K;
            }
        }
        let mut field = Field { p, q, s, size, add, mul, neg, inv, frob: Vec::new(), ext_modulus };
        field.frob = (0..size).map(|a| field.pow(a as K, q as u64)).collect();
        debug_assert!((0..size).all(|a| {
            let mut x = a as K;
            for _ in 0..s {
                x = field.frob[x as usize];
            }
            x == a as K
        }));
        Ok(field)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// modulus of the extension over F_q (y for the trivial extension)
    pub fn ext_modulus(&self) -> &[u32] {
        &self.ext_modulus
    }

    pub fn zero(&self) -> K {
        0
    }

    pub fn one(&self) -> K {
        1
    }

    pub fn add(&self, a: K, b: K) -> K {
        self.add[a as usize * self.size + b as usize]
    }

    pub fn sub(&self, a: K, b: K) -> K {
        self.add(a, self.neg[b as usize])
    }

    pub fn neg(&self, a: K) -> K {
        self.neg[a as usize]
    }

    pub fn mul(&self, a: K, b: K) -> K {
        self.mul[a as usize * self.size + b as usize]
    }

    pub fn inv(&self, a: K) -> K {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn pow(&self, a: K, mut e: u64) -> K {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// sigma: the q-power Frobenius.
    pub fn frob(&self, a: K) -> K {
        self.frob[a as usize]
    }

    /// Whether the element lies in the base field F_q (the fixed field of
    /// sigma; with the digit encoding these are the indices below q).
    pub fn in_base(&self, a: K) -> bool {
        (a as u32) < self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = K> {
        0..self.size as K
    }

    pub fn base_elements(&self) -> impl Iterator<Item = K> {
        0..self.q as K
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(f: &Field) {
        let els: Vec<K> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_fields() {
        for q in [2u32, 3, 5, 7] {
            let f = Field::new(q, 1).unwrap();
            assert_eq!(f.size(), q as usize);
            check_field_axioms(&f);
            // sigma is the identity on F_q
            assert!(f.elements().all(|a| f.frob(a) == a));
        }
    }

    #[test]
    fn prime_power_base_fields() {
        for (q, p) in [(4u32, 2u32), (8, 2), (9, 3)] {
            let f = Field::new(q, 1).unwrap();
            assert_eq!(f.characteristic(), p);
            assert_eq!(f.size(), q as usize);
            check_field_axioms(&f);
        }
    }

    #[test]
    fn extensions_and_frobenius() {
        for (q, s) in [(2u32, 2u32), (2, 3), (3, 2), (4, 2), (2, 4)] {
            let f = Field::new(q, s).unwrap();
            assert_eq!(f.size(), (q as usize).pow(s));
            check_field_axioms(&f);
            // sigma fixes exactly F_q, and sigma^s = id
            for a in f.elements() {
                let fixed = f.frob(a) == a;
                assert_eq!(fixed, f.in_base(a), "element {a}");
                let mut x = a;
                for _ in 0..s {
                    x = f.frob(x);
                }
                assert_eq!(x, a);
            }
            // sigma is a field automorphism
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
                    assert_eq!(f.frob(f.mul(a, b)), f.mul(f.frob(a), f.frob(b)));
                }
            }
        }
    }

    #[test]
    fn base_field_embeds_compatibly() {
        // F_q inside F_{q^s}: adding/multiplying base indices agrees with F_q
        let base = Field::new(4, 1).unwrap();
        let ext = Field::new(4, 3).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(base.add(a, b), ext.add(a, b));
                assert_eq!(base.mul(a, b), ext.mul(a, b));
            }
        }
    }

    #[test]
    fn least_irreducible_is_the_standard_one() {
        // F_2: x^2+x+1, x^3+x+1
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.ext_modulus(), &[1, 1, 1]);
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.ext_modulus(), &[1, 1, 0, 1]);
        let f = Field::new(3, 2).unwrap();
        // x^2+1 is irreducible over F_3 and least
        assert_eq!(f.ext_modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(6, 1).is_err());
        assert!(Field::new(11, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(9, 9).is_err());
    }
}
