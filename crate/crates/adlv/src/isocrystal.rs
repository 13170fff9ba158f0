//! Sigma-conjugacy class data.
//!
//! A class is specified by its invariants: the dominant Newton point nu and
//! the Kottwitz point kappa in pi_1(G). These determine the class, so no
//! group elements are stored; for GL-products the slope-block normal form
//! b(e_j) = e_{j+m} (with e_{j+h} = t e_j per block) gives an explicit
//! representative, which is what the lattice oracle acts by.

use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::{solve_integral, RatRref};
use crate::rootdata::{Coweight, RationalCoweight, RootDatum};
use crate::{rat, Error, Rat, Result};

/// One isoclinic block: slope m/h with gcd(m, h) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlopeBlock {
    m: i64,
    h: i64,
}

impl SlopeBlock {
    pub fn new(m: i64, h: i64) -> Result<SlopeBlock> {
        if h < 1 {
            return Err(Error::InvalidBlock(format!("block size {h} must be positive")));
        }
        if m.gcd(&h) != 1 {
            return Err(Error::InvalidBlock(format!("gcd({m}, {h}) != 1")));
        }
        Ok(SlopeBlock { m, h })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn slope(&self) -> Rat {
        Rat::new(self.m, self.h)
    }

    /// The translation part mu_M of the block normal form t^{mu_M} w:
    /// dominant, entries floor(m/h) and ceil(m/h), coordinate sum m.
    pub fn translation(&self) -> Vec<i64> {
        let h = self.h;
        let m = self.m;
        (0..h)
            .map(|i| {
                let j = (i - m).rem_euclid(h);
                (j + m - i) / h
            })
            .collect()
    }

    /// The cyclic Weyl part: position j maps to (j + m) mod h.
    pub fn weyl_cycle(&self) -> Vec<usize> {
        (0..self.h).map(|j| ((j + self.m).rem_euclid(self.h)) as usize).collect()
    }
}

/// Newton point of a block decomposition: slope m/h repeated h times per
/// block, arranged dominant (descending).
pub fn newton_point(blocks: &[SlopeBlock]) -> Result<RationalCoweight> {
    if blocks.is_empty() {
        return Err(Error::InvalidBlock("empty block list".into()));
    }
    let mut sorted = blocks.to_vec();
    sorted.sort_by(|a, b| b.slope().cmp(&a.slope()));
    let mut coords = Vec::new();
    for b in &sorted {
        coords.extend(std::iter::repeat(b.slope()).take(b.h as usize));
    }
    Ok(RationalCoweight(coords))
}

/// The normal-form representative of a block decomposition, as translation
/// and Weyl data per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormElement {
    pub blocks: Vec<SlopeBlock>,
    /// concatenated per-block translations mu_{M_sb}
    pub translation: Coweight,
    /// per-block cyclic permutations
    pub weyl_part: Vec<Vec<usize>>,
}

impl NormalFormElement {
    /// t-valuation of the determinant: the sum of the block shifts.
    pub fn det_valuation(&self) -> i64 {
        self.blocks.iter().map(|b| b.m).sum()
    }
}

pub fn normal_form(blocks: &[SlopeBlock]) -> Result<NormalFormElement> {
    if blocks.is_empty() {
        return Err(Error::InvalidBlock("empty block list".into()));
    }
    let mut translation = Vec::new();
    let mut weyl = Vec::new();
    for b in blocks {
        translation.extend(b.translation());
        weyl.push(b.weyl_cycle());
    }
    Ok(NormalFormElement { blocks: blocks.to_vec(), translation: Coweight(translation), weyl_part: weyl })
}

/// A sigma-conjugacy class, given by its Newton and Kottwitz invariants.
#[derive(Debug, Clone)]
pub struct SigmaClass {
    pub datum: RootDatum,
    /// dominant Newton point
    pub newton: RationalCoweight,
    /// class coordinates in the pi_1(G) presentation of the datum
    pub kappa: Vec<i64>,
    /// slope blocks in dominant order, when the datum is a GL-product and
    /// nu is the concatenation of the block slope vectors
    pub gl_blocks: Option<Vec<SlopeBlock>>,
}

impl SigmaClass {
    /// Validating constructor from explicit invariants.
    pub fn new(datum: RootDatum, newton: RationalCoweight, kappa: Vec<i64>) -> Result<SigmaClass> {
        if newton.0.len() != datum.dim {
            return Err(Error::InvalidInput("Newton point length mismatch".into()));
        }
        if !datum.is_dominant(&newton.0) {
            return Err(Error::InconsistentClass("Newton point must be dominant".into()));
        }
        let pi1 = datum.fundamental_group();
        if kappa.len() != pi1.invariant_factors().len() {
            return Err(Error::InvalidInput("kappa coordinate length mismatch".into()));
        }
        let kappa = pi1.normalize(&kappa);
        // kappa and nu must have the same image in pi_1(G) tensor Q
        let nu_gen = datum.cochar_coords_rat(&newton.0)?;
        let nu_free = pi1.project_gen_coords_rat(&nu_gen);
        let kappa_free: Vec<Rat> = kappa
            .iter()
            .zip(pi1.invariant_factors().iter())
            .filter(|(_, &d)| d == 0)
            .map(|(&c, _)| rat(c))
            .collect();
        if nu_free != kappa_free {
            return Err(Error::InconsistentClass(
                "kappa and the Newton point differ in pi_1(G) tensor Q".into(),
            ));
        }
        let mut cls = SigmaClass { datum, newton, kappa, gl_blocks: None };
        if cls.datum.gl_sizes().is_some() {
            if let Ok(blocks) = cls.compute_msb_blocks() {
                cls.gl_blocks = Some(blocks);
            }
        }
        Ok(cls)
    }

    /// The class of the block normal form on GL_n, n = sum of block sizes.
    pub fn from_gl_blocks(blocks: &[SlopeBlock]) -> Result<SigmaClass> {
        let nu = newton_point(blocks)?;
        let n: i64 = blocks.iter().map(|b| b.h).sum();
        let datum = RootDatum::gl(n as usize);
        let kappa = vec![blocks.iter().map(|b| b.m).sum::<i64>()];
        SigmaClass::new(datum, nu, kappa)
    }

    /// Simple roots of the centralizer Levi M_b of the Newton point.
    pub fn levi_mb(&self) -> Vec<usize> {
        (0..self.datum.num_simple_roots())
            .filter(|&i| {
                self.datum
                    .pairing(&self.datum.simple_roots()[i], &self.newton.0)
                    .expect("lengths checked at construction")
                    .is_zero()
            })
            .collect()
    }

    /// Whether the class is basic (Newton point central, M_b = G).
    pub fn is_basic(&self) -> bool {
        self.levi_mb().len() == self.datum.num_simple_roots()
    }

    /// Kottwitz point in the Levi given by `subset`: the unique class in
    /// pi_1(M) over kappa whose rational image matches the Newton point.
    /// Requires M to contain M_b, so that the coroot-lattice quotient is
    /// torsion free and the class is unique.
    pub fn kappa_in_levi(&self, subset: &[usize]) -> Result<Vec<i64>> {
        let mb = self.levi_mb();
        if !mb.iter().all(|i| subset.contains(i)) {
            return Err(Error::InvalidLevi(format!(
                "levi {subset:?} does not contain the Newton centralizer {mb:?}"
            )));
        }
        let pi1_g = self.datum.fundamental_group();
        let pi1_m = self.datum.fundamental_group_of_levi(subset)?;
        let g = self.datum.num_cochar_gens();
        let z = pi1_g.lift_to_gen_coords(&self.kappa);
        let nu_gen = self.datum.cochar_coords_rat(&self.newton.0)?;

        // rational span of the M-relations (lattice relations + M-coroots)
        let mut m_span: Vec<Vec<Rat>> = self
            .datum
            .cochar_rels()
            .iter()
            .map(|r| r.iter().map(|&c| rat(c)).collect())
            .collect();
        for c in self.datum.coroots_in_gen_coords(subset)? {
            m_span.push(c.iter().map(|&x| rat(x)).collect());
        }
        let q = RatRref::new(g, &m_span);

        let all: Vec<usize> = (0..self.datum.num_simple_roots()).collect();
        let g_coroots = self.datum.coroots_in_gen_coords(&all)?;
        let cols: Vec<Vec<Rat>> = g_coroots
            .iter()
            .map(|c| q.class_of(&c.iter().map(|&x| rat(x)).collect::<Vec<_>>()))
            .collect();
        let diff: Vec<Rat> = nu_gen.iter().zip(z.iter()).map(|(a, &b)| a.clone() - rat(b)).collect();
        let rhs = q.class_of(&diff);

        // integer solution of cols * w = rhs, after clearing denominators
        let nrows = rhs.len();
        let mut denom = 1i64;
        for v in cols.iter().chain(std::iter::once(&rhs)) {
            for c in v {
                denom = denom.lcm(c.denom());
            }
        }
        let a: Vec<Vec<i64>> = (0..nrows)
            .map(|r| cols.iter().map(|col| (col[r].clone() * rat(denom)).to_integer()).collect())
            .collect();
        let b: Vec<i64> = rhs.iter().map(|c| (c.clone() * rat(denom)).to_integer()).collect();
        let w = solve_integral(&a, &b).ok_or_else(|| {
            Error::InconsistentClass("no integral Kottwitz point over kappa matches the Newton point".into())
        })?;
        let mut y = z;
        for (wj, col) in w.iter().zip(g_coroots.iter()) {
            for (yi, &ci) in y.iter_mut().zip(col.iter()) {
                *yi += wj * ci;
            }
        }
        Ok(pi1_m.project_gen_coords(&y))
    }

    fn compute_msb_blocks(&self) -> Result<Vec<SlopeBlock>> {
        let sizes = self
            .datum
            .gl_sizes()
            .ok_or_else(|| Error::UnsupportedDatum("superbasic blocks require a GL-product datum".into()))?;
        let mut blocks = Vec::new();
        let mut off = 0usize;
        for &h in sizes {
            let slice = &self.newton.0[off..off + h];
            let mut i = 0usize;
            while i < h {
                let s = slice[i].clone();
                let mut j = i;
                while j < h && slice[j] == s {
                    j += 1;
                }
                let mult = (j - i) as i64;
                let (m, hb) = (s.numer().to_owned(), s.denom().to_owned());
                if mult % hb != 0 {
                    return Err(Error::InconsistentClass(format!(
                        "slope {s} has multiplicity {mult}, not a multiple of its denominator"
                    )));
                }
                for _ in 0..mult / hb {
                    blocks.push(SlopeBlock::new(m, hb)?);
                }
                i = j;
            }
            off += h;
        }
        Ok(blocks)
    }

    /// The slope blocks of the superbasic Levi M_sb: per distinct slope m/h
    /// of multiplicity k*h, k copies of block (m, h). Only defined for
    /// GL-product data.
    pub fn msb_blocks(&self) -> Result<Vec<SlopeBlock>> {
        self.compute_msb_blocks()
    }

    /// The minimal dominant mu with nonempty X_mu(b): the dominant
    /// representative of the concatenated block translations.
    pub fn mu_min(&self) -> Result<Coweight> {
        let blocks = self.msb_blocks()?;
        let mut translation = Vec::new();
        for b in &blocks {
            translation.extend(b.translation());
        }
        self.datum.dominant_rep(&Coweight(translation))
    }

    /// Restrict the class to a standard Levi containing M_b. The Newton
    /// point is unchanged; kappa becomes the Levi Kottwitz point.
    pub fn restrict_to_levi(&self, subset: &[usize]) -> Result<SigmaClass> {
        let kappa = self.kappa_in_levi(subset)?;
        let datum = self.datum.levi_subdatum(subset)?;
        SigmaClass::new(datum, self.newton.clone(), kappa)
    }

    /// kappa(mu) = kappa(b) as elements of pi_1(G)?
    pub fn kappa_matches(&self, mu: &Coweight) -> Result<bool> {
        let k = self.datum.kappa(mu)?;
        Ok(self.datum.fundamental_group().eq_class(&k, &self.kappa))
    }
}
