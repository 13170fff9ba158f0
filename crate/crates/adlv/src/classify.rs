//! Decision procedures for affine Deligne-Lusztig varieties: nonemptiness,
//! Hodge-Newton indecomposability and reduction, connected components of
//! the closed stratum, zero-dimensionality, and the superbasic dimension
//! formula.

use num_traits::Zero;

use crate::isocrystal::{SigmaClass, SlopeBlock};
use crate::rootdata::{Coweight, RationalCoweight, RootDatum};
use crate::{rat, Error, Rat, Result};

/// Structure of the set of connected components of the closed stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pi0Kind {
    /// kappa is a bijection onto pi_1(G): one component per value
    Pi1Torsor { free_rank: usize, torsion: Vec<i64> },
    /// the central case: the variety is the discrete set G(F)/G(O_F)
    Discrete,
    /// the pair was Hodge-Newton reducible; the answer lives on the Levi
    Reduced { levi: Vec<usize>, inner: Box<Pi0Kind> },
    /// indecomposable with a mix of central and non-central simple factors
    PerFactor { factors: Vec<Pi0Kind> },
}

/// Everything the classifier can say about a pair (mu, [b]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub nonempty: bool,
    pub indecomposable: Option<bool>,
    /// Hodge-Newton reduction chain (simple-root subsets, innermost last)
    pub hn_trace: Vec<Vec<usize>>,
    pub pi0: Option<Pi0Kind>,
    pub zero_dimensional: Option<bool>,
    pub dimension: Option<i64>,
    pub notes: Vec<String>,
}

/// Kottwitz-Rapoport nonemptiness: kappa match in pi_1(G) and nu below mu
/// in the rational dominance order (equality allowed).
pub fn is_nonempty(mu: &Coweight, cls: &SigmaClass) -> Result<bool> {
    if !cls.datum.is_dominant_coweight(mu) {
        return Err(Error::InvalidInput("mu must be dominant".into()));
    }
    if !cls.kappa_matches(mu)? {
        return Ok(false);
    }
    cls.datum.dominance_leq(&cls.newton, &mu.to_rational())
}

/// Proper standard Levis containing M_b, as simple-root subsets.
fn proper_levis_over_mb(cls: &SigmaClass) -> Vec<Vec<usize>> {
    let mb = cls.levi_mb();
    let all: Vec<usize> = (0..cls.datum.num_simple_roots()).collect();
    let complement: Vec<usize> = all.iter().copied().filter(|i| !mb.contains(i)).collect();
    let mut out = Vec::new();
    // all subsets of the complement except the full one
    let k = complement.len();
    for mask in 0..(1u32 << k).saturating_sub(1) {
        let mut s = mb.clone();
        for (bit, &root) in complement.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                s.push(root);
            }
        }
        s.sort_unstable();
        out.push(s);
    }
    // smallest first, then lexicographic, for deterministic reduction
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Whether no proper standard Levi M between M_b and G has
/// kappa_M(b) = mu in pi_1(M).
pub fn is_hn_indecomposable(mu: &Coweight, cls: &SigmaClass) -> Result<bool> {
    if !is_nonempty(mu, cls)? {
        return Err(Error::InvalidInput("indecomposability requires a nonempty pair".into()));
    }
    for s in proper_levis_over_mb(cls) {
        let kb = cls.kappa_in_levi(&s)?;
        let km = cls.datum.kappa_in_levi_of_coweight(mu, &s)?;
        if kb == km {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the Hodge-Newton reduction loop.
#[derive(Debug, Clone)]
pub struct HnReduction {
    /// subsets chosen at each step (in the indexing current at that step)
    pub chain: Vec<Vec<usize>>,
    pub core: SigmaClass,
}

/// Replace G by the smallest standard Levi with kappa_M(b) = mu until the
/// pair is indecomposable.
pub fn hn_reduce(mu: &Coweight, cls: &SigmaClass) -> Result<HnReduction> {
    if !is_nonempty(mu, cls)? {
        return Err(Error::InvalidInput("reduction requires a nonempty pair".into()));
    }
    let mut chain = Vec::new();
    let mut current = cls.clone();
    loop {
        let step = proper_levis_over_mb(&current).into_iter().find_map(|s| {
            match (current.kappa_in_levi(&s), current.datum.kappa_in_levi_of_coweight(mu, &s)) {
                (Ok(kb), Ok(km)) if kb == km => Some(s),
                _ => None,
            }
        });
        let Some(s) = step else {
            return Ok(HnReduction { chain, core: current });
        };
        current = current.restrict_to_levi(&s)?;
        chain.push(s);
    }
}

/// Per-factor slices of a datum: (coordinate range, simple-root indices,
/// is-type-A flag). GL-products slice by blocks; declared products by
/// Cartan factors; otherwise the whole datum is one slice.
fn factor_slices(datum: &RootDatum) -> Vec<(std::ops::Range<usize>, Vec<usize>, bool)> {
    if let Some(sizes) = datum.gl_sizes() {
        let mut out = Vec::new();
        let mut coord = 0usize;
        let mut root = 0usize;
        for &h in sizes {
            out.push((coord..coord + h, (root..root + h - 1).collect(), true));
            coord += h;
            root += h - 1;
        }
        return out;
    }
    if !datum.cartan.is_empty() {
        let mut out = Vec::new();
        let mut coord = 0usize;
        let mut root = 0usize;
        for &(t, r) in &datum.cartan {
            let dim = match t {
                crate::rootdata::CartanType::A => r + 1,
                crate::rootdata::CartanType::E6 | crate::rootdata::CartanType::E7 => 8,
                _ => r,
            };
            out.push((coord..coord + dim, (root..root + r).collect(), t == crate::rootdata::CartanType::A));
            coord += dim;
            root += r;
        }
        return out;
    }
    let all: Vec<usize> = (0..datum.num_simple_roots()).collect();
    vec![(0..datum.dim, all, false)]
}

/// Is the slice of mu equal to the slice of nu, with mu central on the
/// factor (all root pairings zero)?
fn factor_is_central(
    datum: &RootDatum,
    mu: &RationalCoweight,
    nu: &RationalCoweight,
    roots: &[usize],
    coords: &std::ops::Range<usize>,
) -> Result<bool> {
    for &i in roots {
        if !datum.pairing(&datum.simple_roots()[i], &mu.0)?.is_zero() {
            return Ok(false);
        }
        if !datum.pairing(&datum.simple_roots()[i], &nu.0)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(mu.0[coords.clone()] == nu.0[coords.clone()])
}

/// Connected-component structure of the closed stratum.
pub fn pi0_closed(mu: &Coweight, cls: &SigmaClass) -> Result<Pi0Kind> {
    if !is_nonempty(mu, cls)? {
        return Err(Error::InvalidInput("pi0 of an empty variety".into()));
    }
    let red = hn_reduce(mu, cls)?;
    if !red.chain.is_empty() {
        let inner = pi0_core(mu, &red.core)?;
        let levi = red.chain.last().cloned().unwrap_or_default();
        return Ok(Pi0Kind::Reduced { levi, inner: Box::new(inner) });
    }
    pi0_core(mu, cls)
}

fn pi0_core(mu: &Coweight, cls: &SigmaClass) -> Result<Pi0Kind> {
    let datum = &cls.datum;
    let mur = mu.to_rational();
    let mut centrals = Vec::new();
    for (coords, roots, _) in factor_slices(datum) {
        centrals.push(factor_is_central(datum, &mur, &cls.newton, &roots, &coords)?);
    }
    if centrals.iter().all(|&c| c) {
        return Ok(Pi0Kind::Discrete);
    }
    let pi1 = datum.fundamental_group();
    let torsor = Pi0Kind::Pi1Torsor { free_rank: pi1.free_rank(), torsion: pi1.torsion() };
    if centrals.iter().all(|&c| !c) {
        return Ok(torsor);
    }
    // mixed: report factor by factor (adjoint simple pieces)
    let mut factors = Vec::new();
    for ((coords, _, is_a), central) in factor_slices(datum).into_iter().zip(centrals) {
        if central {
            factors.push(Pi0Kind::Discrete);
        } else {
            let h = coords.len() as i64;
            let (free_rank, torsion) =
                if is_a && h >= 2 { (0, vec![h]) } else { (0, vec![]) };
            factors.push(Pi0Kind::Pi1Torsor { free_rank, torsion });
        }
    }
    Ok(Pi0Kind::PerFactor { factors })
}

/// Is the slice of mu minuscule modulo the center of the type A factor,
/// with weight m in {1, h-1}? The slice must be (c+1, ..., c+1, c, ..., c).
fn minuscule_weight(mu_slice: &[i64]) -> Option<i64> {
    let h = mu_slice.len();
    if h == 0 {
        return None;
    }
    let lo = *mu_slice.iter().min().unwrap();
    let m = mu_slice.iter().filter(|&&x| x == lo + 1).count() as i64;
    let ok = mu_slice.iter().all(|&x| x == lo || x == lo + 1);
    if ok {
        Some(m)
    } else {
        None
    }
}

/// The zero-dimensionality criterion for indecomposable pairs: every simple
/// factor is central, or is type A with basic b and minuscule mu of weight
/// 1 or h-1 modulo the center.
pub fn is_zero_dimensional(mu: &Coweight, cls: &SigmaClass) -> Result<bool> {
    if !is_hn_indecomposable(mu, cls)? {
        return Err(Error::InvalidInput(
            "the zero-dimensionality criterion requires an indecomposable pair".into(),
        ));
    }
    let datum = &cls.datum;
    let mur = mu.to_rational();
    for (coords, roots, is_a) in factor_slices(datum) {
        if factor_is_central(datum, &mur, &cls.newton, &roots, &coords)? {
            continue;
        }
        if !is_a {
            return Ok(false);
        }
        let h = coords.len() as i64;
        // basic on the factor: the Newton slice is central (constant)
        let nu_slice = &cls.newton.0[coords.clone()];
        if !nu_slice.windows(2).all(|w| w[0] == w[1]) {
            return Ok(false);
        }
        let mu_slice = &mu.0[coords.clone()];
        match minuscule_weight(mu_slice) {
            Some(m) if m == 1 || m == h - 1 => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Dimension of the superbasic stratum: <rho, mu - nu> - (h-1)/2 for a
/// single block (m, h).
pub fn dim_superbasic(mu: &Coweight, block: SlopeBlock) -> Result<i64> {
    let h = block.h();
    if mu.0.len() != h as usize {
        return Err(Error::InvalidInput("mu length does not match the block size".into()));
    }
    if !mu.0.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("mu must be dominant".into()));
    }
    if mu.sum() != block.m() {
        return Err(Error::InvalidInput(format!(
            "kappa mismatch: sum of mu is {}, block shift is {}",
            mu.sum(),
            block.m()
        )));
    }
    // rho = ((h-1)/2, (h-3)/2, ..., -(h-1)/2); nu is the constant slope
    let slope = block.slope();
    let mut acc = Rat::zero();
    for (i, &c) in mu.0.iter().enumerate() {
        let rho_i = Rat::new(h - 1 - 2 * i as i64, 2);
        acc += rho_i * (rat(c) - slope.clone());
    }
    acc -= Rat::new(h - 1, 2);
    if !acc.is_integer() {
        return Err(Error::InconsistentClass(format!("non-integral dimension {acc}")));
    }
    Ok(acc.to_integer())
}

/// Assemble the full report for a pair.
pub fn classify(mu: &Coweight, cls: &SigmaClass) -> Result<ClassificationReport> {
    let nonempty = is_nonempty(mu, cls)?;
    if !nonempty {
        return Ok(ClassificationReport {
            nonempty,
            indecomposable: None,
            hn_trace: Vec::new(),
            pi0: None,
            zero_dimensional: None,
            dimension: None,
            notes: vec!["empty: kappa mismatch or the Newton point is not below mu".into()],
        });
    }
    let mut notes = vec!["nonempty: kappa matches and the Newton point is below mu".into()];
    let indecomposable = is_hn_indecomposable(mu, cls)?;
    let red = hn_reduce(mu, cls)?;
    for s in &red.chain {
        notes.push(format!("Hodge-Newton reduction to the standard Levi on simple roots {s:?}"));
    }
    let pi0 = pi0_closed(mu, cls)?;
    match innermost(&pi0) {
        Pi0Kind::Discrete => {
            notes.push("components: the variety is discrete, isomorphic to G(F)/G(O_F)".into())
        }
        Pi0Kind::Pi1Torsor { .. } => {
            notes.push("components: kappa is a bijection from pi0 of the closed stratum to pi1".into())
        }
        Pi0Kind::PerFactor { .. } => notes.push(
            "components: mixed central and non-central simple factors; see the per-factor list".into(),
        ),
        Pi0Kind::Reduced { .. } => unreachable!("innermost unwraps reductions"),
    }
    let zero_dimensional = is_zero_dimensional(mu, &red.core)?;
    let dimension = if zero_dimensional {
        notes.push("dimension 0 by the zero-dimensionality criterion".into());
        Some(0)
    } else if let Some(block) = superbasic_block(&red.core) {
        let d = dim_superbasic(mu, block)?;
        notes.push("dimension from the superbasic formula <rho, mu - nu> - (h-1)/2".into());
        Some(d)
    } else {
        notes.push("dimension not computed: the core is not superbasic".into());
        None
    };
    Ok(ClassificationReport {
        nonempty,
        indecomposable: Some(indecomposable),
        hn_trace: red.chain,
        pi0: Some(pi0),
        zero_dimensional: Some(zero_dimensional),
        dimension,
        notes,
    })
}

fn innermost(kind: &Pi0Kind) -> &Pi0Kind {
    match kind {
        Pi0Kind::Reduced { inner, .. } => innermost(inner),
        other => other,
    }
}

/// The single block when the class is superbasic on the whole datum.
fn superbasic_block(cls: &SigmaClass) -> Option<SlopeBlock> {
    let blocks = cls.msb_blocks().ok()?;
    if blocks.len() == 1 && blocks[0].h() as usize == cls.datum.dim {
        Some(blocks[0])
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::newton_point;

    fn blocks(spec: &[(i64, i64)]) -> Vec<SlopeBlock> {
        spec.iter().map(|&(m, h)| SlopeBlock::new(m, h).unwrap()).collect()
    }

    fn cls(spec: &[(i64, i64)]) -> SigmaClass {
        SigmaClass::from_gl_blocks(&blocks(spec)).unwrap()
    }

    #[test]
    fn nonempty_examples() {
        let c = cls(&[(1, 2), (1, 3)]);
        assert!(is_nonempty(&Coweight(vec![2, 0, 0, 0, 0]), &c).unwrap());
        // kappa mismatch
        let c2 = cls(&[(1, 2)]);
        assert!(!is_nonempty(&Coweight(vec![2, 0]), &c2).unwrap());
        // mu = nu central
        let c3 = cls(&[(1, 1), (1, 1)]);
        assert!(is_nonempty(&Coweight(vec![1, 1]), &c3).unwrap());
        // non-dominant mu is rejected
        assert!(is_nonempty(&Coweight(vec![0, 2]), &c2).is_err());
    }

    #[test]
    fn indecomposability_examples() {
        let c = cls(&[(1, 2), (1, 3)]);
        assert!(is_hn_indecomposable(&Coweight(vec![2, 0, 0, 0, 0]), &c).unwrap());
        // split torus class: kappa_torus(b) = mu
        let c2 = cls(&[(1, 1), (0, 1)]);
        assert!(!is_hn_indecomposable(&Coweight(vec![1, 0]), &c2).unwrap());
        // basic class: vacuously indecomposable
        let c3 = cls(&[(1, 2)]);
        assert!(is_hn_indecomposable(&Coweight(vec![1, 0]), &c3).unwrap());
    }

    #[test]
    fn hn_reduce_examples() {
        // indecomposable input: empty chain
        let c = cls(&[(1, 2), (1, 3)]);
        let red = hn_reduce(&Coweight(vec![2, 0, 0, 0, 0]), &c).unwrap();
        assert!(red.chain.is_empty());
        // split GL_2 class reduces to the torus
        let c2 = cls(&[(1, 1), (0, 1)]);
        let red = hn_reduce(&Coweight(vec![1, 0]), &c2).unwrap();
        assert_eq!(red.chain, vec![Vec::<usize>::new()]);
        assert_eq!(red.core.datum.gl_sizes(), Some(&[1, 1][..]));
        // GL_4 with nu = mu = (1,1,0,0) reduces to GL_2 x GL_2
        let c3 = cls(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let red = hn_reduce(&Coweight(vec![1, 1, 0, 0]), &c3).unwrap();
        assert_eq!(red.chain, vec![vec![0, 2]]);
        assert_eq!(red.core.datum.gl_sizes(), Some(&[2, 2][..]));
        assert!(is_hn_indecomposable(&Coweight(vec![1, 1, 0, 0]), &red.core).unwrap());
    }

    #[test]
    fn pi0_examples() {
        // the GL_5 pair: a torsor under pi_1(GL_5) = Z
        let c = cls(&[(1, 2), (1, 3)]);
        let kind = pi0_closed(&Coweight(vec![2, 0, 0, 0, 0]), &c).unwrap();
        assert_eq!(kind, Pi0Kind::Pi1Torsor { free_rank: 1, torsion: vec![] });
        // central class: discrete
        let c2 = cls(&[(1, 1), (1, 1)]);
        let kind = pi0_closed(&Coweight(vec![1, 1]), &c2).unwrap();
        assert_eq!(kind, Pi0Kind::Discrete);
        // split class: reduced to the torus, discrete there
        let c3 = cls(&[(1, 1), (0, 1)]);
        let kind = pi0_closed(&Coweight(vec![1, 0]), &c3).unwrap();
        match kind {
            Pi0Kind::Reduced { levi, inner } => {
                assert!(levi.is_empty());
                assert_eq!(*inner, Pi0Kind::Discrete);
            }
            other => panic!("expected a reduction, got {other:?}"),
        }
    }

    #[test]
    fn zero_dimensionality_examples() {
        // PGL_4, basic kappa = 1, minuscule m = 1
        let pgl4 = RootDatum::pgl(4);
        let c = SigmaClass::new(pgl4, RationalCoweight::from_ints(&[0, 0, 0, 0]), vec![1]).unwrap();
        assert!(is_zero_dimensional(&Coweight(vec![1, 0, 0, 0]), &c).unwrap());
        // central GL_2 case
        let c2 = cls(&[(1, 1), (1, 1)]);
        assert!(is_zero_dimensional(&Coweight(vec![1, 1]), &c2).unwrap());
        // the GL_5 pair has positive dimension
        let c3 = cls(&[(1, 2), (1, 3)]);
        assert!(!is_zero_dimensional(&Coweight(vec![2, 0, 0, 0, 0]), &c3).unwrap());
        // decomposable input is rejected
        let c4 = cls(&[(1, 1), (0, 1)]);
        assert!(is_zero_dimensional(&Coweight(vec![1, 0]), &c4).is_err());
    }

    #[test]
    fn dim_superbasic_examples() {
        // h = 3, block (4,3), mu = (3,1,0): dimension 2
        assert_eq!(dim_superbasic(&Coweight(vec![3, 1, 0]), SlopeBlock::new(4, 3).unwrap()).unwrap(), 2);
        // h = 2, block (1,2), mu = (1,0): dimension 0
        assert_eq!(dim_superbasic(&Coweight(vec![1, 0]), SlopeBlock::new(1, 2).unwrap()).unwrap(), 0);
        // h = 5, minuscule of weight 2: (2-1)(5-2-1)/2 = 1
        assert_eq!(
            dim_superbasic(&Coweight(vec![1, 1, 0, 0, 0]), SlopeBlock::new(2, 5).unwrap()).unwrap(),
            1
        );
        // kappa mismatch is rejected
        assert!(dim_superbasic(&Coweight(vec![1, 0]), SlopeBlock::new(3, 2).unwrap()).is_err());
    }

    #[test]
    fn dim_superbasic_matches_minuscule_closed_form() {
        for h in 1..=6i64 {
            for m in 1..3 * h {
                if num_integer::Integer::gcd(&m, &h) != 1 {
                    continue;
                }
                let block = SlopeBlock::new(m, h).unwrap();
                // minuscule dominant mu with coordinate sum m
                let mp = m.rem_euclid(h);
                let c = (m - mp) / h;
                let mu: Vec<i64> =
                    (0..h).map(|i| if i < mp { c + 1 } else { c }).collect();
                let dim = dim_superbasic(&Coweight(mu), block).unwrap();
                if h == 1 {
                    assert_eq!(dim, 0);
                    continue;
                }
                assert_eq!(dim, (mp - 1) * (h - mp - 1) / 2, "m {m} h {h}");
                assert_eq!(dim == 0, mp == 1 || mp == h - 1);
            }
        }
    }

    #[test]
    fn classify_report_gl5() {
        let c = cls(&[(1, 2), (1, 3)]);
        let report = classify(&Coweight(vec![2, 0, 0, 0, 0]), &c).unwrap();
        assert!(report.nonempty);
        assert_eq!(report.indecomposable, Some(true));
        assert!(report.hn_trace.is_empty());
        assert_eq!(report.pi0, Some(Pi0Kind::Pi1Torsor { free_rank: 1, torsion: vec![] }));
        assert_eq!(report.zero_dimensional, Some(false));
        assert_eq!(report.dimension, None);
    }

    #[test]
    fn classify_report_central() {
        let c = cls(&[(1, 1), (1, 1)]);
        let report = classify(&Coweight(vec![1, 1]), &c).unwrap();
        assert_eq!(report.pi0, Some(Pi0Kind::Discrete));
        assert_eq!(report.zero_dimensional, Some(true));
        assert_eq!(report.dimension, Some(0));
    }

    #[test]
    fn classify_report_superbasic_dimension() {
        let c = cls(&[(4, 3)]);
        let report = classify(&Coweight(vec![3, 1, 0]), &c).unwrap();
        assert_eq!(report.dimension, Some(2));
        assert_eq!(report.zero_dimensional, Some(false));
    }

    #[test]
    fn discrete_iff_zero_dimensional_and_central() {
        // on indecomposable inputs: DISCRETE <=> zero-dimensional and
        // mu = nu central on every factor
        for (bl, mu) in [
            (vec![(1i64, 2i64)], vec![1, 0]),
            (vec![(1, 1), (1, 1)], vec![1, 1]),
            (vec![(1, 2), (1, 3)], vec![2, 0, 0, 0, 0]),
            (vec![(4, 3)], vec![2, 1, 1]),
        ] {
            let c = cls(&bl);
            let mu = Coweight(mu);
            if !is_hn_indecomposable(&mu, &c).unwrap() {
                continue;
            }
            let kind = pi0_closed(&mu, &c).unwrap();
            let central_everywhere = {
                let mur = mu.to_rational();
                factor_slices(&c.datum).into_iter().all(|(coords, roots, _)| {
                    factor_is_central(&c.datum, &mur, &c.newton, &roots, &coords).unwrap()
                })
            };
            let discrete = kind == Pi0Kind::Discrete;
            assert_eq!(discrete, central_everywhere);
            if discrete {
                assert!(is_zero_dimensional(&mu, &c).unwrap());
            }
        }
    }
}
