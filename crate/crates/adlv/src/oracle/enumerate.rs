//! Exhaustive enumeration of window lattices and finite-field point counts.
//!
//! Lattices with t^{high} O^n <= L <= t^{low} O^n biject with canonical
//! generator matrices: a pivot profile (a_i) in [low, high)^n plus free
//! entries below the pivots, so enumeration walks profiles in lexicographic
//! order and fills the free positions with field elements in index order.

use crate::oracle::field::{Field, K};
use crate::oracle::lattice::{member, FrobTwist, Lattice, Window, WinVec};
use crate::rootdata::Coweight;
use crate::{Error, Result};

/// Search region and filters for lattice enumeration.
#[derive(Debug, Clone)]
pub struct EnumerateSpec {
    /// pivot region: canonical pivots range over [region.low, region.high)
    pub region: Window,
    pub mu: Coweight,
    pub closed: bool,
    pub kappa: i64,
    /// restrict to one pivot profile (a parametrized patch)
    pub profile: Option<Vec<i32>>,
    /// maximum number of candidate lattices to examine
    pub budget: u64,
}

/// Computation window: the region padded enough for the twist and the
/// relative-position probes. Downward probes reach mu's largest entry plus
/// the twist shift; upward only the twist shift matters (top truncation is
/// absorbed by the implicit tail).
pub fn padded_window(region: Window, b: &FrobTwist, mu: &Coweight) -> Window {
    let m = mu.0.iter().map(|&x| x.unsigned_abs() as i32).max().unwrap_or(0);
    Window { low: region.low - (m + b.shift_bound() + 1), high: region.high + b.shift_bound() + 1 }
}

fn profiles(n: usize, region: Window, kappa: i64, fixed: &Option<Vec<i32>>) -> Vec<Vec<i32>> {
    if let Some(p) = fixed {
        if p.len() == n && p.iter().map(|&a| a as i64).sum::<i64>() == kappa {
            return vec![p.clone()];
        }
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![region.low; n];
    loop {
        if cur.iter().map(|&a| a as i64).sum::<i64>() == kappa {
            out.push(cur.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < region.high {
                break;
            }
            cur[k] = region.low;
        }
    }
}

/// Free coordinate slots of a canonical matrix with the given pivots:
/// (column, t-exponent, row) triples in deterministic order.
fn free_positions(n: usize, region: Window, pivots: &[i32]) -> Vec<(usize, i32, usize)> {
    let mut out = Vec::new();
    for col in 0..n {
        for d in region.low..region.high {
            for row in 0..n {
                if row == col || d >= pivots[row] {
                    continue;
                }
                // canonical columns have their pivot as the leading
                // coordinate in (t-exponent, row) order
                if (d, row) <= (pivots[col], col) {
                    continue;
                }
                out.push((col, d, row));
            }
        }
    }
    out
}

/// Number of candidate canonical matrices for a profile.
fn candidate_count(field: &Field, n: usize, region: Window, pivots: &[i32]) -> u64 {
    let free = free_positions(n, region, pivots).len() as u32;
    (field.size() as u64).saturating_pow(free)
}

/// All lattices in the region with the given determinant valuation that lie
/// in the (closed or strict) stratum of mu.
pub fn enumerate_window(
    field: &Field,
    b: &FrobTwist,
    spec: &EnumerateSpec,
) -> Result<Vec<Lattice>> {
    let n = b.n();
    if spec.mu.0.len() != n {
        return Err(Error::InvalidInput("mu length does not match the block sizes".into()));
    }
    let win = padded_window(spec.region, b, &spec.mu);
    let profs = profiles(n, spec.region, spec.kappa, &spec.profile);
    let total: u64 = profs.iter().map(|p| candidate_count(field, n, spec.region, p)).sum();
    if total > spec.budget {
        return Err(Error::BudgetExceeded { needed: total, budget: spec.budget });
    }
    let mut found = Vec::new();
    for pivots in profs {
        let free = free_positions(n, spec.region, &pivots);
        let mut values = vec![0 as K; free.len()];
        'assignments: loop {
            // build the canonical candidate
            let mut cols: Vec<WinVec> = (0..n)
                .map(|i| {
                    let mut v = WinVec::zero(n, win);
                    v.set(pivots[i], i, 1).expect("pivot inside padded window");
                    v
                })
                .collect();
            for (&(col, d, row), &val) in free.iter().zip(values.iter()) {
                cols[col].set(d, row, val).expect("free slot inside padded window");
            }
            let lat = Lattice { n, win, pivots: pivots.clone(), cols };
            debug_assert_eq!(lat.kappa(), spec.kappa);
            if member(field, &lat, b, &spec.mu, spec.closed)? {
                found.push(lat);
            }
            // odometer over the free values
            let mut k = free.len();
            loop {
                if k == 0 {
                    break 'assignments;
                }
                k -= 1;
                values[k] += 1;
                if (values[k] as usize) < field.size() {
                    break;
                }
                values[k] = 0;
            }
        }
    }
    Ok(found)
}

/// Point counts over a tower of field degrees with an exact growth
/// exponent, when the counts fit c * q^{e s} exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub q: u32,
    /// (extension degree, member count)
    pub counts: Vec<(u32, u64)>,
    /// exact e with counts multiplying by q^e per degree step, if consistent
    pub exponent: Option<i64>,
}

pub fn count_points(
    q: u32,
    degrees: &[u32],
    b: &FrobTwist,
    spec: &EnumerateSpec,
) -> Result<CountReport> {
    let mut counts = Vec::new();
    for &s in degrees {
        let field = Field::new(q, s)?;
        let members = enumerate_window(&field, b, spec)?;
        counts.push((s, members.len() as u64));
    }
    let exponent = fit_exponent(q, &counts);
    Ok(CountReport { q, counts, exponent })
}

/// The exact integer e with count(s+1) = count(s) * q^{e (s'-s)} across all
/// consecutive degrees, if one exists.
fn fit_exponent(q: u32, counts: &[(u32, u64)]) -> Option<i64> {
    if counts.len() < 2 {
        return None;
    }
    let mut exponent: Option<i64> = None;
    for w in counts.windows(2) {
        let (s1, n1) = w[0];
        let (s2, n2) = w[1];
        if n1 == 0 || s2 <= s1 {
            return None;
        }
        // n2 = n1 * q^(e * (s2 - s1))
        if n2 % n1 != 0 {
            return None;
        }
        let mut ratio = n2 / n1;
        let mut steps = 0i64;
        while ratio > 1 {
            if ratio % q as u64 != 0 {
                return None;
            }
            ratio /= q as u64;
            steps += 1;
        }
        if steps % (s2 - s1) as i64 != 0 {
            return None;
        }
        let e = steps / (s2 - s1) as i64;
        match exponent {
            None => exponent = Some(e),
            Some(prev) if prev == e => {}
            _ => return None,
        }
    }
    exponent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::SlopeBlock;

    fn win(low: i32, high: i32) -> Window {
        Window::new(low, high).unwrap()
    }

    #[test]
    fn fit_exponent_cases() {
        assert_eq!(fit_exponent(2, &[(1, 4), (2, 16)]), Some(2));
        assert_eq!(fit_exponent(2, &[(1, 1), (2, 1)]), Some(0));
        assert_eq!(fit_exponent(2, &[(1, 3), (2, 12)]), Some(2));
        assert_eq!(fit_exponent(2, &[(1, 4), (2, 12)]), None);
        assert_eq!(fit_exponent(3, &[(1, 2), (2, 18)]), Some(2));
        assert_eq!(fit_exponent(2, &[(1, 5)]), None);
    }

    #[test]
    fn enumerate_dim_zero_stratum_is_single_point() {
        // block (1,2), mu = (1,0), kappa = 0: one lattice per kappa value
        let f = Field::new(2, 1).unwrap();
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let spec = EnumerateSpec {
            region: win(-2, 3),
            mu: Coweight(vec![1, 0]),
            closed: false,
            kappa: 0,
            profile: None,
            budget: 1_000_000,
        };
        let members = enumerate_window(&f, &b, &spec).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].pivots, vec![0, 0]);
    }

    #[test]
    fn enumerate_budget_is_enforced() {
        let f = Field::new(2, 1).unwrap();
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let spec = EnumerateSpec {
            region: win(-2, 3),
            mu: Coweight(vec![1, 0]),
            closed: false,
            kappa: 0,
            profile: None,
            budget: 3,
        };
        assert!(matches!(
            enumerate_window(&f, &b, &spec),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumerated_candidates_are_canonical() {
        // the direct construction agrees with canonicalize
        let f = Field::new(3, 1).unwrap();
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let spec = EnumerateSpec {
            region: win(-1, 2),
            mu: Coweight(vec![2, -1]),
            closed: true,
            kappa: 1,
            profile: None,
            budget: 1_000_000,
        };
        let members = enumerate_window(&f, &b, &spec).unwrap();
        assert!(!members.is_empty());
        for lat in &members {
            let again = Lattice::canonicalize(&f, lat.n, lat.win, &lat.cols).unwrap();
            assert_eq!(&again, lat);
        }
    }

    #[test]
    fn count_points_constant_for_dim_zero() {
        let b = FrobTwist::new(&[SlopeBlock::new(1, 2).unwrap()]).unwrap();
        let spec = EnumerateSpec {
            region: win(-1, 2),
            mu: Coweight(vec![1, 0]),
            closed: false,
            kappa: 0,
            profile: None,
            budget: 1_000_000,
        };
        let report = count_points(2, &[1, 2], &b, &spec).unwrap();
        assert_eq!(report.counts, vec![(1, 1), (2, 1)]);
        assert_eq!(report.exponent, Some(0));
    }
}
