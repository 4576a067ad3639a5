//! Cyclic quotient singularities: Hirzebruch-Jung continued fractions,
//! index-2 resolution graphs, discrepancies and Cartier indices.
//!
//! Convention: `C_{q,q1}` is the cyclic quotient whose minimal resolution is
//! the chain of the continued fraction of q/q1,
//! q/q1 = b1 - 1/(b2 - 1/(...)), all b_i >= 2, negated weights on the
//! resolution curves. The index-2 chains [3,2^{n-2},3] are palindromic, so
//! the choice between q1 and its inverse mod q is invisible there.

use crate::birational::blow_up;
use crate::dualgraph::matrix::{determinant, is_negative_definite, solve_exact};
use crate::dualgraph::{Config, ConfigBuilder, CurveId, InvariantLedger, PointId};
use crate::error::{K3Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A cyclic quotient singularity C_{q,q1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BrieskornType {
    pub q: i64,
    pub q1: i64,
}

impl BrieskornType {
    pub fn new(q: i64, q1: i64) -> Result<Self> {
        if q < 2 || q1 < 1 || q1 >= q {
            return Err(K3Error::InvalidBrieskorn { q, q1 });
        }
        if q.gcd(&q1) != 1 {
            return Err(K3Error::NonCoprime { q, q1 });
        }
        Ok(BrieskornType { q, q1 })
    }

    pub fn weights(&self) -> Vec<i64> {
        hj_expand(self.q, self.q1).expect("validated on construction")
    }
}

impl fmt::Display for BrieskornType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{{{},{}}}", self.q, self.q1)
    }
}

impl FromStr for BrieskornType {
    type Err = K3Error;

    /// Accepts `C_{q,q1}`, `C_q,q1` or plain `q,q1`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .trim_start_matches("C_")
            .trim_start_matches('{')
            .trim_end_matches('}');
        let mut it = body.split(',').map(str::trim);
        let bad = || K3Error::InvalidBrieskorn { q: 0, q1: 0 };
        let q: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let q1: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if it.next().is_some() {
            return Err(bad());
        }
        BrieskornType::new(q, q1)
    }
}

/// The unique continued-fraction expansion q/q1 = b1 - 1/(b2 - 1/(...)) with
/// all entries >= 2. The negated entries are the self-intersections of the
/// minimal resolution chain.
pub fn hj_expand(q: i64, q1: i64) -> Result<Vec<i64>> {
    if q < 2 || q1 < 1 || q1 >= q {
        return Err(K3Error::InvalidBrieskorn { q, q1 });
    }
    if q.gcd(&q1) != 1 {
        return Err(K3Error::NonCoprime { q, q1 });
    }
    let (mut a, mut b) = (q, q1);
    let mut out = Vec::new();
    while b > 0 {
        let c = Integer::div_ceil(&a, &b);
        out.push(c);
        let next = c
            .checked_mul(b)
            .and_then(|x| x.checked_sub(a))
            .ok_or(K3Error::Overflow)?;
        a = b;
        b = next;
    }
    Ok(out)
}

/// Evaluate the continued fraction exactly; inverse of [`hj_expand`].
pub fn hj_contract(weights: &[i64]) -> Result<(i64, i64)> {
    if weights.is_empty() {
        return Err(K3Error::WeightTooSmall(0));
    }
    if let Some(&w) = weights.iter().find(|&&w| w <= 1) {
        return Err(K3Error::WeightTooSmall(w));
    }
    let mut q: i64 = 1;
    let mut q1: i64 = 0;
    for &b in weights.iter().rev() {
        let next = b
            .checked_mul(q)
            .and_then(|x| x.checked_sub(q1))
            .ok_or(K3Error::Overflow)?;
        q1 = q;
        q = next;
    }
    Ok((q, q1))
}

/// The two resolutions of the index-2 point C_{4n,2n-1}: the minimal chain
/// `[3,2^(n-2),3]` (a single `[4]` when n = 1) and the alternating chain of n
/// (-4)-curves and n-1 (-1)-curves obtained by blowing up every interior
/// intersection of the minimal chain.
#[derive(Clone, Debug)]
pub struct IndexTwoResolution {
    pub minimal: Config,
    pub blown_up: Config,
    /// Chain order in `minimal`.
    pub minimal_chain: Vec<CurveId>,
    /// Chain order in `blown_up` (alternating D, H, D, ..., D).
    pub blown_up_chain: Vec<CurveId>,
}

pub fn index_two_resolution(n: u32) -> Result<IndexTwoResolution> {
    if n < 1 {
        return Err(K3Error::BadChainLength(n));
    }
    let weights: Vec<i64> = if n == 1 {
        vec![4]
    } else {
        let mut w = vec![3];
        w.extend(std::iter::repeat_n(2, n as usize - 2));
        w.push(3);
        w
    };
    let mut b = ConfigBuilder::new(InvariantLedger::neutral());
    let ids: Vec<String> = (1..=n).map(|i| format!("D{i}")).collect();
    for (i, w) in weights.iter().enumerate() {
        b.add(ids[i].as_str(), -w, 0);
    }
    for i in 1..ids.len() {
        b.meet(ids[i - 1].as_str(), ids[i].as_str());
    }
    let minimal = b.build()?;
    let minimal_chain: Vec<CurveId> = ids.iter().map(|s| CurveId::from(s.as_str())).collect();

    // blow up every interior intersection point
    let points: Vec<PointId> = minimal.points.keys().cloned().collect();
    let mut blown_up = minimal.clone();
    let mut exceptionals = Vec::new();
    for p in points {
        let (next, rec) = blow_up(&blown_up, &p)?;
        blown_up = next;
        exceptionals.push(rec.exceptional);
    }
    // no ambient divisor is being tracked here, so the exceptional curves
    // carry multiplicity 1
    for e in &exceptionals {
        blown_up.curve_mut(e)?.mult = 1;
    }
    let mut blown_up_chain = Vec::new();
    for i in 0..ids.len() {
        blown_up_chain.push(minimal_chain[i].clone());
        if i < exceptionals.len() {
            blown_up_chain.push(exceptionals[i].clone());
        }
    }
    Ok(IndexTwoResolution {
        minimal,
        blown_up,
        minimal_chain,
        blown_up_chain,
    })
}

/// Exact discrepancies of an exceptional configuration: the unique rational
/// solution of (K + sum a_k B_k) . B_t = 0 with K.B_t = -2 - B_t^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyVector {
    pub by_curve: Vec<(CurveId, Ratio<i128>)>,
}

impl DiscrepancyVector {
    pub fn values(&self) -> Vec<Ratio<i128>> {
        self.by_curve.iter().map(|(_, a)| *a).collect()
    }

    pub fn all_zero(&self) -> bool {
        self.by_curve.iter().all(|(_, a)| a.numer() == &0)
    }
}

pub fn discrepancies(cfg: &Config) -> Result<DiscrepancyVector> {
    for c in cfg.curves.values() {
        if c.genus != 0 {
            return Err(K3Error::InvalidConfig(format!(
                "discrepancies need genus-0 curves, `{}` has genus {}",
                c.id, c.genus
            )));
        }
    }
    let lm = cfg.intersection_matrix();
    if !is_negative_definite(&lm.matrix)? {
        return Err(K3Error::NotNegativeDefinite);
    }
    // rhs: -K.B_t = 2 + B_t^2 by adjunction for genus 0
    let rhs: Vec<i128> = lm
        .ids
        .iter()
        .map(|id| 2 + cfg.curves[id].self_int as i128)
        .collect();
    let sol = solve_exact(&lm.matrix, &rhs).ok_or(K3Error::Singular)?;
    for a in &sol {
        if *a < Ratio::new(0, 1) || *a >= Ratio::new(1, 1) {
            return Err(K3Error::NotLogTerminal(a.to_string()));
        }
    }
    Ok(DiscrepancyVector {
        by_curve: lm.ids.into_iter().zip(sol).collect(),
    })
}

/// l.c.m. of the discrepancy denominators; 1 exactly on Du Val
/// configurations.
pub fn cartier_index(cfg: &Config) -> Result<i128> {
    let d = discrepancies(cfg)?;
    Ok(d.values().iter().fold(1i128, |acc, a| acc.lcm(a.denom())))
}

/// |det| of the Gram matrix (the discriminant; the sign convention is not
/// pinned down, so the absolute value is what gets reported).
pub fn gram_discriminant(cfg: &Config) -> i128 {
    determinant(&cfg.intersection_matrix().matrix).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birational::{contract_chain, ChainOutcome};

    #[test]
    fn expand_basics() {
        assert_eq!(hj_expand(4, 1).unwrap(), vec![4]);
        assert_eq!(hj_expand(2, 1).unwrap(), vec![2]);
        assert_eq!(
            hj_expand(40, 19).unwrap(),
            vec![3, 2, 2, 2, 2, 2, 2, 2, 2, 3]
        );
        assert_eq!(hj_expand(36, 17).unwrap(), vec![3, 2, 2, 2, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn contract_basics() {
        assert_eq!(hj_contract(&[3, 3]).unwrap(), (8, 3));
        assert_eq!(hj_contract(&[4]).unwrap(), (4, 1));
        assert_eq!(hj_contract(&[3, 2, 2, 2, 2, 2, 2, 2, 3]).unwrap(), (36, 17));
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(matches!(hj_expand(4, 2), Err(K3Error::NonCoprime { .. })));
    }

    #[test]
    fn weight_one_rejected() {
        assert!(matches!(
            hj_contract(&[3, 1, 3]),
            Err(K3Error::WeightTooSmall(1))
        ));
    }

    #[test]
    fn index_two_instances() {
        let r = index_two_resolution(1).unwrap();
        assert_eq!(r.minimal.curves.len(), 1);
        assert_eq!(r.blown_up.curves.len(), 1);

        let r = index_two_resolution(2).unwrap();
        let weights: Vec<i64> = r
            .minimal_chain
            .iter()
            .map(|c| -r.minimal.curves[c].self_int)
            .collect();
        assert_eq!(weights, vec![3, 3]);
        let blown: Vec<i64> = r
            .blown_up_chain
            .iter()
            .map(|c| -r.blown_up.curves[c].self_int)
            .collect();
        assert_eq!(blown, vec![4, 1, 4]);

        let r = index_two_resolution(10).unwrap();
        let weights: Vec<i64> = r
            .minimal_chain
            .iter()
            .map(|c| -r.minimal.curves[c].self_int)
            .collect();
        assert_eq!(weights, hj_expand(40, 19).unwrap());
        assert_eq!(r.blown_up_chain.len(), 19);
        // ledger deltas n-1
        assert_eq!(r.blown_up.ledger.k_squared, -(9));
        assert_eq!(r.blown_up.ledger.rho, 9);
        assert_eq!(r.blown_up.ledger.euler, 9);
    }

    #[test]
    fn brieskorn_round_trip_through_chain_contraction() {
        for n in 1..=10u32 {
            let r = index_two_resolution(n).unwrap();
            let (q, q1) = hj_contract(
                &r.minimal_chain
                    .iter()
                    .map(|c| -r.minimal.curves[c].self_int)
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!((q, q1), (4 * n as i64, 2 * n as i64 - 1));
            let contraction = contract_chain(&r.blown_up, &r.blown_up_chain).unwrap();
            assert_eq!(
                contraction.outcome,
                ChainOutcome::Brieskorn(
                    BrieskornType::new(4 * n as i64, 2 * n as i64 - 1).unwrap()
                )
            );
        }
    }

    #[test]
    fn discrepancy_values() {
        // single (-4): 1/2
        let r = index_two_resolution(1).unwrap();
        let d = discrepancies(&r.minimal).unwrap();
        assert_eq!(d.values(), vec![Ratio::new(1, 2)]);
        assert_eq!(cartier_index(&r.minimal).unwrap(), 2);

        // [3,2,3]: all 1/2, checked against the defining equations
        let r = index_two_resolution(4).unwrap();
        let d = discrepancies(&r.minimal).unwrap();
        assert!(d.values().iter().all(|a| *a == Ratio::new(1, 2)));
        let lm = r.minimal.intersection_matrix();
        for (t, id) in lm.ids.iter().enumerate() {
            let mut lhs = Ratio::new(-2 - r.minimal.curves[id].self_int as i128, 1);
            for (k, (_, a)) in d.by_curve.iter().enumerate() {
                lhs += *a * Ratio::new(lm.matrix.at(k, t), 1);
            }
            assert_eq!(lhs, Ratio::new(0, 1), "defining equation at {id}");
        }
    }

    #[test]
    fn du_val_is_zero_and_index_one() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        for i in 0..8 {
            b.add(format!("c{i}").as_str(), -2, 0);
        }
        for i in 1..8 {
            b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
        }
        let cfg = b.build().unwrap();
        let d = discrepancies(&cfg).unwrap();
        assert!(d.all_zero());
        assert_eq!(cartier_index(&cfg).unwrap(), 1);
    }

    #[test]
    fn not_negative_definite_rejected() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("a", 0, 0);
        let cfg = b.build().unwrap();
        assert!(matches!(
            discrepancies(&cfg),
            Err(K3Error::NotNegativeDefinite)
        ));
    }

    #[test]
    fn parse_brieskorn() {
        assert_eq!(
            "C_{40,19}".parse::<BrieskornType>().unwrap(),
            BrieskornType::new(40, 19).unwrap()
        );
        assert_eq!(
            "40,19".parse::<BrieskornType>().unwrap(),
            BrieskornType::new(40, 19).unwrap()
        );
        assert!("C_{4,2}".parse::<BrieskornType>().is_err());
    }
}
