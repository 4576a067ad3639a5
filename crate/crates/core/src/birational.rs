//! Blow-up and blow-down of configurations with exact ledger maintenance,
//! and contraction of linear chains into quotient singularities.
//!
//! The single audited rule is `blow_up` at one marked point; infinitely-near
//! points are handled by iterating it, never by a composite primitive.
//! `blow_down` is its exact inverse. At a point, the multiplicity of a curve
//! is the sum of its branch multiplicities there; a branch of multiplicity 2
//! is an ordinary cusp-like branch that one blow-up makes smooth with an
//! order-2 contact to the exceptional curve.

use crate::cyclic_sing::{hj_contract, BrieskornType};
use crate::dualgraph::{
    Config, CurveId, CurveNode, Edge, MarkedPoint, PointBranch, PointId, SigmaMark,
};
use crate::error::{K3Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Record of one blow-up step.
#[derive(Clone, Debug)]
pub struct BlowUpRecord {
    pub point: PointId,
    /// The new exceptional (-1)-curve.
    pub exceptional: CurveId,
    /// Multiplicity assigned to the exceptional curve in the total transform.
    pub multiplicity_assigned: u32,
}

/// Blow up the configuration at a marked point.
///
/// The exceptional curve enters with self-intersection -1, genus 0 and
/// multiplicity equal to the sum over branches of (branch multiplicity x
/// fiber multiplicity of its curve), so total transforms of fibers stay
/// numerically trivial. Each incident curve loses (its multiplicity at the
/// point)^2 from its self-intersection and m(m-1)/2 from its arithmetic
/// genus. Contact orders between surviving branch pairs drop by one; pairs
/// reaching contact 0 separate onto distinct points of the exceptional
/// curve. The ledger moves by (K^2, rho, e) += (-1, +1, +1).
pub fn blow_up(cfg: &Config, point: &PointId) -> Result<(Config, BlowUpRecord)> {
    let p = cfg.point(point)?.clone();
    for b in &p.branches {
        if b.mult == 0 {
            return Err(K3Error::NonPositiveContact(point.clone()));
        }
        if b.mult > 2 {
            return Err(K3Error::UnsupportedBranchMultiplicity {
                point: point.clone(),
                mult: b.mult,
            });
        }
        cfg.curve(&b.curve)?;
    }
    for &k in p.contacts.values() {
        if k == 0 {
            return Err(K3Error::NonPositiveContact(point.clone()));
        }
    }

    let mut out = cfg.clone();

    // point multiplicity of each incident curve
    let mut point_mult: BTreeMap<CurveId, u32> = BTreeMap::new();
    for b in &p.branches {
        *point_mult.entry(b.curve.clone()).or_insert(0) += b.mult;
    }
    for (c, m) in &point_mult {
        let node = out.curve_mut(c)?;
        node.self_int -= (*m as i64) * (*m as i64);
        let genus_drop = m * (m - 1) / 2;
        if node.genus < genus_drop {
            return Err(K3Error::InvalidConfig(format!(
                "blow-up at `{point}` would make the genus of `{c}` negative"
            )));
        }
        node.genus -= genus_drop;
    }

    // exceptional curve
    let exc_mult: u32 = p
        .branches
        .iter()
        .map(|b| b.mult * cfg.curves[&b.curve].mult)
        .sum();
    let exc_mult = exc_mult.max(1);
    let exc = out.fresh_curve_id("E");
    out.curves.insert(
        exc.clone(),
        CurveNode {
            id: exc.clone(),
            self_int: -1,
            genus: 0,
            mult: exc_mult,
            is_branch: false,
            sigma_mark: SigmaMark::Unmarked,
        },
    );

    // the blown-up point disappears together with its edges
    out.edges.retain(|e| e.point.as_ref() != Some(point));
    out.points.remove(point);

    // group branches into tangent classes: same class <=> contact >= 2
    let n = p.branches.len();
    let mut class: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if p.contact(i, j) >= 2 {
                let (ci, cj) = (class[i], class[j]);
                if ci != cj {
                    for c in class.iter_mut() {
                        if *c == cj {
                            *c = ci;
                        }
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in class.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }

    for members in classes.values() {
        // one new point of the exceptional curve per tangent direction
        let pid = out.fresh_point_id();
        let mut branches = vec![PointBranch {
            curve: exc.clone(),
            mult: 1,
        }];
        for &i in members {
            branches.push(PointBranch {
                curve: p.branches[i].curve.clone(),
                mult: 1,
            });
        }
        let mut contacts = BTreeMap::new();
        // exceptional curve vs proper transforms: contact = old branch mult
        for (slot, &i) in members.iter().enumerate() {
            contacts.insert((0, slot + 1), p.branches[i].mult);
        }
        // surviving pairs: contact drops by one
        for (si, &i) in members.iter().enumerate() {
            for (sj, &j) in members.iter().enumerate().skip(si + 1) {
                contacts.insert((si + 1, sj + 1), p.contact(i, j) - 1);
            }
        }
        let mp = MarkedPoint {
            id: pid.clone(),
            branches,
            contacts,
        };

        // edges at the new point
        for (slot, &i) in members.iter().enumerate() {
            let c = &p.branches[i].curve;
            let lm = mp.branch_intersection(0, slot + 1);
            out.edges
                .push(Edge::new(exc.clone(), c.clone(), lm, Some(pid.clone())));
        }
        let mut per_pair: BTreeMap<(CurveId, CurveId), u32> = BTreeMap::new();
        let mut self_delta: BTreeMap<CurveId, u32> = BTreeMap::new();
        for (si, &i) in members.iter().enumerate() {
            for (sj, &j) in members.iter().enumerate().skip(si + 1) {
                let (ca, cb) = (&p.branches[i].curve, &p.branches[j].curve);
                let lm = mp.branch_intersection(si + 1, sj + 1);
                if ca == cb {
                    *self_delta.entry(ca.clone()).or_insert(0) += lm;
                } else if lm > 0 {
                    let key = if ca <= cb {
                        (ca.clone(), cb.clone())
                    } else {
                        (cb.clone(), ca.clone())
                    };
                    *per_pair.entry(key).or_insert(0) += lm;
                }
            }
        }
        for ((a, b), lm) in per_pair {
            out.edges.push(Edge::new(a, b, lm, Some(pid.clone())));
        }
        for (c, _) in self_delta {
            out.edges
                .push(Edge::new(c.clone(), c, 1, Some(pid.clone())));
        }
        out.points.insert(pid, mp);
    }

    out.ledger.blow_up();
    let record = BlowUpRecord {
        point: point.clone(),
        exceptional: exc,
        multiplicity_assigned: exc_mult,
    };
    Ok((out, record))
}

/// Contract a (-1)-curve of genus 0; the exact inverse of [`blow_up`].
///
/// All branches meeting the contracted curve merge into one new marked point
/// downstairs. A branch regains multiplicity equal to its contact order with
/// the contracted curve; pairs sharing a point of the contracted curve gain
/// one contact order, pairs on distinct points become transversal. Each
/// neighbor gains (its total intersection with the contracted curve)^2 of
/// self-intersection. The ledger moves by (K^2, rho, e) += (+1, -1, -1).
pub fn blow_down(cfg: &Config, curve: &CurveId) -> Result<Config> {
    let e = cfg.curve(curve)?;
    if e.self_int != -1 {
        return Err(K3Error::NotContractible(
            curve.clone(),
            format!("self-intersection {}", e.self_int),
        ));
    }
    if e.genus != 0 {
        return Err(K3Error::NotContractible(
            curve.clone(),
            format!("genus {}", e.genus),
        ));
    }
    if !cfg.self_edges_of(curve).is_empty() {
        return Err(K3Error::NotContractible(
            curve.clone(),
            "the curve is singular".into(),
        ));
    }

    let mut out = cfg.clone();

    // Gather the intersections of `curve`, point by point. Bare edges
    // (no point reference) act as implicit transversal points; an edge with
    // local multiplicity l becomes a single branch of contact order l.
    struct Incident {
        // (curve, downstairs branch mult, source point or None for bare edges)
        branches: Vec<(CurveId, u32, Option<PointId>)>,
        // contacts among the collected branches, indices into `branches`
        contacts: BTreeMap<(usize, usize), u32>,
    }
    let mut inc = Incident {
        branches: Vec::new(),
        contacts: BTreeMap::new(),
    };

    let mut touched_points: Vec<PointId> = Vec::new();
    for p in cfg.points_of(curve) {
        touched_points.push(p.id.clone());
        let e_idx: Vec<usize> = (0..p.branches.len())
            .filter(|&i| &p.branches[i].curve == curve)
            .collect();
        if e_idx.len() != 1 {
            return Err(K3Error::NotContractible(
                curve.clone(),
                format!("two branches at point `{}`", p.id),
            ));
        }
        let ei = e_idx[0];
        if p.branches[ei].mult != 1 {
            return Err(K3Error::NotContractible(
                curve.clone(),
                "singular branch of the contracted curve".into(),
            ));
        }
        let base = inc.branches.len();
        let mut local: Vec<usize> = Vec::new();
        for (i, b) in p.branches.iter().enumerate() {
            if i == ei {
                continue;
            }
            if b.mult != 1 {
                return Err(K3Error::NotContractible(
                    curve.clone(),
                    format!(
                        "branch of multiplicity {} of `{}` at `{}`",
                        b.mult, b.curve, p.id
                    ),
                ));
            }
            inc.branches
                .push((b.curve.clone(), p.contact(ei, i), Some(p.id.clone())));
            local.push(i);
        }
        // pairs sharing this point of the contracted curve: contact + 1
        for s in 0..local.len() {
            for t in (s + 1)..local.len() {
                inc.contacts
                    .insert((base + s, base + t), p.contact(local[s], local[t]) + 1);
            }
        }
    }
    for e in cfg
        .edges
        .iter()
        .filter(|e| e.touches(curve) && e.point.is_none())
    {
        inc.branches
            .push((e.other(curve).clone(), e.local_mult, None));
    }
    // branches on distinct points of the contracted curve meet transversally
    for i in 0..inc.branches.len() {
        for j in (i + 1)..inc.branches.len() {
            inc.contacts.entry((i, j)).or_insert(1);
        }
    }

    // per-curve multiplicity at the merged point must match the total
    // intersection number with the contracted curve
    let mut point_mult: BTreeMap<CurveId, u32> = BTreeMap::new();
    for (c, m, _) in &inc.branches {
        *point_mult.entry(c.clone()).or_insert(0) += m;
    }
    for (c, m) in &point_mult {
        let total = cfg.pair_int(curve, c);
        if total != *m as i64 {
            return Err(K3Error::NotContractible(
                curve.clone(),
                format!("intersection with `{c}` is {total} but point data accounts for {m}"),
            ));
        }
    }

    // remove the curve, its points, and every edge at those points
    out.curves.remove(curve);
    out.edges.retain(|e| {
        !e.touches(curve) && !matches!(&e.point, Some(p) if touched_points.contains(p))
    });
    for p in &touched_points {
        out.points.remove(p);
    }

    if !inc.branches.is_empty() {
        let pid = out.fresh_point_id();
        let branches: Vec<PointBranch> = inc
            .branches
            .iter()
            .map(|(c, m, _)| PointBranch {
                curve: c.clone(),
                mult: *m,
            })
            .collect();
        let mp = MarkedPoint {
            id: pid.clone(),
            branches,
            contacts: inc.contacts,
        };

        // neighbors regain self-intersection and genus
        for (c, m) in &point_mult {
            let node = out.curve_mut(c)?;
            node.self_int += (*m as i64) * (*m as i64);
            node.genus += m * (m - 1) / 2;
        }

        // re-derive edges at the merged point
        let mut per_pair: BTreeMap<(CurveId, CurveId), u32> = BTreeMap::new();
        let mut self_edge: BTreeMap<CurveId, u32> = BTreeMap::new();
        for i in 0..mp.branches.len() {
            for j in (i + 1)..mp.branches.len() {
                let (ca, cb) = (&mp.branches[i].curve, &mp.branches[j].curve);
                let lm = mp.branch_intersection(i, j);
                if ca == cb {
                    *self_edge.entry(ca.clone()).or_insert(0) += lm;
                } else {
                    let key = if ca <= cb {
                        (ca.clone(), cb.clone())
                    } else {
                        (cb.clone(), ca.clone())
                    };
                    *per_pair.entry(key).or_insert(0) += lm;
                }
            }
        }
        for b in &mp.branches {
            if b.mult >= 2 {
                self_edge.entry(b.curve.clone()).or_insert(0);
            }
        }
        for ((a, b), lm) in per_pair {
            out.edges.push(Edge::new(a, b, lm, Some(pid.clone())));
        }
        for (c, _) in self_edge {
            out.edges
                .push(Edge::new(c.clone(), c, 1, Some(pid.clone())));
        }
        out.points.insert(pid, mp);
    }

    out.ledger.blow_down();
    Ok(out)
}

/// What a chain contracts to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOutcome {
    SmoothPoint,
    /// Du Val point of type A_k (all remaining weights 2).
    DuVal(u32),
    Brieskorn(BrieskornType),
}

impl fmt::Display for ChainOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainOutcome::SmoothPoint => write!(f, "smooth point"),
            ChainOutcome::DuVal(k) => write!(f, "A{k}"),
            ChainOutcome::Brieskorn(b) => write!(f, "{b}"),
        }
    }
}

/// Result of [`contract_chain`].
#[derive(Clone, Debug)]
pub struct ChainContraction {
    /// Configuration after the contraction; the chain curves are gone.
    pub config: Config,
    pub outcome: ChainOutcome,
    /// Number of curve classes removed by the final non-smooth contraction.
    /// The ledger keeps the invariants of the smooth model, so the Picard
    /// number of the singular surface is `config.ledger.rho - removed_classes`.
    pub removed_classes: usize,
    /// Weight sequence left after blowing down all (-1)-curves.
    pub final_weights: Vec<i64>,
    /// One configuration per blow-down step, for tracing.
    pub steps: Vec<Config>,
}

/// Contract a linear chain: repeatedly blow down (-1)-curves inside the
/// chain (leftmost first), then identify and remove what is left.
pub fn contract_chain(cfg: &Config, chain: &[CurveId]) -> Result<ChainContraction> {
    contract_chain_ordered(cfg, chain, false)
}

/// Same as [`contract_chain`] but contracting the rightmost (-1)-curve
/// first; the result is order-independent and tests assert it.
pub fn contract_chain_rightmost(cfg: &Config, chain: &[CurveId]) -> Result<ChainContraction> {
    contract_chain_ordered(cfg, chain, true)
}

fn contract_chain_ordered(
    cfg: &Config,
    chain: &[CurveId],
    rightmost: bool,
) -> Result<ChainContraction> {
    if chain.is_empty() {
        return Err(K3Error::ChainNotLinear("empty chain".into()));
    }
    for (i, c) in chain.iter().enumerate() {
        let node = cfg.curve(c)?;
        if node.genus != 0 {
            return Err(K3Error::ChainNotLinear(format!(
                "curve `{c}` has genus {}",
                node.genus
            )));
        }
        if chain[i + 1..].contains(c) {
            return Err(K3Error::ChainNotLinear(format!("curve `{c}` repeats")));
        }
    }
    check_linear(cfg, chain)?;

    let mut cur = cfg.clone();
    let mut order: Vec<CurveId> = chain.to_vec();
    let mut steps = Vec::new();
    loop {
        let minus_one = |ids: &[CurveId], cfg: &Config| -> Option<usize> {
            let it: Box<dyn Iterator<Item = usize>> = if rightmost {
                Box::new((0..ids.len()).rev())
            } else {
                Box::new(0..ids.len())
            };
            let mut it = it;
            it.find(|&i| cfg.curves[&ids[i]].self_int == -1)
        };
        match minus_one(&order, &cur) {
            None => break,
            Some(i) => {
                cur = blow_down(&cur, &order[i])?;
                order.remove(i);
                steps.push(cur.clone());
            }
        }
    }

    let final_weights: Vec<i64> = order.iter().map(|c| -cur.curves[c].self_int).collect();
    if let Some(w) = final_weights.iter().find(|&&w| w <= 1) {
        return Err(K3Error::ChainNotLinear(format!(
            "a weight {} curve remains and is not contractible",
            -w
        )));
    }

    let outcome = if order.is_empty() {
        ChainOutcome::SmoothPoint
    } else if final_weights.iter().all(|&w| w == 2) {
        ChainOutcome::DuVal(final_weights.len() as u32)
    } else {
        let (q, q1) = hj_contract(&final_weights)?;
        ChainOutcome::Brieskorn(BrieskornType::new(q, q1)?)
    };

    // the final contraction removes the remaining curves without touching
    // the ledger; the singularity data lives on the outcome
    let removed_classes = order.len();
    let removed: std::collections::BTreeSet<CurveId> = order.iter().cloned().collect();
    for c in &removed {
        cur.curves.remove(c);
    }
    cur.edges
        .retain(|e| !removed.contains(&e.a) && !removed.contains(&e.b));
    let dead_points: Vec<PointId> = cur
        .points
        .values()
        .filter(|p| p.branches.iter().any(|b| removed.contains(&b.curve)))
        .map(|p| p.id.clone())
        .collect();
    for p in dead_points {
        cur.points.remove(&p);
    }

    Ok(ChainContraction {
        config: cur,
        outcome,
        removed_classes,
        final_weights,
        steps,
    })
}

fn check_linear(cfg: &Config, chain: &[CurveId]) -> Result<()> {
    for i in 0..chain.len() {
        for j in (i + 1)..chain.len() {
            let expected = if j == i + 1 { 1 } else { 0 };
            let found = cfg.pair_int(&chain[i], &chain[j]);
            if found != expected {
                return Err(K3Error::ChainNotLinear(format!(
                    "`{}`.`{}` = {found}, expected {expected}",
                    chain[i], chain[j]
                )));
            }
        }
        if !cfg.self_edges_of(&chain[i]).is_empty() {
            return Err(K3Error::ChainNotLinear(format!(
                "`{}` is singular",
                chain[i]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{ConfigBuilder, InvariantLedger};

    fn pid(cfg: &Config) -> PointId {
        cfg.points.keys().next().unwrap().clone()
    }

    #[test]
    fn free_point_blow_up() {
        // free point on a (-2)-curve: curve becomes (-3), exceptional meets once
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add("C", -2, 0);
        let mut cfg = b.build().unwrap();
        let p = cfg.fresh_point_id();
        cfg.points.insert(
            p.clone(),
            MarkedPoint {
                id: p.clone(),
                branches: vec![PointBranch {
                    curve: "C".into(),
                    mult: 1,
                }],
                contacts: BTreeMap::new(),
            },
        );
        let (out, rec) = blow_up(&cfg, &p).unwrap();
        assert_eq!(out.curves[&CurveId::from("C")].self_int, -3);
        assert_eq!(out.curves[&rec.exceptional].self_int, -1);
        assert_eq!(out.pair_int(&"C".into(), &rec.exceptional), 1);
        assert_eq!(out.ledger.k_squared, -1);
        assert_eq!(out.ledger.rho, 11);
        assert_eq!(out.ledger.euler, 13);
        assert_eq!(rec.multiplicity_assigned, 1);
    }

    #[test]
    fn node_blow_up_gives_delta_one_shape() {
        // nodal fiber component: proper transform (-4), exceptional meets it
        // twice at two distinct points, total transform D + 2H
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add("D", 0, 1).self_node("D");
        let cfg = b.build().unwrap();
        let (out, rec) = blow_up(&cfg, &pid(&cfg)).unwrap();
        let d: CurveId = "D".into();
        assert_eq!(out.curves[&d].self_int, -4);
        assert_eq!(out.curves[&d].genus, 0);
        assert_eq!(out.pair_int(&d, &rec.exceptional), 2);
        assert_eq!(rec.multiplicity_assigned, 2);
        // two distinct points
        assert_eq!(out.points.len(), 2);
        assert_eq!(crate::dualgraph::kodaira_type(&out), None); // prepared shape, not a fiber
        assert!(out.fiber_class_trivial());
    }

    #[test]
    fn cusp_blow_up_gives_tangent_exceptional() {
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add("D", 0, 1).self_cusp("D");
        let cfg = b.build().unwrap();
        let (out, rec) = blow_up(&cfg, &pid(&cfg)).unwrap();
        let d: CurveId = "D".into();
        assert_eq!(out.curves[&d].self_int, -4);
        assert_eq!(out.curves[&d].genus, 0);
        assert_eq!(rec.multiplicity_assigned, 2);
        // one point, contact order 2
        assert_eq!(out.points.len(), 1);
        let p = out.points.values().next().unwrap();
        assert_eq!(p.contact(0, 1), 2);
        assert_eq!(out.pair_int(&d, &rec.exceptional), 2);
        assert!(out.fiber_class_trivial());
    }

    #[test]
    fn isolated_minus_one_blow_down() {
        let mut b = ConfigBuilder::new(InvariantLedger::new(-1, 11, 13, true));
        b.add("E", -1, 0);
        let cfg = b.build().unwrap();
        let out = blow_down(&cfg, &"E".into()).unwrap();
        assert!(out.curves.is_empty());
        assert_eq!(out.ledger, InvariantLedger::rational_elliptic());
    }

    #[test]
    fn blow_down_two_disjoint_neighbors() {
        // (-1) meeting two disjoint (-4)-curves once each -> (-3)-(-3) chain
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -4, 0).add("B", -4, 0).add("E", -1, 0);
        b.meet("A", "E").meet("B", "E");
        let cfg = b.build().unwrap();
        let out = blow_down(&cfg, &"E".into()).unwrap();
        assert_eq!(out.curves[&CurveId::from("A")].self_int, -3);
        assert_eq!(out.curves[&CurveId::from("B")].self_int, -3);
        assert_eq!(out.pair_int(&"A".into(), &"B".into()), 1);
    }

    #[test]
    fn round_trip_node() {
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add("D", 0, 1).self_node("D");
        let cfg = b.build().unwrap();
        let (up, rec) = blow_up(&cfg, &pid(&cfg)).unwrap();
        let down = blow_down(&up, &rec.exceptional).unwrap();
        assert_eq!(down.canonical_key(), cfg.canonical_key());
    }

    #[test]
    fn round_trip_cusp() {
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add("D", 0, 1).self_cusp("D");
        let cfg = b.build().unwrap();
        let (up, rec) = blow_up(&cfg, &pid(&cfg)).unwrap();
        let down = blow_down(&up, &rec.exceptional).unwrap();
        assert_eq!(down.canonical_key(), cfg.canonical_key());
    }

    #[test]
    fn round_trip_tangency() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).contact("A", "B", 2);
        let cfg = b.build().unwrap();
        let (up, rec) = blow_up(&cfg, &pid(&cfg)).unwrap();
        // tangent pair stays together through one blow-up
        assert_eq!(up.pair_int(&"A".into(), &"B".into()), 1);
        let down = blow_down(&up, &rec.exceptional).unwrap();
        assert_eq!(down.canonical_key(), cfg.canonical_key());
    }

    #[test]
    fn contract_443_chain() {
        // (-4)-(-1)-(-4) contracts to C_{8,3}
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -4, 0).add("E", -1, 0).add("B", -4, 0);
        b.meet("A", "E").meet("E", "B");
        let cfg = b.build().unwrap();
        let chain = vec!["A".into(), "E".into(), "B".into()];
        let r = contract_chain(&cfg, &chain).unwrap();
        assert_eq!(
            r.outcome,
            ChainOutcome::Brieskorn(BrieskornType::new(8, 3).unwrap())
        );
        assert_eq!(r.final_weights, vec![3, 3]);
        assert_eq!(r.removed_classes, 2);
        assert!(r.config.curves.is_empty());
    }

    #[test]
    fn contract_single_minus_one() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("E", -1, 0);
        let cfg = b.build().unwrap();
        let r = contract_chain(&cfg, &["E".into()]).unwrap();
        assert_eq!(r.outcome, ChainOutcome::SmoothPoint);
        assert_eq!(r.removed_classes, 0);
    }

    #[test]
    fn contract_rejects_nonlinear() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).add("C", -2, 0);
        b.meet("A", "B").meet("B", "C").meet("A", "C");
        let cfg = b.build().unwrap();
        let r = contract_chain(&cfg, &["A".into(), "B".into(), "C".into()]);
        assert!(matches!(r, Err(K3Error::ChainNotLinear(_))));
    }

    #[test]
    fn contract_rejects_noncontractible_weight() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("Z", 0, 0).meet("A", "Z");
        let cfg = b.build().unwrap();
        let r = contract_chain(&cfg, &["A".into(), "Z".into()]);
        assert!(matches!(r, Err(K3Error::ChainNotLinear(_))));
    }

    #[test]
    fn blow_up_unknown_point() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0);
        let cfg = b.build().unwrap();
        assert!(matches!(
            blow_up(&cfg, &"nowhere".into()),
            Err(K3Error::UnknownPoint(_))
        ));
    }

    #[test]
    fn contract_order_independent() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        let ids = ["A", "E1", "B", "E2", "C"];
        for id in ids {
            b.add(id, if id.starts_with('E') { -1 } else { -4 }, 0);
        }
        for w in ids.windows(2) {
            b.meet(w[0], w[1]);
        }
        let cfg = b.build().unwrap();
        let chain: Vec<CurveId> = ids.iter().map(|s| CurveId::from(*s)).collect();
        let l = contract_chain(&cfg, &chain).unwrap();
        let r = contract_chain_rightmost(&cfg, &chain).unwrap();
        assert_eq!(l.outcome, r.outcome);
        assert_eq!(l.final_weights, r.final_weights);
        assert_eq!(
            l.outcome,
            ChainOutcome::Brieskorn(BrieskornType::new(12, 5).unwrap())
        );
    }
}
