//! ADE recognition on weighted dual graphs.

use super::{Config, CurveId};
use crate::error::{K3Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynkinType {
    A(u32),
    D(u32),
    E(u32),
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(m) => write!(f, "A{m}"),
            DynkinType::D(m) => write!(f, "D{m}"),
            DynkinType::E(m) => write!(f, "E{m}"),
        }
    }
}

/// Recognize the ADE label of a configuration: all curves must be
/// (-2)-curves of genus 0, all intersections transversal and simple, and the
/// graph the corresponding Dynkin tree. Disconnected input is an error,
/// a connected non-ADE graph returns `None`.
pub fn dynkin_type(cfg: &Config) -> Result<Option<DynkinType>> {
    if cfg.curves.is_empty() {
        return Err(K3Error::Disconnected);
    }
    if !cfg.is_connected() {
        return Err(K3Error::Disconnected);
    }
    for c in cfg.curves.values() {
        if c.self_int != -2 || c.genus != 0 {
            return Ok(None);
        }
    }
    // simple graph, transversal edges, no self-edges
    let mut deg: BTreeMap<&CurveId, u32> = cfg.curves.keys().map(|c| (c, 0)).collect();
    let mut seen_pairs = std::collections::BTreeSet::new();
    for e in &cfg.edges {
        if e.is_self_edge() || e.local_mult != 1 {
            return Ok(None);
        }
        if !seen_pairs.insert((e.a.clone(), e.b.clone())) {
            return Ok(None); // double edge
        }
        *deg.get_mut(&e.a).unwrap() += 1;
        *deg.get_mut(&e.b).unwrap() += 1;
    }
    let n = cfg.curves.len();
    if cfg.edges.len() != n - 1 {
        return Ok(None); // connected with a cycle
    }
    let mut deg3 = Vec::new();
    for (c, d) in &deg {
        match d {
            0..=2 => {}
            3 => deg3.push((*c).clone()),
            _ => return Ok(None),
        }
    }
    match deg3.len() {
        0 => Ok(Some(DynkinType::A(n as u32))),
        1 => {
            let center = &deg3[0];
            let mut legs: Vec<u32> = cfg
                .neighbors(center)
                .into_iter()
                .map(|start| {
                    let mut len = 1u32;
                    let mut prev = center.clone();
                    let mut cur = start;
                    loop {
                        let next: Vec<CurveId> = cfg
                            .neighbors(&cur)
                            .into_iter()
                            .filter(|x| *x != prev)
                            .collect();
                        match next.len() {
                            0 => break len,
                            1 => {
                                prev = cur;
                                cur = next.into_iter().next().unwrap();
                                len += 1;
                            }
                            _ => break u32::MAX, // another branch node; not ADE
                        }
                    }
                })
                .collect();
            legs.sort_unstable();
            if legs.contains(&u32::MAX) {
                return Ok(None);
            }
            Ok(match legs.as_slice() {
                [1, 1, k] => Some(DynkinType::D(k + 3)),
                [1, 2, 2] => Some(DynkinType::E(6)),
                [1, 2, 3] => Some(DynkinType::E(7)),
                [1, 2, 4] => Some(DynkinType::E(8)),
                _ => None,
            })
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{ConfigBuilder, InvariantLedger};

    fn chain(weights: &[i64]) -> Config {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        for (i, w) in weights.iter().enumerate() {
            b.add(format!("c{i}").as_str(), *w, 0);
        }
        for i in 1..weights.len() {
            b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
        }
        b.build().unwrap()
    }

    #[test]
    fn a8_chain() {
        assert_eq!(
            dynkin_type(&chain(&[-2; 8])).unwrap(),
            Some(DynkinType::A(8))
        );
    }

    #[test]
    fn d4_star() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("c", -2, 0)
            .add("l1", -2, 0)
            .add("l2", -2, 0)
            .add("l3", -2, 0);
        b.meet("c", "l1").meet("c", "l2").meet("c", "l3");
        let cfg = b.build().unwrap();
        assert_eq!(dynkin_type(&cfg).unwrap(), Some(DynkinType::D(4)));
    }

    #[test]
    fn wrong_weight_is_none() {
        assert_eq!(dynkin_type(&chain(&[-3, -2])).unwrap(), None);
    }

    #[test]
    fn disconnected_rejected() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("a", -2, 0).add("b", -2, 0);
        let cfg = b.build().unwrap();
        assert!(matches!(dynkin_type(&cfg), Err(K3Error::Disconnected)));
    }

    #[test]
    fn e_series() {
        // E8: path of 7 with one node hanging off the third from one end
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        for i in 0..7 {
            b.add(format!("c{i}").as_str(), -2, 0);
        }
        b.add("x", -2, 0);
        for i in 1..7 {
            b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
        }
        b.meet("x", "c2");
        let cfg = b.build().unwrap();
        assert_eq!(dynkin_type(&cfg).unwrap(), Some(DynkinType::E(8)));
    }
}
