//! Kodaira fiber type recognition from the weighted dual graph with
//! multiplicities and contact data.

use super::{Config, CurveId};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    /// A smooth (elliptic) fiber; also written I0.
    Smooth,
    /// I_n, n >= 1.
    I(u32),
    /// I_n^*, n >= 0.
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Smooth => write!(f, "smooth"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IIStar => write!(f, "II*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = crate::error::K3Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let t = match s {
            "smooth" | "I0" | "I_0" => KodairaType::Smooth,
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "II*" => KodairaType::IIStar,
            "III*" => KodairaType::IIIStar,
            "IV*" => KodairaType::IVStar,
            _ => {
                let body = s.strip_prefix("I_").or_else(|| s.strip_prefix('I'));
                match body {
                    Some(rest) if rest.ends_with('*') => {
                        let n: u32 = rest[..rest.len() - 1]
                            .parse()
                            .map_err(|_| crate::error::K3Error::UnknownKodairaType(s.into()))?;
                        KodairaType::IStar(n)
                    }
                    Some(rest) => {
                        let n: u32 = rest
                            .parse()
                            .map_err(|_| crate::error::K3Error::UnknownKodairaType(s.into()))?;
                        if n == 0 {
                            KodairaType::Smooth
                        } else {
                            KodairaType::I(n)
                        }
                    }
                    None => return Err(crate::error::K3Error::UnknownKodairaType(s.into())),
                }
            }
        };
        Ok(t)
    }
}

/// Recognize the Kodaira type of a connected configuration; `None` when the
/// graph matches no fiber shape.
pub fn kodaira_type(cfg: &Config) -> Option<KodairaType> {
    if cfg.curves.is_empty() || !cfg.is_connected() {
        return None;
    }
    if cfg.curves.len() == 1 {
        return irreducible_type(cfg);
    }
    // all reducible fibers consist of (-2)-curves of genus 0
    if cfg
        .curves
        .values()
        .any(|c| c.self_int != -2 || c.genus != 0)
    {
        return None;
    }
    if cfg.edges.iter().any(|e| e.is_self_edge()) {
        return None;
    }
    let n = cfg.curves.len();
    if n == 2 {
        let all_mult1 = cfg.curves.values().all(|c| c.mult == 1);
        if !all_mult1 {
            return None;
        }
        return match cfg.edges.as_slice() {
            [e] if e.local_mult == 2 => Some(KodairaType::III),
            [e, f] if e.local_mult == 1 && f.local_mult == 1 => Some(KodairaType::I(2)),
            _ => None,
        };
    }
    if cfg.edges.iter().any(|e| e.local_mult != 1) {
        return None;
    }
    // no double edges from here on
    let mut pair_seen = std::collections::BTreeSet::new();
    for e in &cfg.edges {
        if !pair_seen.insert((e.a.clone(), e.b.clone())) {
            return None;
        }
    }
    let deg: BTreeMap<CurveId, usize> = cfg
        .curves
        .keys()
        .map(|c| (c.clone(), cfg.edges.iter().filter(|e| e.touches(c)).count()))
        .collect();

    if cfg.edges.len() == n && deg.values().all(|&d| d == 2) {
        // a cycle: IV if all three intersections are the same point, else I_n
        if cfg.curves.values().any(|c| c.mult != 1) {
            return None;
        }
        if n == 3 {
            let pts: Vec<_> = cfg.edges.iter().map(|e| e.point.clone()).collect();
            if pts.iter().all(|p| p.is_some()) && pts.windows(2).all(|w| w[0] == w[1]) {
                return Some(KodairaType::IV);
            }
        }
        return Some(KodairaType::I(n as u32));
    }
    if cfg.edges.len() != n - 1 {
        return None; // not a tree
    }
    star_type(cfg, &deg)
}

fn irreducible_type(cfg: &Config) -> Option<KodairaType> {
    let c = cfg.curves.values().next().unwrap();
    if c.self_int != 0 || c.genus != 1 || c.mult != 1 {
        return None;
    }
    let selfs = cfg.self_edges_of(&c.id);
    match selfs.len() {
        0 => Some(KodairaType::Smooth),
        1 => {
            let p = cfg.points.get(selfs[0].point.as_ref()?)?;
            match p.branches.as_slice() {
                [b1, b2] if b1.mult == 1 && b2.mult == 1 => Some(KodairaType::I(1)),
                [b] if b.mult == 2 => Some(KodairaType::II),
                _ => None,
            }
        }
        _ => None,
    }
}

fn star_type(cfg: &Config, deg: &BTreeMap<CurveId, usize>) -> Option<KodairaType> {
    let deg4: Vec<CurveId> = deg
        .iter()
        .filter(|(_, &d)| d == 4)
        .map(|(c, _)| c.clone())
        .collect();
    let deg3: Vec<CurveId> = deg
        .iter()
        .filter(|(_, &d)| d == 3)
        .map(|(c, _)| c.clone())
        .collect();
    if deg.values().any(|&d| d > 4) {
        return None;
    }
    if deg4.len() == 1 && deg3.is_empty() {
        // I0*: one central multiplicity-2 curve, four multiplicity-1 tips
        let center = &deg4[0];
        if cfg.curves[center].mult != 2 || cfg.curves.len() != 5 {
            return None;
        }
        let tips_ok = cfg
            .neighbors(center)
            .iter()
            .all(|t| cfg.curves[t].mult == 1 && deg[t] == 1);
        return if tips_ok {
            Some(KodairaType::IStar(0))
        } else {
            None
        };
    }
    if !deg4.is_empty() {
        return None;
    }
    match deg3.len() {
        2 => {
            // I_n*, n >= 1: multiplicity-2 chain between the two degree-3
            // nodes, two multiplicity-1 tips at each end
            let (a, b) = (&deg3[0], &deg3[1]);
            let mut chain = vec![a.clone()];
            let mut prev: Option<CurveId> = None;
            let mut cur = a.clone();
            while &cur != b {
                let next: Vec<CurveId> = cfg
                    .neighbors(&cur)
                    .into_iter()
                    .filter(|x| Some(x) != prev.as_ref() && (deg[x] == 2 || x == b))
                    .collect();
                if next.len() != 1 {
                    return None;
                }
                prev = Some(cur);
                cur = next.into_iter().next().unwrap();
                chain.push(cur.clone());
            }
            if chain.iter().any(|c| cfg.curves[c].mult != 2) {
                return None;
            }
            let mut tips = 0;
            for end in [a, b] {
                for t in cfg.neighbors(end) {
                    if deg[&t] == 1 {
                        if cfg.curves[&t].mult != 1 {
                            return None;
                        }
                        tips += 1;
                    }
                }
            }
            if tips != 4 || cfg.curves.len() != chain.len() + 4 {
                return None;
            }
            Some(KodairaType::IStar(chain.len() as u32 - 1))
        }
        1 => {
            let center = &deg3[0];
            let mut arms: Vec<Vec<u32>> = cfg
                .neighbors(center)
                .into_iter()
                .map(|start| {
                    let mut arm = Vec::new();
                    let mut prev = center.clone();
                    let mut cur = start;
                    loop {
                        arm.push(cfg.curves[&cur].mult);
                        let next: Vec<CurveId> = cfg
                            .neighbors(&cur)
                            .into_iter()
                            .filter(|x| *x != prev)
                            .collect();
                        match next.len() {
                            0 => break,
                            1 => {
                                prev = cur;
                                cur = next.into_iter().next().unwrap();
                            }
                            _ => {
                                arm.push(u32::MAX);
                                break;
                            }
                        }
                    }
                    arm
                })
                .collect();
            arms.sort();
            let center_mult = cfg.curves[center].mult;
            let t = match (center_mult, arms.as_slice()) {
                (3, [x, y, z]) if x == &[2, 1] && y == &[2, 1] && z == &[2, 1] => {
                    KodairaType::IVStar
                }
                (4, [x, y, z]) if x == &[2] && y == &[3, 2, 1] && z == &[3, 2, 1] => {
                    KodairaType::IIIStar
                }
                (6, [x, y, z]) if x == &[3] && y == &[4, 2] && z == &[5, 4, 3, 2, 1] => {
                    KodairaType::IIStar
                }
                _ => return None,
            };
            Some(t)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{ConfigBuilder, InvariantLedger};

    #[test]
    fn smooth_fiber() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("E", 0, 1);
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::Smooth));
    }

    #[test]
    fn nodal_and_cuspidal() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("D", 0, 1).self_node("D");
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::I(1)));

        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("D", 0, 1).self_cusp("D");
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::II));
    }

    #[test]
    fn cycle_of_ten() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        for i in 0..10 {
            b.add(format!("c{i}").as_str(), -2, 0);
        }
        for i in 0..10 {
            b.meet(
                format!("c{i}").as_str(),
                format!("c{}", (i + 1) % 10).as_str(),
            );
        }
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::I(10)));
    }

    #[test]
    fn type_iii_and_i2() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).contact("A", "B", 2);
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::III));

        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0)
            .add("B", -2, 0)
            .meet("A", "B")
            .meet("A", "B");
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::I(2)));
    }

    #[test]
    fn type_iv_vs_i3() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0)
            .add("B", -2, 0)
            .add("C", -2, 0)
            .common_point(&["A", "B", "C"]);
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::IV));

        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).add("C", -2, 0);
        b.meet("A", "B").meet("B", "C").meet("A", "C");
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::I(3)));
    }

    #[test]
    fn iv_star_tree() {
        // central multiplicity-3 curve with three twigs of multiplicities 2, 1
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add_mult("c", -2, 0, 3);
        for i in 0..3 {
            b.add_mult(format!("m{i}").as_str(), -2, 0, 2);
            b.add(format!("t{i}").as_str(), -2, 0);
            b.meet("c", format!("m{i}").as_str());
            b.meet(format!("m{i}").as_str(), format!("t{i}").as_str());
        }
        assert_eq!(kodaira_type(&b.build().unwrap()), Some(KodairaType::IVStar));
    }

    #[test]
    fn i0_star() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add_mult("c", -2, 0, 2);
        for i in 0..4 {
            b.add(format!("t{i}").as_str(), -2, 0);
            b.meet("c", format!("t{i}").as_str());
        }
        assert_eq!(
            kodaira_type(&b.build().unwrap()),
            Some(KodairaType::IStar(0))
        );
    }

    #[test]
    fn parse_round_trip() {
        for s in ["I9", "I0*", "I4*", "II", "III*", "IV*", "smooth"] {
            let t: KodairaType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert_eq!("I0".parse::<KodairaType>().unwrap(), KodairaType::Smooth);
    }

    #[test]
    fn bad_mult_cycle_rejected() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        for i in 0..4 {
            b.add_mult(format!("c{i}").as_str(), -2, 0, 2);
        }
        for i in 0..4 {
            b.meet(
                format!("c{i}").as_str(),
                format!("c{}", (i + 1) % 4).as_str(),
            );
        }
        assert_eq!(kodaira_type(&b.build().unwrap()), None);
    }
}
