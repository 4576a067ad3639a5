//! Kodaira fiber tables, Euler-sum and rank constraints for rational
//! elliptic fibrations, and fiber preparation by blow-up.

use crate::birational::blow_up;
use crate::double_cover::CoverCase;
use crate::dualgraph::{Config, ConfigBuilder, CurveId, InvariantLedger, KodairaType, PointId};
use crate::error::{K3Error, Result};

/// Table row for one Kodaira fiber type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberShape {
    pub kodaira: KodairaType,
    pub euler: i64,
    pub components: u32,
    /// The ramification count n of the type: 1, 2, 4 for II, III, IV and n
    /// for I_n (the number of (-4)-curves after preparation); 0 for the
    /// types that never ramify.
    pub branch_count: u32,
}

/// Euler number, component count and a canonical dual graph for a fiber
/// type. The configuration lives on a relatively minimal rational elliptic
/// surface (K^2 = 0, rho = 10, e = 12).
pub fn fiber_data(t: KodairaType) -> (FiberShape, Config) {
    let (euler, components, branch_count) = match t {
        KodairaType::Smooth => (0, 1, 0),
        KodairaType::I(n) => (n as i64, n.max(1), n),
        KodairaType::IStar(n) => (n as i64 + 6, n + 5, 0),
        KodairaType::II => (2, 1, 1),
        KodairaType::III => (3, 2, 2),
        KodairaType::IV => (4, 3, 4),
        KodairaType::IVStar => (8, 7, 0),
        KodairaType::IIIStar => (9, 8, 0),
        KodairaType::IIStar => (10, 9, 0),
    };
    let shape = FiberShape {
        kodaira: t,
        euler,
        components,
        branch_count,
    };
    (shape, reference_config(t))
}

fn reference_config(t: KodairaType) -> Config {
    let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
    match t {
        KodairaType::Smooth => {
            b.add("F", 0, 1);
        }
        KodairaType::I(1) => {
            b.add("D1", 0, 1).self_node("D1");
        }
        KodairaType::II => {
            b.add("D1", 0, 1).self_cusp("D1");
        }
        KodairaType::I(2) => {
            b.add("D1", -2, 0)
                .add("D2", -2, 0)
                .meet("D1", "D2")
                .meet("D1", "D2");
        }
        KodairaType::III => {
            b.add("D1", -2, 0).add("D2", -2, 0).contact("D1", "D2", 2);
        }
        KodairaType::IV => {
            b.add("D1", -2, 0).add("D2", -2, 0).add("D3", -2, 0);
            b.common_point(&["D1", "D2", "D3"]);
        }
        KodairaType::I(n) => {
            for i in 1..=n {
                b.add(format!("D{i}").as_str(), -2, 0);
            }
            for i in 1..=n {
                let j = if i == n { 1 } else { i + 1 };
                b.meet(format!("D{i}").as_str(), format!("D{j}").as_str());
            }
        }
        KodairaType::IStar(n) => {
            for i in 0..=n {
                b.add_mult(format!("c{i}").as_str(), -2, 0, 2);
                if i > 0 {
                    b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
                }
            }
            for (t, end) in [(1, 0), (2, 0), (3, n), (4, n)] {
                b.add(format!("t{t}").as_str(), -2, 0);
                b.meet(format!("t{t}").as_str(), format!("c{end}").as_str());
            }
        }
        KodairaType::IVStar => {
            b.add_mult("c", -2, 0, 3);
            for i in 1..=3 {
                b.add_mult(format!("m{i}").as_str(), -2, 0, 2);
                b.add(format!("t{i}").as_str(), -2, 0);
                b.meet("c", format!("m{i}").as_str());
                b.meet(format!("m{i}").as_str(), format!("t{i}").as_str());
            }
        }
        KodairaType::IIIStar => {
            b.add_mult("c", -2, 0, 4);
            for (arm, mults) in [("a", vec![3, 2, 1]), ("b", vec![3, 2, 1]), ("s", vec![2])] {
                let mut prev = "c".to_string();
                for (i, m) in mults.iter().enumerate() {
                    let id = format!("{arm}{i}");
                    b.add_mult(id.as_str(), -2, 0, *m);
                    b.meet(prev.as_str(), id.as_str());
                    prev = id;
                }
            }
        }
        KodairaType::IIStar => {
            b.add_mult("c", -2, 0, 6);
            for (arm, mults) in [
                ("a", vec![5, 4, 3, 2, 1]),
                ("b", vec![4, 2]),
                ("s", vec![3]),
            ] {
                let mut prev = "c".to_string();
                for (i, m) in mults.iter().enumerate() {
                    let id = format!("{arm}{i}");
                    b.add_mult(id.as_str(), -2, 0, *m);
                    b.meet(prev.as_str(), id.as_str());
                    prev = id;
                }
            }
        }
    }
    b.build().expect("reference fibers are valid")
}

/// Sum of fiber Euler numbers must be 12 on a rational elliptic surface.
pub fn check_euler_sum(types: &[KodairaType]) -> bool {
    types.iter().map(|t| fiber_data(*t).0.euler).sum::<i64>() == 12
}

/// Necessary rank condition: components of the singular fibers span at most
/// rho(S_c) - 2 = 8 independent classes, so sum (components - 1) <= 8.
pub fn check_rank_bound(types: &[KodairaType]) -> bool {
    rank_contribution(types) <= 8
}

pub fn rank_contribution(types: &[KodairaType]) -> i64 {
    types
        .iter()
        .map(|t| fiber_data(*t).0.components as i64 - 1)
        .sum()
}

/// All ordered ramification pairs (n1, n2) with n_i >= 1 and
/// 2 <= n1 + n2 <= 10.
pub fn enumerate_pairs() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for s in 2..=10u32 {
        for n1 in 1..s {
            out.push((n1, s - n1));
        }
    }
    out
}

/// A fiber prepared for the branch construction: the total transform after
/// blowing up all intersection points (and infinitely near points) of the
/// fiber, together with the case label it now fits.
#[derive(Clone, Debug)]
pub struct PreparedFiber {
    pub config: Config,
    /// All curves of the prepared fiber, proper transforms and exceptionals.
    pub fiber_curves: Vec<CurveId>,
    /// The (-4)-curves of the prepared fiber, flagged as branch curves.
    pub branch_curves: Vec<CurveId>,
    pub blow_ups: u32,
    pub case: CoverCase,
    /// One configuration per blow-up step.
    pub trace: Vec<Config>,
}

/// Prepare a reference fiber of the given type on a fresh rational elliptic
/// surface. II takes 1 blow-up, III takes 2, IV takes 4 and I_n takes n.
pub fn prepare_fiber(t: KodairaType) -> Result<PreparedFiber> {
    let (_, cfg) = fiber_data(t);
    let ids = cfg.curve_ids();
    prepare_fiber_in(&cfg, &ids, t)
}

/// Prepare a fiber sitting inside a larger configuration. `fiber_curves`
/// must be exactly the components of a fiber of the given type.
pub fn prepare_fiber_in(
    cfg: &Config,
    fiber_curves: &[CurveId],
    t: KodairaType,
) -> Result<PreparedFiber> {
    let members: std::collections::BTreeSet<CurveId> = fiber_curves.iter().cloned().collect();
    let sub = cfg.sub_config(&members);
    let found = crate::dualgraph::kodaira_type(&sub);
    if found != Some(t) {
        return Err(K3Error::ShapeMismatch {
            case: t.to_string(),
            reason: format!("fiber recognizes as {:?}", found.map(|k| k.to_string())),
        });
    }
    let case = match t {
        KodairaType::II => CoverCase::Alpha,
        KodairaType::III => CoverCase::Beta,
        KodairaType::IV => CoverCase::Gamma,
        KodairaType::I(n) => CoverCase::Delta(n),
        other => {
            return Err(K3Error::ShapeMismatch {
                case: other.to_string(),
                reason: "only II, III, IV and I_n fibers ramify".into(),
            })
        }
    };

    let fiber_points =
        |c: &Config, members: &std::collections::BTreeSet<CurveId>| -> Vec<PointId> {
            c.points
                .values()
                .filter(|p| {
                    let cs = p.curves();
                    !cs.is_empty()
                        && cs.iter().all(|x| members.contains(x))
                        && (p.branches.len() >= 2 || p.branches[0].mult >= 2)
                })
                .map(|p| p.id.clone())
                .collect()
        };

    let mut out = cfg.clone();
    let mut members = members;
    let mut trace = Vec::new();
    let mut blow_ups = 0u32;

    match t {
        KodairaType::II | KodairaType::I(_) => {
            // one blow-up per singular point of the fiber
            for p in fiber_points(&out, &members) {
                let (next, rec) = blow_up(&out, &p)?;
                out = next;
                members.insert(rec.exceptional);
                blow_ups += 1;
                trace.push(out.clone());
            }
        }
        KodairaType::III => {
            // the tangency point, then the resulting triple point
            for _ in 0..2 {
                let pts = fiber_points(&out, &members);
                let p = pts
                    .iter()
                    .max_by_key(|p| out.points[*p].branches.len())
                    .ok_or_else(|| K3Error::ShapeMismatch {
                        case: "beta".into(),
                        reason: "no point to blow up".into(),
                    })?
                    .clone();
                let (next, rec) = blow_up(&out, &p)?;
                out = next;
                members.insert(rec.exceptional);
                blow_ups += 1;
                trace.push(out.clone());
            }
        }
        KodairaType::IV => {
            // the common point, then the three intersections on the first
            // exceptional curve
            let pts = fiber_points(&out, &members);
            let triple = pts
                .iter()
                .find(|p| out.points[*p].branches.len() == 3)
                .ok_or_else(|| K3Error::ShapeMismatch {
                    case: "gamma".into(),
                    reason: "no common point".into(),
                })?
                .clone();
            let (next, rec) = blow_up(&out, &triple)?;
            out = next;
            let center = rec.exceptional.clone();
            members.insert(center.clone());
            blow_ups += 1;
            trace.push(out.clone());
            let on_center: Vec<PointId> = out
                .points_of(&center)
                .iter()
                .map(|p| p.id.clone())
                .collect();
            for p in on_center {
                let (next, rec) = blow_up(&out, &p)?;
                out = next;
                members.insert(rec.exceptional);
                blow_ups += 1;
                trace.push(out.clone());
            }
        }
        _ => unreachable!(),
    }

    // the branch curves are exactly the (-4)-curves of the prepared fiber
    let mut branch_curves = Vec::new();
    for id in &members {
        let node = out.curve_mut(id)?;
        if node.self_int == -4 {
            node.is_branch = true;
            branch_curves.push(id.clone());
        }
    }
    let expected_branch = fiber_data(t).0.branch_count;
    if branch_curves.len() != expected_branch as usize {
        return Err(K3Error::ShapeMismatch {
            case: case.to_string(),
            reason: format!(
                "prepared fiber has {} (-4)-curves, expected {expected_branch}",
                branch_curves.len()
            ),
        });
    }

    Ok(PreparedFiber {
        config: out,
        fiber_curves: members.into_iter().collect(),
        branch_curves,
        blow_ups,
        case,
        trace,
    })
}

/// dim |-2K| = 3K^2 for a log del Pezzo surface of index <= 2.
pub fn dim_anti_bicanonical(k_sq: i64) -> Result<i64> {
    if k_sq < 1 {
        return Err(K3Error::NotDelPezzo(k_sq));
    }
    Ok(3 * k_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::kodaira_type;

    #[test]
    fn table_rows() {
        let (s, cfg) = fiber_data(KodairaType::I(9));
        assert_eq!((s.euler, s.components), (9, 9));
        assert_eq!(kodaira_type(&cfg), Some(KodairaType::I(9)));

        let (s, _) = fiber_data(KodairaType::II);
        assert_eq!((s.euler, s.components), (2, 1));

        let (s, cfg) = fiber_data(KodairaType::IVStar);
        assert_eq!((s.euler, s.components), (8, 7));
        assert_eq!(kodaira_type(&cfg), Some(KodairaType::IVStar));
    }

    #[test]
    fn reference_configs_recognize_themselves() {
        let types = [
            KodairaType::Smooth,
            KodairaType::I(1),
            KodairaType::I(2),
            KodairaType::I(5),
            KodairaType::IStar(0),
            KodairaType::IStar(3),
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ];
        for t in types {
            let (_, cfg) = fiber_data(t);
            assert_eq!(kodaira_type(&cfg), Some(t), "{t}");
            assert!(cfg.fiber_class_trivial(), "{t} fiber class");
        }
    }

    #[test]
    fn euler_sums() {
        use KodairaType::*;
        assert!(check_euler_sum(&[I(9), I(1), I(1), I(1)]));
        assert!(!check_euler_sum(&[I(10)]));
        assert!(!check_euler_sum(&[]));
        assert!(check_euler_sum(&[II, I(10)]));
        assert!(!check_rank_bound(&[II, I(10)]));
        assert!(check_rank_bound(&[I(9), I(1), I(1), I(1)]));
    }

    #[test]
    fn pair_counts() {
        let pairs = enumerate_pairs();
        assert_eq!(pairs.len(), 45);
        assert!(pairs.contains(&(1, 9)));
        assert!(pairs.contains(&(2, 8)));
        assert!(pairs.contains(&(5, 5)));
        assert!(!pairs.contains(&(1, 10)));
        assert!(!pairs.contains(&(0, 5)));
        let unordered: std::collections::BTreeSet<(u32, u32)> = pairs
            .iter()
            .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        assert_eq!(unordered.len(), 25);
    }

    #[test]
    fn prepare_counts() {
        use KodairaType::*;
        for (t, count) in [(II, 1), (III, 2), (IV, 4), (I(1), 1), (I(7), 7)] {
            let p = prepare_fiber(t).unwrap();
            assert_eq!(p.blow_ups, count, "{t}");
            assert_eq!(p.config.ledger.k_squared, -(count as i64), "{t} ledger");
            assert!(p.config.fiber_class_trivial(), "{t} total transform");
        }
    }

    #[test]
    fn prepared_iii_shape() {
        let p = prepare_fiber(KodairaType::III).unwrap();
        let mut self_ints: Vec<i64> = p
            .fiber_curves
            .iter()
            .map(|c| p.config.curves[c].self_int)
            .collect();
        self_ints.sort_unstable();
        assert_eq!(self_ints, vec![-4, -4, -2, -1]);
        let mut mults: Vec<u32> = p
            .fiber_curves
            .iter()
            .map(|c| p.config.curves[c].mult)
            .collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 1, 2, 4]);
    }

    #[test]
    fn prepared_iv_shape() {
        let p = prepare_fiber(KodairaType::IV).unwrap();
        assert_eq!(p.branch_curves.len(), 4);
        let mut mults: Vec<u32> = p
            .fiber_curves
            .iter()
            .map(|c| p.config.curves[c].mult)
            .collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 1, 1, 3, 4, 4, 4]);
    }

    #[test]
    fn del_pezzo_dimension() {
        assert_eq!(dim_anti_bicanonical(1).unwrap(), 3);
        assert_eq!(dim_anti_bicanonical(9).unwrap(), 27);
        assert!(dim_anti_bicanonical(0).is_err());
    }

    #[test]
    fn cycle_fibers_are_numerically_trivial() {
        // an I_n class has Gram determinant 0 and multiplicity-weighted row
        // sums 0
        for n in 1..=19u32 {
            let (_, cfg) = fiber_data(KodairaType::I(n));
            assert_eq!(kodaira_type(&cfg), Some(KodairaType::I(n)));
            let m = cfg.intersection_matrix().matrix;
            assert_eq!(crate::dualgraph::gram_determinant(&m), 0, "I{n}");
            assert!(cfg.fiber_class_trivial(), "I{n}");
        }
    }

    #[test]
    fn admissible_multisets_have_admissible_designated_pairs() {
        // any multiset {I_n1, I_n2, I_1 fillers} passing the Euler sum and
        // the rank bound has its designated pair in enumerate_pairs()
        let pairs = enumerate_pairs();
        for n1 in 1..=11u32 {
            for n2 in 1..=11u32 {
                if n1 + n2 > 12 {
                    continue;
                }
                let mut multiset = vec![KodairaType::I(n1), KodairaType::I(n2)];
                multiset.extend((0..(12 - n1 - n2)).map(|_| KodairaType::I(1)));
                let admissible = check_euler_sum(&multiset) && check_rank_bound(&multiset);
                assert_eq!(
                    admissible,
                    pairs.contains(&(n1, n2)),
                    "designated pair ({n1},{n2})"
                );
            }
        }
    }
}
