//! Branch-data validation, the fiber pullback case table, and canonical
//! resolutions of branched double covers with exact K3 certificates.
//!
//! Branch curves pull back by pi*D = 2C with C^2 = D^2/2. A non-branch
//! curve H either stays irreducible (pi*H = G, G^2 = 2H^2) or splits
//! (pi*H = G + G', with 2H^2 = (G+G')^2, so each piece has square
//! H^2 - G.G'). Split versus non-split is monodromy data the graph cannot
//! determine, so it comes from the case table: the alpha case splits H1,
//! the beta case splits H2, the gamma and delta cases split nothing, and
//! the epsilon case splits every component.

use crate::dualgraph::{
    kodaira_type, Config, ConfigBuilder, CurveId, InvariantLedger, KodairaType, SigmaMark,
};
use crate::error::{K3Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Downstairs configuration together with the set of curves forming the
/// branch divisor B.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub config: Config,
    pub branch_ids: BTreeSet<CurveId>,
}

impl BranchData {
    /// Builds branch data, synchronizing the per-curve branch flags with the
    /// given set.
    pub fn new(mut config: Config, branch_ids: BTreeSet<CurveId>) -> Result<Self> {
        for id in &branch_ids {
            if !config.curves.contains_key(id) {
                return Err(K3Error::UnknownCurve(id.clone()));
            }
        }
        for c in config.curves.values_mut() {
            c.is_branch = branch_ids.contains(&c.id);
        }
        Ok(BranchData { config, branch_ids })
    }

    /// Intersection of a curve with the whole branch divisor.
    pub fn branch_dot(&self, c: &CurveId) -> i64 {
        self.branch_ids
            .iter()
            .map(|d| {
                if d == c {
                    self.config.curves[c].self_int
                } else {
                    self.config.pair_int(c, d)
                }
            })
            .sum()
    }

    /// K.B by adjunction over the branch components.
    pub fn k_dot_branch(&self) -> i64 {
        self.branch_ids
            .iter()
            .map(|d| self.config.curves[d].k_dot())
            .sum()
    }

    pub fn branch_square(&self) -> i64 {
        self.branch_ids.iter().map(|d| self.branch_dot(d)).sum()
    }

    /// Euler number of the branch divisor: sum of 2 - 2g.
    pub fn branch_euler(&self) -> i64 {
        self.branch_ids
            .iter()
            .map(|d| 2 - 2 * self.config.curves[d].genus as i64)
            .sum()
    }

    /// (2K + B).C, which must vanish for every tracked curve.
    pub fn adjoint_dot(&self, c: &CurveId) -> i64 {
        2 * self.config.curves[c].k_dot() + self.branch_dot(c)
    }

    /// 4K^2 + 4K.B + B^2, which must vanish exactly.
    pub fn adjoint_square_times_four(&self) -> i64 {
        4 * self.config.ledger.k_squared + 4 * self.k_dot_branch() + self.branch_square()
    }
}

/// The five pullback cases for a prepared fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverCase {
    Alpha,
    Beta,
    Gamma,
    Delta(u32),
    Epsilon(u32),
}

impl fmt::Display for CoverCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverCase::Alpha => write!(f, "alpha"),
            CoverCase::Beta => write!(f, "beta"),
            CoverCase::Gamma => write!(f, "gamma"),
            CoverCase::Delta(n) => write!(f, "delta({n})"),
            CoverCase::Epsilon(s) => write!(f, "epsilon({s})"),
        }
    }
}

impl FromStr for CoverCase {
    type Err = K3Error;

    /// Accepts `alpha`, `beta`, `gamma`, `delta(n)` / `delta:n`,
    /// `epsilon(s)` / `epsilon:s`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parse_param = |body: &str| -> Result<u32> {
            body.trim_matches(|c| c == '(' || c == ')' || c == ':')
                .parse()
                .map_err(|_| K3Error::UnknownFormat(s.clone()))
        };
        match s.as_str() {
            "alpha" => Ok(CoverCase::Alpha),
            "beta" => Ok(CoverCase::Beta),
            "gamma" => Ok(CoverCase::Gamma),
            _ if s.starts_with("delta") => Ok(CoverCase::Delta(parse_param(&s[5..])?)),
            _ if s.starts_with("epsilon") => Ok(CoverCase::Epsilon(parse_param(&s[7..])?)),
            _ => Err(K3Error::UnknownFormat(s)),
        }
    }
}

impl CoverCase {
    /// Kodaira type of the fiber upstairs.
    pub fn upstairs_type(&self) -> KodairaType {
        match self {
            CoverCase::Alpha => KodairaType::IV,
            CoverCase::Beta => KodairaType::IStar(0),
            CoverCase::Gamma => KodairaType::IVStar,
            CoverCase::Delta(n) => KodairaType::I(2 * n),
            CoverCase::Epsilon(0) => KodairaType::Smooth,
            CoverCase::Epsilon(s) => KodairaType::I(2 * s),
        }
    }
}

/// Report of [`validate_branch`].
#[derive(Clone, Debug)]
pub struct BranchReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Necessary numeric conditions on branch data: the branch curves are
/// pairwise disjoint and smooth, (2K + B).C = 0 for every tracked curve,
/// and 4K^2 + 4K.B + B^2 = 0. This certifies the numeric shadow of the
/// anticanonical relation, not linear equivalence.
pub fn validate_branch(bd: &BranchData) -> BranchReport {
    let mut violations = Vec::new();
    for e in &bd.config.edges {
        if e.is_self_edge() {
            if bd.branch_ids.contains(&e.a) {
                violations.push(format!("branch curve `{}` is singular", e.a));
            }
        } else if bd.branch_ids.contains(&e.a) && bd.branch_ids.contains(&e.b) {
            violations.push(format!("branch not disjoint: `{}` meets `{}`", e.a, e.b));
        }
    }
    for c in bd.config.curves.keys() {
        let v = bd.adjoint_dot(c);
        if v != 0 {
            violations.push(format!("(2K+B).{c} = {v}, expected 0"));
        }
    }
    let sq = bd.adjoint_square_times_four();
    if sq != 0 {
        violations.push(format!("4K^2+4K.B+B^2 = {sq}, expected 0"));
    }
    BranchReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Result of pulling one prepared fiber back through the cover.
#[derive(Clone, Debug)]
pub struct FiberPullback {
    pub upstairs: Config,
    /// Downstairs id -> upstairs ids (two entries for split curves).
    pub id_map: BTreeMap<CurveId, Vec<CurveId>>,
    pub kodaira: KodairaType,
}

struct Roles {
    /// Branch-role curves in case order.
    d: Vec<CurveId>,
    /// Non-branch roles in case order.
    h: Vec<CurveId>,
}

fn shape_err(case: CoverCase, reason: impl Into<String>) -> K3Error {
    K3Error::ShapeMismatch {
        case: case.to_string(),
        reason: reason.into(),
    }
}

fn classify_curves(fiber: &Config, case: CoverCase) -> Result<Roles> {
    let find_all = |self_int: i64, mult: u32| -> Vec<CurveId> {
        fiber
            .curves
            .values()
            .filter(|c| c.self_int == self_int && c.mult == mult && c.genus == 0)
            .map(|c| c.id.clone())
            .collect()
    };
    match case {
        CoverCase::Alpha => {
            let d = find_all(-4, 1);
            let h = find_all(-1, 2);
            if fiber.curves.len() != 2 || d.len() != 1 || h.len() != 1 {
                return Err(shape_err(case, "need one (-4,1) and one (-1,2) curve"));
            }
            let edges: Vec<_> = fiber.edges.iter().collect();
            if edges.len() != 1 || edges[0].local_mult != 2 || edges[0].is_self_edge() {
                return Err(shape_err(case, "need a single order-2 contact"));
            }
            Ok(Roles { d, h })
        }
        CoverCase::Beta => {
            let d = find_all(-4, 1);
            let h1 = find_all(-1, 4);
            let h2 = find_all(-2, 2);
            if fiber.curves.len() != 4 || d.len() != 2 || h1.len() != 1 || h2.len() != 1 {
                return Err(shape_err(case, "need (-1,4), (-2,2) and two (-4,1) curves"));
            }
            if fiber.edges.len() != 3
                || fiber
                    .edges
                    .iter()
                    .any(|e| e.local_mult != 1 || e.is_self_edge())
            {
                return Err(shape_err(case, "need three transversal intersections"));
            }
            let center = &h1[0];
            for other in d.iter().chain(h2.iter()) {
                if fiber.pair_int(center, other) != 1 {
                    return Err(shape_err(
                        case,
                        "central (-1)-curve must meet every other curve once",
                    ));
                }
            }
            Ok(Roles {
                d,
                h: vec![h1[0].clone(), h2[0].clone()],
            })
        }
        CoverCase::Gamma => {
            let d4 = find_all(-4, 3);
            let hs = find_all(-1, 4);
            let tips = find_all(-4, 1);
            if fiber.curves.len() != 7 || d4.len() != 1 || hs.len() != 3 || tips.len() != 3 {
                return Err(shape_err(
                    case,
                    "need (-4,3), three (-1,4) and three (-4,1) curves",
                ));
            }
            if fiber.edges.len() != 6
                || fiber
                    .edges
                    .iter()
                    .any(|e| e.local_mult != 1 || e.is_self_edge())
            {
                return Err(shape_err(case, "need six transversal intersections"));
            }
            // pair each (-1)-curve with the unique tip it meets
            let mut d = vec![d4[0].clone()];
            let mut h = Vec::new();
            for hj in &hs {
                if fiber.pair_int(&d4[0], hj) != 1 {
                    return Err(shape_err(
                        case,
                        "every (-1)-curve must meet the central (-4)-curve",
                    ));
                }
                let t: Vec<&CurveId> = tips.iter().filter(|t| fiber.pair_int(hj, t) == 1).collect();
                if t.len() != 1 {
                    return Err(shape_err(
                        case,
                        "every (-1)-curve must meet exactly one tip",
                    ));
                }
                h.push(hj.clone());
                d.push(t[0].clone());
            }
            Ok(Roles { d, h })
        }
        CoverCase::Delta(n) => {
            if n < 1 {
                return Err(shape_err(case, "need n >= 1"));
            }
            let d = find_all(-4, 1);
            let h = find_all(-1, 2);
            if fiber.curves.len() != 2 * n as usize
                || d.len() != n as usize
                || h.len() != n as usize
            {
                return Err(shape_err(
                    case,
                    format!("need {n} (-4,1)- and {n} (-1,2)-curves"),
                ));
            }
            if fiber.edges.len() != 2 * n as usize
                || fiber
                    .edges
                    .iter()
                    .any(|e| e.local_mult != 1 || e.is_self_edge())
            {
                return Err(shape_err(case, "need an alternating transversal loop"));
            }
            if n == 1 {
                if fiber.pair_int(&d[0], &h[0]) != 2 {
                    return Err(shape_err(
                        case,
                        "n = 1 loop must meet at two distinct points",
                    ));
                }
                return Ok(Roles { d, h });
            }
            // walk the loop starting from any branch curve
            let mut d_order = vec![d[0].clone()];
            let mut h_order: Vec<CurveId> = Vec::new();
            let mut prev = d[0].clone();
            let mut cur = fiber
                .neighbors(&d[0])
                .into_iter()
                .next()
                .ok_or_else(|| shape_err(case, "loop walk failed"))?;
            loop {
                let is_h = h.contains(&cur);
                let expect_h = h_order.len() < d_order.len();
                if is_h != expect_h {
                    return Err(shape_err(case, "loop does not alternate"));
                }
                if is_h {
                    h_order.push(cur.clone());
                } else {
                    d_order.push(cur.clone());
                }
                if h_order.len() == n as usize && d_order.len() == n as usize {
                    break;
                }
                let nexts: Vec<CurveId> = fiber
                    .neighbors(&cur)
                    .into_iter()
                    .filter(|x| *x != prev)
                    .collect();
                if nexts.len() != 1 {
                    return Err(shape_err(case, "loop is not simple"));
                }
                prev = cur;
                cur = nexts.into_iter().next().unwrap();
            }
            // the loop must close up
            if fiber.pair_int(h_order.last().unwrap(), &d_order[0]) != 1 {
                return Err(shape_err(case, "loop walk does not close"));
            }
            Ok(Roles {
                d: d_order,
                h: h_order,
            })
        }
        CoverCase::Epsilon(s) => {
            if fiber.curves.values().any(|c| c.is_branch) {
                return Err(shape_err(case, "an epsilon fiber carries no branch curve"));
            }
            let expect = if s == 0 {
                KodairaType::Smooth
            } else {
                KodairaType::I(s)
            };
            let found = kodaira_type(fiber);
            if found != Some(expect) {
                return Err(shape_err(
                    case,
                    format!(
                        "fiber recognizes as {:?}, expected {expect}",
                        found.map(|k| k.to_string())
                    ),
                ));
            }
            let h = if s <= 1 {
                fiber.curves.keys().cloned().collect()
            } else {
                let mut order = vec![fiber.curves.keys().next().unwrap().clone()];
                let mut prev: Option<CurveId> = None;
                while order.len() < s as usize {
                    let cur = order.last().unwrap().clone();
                    let next = fiber
                        .neighbors(&cur)
                        .into_iter()
                        .find(|x| Some(x) != prev.as_ref())
                        .ok_or_else(|| shape_err(case, "cycle walk failed"))?;
                    prev = Some(cur);
                    order.push(next);
                }
                order
            };
            Ok(Roles { d: Vec::new(), h })
        }
    }
}

/// Pull a prepared fiber back through the double cover according to its
/// case. Branch (-4, mult m)-curves become fixed (-2, mult m)-curves; each
/// non-branch curve becomes one stable curve or a swapped pair per the case
/// table. The output carries sigma markings and is a Kodaira fiber of the
/// case's target type.
pub fn pullback_fiber(fiber: &Config, case: CoverCase) -> Result<FiberPullback> {
    let roles = classify_curves(fiber, case)?;
    // branch flags, when present, must sit exactly on the branch roles
    let flagged: BTreeSet<CurveId> = fiber
        .curves
        .values()
        .filter(|c| c.is_branch)
        .map(|c| c.id.clone())
        .collect();
    if !flagged.is_empty() {
        let d_set: BTreeSet<CurveId> = roles.d.iter().cloned().collect();
        if flagged != d_set {
            return Err(shape_err(
                case,
                "branch flags do not match the branch roles of the case",
            ));
        }
    }

    let c_of = |d: &CurveId| CurveId(format!("C_{d}"));
    let g_of = |h: &CurveId| CurveId(format!("G_{h}"));
    let g_split = |h: &CurveId| (CurveId(format!("G_{h}a")), CurveId(format!("G_{h}b")));

    let mut b = ConfigBuilder::new(InvariantLedger::neutral());
    let mut id_map: BTreeMap<CurveId, Vec<CurveId>> = BTreeMap::new();

    let add_c =
        |b: &mut ConfigBuilder, id_map: &mut BTreeMap<CurveId, Vec<CurveId>>, d: &CurveId| {
            let down = &fiber.curves[d];
            debug_assert_eq!(down.self_int % 2, 0);
            let c = c_of(d);
            b.add_full(
                c.0.as_str(),
                down.self_int / 2,
                down.genus,
                down.mult,
                false,
                SigmaMark::Fixed,
            );
            id_map.insert(d.clone(), vec![c.clone()]);
            c
        };

    match case {
        CoverCase::Alpha => {
            let (d, h) = (&roles.d[0], &roles.h[0]);
            let c = add_c(&mut b, &mut id_map, d);
            let (ga, gb) = g_split(h);
            b.add_full(
                ga.0.as_str(),
                -2,
                0,
                1,
                false,
                SigmaMark::Swapped(gb.clone()),
            );
            b.add_full(
                gb.0.as_str(),
                -2,
                0,
                1,
                false,
                SigmaMark::Swapped(ga.clone()),
            );
            b.common_point(&[c.0.as_str(), ga.0.as_str(), gb.0.as_str()]);
            id_map.insert(h.clone(), vec![ga, gb]);
        }
        CoverCase::Beta => {
            let (d1, d2) = (&roles.d[0], &roles.d[1]);
            let (h1, h2) = (&roles.h[0], &roles.h[1]);
            let c1 = add_c(&mut b, &mut id_map, d1);
            let c2 = add_c(&mut b, &mut id_map, d2);
            let g1 = g_of(h1);
            b.add_full(g1.0.as_str(), -2, 0, 2, false, SigmaMark::StableNotFixed);
            let (g2a, g2b) = g_split(h2);
            b.add_full(
                g2a.0.as_str(),
                -2,
                0,
                1,
                false,
                SigmaMark::Swapped(g2b.clone()),
            );
            b.add_full(
                g2b.0.as_str(),
                -2,
                0,
                1,
                false,
                SigmaMark::Swapped(g2a.clone()),
            );
            for tip in [&c1, &c2, &g2a, &g2b] {
                b.meet(g1.0.as_str(), tip.0.as_str());
            }
            id_map.insert(h1.clone(), vec![g1]);
            id_map.insert(h2.clone(), vec![g2a, g2b]);
        }
        CoverCase::Gamma => {
            let c4 = add_c(&mut b, &mut id_map, &roles.d[0]);
            for j in 0..3 {
                let (hj, dj) = (&roles.h[j], &roles.d[j + 1]);
                let cj = add_c(&mut b, &mut id_map, dj);
                let gj = g_of(hj);
                b.add_full(gj.0.as_str(), -2, 0, 2, false, SigmaMark::StableNotFixed);
                b.meet(c4.0.as_str(), gj.0.as_str());
                b.meet(gj.0.as_str(), cj.0.as_str());
                id_map.insert(hj.clone(), vec![gj]);
            }
        }
        CoverCase::Delta(n) => {
            let mut cs = Vec::new();
            let mut gs = Vec::new();
            for j in 0..n as usize {
                cs.push(add_c(&mut b, &mut id_map, &roles.d[j]));
                let g = g_of(&roles.h[j]);
                b.add_full(g.0.as_str(), -2, 0, 1, false, SigmaMark::StableNotFixed);
                id_map.insert(roles.h[j].clone(), vec![g.clone()]);
                gs.push(g);
            }
            for j in 0..n as usize {
                b.meet(cs[j].0.as_str(), gs[j].0.as_str());
                b.meet(gs[j].0.as_str(), cs[(j + 1) % n as usize].0.as_str());
            }
        }
        CoverCase::Epsilon(0) => {
            let f = &roles.h[0];
            let down = &fiber.curves[f];
            let e = CurveId(format!("E_{f}"));
            b.add_full(
                e.0.as_str(),
                0,
                down.genus,
                1,
                false,
                SigmaMark::StableNotFixed,
            );
            id_map.insert(f.clone(), vec![e]);
        }
        CoverCase::Epsilon(s) => {
            let s = s as usize;
            let mut ring: Vec<CurveId> = Vec::with_capacity(2 * s);
            for h in &roles.h {
                ring.push(g_split(h).0);
            }
            for h in &roles.h {
                ring.push(g_split(h).1);
            }
            for (j, h) in roles.h.iter().enumerate() {
                let (ga, gb) = (ring[j].clone(), ring[s + j].clone());
                b.add_full(
                    ga.0.as_str(),
                    -2,
                    0,
                    1,
                    false,
                    SigmaMark::Swapped(gb.clone()),
                );
                b.add_full(
                    gb.0.as_str(),
                    -2,
                    0,
                    1,
                    false,
                    SigmaMark::Swapped(ga.clone()),
                );
                id_map.insert(h.clone(), vec![ga, gb]);
            }
            for j in 0..2 * s {
                b.meet(ring[j].0.as_str(), ring[(j + 1) % (2 * s)].0.as_str());
            }
        }
    }

    let upstairs = b.build()?;
    let expected = case.upstairs_type();
    let found = kodaira_type(&upstairs);
    if found != Some(expected) {
        return Err(K3Error::InvalidConfig(format!(
            "pullback of case {case} recognizes as {:?}, expected {expected}",
            found.map(|k| k.to_string())
        )));
    }
    Ok(FiberPullback {
        upstairs,
        id_map,
        kodaira: expected,
    })
}

/// Cyclic role order of a prepared delta-shape fiber: the (-4)-curves and
/// the (-1)-curves, alternating around the loop.
pub fn delta_roles(fiber: &Config, n: u32) -> Result<(Vec<CurveId>, Vec<CurveId>)> {
    let r = classify_curves(fiber, CoverCase::Delta(n))?;
    Ok((r.d, r.h))
}

/// Split/non-split annotation for curves outside the declared fibers and
/// the branch divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackRule {
    Split,
    NonSplit,
}

/// A declared fiber inside the downstairs configuration.
#[derive(Clone, Debug)]
pub struct FiberDecl {
    pub name: String,
    pub curves: Vec<CurveId>,
}

/// Summary of the fixed locus of an upstairs configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocusSummary {
    pub m: usize,
    /// Sorted genera of the fixed curves.
    pub genera: Vec<u32>,
}

/// Count the sigma-fixed curves and their genera; fixed curves must be
/// pairwise disjoint.
pub fn fixed_locus_summary(cfg: &Config) -> Result<FixedLocusSummary> {
    for e in &cfg.edges {
        if e.is_self_edge() {
            continue;
        }
        if cfg.curves[&e.a].sigma_mark == SigmaMark::Fixed
            && cfg.curves[&e.b].sigma_mark == SigmaMark::Fixed
        {
            return Err(K3Error::FixedCurvesMeet(e.a.clone(), e.b.clone()));
        }
    }
    let mut genera: Vec<u32> = cfg
        .curves
        .values()
        .filter(|c| c.sigma_mark == SigmaMark::Fixed)
        .map(|c| c.genus)
        .collect();
    genera.sort_unstable();
    Ok(FixedLocusSummary {
        m: genera.len(),
        genera,
    })
}

/// Exact numeric certificate that the cover is a K3 surface.
#[derive(Clone, Debug)]
pub struct K3Certificate {
    /// (2K+B).C for every tracked downstairs curve.
    pub per_curve_adjoint: Vec<(CurveId, i64)>,
    /// 4K^2 + 4K.B + B^2.
    pub adjoint_square_times_four: i64,
    pub euler_upstairs: i64,
    pub passes: bool,
}

/// Full report of a canonical resolution run.
#[derive(Clone, Debug)]
pub struct CoverReport {
    pub euler_downstairs: i64,
    pub euler_branch: i64,
    pub euler_upstairs: i64,
    pub rho_downstairs: i64,
    pub k3: K3Certificate,
    pub fixed: FixedLocusSummary,
    /// Upstairs Kodaira type of each declared fiber.
    pub fiber_types: Vec<(String, KodairaType)>,
    pub enriques: bool,
    pub notes: Vec<String>,
}

/// `true` iff the numeric K3 certificate holds: (K + B/2).C = 0 on every
/// tracked curve, (K + B/2)^2 = 0, and upstairs Euler number exactly 24.
pub fn k3_check(report: &CoverReport) -> bool {
    report.k3.passes
}

/// Output of [`canonical_resolution`].
#[derive(Clone, Debug)]
pub struct CanonicalResolution {
    pub upstairs: Config,
    pub report: CoverReport,
    /// Downstairs id -> upstairs ids over the whole configuration.
    pub id_map: BTreeMap<CurveId, Vec<CurveId>>,
}

/// Build the double cover upstairs: branch curves halve their squares,
/// declared fibers are replaced by their case pullbacks, remaining curves
/// follow their split/non-split annotations. The upstairs Euler number is
/// 2e(S) - e(B); the report carries the K3 certificate computed downstairs.
pub fn canonical_resolution(
    bd: &BranchData,
    fibers: &[(FiberDecl, CoverCase)],
    rules: &BTreeMap<CurveId, PullbackRule>,
) -> Result<CanonicalResolution> {
    let br = validate_branch(bd);
    if !br.ok {
        return Err(K3Error::InvalidBranch(br.violations.join("; ")));
    }

    let e_down = bd.config.ledger.euler;
    let rho_down = bd.config.ledger.rho;

    if bd.branch_ids.is_empty() {
        // unramified case: the quotient is an Enriques surface, out of the
        // numeric scope of this calculus
        let fixed = FixedLocusSummary {
            m: 0,
            genera: Vec::new(),
        };
        let k3 = K3Certificate {
            per_curve_adjoint: Vec::new(),
            adjoint_square_times_four: 0,
            euler_upstairs: 2 * e_down,
            passes: false,
        };
        let report = CoverReport {
            euler_downstairs: e_down,
            euler_branch: 0,
            euler_upstairs: 2 * e_down,
            rho_downstairs: rho_down,
            k3,
            fixed,
            fiber_types: Vec::new(),
            enriques: true,
            notes: vec!["Enriques case: empty branch divisor, out of numeric scope".into()],
        };
        return Ok(CanonicalResolution {
            upstairs: Config::new(InvariantLedger::neutral()),
            report,
            id_map: BTreeMap::new(),
        });
    }

    // partition the downstairs curves
    let mut fiber_of: BTreeMap<CurveId, usize> = BTreeMap::new();
    for (idx, (decl, _)) in fibers.iter().enumerate() {
        for c in &decl.curves {
            bd.config.curve(c)?;
            if fiber_of.insert(c.clone(), idx).is_some() {
                return Err(K3Error::InvalidConfig(format!(
                    "curve `{c}` belongs to two fibers"
                )));
            }
        }
    }

    let mut upstairs = Config::new(InvariantLedger::neutral());
    let mut id_map: BTreeMap<CurveId, Vec<CurveId>> = BTreeMap::new();
    let mut fiber_types = Vec::new();

    // declared fibers via the case table
    for (decl, case) in fibers {
        let members: BTreeSet<CurveId> = decl.curves.iter().cloned().collect();
        let sub = bd.config.sub_config(&members);
        let pb = pullback_fiber(&sub, *case)?;
        upstairs.absorb(pb.upstairs.with_point_prefix(&format!("{}_", decl.name)))?;
        for (down, ups) in pb.id_map {
            id_map.insert(down, ups);
        }
        fiber_types.push((decl.name.clone(), pb.kodaira));
    }

    // branch curves outside fibers: pi*D = 2C with C^2 = D^2/2
    for d in &bd.branch_ids {
        if fiber_of.contains_key(d) {
            continue;
        }
        let down = &bd.config.curves[d];
        if down.self_int % 2 != 0 {
            return Err(K3Error::InvalidBranch(format!(
                "branch curve `{d}` has odd self-intersection {}",
                down.self_int
            )));
        }
        let c = CurveId(format!("C_{d}"));
        upstairs.curves.insert(
            c.clone(),
            crate::dualgraph::CurveNode {
                id: c.clone(),
                self_int: down.self_int / 2,
                genus: down.genus,
                mult: down.mult,
                is_branch: false,
                sigma_mark: SigmaMark::Fixed,
            },
        );
        id_map.insert(d.clone(), vec![c]);
    }

    // remaining curves need explicit annotations
    for (id, down) in &bd.config.curves {
        if fiber_of.contains_key(id) || bd.branch_ids.contains(id) {
            continue;
        }
        let rule = rules
            .get(id)
            .ok_or_else(|| K3Error::UnannotatedCurve(id.clone()))?;
        let hb = bd.branch_dot(id);
        match rule {
            PullbackRule::NonSplit => {
                if hb < 0 || hb % 2 != 0 || (down.genus == 0 && hb < 2) {
                    return Err(K3Error::InvalidBranch(format!(
                        "`{id}` cannot pull back irreducibly with B.{id} = {hb}"
                    )));
                }
                let genus_up = 2 * down.genus as i64 - 1 + hb / 2;
                let g = CurveId(format!("G_{id}"));
                upstairs.curves.insert(
                    g.clone(),
                    crate::dualgraph::CurveNode {
                        id: g.clone(),
                        self_int: 2 * down.self_int,
                        genus: genus_up as u32,
                        mult: down.mult,
                        is_branch: false,
                        sigma_mark: SigmaMark::StableNotFixed,
                    },
                );
                id_map.insert(id.clone(), vec![g]);
            }
            PullbackRule::Split => {
                if hb != 0 {
                    return Err(K3Error::InvalidBranch(format!(
                        "`{id}` is annotated split but meets the branch divisor ({hb})"
                    )));
                }
                let (ga, gb) = (CurveId(format!("G_{id}a")), CurveId(format!("G_{id}b")));
                for (this, other) in [(&ga, &gb), (&gb, &ga)] {
                    upstairs.curves.insert(
                        this.clone(),
                        crate::dualgraph::CurveNode {
                            id: this.clone(),
                            self_int: down.self_int,
                            genus: down.genus,
                            mult: down.mult,
                            is_branch: false,
                            sigma_mark: SigmaMark::Swapped(other.clone()),
                        },
                    );
                }
                id_map.insert(id.clone(), vec![ga, gb]);
            }
        }
    }

    // transport intersections that are not internal to a declared fiber
    for e in &bd.config.edges {
        if e.is_self_edge() {
            if !fiber_of.contains_key(&e.a) {
                return Err(K3Error::UnsupportedTransport {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    reason: "singular curve outside a declared fiber".into(),
                });
            }
            continue;
        }
        match (fiber_of.get(&e.a), fiber_of.get(&e.b)) {
            (Some(i), Some(j)) if i == j => continue, // handled by the case table
            (Some(_), Some(_)) => {
                return Err(K3Error::InvalidConfig(format!(
                    "declared fibers intersect at `{}`.`{}`",
                    e.a, e.b
                )))
            }
            _ => {}
        }
        let kind = |c: &CurveId| -> Result<(bool, Vec<CurveId>)> {
            let imgs = id_map
                .get(c)
                .ok_or_else(|| K3Error::UnknownCurve(c.clone()))?
                .clone();
            Ok((bd.branch_ids.contains(c), imgs))
        };
        let (a_branch, a_imgs) = kind(&e.a)?;
        let (b_branch, b_imgs) = kind(&e.b)?;
        if a_imgs.len() == 2 || b_imgs.len() == 2 {
            return Err(K3Error::UnsupportedTransport {
                a: e.a.clone(),
                b: e.b.clone(),
                reason: "a split curve meets another curve".into(),
            });
        }
        let lm = match (a_branch, b_branch) {
            (true, true) => unreachable!("branch disjointness was validated"),
            // G.C = H.D across the cover
            (true, false) | (false, true) => e.local_mult,
            // G.G' = 2 H.H'
            (false, false) => 2 * e.local_mult,
        };
        upstairs.edges.push(crate::dualgraph::Edge::new(
            a_imgs[0].clone(),
            b_imgs[0].clone(),
            lm,
            None,
        ));
    }

    // involution consistency: fixed curves are disjoint, and every stable
    // non-fixed rational curve meets the fixed locus with total multiplicity
    // exactly two
    let fixed = fixed_locus_summary(&upstairs)?;
    for c in upstairs.curves.values() {
        if c.sigma_mark != SigmaMark::StableNotFixed || c.genus != 0 {
            continue;
        }
        let total: i64 = upstairs
            .edges
            .iter()
            .filter(|e| !e.is_self_edge() && e.touches(&c.id))
            .filter(|e| upstairs.curves[e.other(&c.id)].sigma_mark == SigmaMark::Fixed)
            .map(|e| e.local_mult as i64)
            .sum();
        if total != 2 {
            return Err(K3Error::InvalidConfig(format!(
                "stable curve `{}` meets the fixed locus with multiplicity {total}, expected 2",
                c.id
            )));
        }
    }

    // exact invariants
    let e_branch = bd.branch_euler();
    let e_up = 2 * e_down - e_branch;
    let per_curve: Vec<(CurveId, i64)> = bd
        .config
        .curves
        .keys()
        .map(|c| (c.clone(), bd.adjoint_dot(c)))
        .collect();
    let sq4 = bd.adjoint_square_times_four();
    let passes = per_curve.iter().all(|(_, v)| *v == 0) && sq4 == 0 && e_up == 24;
    upstairs.ledger = InvariantLedger::new(sq4 / 2, rho_down, e_up, false);

    let report = CoverReport {
        euler_downstairs: e_down,
        euler_branch: e_branch,
        euler_upstairs: e_up,
        rho_downstairs: rho_down,
        k3: K3Certificate {
            per_curve_adjoint: per_curve,
            adjoint_square_times_four: sq4,
            euler_upstairs: e_up,
            passes,
        },
        fixed,
        fiber_types,
        enriques: false,
        notes: Vec::new(),
    };
    Ok(CanonicalResolution {
        upstairs,
        report,
        id_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::{fiber_data, prepare_fiber};

    #[test]
    fn alpha_pullback_is_iv() {
        let p = prepare_fiber(KodairaType::II).unwrap();
        let members: BTreeSet<CurveId> = p.fiber_curves.iter().cloned().collect();
        let sub = p.config.sub_config(&members);
        let pb = pullback_fiber(&sub, CoverCase::Alpha).unwrap();
        assert_eq!(pb.kodaira, KodairaType::IV);
        assert!(pb.upstairs.curves.values().all(|c| c.self_int == -2));
        assert!(pb.upstairs.fiber_class_trivial());
        let f = fixed_locus_summary(&pb.upstairs).unwrap();
        assert_eq!(f.m, 1);
    }

    #[test]
    fn delta5_pullback_is_i10() {
        let p = prepare_fiber(KodairaType::I(5)).unwrap();
        let members: BTreeSet<CurveId> = p.fiber_curves.iter().cloned().collect();
        let sub = p.config.sub_config(&members);
        let pb = pullback_fiber(&sub, CoverCase::Delta(5)).unwrap();
        assert_eq!(pb.kodaira, KodairaType::I(10));
        // alternating fixed / stable
        let fixed = pb
            .upstairs
            .curves
            .values()
            .filter(|c| c.sigma_mark == SigmaMark::Fixed)
            .count();
        let stable = pb
            .upstairs
            .curves
            .values()
            .filter(|c| c.sigma_mark == SigmaMark::StableNotFixed)
            .count();
        assert_eq!((fixed, stable), (5, 5));
        assert!(pb.upstairs.fiber_class_trivial());
    }

    #[test]
    fn epsilon1_pullback_is_i2_swapped() {
        let (_, nodal) = fiber_data(KodairaType::I(1));
        let pb = pullback_fiber(&nodal, CoverCase::Epsilon(1)).unwrap();
        assert_eq!(pb.kodaira, KodairaType::I(2));
        assert!(pb
            .upstairs
            .curves
            .values()
            .all(|c| matches!(c.sigma_mark, SigmaMark::Swapped(_)) && c.self_int == -2));
    }

    #[test]
    fn shape_mismatch_detected() {
        let (_, iv) = fiber_data(KodairaType::IV);
        assert!(matches!(
            pullback_fiber(&iv, CoverCase::Alpha),
            Err(K3Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn branch_disjointness_violation() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -4, 0).add("B", -4, 0).meet("A", "B");
        let cfg = b.build().unwrap();
        let bd =
            BranchData::new(cfg, ["A", "B"].iter().map(|s| CurveId::from(*s)).collect()).unwrap();
        let rep = validate_branch(&bd);
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| v.contains("disjoint")));
    }

    #[test]
    fn case_parse() {
        assert_eq!(
            "delta(3)".parse::<CoverCase>().unwrap(),
            CoverCase::Delta(3)
        );
        assert_eq!(
            "epsilon:0".parse::<CoverCase>().unwrap(),
            CoverCase::Epsilon(0)
        );
        assert_eq!("alpha".parse::<CoverCase>().unwrap(), CoverCase::Alpha);
    }

    /// The involution shadows on every pullback output: fixed curves are
    /// pairwise disjoint, every stable non-fixed rational curve meets the
    /// fixed locus with total multiplicity 2, swapped curves come in honest
    /// pairs, and branch curves halve their self-intersections.
    #[test]
    fn sigma_invariants_across_all_cases() {
        let mut inputs: Vec<(Config, CoverCase)> = Vec::new();
        for (t, case) in [
            (KodairaType::II, CoverCase::Alpha),
            (KodairaType::III, CoverCase::Beta),
            (KodairaType::IV, CoverCase::Gamma),
        ] {
            let p = prepare_fiber(t).unwrap();
            let members: BTreeSet<CurveId> = p.fiber_curves.iter().cloned().collect();
            inputs.push((p.config.sub_config(&members), case));
        }
        for n in 1..=10 {
            let p = prepare_fiber(KodairaType::I(n)).unwrap();
            let members: BTreeSet<CurveId> = p.fiber_curves.iter().cloned().collect();
            inputs.push((p.config.sub_config(&members), CoverCase::Delta(n)));
        }
        for s in 0..=4 {
            let t = if s == 0 {
                KodairaType::Smooth
            } else {
                KodairaType::I(s)
            };
            inputs.push((fiber_data(t).1, CoverCase::Epsilon(s)));
        }

        for (fiber, case) in inputs {
            let pb = pullback_fiber(&fiber, case).unwrap();
            let up = &pb.upstairs;
            fixed_locus_summary(up).unwrap_or_else(|e| panic!("{case}: {e}"));
            for c in up.curves.values() {
                match &c.sigma_mark {
                    SigmaMark::StableNotFixed if c.genus == 0 => {
                        let total: i64 = up
                            .edges
                            .iter()
                            .filter(|e| !e.is_self_edge() && e.touches(&c.id))
                            .filter(|e| up.curves[e.other(&c.id)].sigma_mark == SigmaMark::Fixed)
                            .map(|e| e.local_mult as i64)
                            .sum();
                        assert_eq!(total, 2, "{case}: stable curve {}", c.id);
                    }
                    SigmaMark::Swapped(partner) => {
                        assert_eq!(
                            up.curves[partner].sigma_mark,
                            SigmaMark::Swapped(c.id.clone()),
                            "{case}: swap partner of {}",
                            c.id
                        );
                    }
                    _ => {}
                }
            }
            for (down, ups) in &pb.id_map {
                if fiber.curves[down].self_int == -4 {
                    assert_eq!(ups.len(), 1, "{case}: branch image of {down}");
                    assert_eq!(
                        up.curves[&ups[0]].self_int,
                        fiber.curves[down].self_int / 2,
                        "{case}: C^2 = D^2/2 for {down}"
                    );
                }
            }
        }
    }

    #[test]
    fn empty_branch_is_flagged_enriques() {
        // a numerically 2K-trivial downstairs surface with an empty branch
        // divisor: classified as the unramified case, not certified
        let mut b = ConfigBuilder::new(InvariantLedger::new(0, 10, 12, false));
        b.add("A", -2, 0).add("B", -2, 0).meet("A", "B");
        let cfg = b.build().unwrap();
        let bd = BranchData::new(cfg, BTreeSet::new()).unwrap();
        let res = canonical_resolution(&bd, &[], &BTreeMap::new()).unwrap();
        assert!(res.report.enriques);
        assert!(!k3_check(&res.report));
        assert!(res.report.notes.iter().any(|n| n.contains("Enriques")));
        assert!(res.upstairs.curves.is_empty());
    }

    #[test]
    fn epsilon_zero_pulls_back_smooth() {
        let (_, smooth) = fiber_data(KodairaType::Smooth);
        let pb = pullback_fiber(&smooth, CoverCase::Epsilon(0)).unwrap();
        assert_eq!(pb.kodaira, KodairaType::Smooth);
        let c = pb.upstairs.curves.values().next().unwrap();
        assert_eq!((c.self_int, c.genus), (0, 1));
        assert_eq!(c.sigma_mark, SigmaMark::StableNotFixed);
    }
}
