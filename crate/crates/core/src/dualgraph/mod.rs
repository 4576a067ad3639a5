//! Weighted dual graphs of curve configurations.
//!
//! A [`Config`] is the core object of the crate: a set of irreducible curves
//! with self-intersections, genera and multiplicities, joined by edges that
//! record pairwise intersection numbers point by point. Marked points carry
//! the local data (branch multiplicities, contact orders) that blow-ups need;
//! the [`InvariantLedger`] carries the exact numerical invariants of the
//! ambient surface.

mod dynkin;
mod kodaira;
pub mod matrix;

pub use dynkin::{dynkin_type, DynkinType};
pub use kodaira::{kodaira_type, KodairaType};
pub use matrix::{is_negative_definite, IntMatrix};

/// Exact determinant of a Gram matrix.
pub fn gram_determinant(m: &matrix::IntMatrix) -> i128 {
    matrix::determinant(m)
}

use crate::error::{K3Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier of a curve in a configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveId(pub String);

/// Identifier of a marked point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub String);

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
impl fmt::Debug for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveId({})", self.0)
    }
}
impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointId({})", self.0)
    }
}
impl From<&str> for CurveId {
    fn from(s: &str) -> Self {
        CurveId(s.to_string())
    }
}
impl From<String> for CurveId {
    fn from(s: String) -> Self {
        CurveId(s)
    }
}
impl From<&str> for PointId {
    fn from(s: &str) -> Self {
        PointId(s.to_string())
    }
}

/// How the covering involution acts on a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMark {
    /// The curve is pointwise fixed.
    Fixed,
    /// The curve is mapped to itself but not pointwise fixed.
    StableNotFixed,
    /// The curve is exchanged with its partner.
    Swapped(CurveId),
    Unmarked,
}

/// One irreducible curve of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveNode {
    pub id: CurveId,
    /// Self-intersection number.
    pub self_int: i64,
    /// Arithmetic genus. A nodal or cuspidal rational curve has genus 1 here;
    /// the singularity itself is recorded on a marked point.
    pub genus: u32,
    /// Multiplicity in the divisor or fiber being tracked.
    pub mult: u32,
    /// Member of the double-cover branch divisor B.
    pub is_branch: bool,
    pub sigma_mark: SigmaMark,
}

impl CurveNode {
    /// K.C derived by adjunction: 2g - 2 - C^2.
    pub fn k_dot(&self) -> i64 {
        2 * self.genus as i64 - 2 - self.self_int
    }
}

/// An intersection point of two curves (or a singular point of one curve,
/// encoded as a self-pair). `local_mult` is the local intersection
/// multiplicity at this point; the total intersection number of two curves is
/// the sum of `local_mult` over their shared edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: CurveId,
    pub b: CurveId,
    pub local_mult: u32,
    pub point: Option<PointId>,
}

impl Edge {
    pub fn new(a: CurveId, b: CurveId, local_mult: u32, point: Option<PointId>) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Edge {
            a,
            b,
            local_mult,
            point,
        }
    }

    pub fn is_self_edge(&self) -> bool {
        self.a == self.b
    }

    pub fn touches(&self, c: &CurveId) -> bool {
        &self.a == c || &self.b == c
    }

    pub fn other(&self, c: &CurveId) -> &CurveId {
        if &self.a == c {
            &self.b
        } else {
            &self.a
        }
    }
}

/// One local branch of a curve at a marked point (`mult` is the multiplicity
/// of the branch: 1 = smooth, 2 = ordinary cusp-like).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointBranch {
    pub curve: CurveId,
    pub mult: u32,
}

/// A marked point with its branches and pairwise contact orders
/// (1 = transversal, 2 = tangent, ...). Contact keys are pairs of indices
/// into `branches`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub id: PointId,
    pub branches: Vec<PointBranch>,
    pub contacts: BTreeMap<(usize, usize), u32>,
}

impl MarkedPoint {
    pub fn contact(&self, i: usize, j: usize) -> u32 {
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.contacts.get(&key).unwrap_or(&1)
    }

    /// Multiplicity of a curve at this point: the sum of its branch mults.
    pub fn curve_multiplicity(&self, c: &CurveId) -> u32 {
        self.branches
            .iter()
            .filter(|b| &b.curve == c)
            .map(|b| b.mult)
            .sum()
    }

    pub fn curves(&self) -> BTreeSet<CurveId> {
        self.branches.iter().map(|b| b.curve.clone()).collect()
    }

    /// Local intersection multiplicity of two distinct branches:
    /// m_i * m_j + (contact - 1).
    pub fn branch_intersection(&self, i: usize, j: usize) -> u32 {
        self.branches[i].mult * self.branches[j].mult + (self.contact(i, j) - 1)
    }

    /// The delta-invariant contribution of one curve's branches at this point
    /// (1 for a node or an ordinary cusp).
    pub fn delta_of(&self, c: &CurveId) -> u32 {
        let idx: Vec<usize> = (0..self.branches.len())
            .filter(|&i| &self.branches[i].curve == c)
            .collect();
        let mut delta = 0;
        for (k, &i) in idx.iter().enumerate() {
            let m = self.branches[i].mult;
            delta += m * (m - 1) / 2;
            for &j in &idx[k + 1..] {
                delta += self.branch_intersection(i, j);
            }
        }
        delta
    }
}

/// Exact scalar invariants of the ambient surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantLedger {
    pub k_squared: i64,
    pub rho: i64,
    pub euler: i64,
    #[serde(rename = "rational")]
    pub rational_surface: bool,
}

impl InvariantLedger {
    pub fn new(k_squared: i64, rho: i64, euler: i64, rational_surface: bool) -> Self {
        InvariantLedger {
            k_squared,
            rho,
            euler,
            rational_surface,
        }
    }

    /// A relatively minimal rational elliptic surface: K^2 = 0, rho = 10, e = 12.
    pub fn rational_elliptic() -> Self {
        InvariantLedger::new(0, 10, 12, true)
    }

    /// Neutral base for abstract exceptional configurations that are not tied
    /// to a particular ambient surface; only ledger deltas are meaningful.
    pub fn neutral() -> Self {
        InvariantLedger::new(0, 0, 0, false)
    }

    pub fn check(&self) -> Result<()> {
        if self.rational_surface {
            if self.rho != 10 - self.k_squared {
                return Err(K3Error::InvalidConfig(format!(
                    "rational surface with rho = {} but 10 - K^2 = {}",
                    self.rho,
                    10 - self.k_squared
                )));
            }
            if self.euler != 12 - self.k_squared {
                return Err(K3Error::InvalidConfig(format!(
                    "rational surface with e = {} but 12 - K^2 = {}",
                    self.euler,
                    12 - self.k_squared
                )));
            }
        }
        Ok(())
    }

    pub fn blow_up(&mut self) {
        self.k_squared -= 1;
        self.rho += 1;
        self.euler += 1;
    }

    pub fn blow_down(&mut self) {
        self.k_squared += 1;
        self.rho -= 1;
        self.euler -= 1;
    }
}

/// A weighted dual graph of curves with marked points and the ambient
/// surface's invariant ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub curves: BTreeMap<CurveId, CurveNode>,
    pub edges: Vec<Edge>,
    pub points: BTreeMap<PointId, MarkedPoint>,
    pub ledger: InvariantLedger,
}

impl Config {
    pub fn new(ledger: InvariantLedger) -> Self {
        Config {
            curves: BTreeMap::new(),
            edges: Vec::new(),
            points: BTreeMap::new(),
            ledger,
        }
    }

    pub fn curve(&self, id: &CurveId) -> Result<&CurveNode> {
        self.curves
            .get(id)
            .ok_or_else(|| K3Error::UnknownCurve(id.clone()))
    }

    pub fn curve_mut(&mut self, id: &CurveId) -> Result<&mut CurveNode> {
        self.curves
            .get_mut(id)
            .ok_or_else(|| K3Error::UnknownCurve(id.clone()))
    }

    pub fn point(&self, id: &PointId) -> Result<&MarkedPoint> {
        self.points
            .get(id)
            .ok_or_else(|| K3Error::UnknownPoint(id.clone()))
    }

    pub fn curve_ids(&self) -> Vec<CurveId> {
        self.curves.keys().cloned().collect()
    }

    /// Total intersection number of two distinct curves.
    pub fn pair_int(&self, a: &CurveId, b: &CurveId) -> i64 {
        if a == b {
            return self.curves.get(a).map(|c| c.self_int).unwrap_or(0);
        }
        self.edges
            .iter()
            .filter(|e| !e.is_self_edge() && e.touches(a) && e.touches(b))
            .map(|e| e.local_mult as i64)
            .sum()
    }

    /// Curves meeting `c` (self excluded).
    pub fn neighbors(&self, c: &CurveId) -> BTreeSet<CurveId> {
        self.edges
            .iter()
            .filter(|e| !e.is_self_edge() && e.touches(c))
            .map(|e| e.other(c).clone())
            .collect()
    }

    pub fn edges_at_point(&self, p: &PointId) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.point.as_ref() == Some(p))
            .collect()
    }

    pub fn self_edges_of(&self, c: &CurveId) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.is_self_edge() && e.a == *c)
            .collect()
    }

    /// Marked points at which `c` has a branch.
    pub fn points_of(&self, c: &CurveId) -> Vec<&MarkedPoint> {
        self.points
            .values()
            .filter(|p| p.branches.iter().any(|b| &b.curve == c))
            .collect()
    }

    pub fn fresh_curve_id(&self, stem: &str) -> CurveId {
        let mut k = 1;
        loop {
            let id = CurveId(format!("{stem}{k}"));
            if !self.curves.contains_key(&id) {
                return id;
            }
            k += 1;
        }
    }

    pub fn fresh_point_id(&self) -> PointId {
        let mut k = 1;
        loop {
            let id = PointId(format!("p{k}"));
            if !self.points.contains_key(&id) {
                return id;
            }
            k += 1;
        }
    }

    /// The symmetric intersection matrix, rows/columns indexed by sorted
    /// curve ids. Diagonal entries are the self-intersections; self-edges do
    /// not contribute (the self-intersection number already accounts for
    /// singular points of the curve).
    pub fn intersection_matrix(&self) -> LabeledMatrix {
        let ids = self.curve_ids();
        let n = ids.len();
        let index: BTreeMap<&CurveId, usize> =
            ids.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = IntMatrix::zeros(n);
        for (i, id) in ids.iter().enumerate() {
            m.set(i, i, self.curves[id].self_int as i128);
        }
        for e in &self.edges {
            if e.is_self_edge() {
                continue;
            }
            let (i, j) = (index[&e.a], index[&e.b]);
            let v = m.at(i, j) + e.local_mult as i128;
            m.set(i, j, v);
            m.set(j, i, v);
        }
        LabeledMatrix { ids, matrix: m }
    }

    /// Is the underlying graph (curves and non-self edges) connected?
    pub fn is_connected(&self) -> bool {
        let ids = self.curve_ids();
        if ids.is_empty() {
            return true;
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![ids[0].clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            for n in self.neighbors(&c) {
                if !seen.contains(&n) {
                    stack.push(n);
                }
            }
        }
        seen.len() == ids.len()
    }

    /// The fiber-class relation: with v the multiplicity vector, G v = 0 and
    /// v^T G v = 0. Holds for the total transform of any fiber.
    pub fn fiber_class_trivial(&self) -> bool {
        let lm = self.intersection_matrix();
        let v: Vec<i128> = lm
            .ids
            .iter()
            .map(|id| self.curves[id].mult as i128)
            .collect();
        for i in 0..lm.ids.len() {
            let s: i128 = v
                .iter()
                .enumerate()
                .map(|(j, &vj)| lm.matrix.at(i, j) * vj)
                .sum();
            if s != 0 {
                return false;
            }
        }
        true
    }

    /// Induced sub-configuration on a set of curves. Edges with both
    /// endpoints inside are kept; marked points are kept only when all of
    /// their branches are inside (edges referencing a dropped point keep the
    /// intersection data and lose the point reference).
    pub fn sub_config(&self, ids: &BTreeSet<CurveId>) -> Config {
        let mut out = Config::new(self.ledger.clone());
        for id in ids {
            if let Some(c) = self.curves.get(id) {
                out.curves.insert(id.clone(), c.clone());
            }
        }
        let kept_points: BTreeSet<PointId> = self
            .points
            .values()
            .filter(|p| p.curves().iter().all(|c| ids.contains(c)))
            .map(|p| p.id.clone())
            .collect();
        for p in kept_points.iter() {
            out.points.insert(p.clone(), self.points[p].clone());
        }
        for e in &self.edges {
            if ids.contains(&e.a) && ids.contains(&e.b) {
                let mut e = e.clone();
                if let Some(p) = &e.point {
                    if !kept_points.contains(p) {
                        e.point = None;
                    }
                }
                out.edges.push(e);
            }
        }
        out
    }

    /// Relabel every curve and point id with a prefix. Used to instantiate
    /// several reference fibers inside one ambient configuration.
    pub fn with_prefix(&self, prefix: &str) -> Config {
        let rc = |c: &CurveId| CurveId(format!("{prefix}{c}"));
        let rp = |p: &PointId| PointId(format!("{prefix}{p}"));
        let mut out = Config::new(self.ledger.clone());
        for (id, c) in &self.curves {
            let mut c = c.clone();
            c.id = rc(id);
            if let SigmaMark::Swapped(partner) = &c.sigma_mark {
                c.sigma_mark = SigmaMark::Swapped(rc(partner));
            }
            out.curves.insert(c.id.clone(), c);
        }
        for e in &self.edges {
            out.edges.push(Edge::new(
                rc(&e.a),
                rc(&e.b),
                e.local_mult,
                e.point.as_ref().map(rp),
            ));
        }
        for (id, p) in &self.points {
            let mut p = p.clone();
            p.id = rp(id);
            for b in &mut p.branches {
                b.curve = rc(&b.curve);
            }
            out.points.insert(p.id.clone(), p);
        }
        out
    }

    /// Relabel only the marked-point ids with a prefix.
    pub fn with_point_prefix(&self, prefix: &str) -> Config {
        let rp = |p: &PointId| PointId(format!("{prefix}{p}"));
        let mut out = self.clone();
        out.points = self
            .points
            .values()
            .map(|p| {
                let mut p = p.clone();
                p.id = rp(&p.id);
                (p.id.clone(), p)
            })
            .collect();
        for e in &mut out.edges {
            e.point = e.point.as_ref().map(&rp);
        }
        out
    }

    /// Merge another configuration living on the same ambient surface.
    /// Ids must be disjoint and the ledgers equal.
    pub fn absorb(&mut self, other: Config) -> Result<()> {
        if self.ledger != other.ledger {
            return Err(K3Error::InvalidConfig(
                "cannot merge configs with different ledgers".into(),
            ));
        }
        for (id, c) in other.curves {
            if self.curves.contains_key(&id) {
                return Err(K3Error::InvalidConfig(format!(
                    "duplicate curve id `{id}` in merge"
                )));
            }
            self.curves.insert(id, c);
        }
        for (id, p) in other.points {
            if self.points.contains_key(&id) {
                return Err(K3Error::InvalidConfig(format!(
                    "duplicate point id `{id}` in merge"
                )));
            }
            self.points.insert(id, p);
        }
        self.edges.extend(other.edges);
        Ok(())
    }

    /// Structural validation; returns all violations.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.ledger.check() {
            out.push(e.to_string());
        }
        for (id, c) in &self.curves {
            if id != &c.id {
                out.push(format!("curve `{id}` stored under a different key"));
            }
            if c.mult == 0 {
                out.push(format!("curve `{id}` has multiplicity 0"));
            }
        }
        for e in &self.edges {
            if !self.curves.contains_key(&e.a) || !self.curves.contains_key(&e.b) {
                out.push(format!(
                    "edge `{}`.`{}` references a missing curve",
                    e.a, e.b
                ));
                continue;
            }
            if e.local_mult == 0 {
                out.push(format!("edge `{}`.`{}` has local multiplicity 0", e.a, e.b));
            }
            if let Some(p) = &e.point {
                match self.points.get(p) {
                    None => out.push(format!(
                        "edge `{}`.`{}` references missing point `{p}`",
                        e.a, e.b
                    )),
                    Some(mp) => {
                        let cs = mp.curves();
                        if !cs.contains(&e.a) || !cs.contains(&e.b) {
                            out.push(format!(
                                "point `{p}` does not carry branches of both `{}` and `{}`",
                                e.a, e.b
                            ));
                        }
                    }
                }
            }
        }
        for (id, p) in &self.points {
            if id != &p.id {
                out.push(format!("point `{id}` stored under a different key"));
            }
            for b in &p.branches {
                if !self.curves.contains_key(&b.curve) {
                    out.push(format!(
                        "point `{id}` references missing curve `{}`",
                        b.curve
                    ));
                }
                if b.mult == 0 {
                    out.push(format!("point `{id}` has a branch of multiplicity 0"));
                }
            }
            for (&(i, j), &k) in &p.contacts {
                if i >= p.branches.len() || j >= p.branches.len() || i >= j {
                    out.push(format!(
                        "point `{id}` has a malformed contact pair ({i},{j})"
                    ));
                }
                if k == 0 {
                    out.push(format!("point `{id}` has contact order 0"));
                }
            }
        }
        out
    }

    /// A representation that erases point names (but not point structure),
    /// for comparing configurations up to relabeling of marked points.
    pub fn canonical_key(&self) -> CanonicalConfig {
        let mut edges: Vec<(CurveId, CurveId, u32)> = self
            .edges
            .iter()
            .map(|e| (e.a.clone(), e.b.clone(), e.local_mult))
            .collect();
        edges.sort();
        let mut points: Vec<PointKey> = self
            .points
            .values()
            .map(|p| {
                let mut pairs = Vec::new();
                for i in 0..p.branches.len() {
                    for j in (i + 1)..p.branches.len() {
                        let (bi, bj) = (&p.branches[i], &p.branches[j]);
                        let (x, y) = if (bi.curve.clone(), bi.mult) <= (bj.curve.clone(), bj.mult) {
                            (bi, bj)
                        } else {
                            (bj, bi)
                        };
                        pairs.push((
                            x.curve.clone(),
                            x.mult,
                            y.curve.clone(),
                            y.mult,
                            p.contact(i, j),
                        ));
                    }
                    // lone branches matter too (cusps)
                    if p.branches.len() == 1 {
                        let b = &p.branches[i];
                        pairs.push((b.curve.clone(), b.mult, b.curve.clone(), b.mult, 0));
                    }
                }
                pairs.sort();
                pairs
            })
            .collect();
        points.sort();
        CanonicalConfig {
            curves: self.curves.clone(),
            edges,
            points,
            ledger: self.ledger.clone(),
        }
    }
}

/// Sorted branch-pair data of one marked point:
/// (curve, mult, curve, mult, contact order).
pub type PointKey = Vec<(CurveId, u32, CurveId, u32, u32)>;

/// Point-name-independent form of a configuration.
#[derive(Debug, PartialEq, Eq)]
pub struct CanonicalConfig {
    pub curves: BTreeMap<CurveId, CurveNode>,
    pub edges: Vec<(CurveId, CurveId, u32)>,
    pub points: Vec<PointKey>,
    pub ledger: InvariantLedger,
}

/// An intersection matrix together with its curve-id labels.
#[derive(Clone, Debug)]
pub struct LabeledMatrix {
    pub ids: Vec<CurveId>,
    pub matrix: IntMatrix,
}

/// Incremental construction of configurations.
pub struct ConfigBuilder {
    cfg: Config,
}

impl ConfigBuilder {
    pub fn new(ledger: InvariantLedger) -> Self {
        ConfigBuilder {
            cfg: Config::new(ledger),
        }
    }

    /// Continue building on top of an existing configuration.
    pub fn from_config(cfg: Config) -> Self {
        ConfigBuilder { cfg }
    }

    pub fn add(&mut self, id: impl Into<CurveId>, self_int: i64, genus: u32) -> &mut Self {
        self.add_full(id, self_int, genus, 1, false, SigmaMark::Unmarked)
    }

    pub fn add_mult(
        &mut self,
        id: impl Into<CurveId>,
        self_int: i64,
        genus: u32,
        mult: u32,
    ) -> &mut Self {
        self.add_full(id, self_int, genus, mult, false, SigmaMark::Unmarked)
    }

    pub fn add_full(
        &mut self,
        id: impl Into<CurveId>,
        self_int: i64,
        genus: u32,
        mult: u32,
        is_branch: bool,
        sigma_mark: SigmaMark,
    ) -> &mut Self {
        let id = id.into();
        let node = CurveNode {
            id: id.clone(),
            self_int,
            genus,
            mult,
            is_branch,
            sigma_mark,
        };
        self.cfg.curves.insert(id, node);
        self
    }

    pub fn set_branch(&mut self, id: impl Into<CurveId>) -> &mut Self {
        let id = id.into();
        if let Some(c) = self.cfg.curves.get_mut(&id) {
            c.is_branch = true;
        }
        self
    }

    pub fn set_sigma(&mut self, id: impl Into<CurveId>, mark: SigmaMark) -> &mut Self {
        let id = id.into();
        if let Some(c) = self.cfg.curves.get_mut(&id) {
            c.sigma_mark = mark;
        }
        self
    }

    /// Transversal intersection at a fresh marked point.
    pub fn meet(&mut self, a: impl Into<CurveId>, b: impl Into<CurveId>) -> &mut Self {
        self.contact(a, b, 1)
    }

    /// Intersection of two smooth branches with the given contact order
    /// (local intersection multiplicity = contact order).
    pub fn contact(
        &mut self,
        a: impl Into<CurveId>,
        b: impl Into<CurveId>,
        order: u32,
    ) -> &mut Self {
        let (a, b) = (a.into(), b.into());
        let pid = self.cfg.fresh_point_id();
        let mut contacts = BTreeMap::new();
        contacts.insert((0usize, 1usize), order);
        self.cfg.points.insert(
            pid.clone(),
            MarkedPoint {
                id: pid.clone(),
                branches: vec![
                    PointBranch {
                        curve: a.clone(),
                        mult: 1,
                    },
                    PointBranch {
                        curve: b.clone(),
                        mult: 1,
                    },
                ],
                contacts,
            },
        );
        self.cfg.edges.push(Edge::new(a, b, order, Some(pid)));
        self
    }

    /// A common point of several curves, pairwise transversal.
    pub fn common_point(&mut self, ids: &[&str]) -> &mut Self {
        let pid = self.cfg.fresh_point_id();
        let branches: Vec<PointBranch> = ids
            .iter()
            .map(|c| PointBranch {
                curve: CurveId::from(*c),
                mult: 1,
            })
            .collect();
        let mut contacts = BTreeMap::new();
        for i in 0..branches.len() {
            for j in (i + 1)..branches.len() {
                contacts.insert((i, j), 1);
            }
        }
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                self.cfg.edges.push(Edge::new(
                    ids[i].into(),
                    ids[j].into(),
                    1,
                    Some(pid.clone()),
                ));
            }
        }
        self.cfg.points.insert(
            pid.clone(),
            MarkedPoint {
                id: pid,
                branches,
                contacts,
            },
        );
        self
    }

    /// An ordinary node of a single curve: two smooth transversal branches.
    pub fn self_node(&mut self, c: impl Into<CurveId>) -> &mut Self {
        let c = c.into();
        let pid = self.cfg.fresh_point_id();
        let mut contacts = BTreeMap::new();
        contacts.insert((0usize, 1usize), 1);
        self.cfg.points.insert(
            pid.clone(),
            MarkedPoint {
                id: pid.clone(),
                branches: vec![
                    PointBranch {
                        curve: c.clone(),
                        mult: 1,
                    },
                    PointBranch {
                        curve: c.clone(),
                        mult: 1,
                    },
                ],
                contacts,
            },
        );
        self.cfg.edges.push(Edge::new(c.clone(), c, 1, Some(pid)));
        self
    }

    /// An ordinary cusp of a single curve: one branch of multiplicity 2.
    pub fn self_cusp(&mut self, c: impl Into<CurveId>) -> &mut Self {
        let c = c.into();
        let pid = self.cfg.fresh_point_id();
        self.cfg.points.insert(
            pid.clone(),
            MarkedPoint {
                id: pid.clone(),
                branches: vec![PointBranch {
                    curve: c.clone(),
                    mult: 2,
                }],
                contacts: BTreeMap::new(),
            },
        );
        self.cfg.edges.push(Edge::new(c.clone(), c, 1, Some(pid)));
        self
    }

    pub fn build(&mut self) -> Result<Config> {
        let cfg = self.cfg.clone();
        let violations = cfg.validate();
        if violations.is_empty() {
            Ok(cfg)
        } else {
            Err(K3Error::InvalidConfig(violations.join("; ")))
        }
    }
}

/// Intersection matrix of a configuration (spec-level entry point).
pub fn intersection_matrix(cfg: &Config) -> LabeledMatrix {
    cfg.intersection_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_curve_matrix() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("D", -4, 0);
        let cfg = b.build().unwrap();
        let m = cfg.intersection_matrix();
        assert_eq!(m.matrix.rows(), vec![vec![-4]]);
    }

    #[test]
    fn a2_gram() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).meet("A", "B");
        let cfg = b.build().unwrap();
        let m = cfg.intersection_matrix();
        assert_eq!(m.matrix.rows(), vec![vec![-2, 1], vec![1, -2]]);
    }

    #[test]
    fn case_alpha_gram() {
        // touching (-1)- and (-4)-curve: order-2 contact
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("D", -4, 0)
            .add_mult("H", -1, 0, 2)
            .contact("D", "H", 2);
        let cfg = b.build().unwrap();
        let m = cfg.intersection_matrix();
        // ids sort as D < H
        assert_eq!(m.matrix.rows(), vec![vec![-4, 2], vec![2, -1]]);
    }

    #[test]
    fn rational_ledger_consistency() {
        assert!(InvariantLedger::rational_elliptic().check().is_ok());
        let bad = InvariantLedger::new(0, 9, 12, true);
        assert!(bad.check().is_err());
    }

    #[test]
    fn sub_config_drops_external_point_refs() {
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0).add("B", -2, 0).add("C", -2, 0);
        b.meet("A", "B").meet("B", "C");
        let cfg = b.build().unwrap();
        let ids: BTreeSet<CurveId> = ["A", "B"].iter().map(|s| CurveId::from(*s)).collect();
        let sub = cfg.sub_config(&ids);
        assert_eq!(sub.curves.len(), 2);
        assert_eq!(sub.edges.len(), 1);
        assert_eq!(sub.points.len(), 1);
    }

    #[test]
    fn fiber_class_trivial_for_i2_shape() {
        // two (-2)-curves meeting twice: Kodaira I2, multiplicities 1
        let mut b = ConfigBuilder::new(InvariantLedger::neutral());
        b.add("A", -2, 0)
            .add("B", -2, 0)
            .meet("A", "B")
            .meet("A", "B");
        let cfg = b.build().unwrap();
        assert!(cfg.fiber_class_trivial());
    }
}
