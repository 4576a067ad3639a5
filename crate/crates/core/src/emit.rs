//! Bit-stable serialization of configurations: JSON (sorted ids, sorted
//! keys) and a DOT rendering with nodes labeled "self_int/mult".

use crate::dualgraph::{
    Config, CurveId, CurveNode, Edge, InvariantLedger, MarkedPoint, PointBranch, PointId, SigmaMark,
};
use crate::error::{K3Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Dot,
}

impl FromStr for EmitFormat {
    type Err = K3Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(EmitFormat::Json),
            "dot" => Ok(EmitFormat::Dot),
            other => Err(K3Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    curves: Vec<CurveDoc>,
    edges: Vec<EdgeDoc>,
    points: Vec<PointDoc>,
    ledger: InvariantLedger,
}

#[derive(Serialize, Deserialize)]
struct CurveDoc {
    id: CurveId,
    self_int: i64,
    genus: u32,
    mult: u32,
    is_branch: bool,
    sigma_mark: SigmaMark,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    a: CurveId,
    b: CurveId,
    local_mult: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    point: Option<PointId>,
}

#[derive(Serialize, Deserialize)]
struct PointDoc {
    id: PointId,
    branches: Vec<PointBranch>,
    contacts: Vec<ContactDoc>,
}

#[derive(Serialize, Deserialize)]
struct ContactDoc {
    pair: [usize; 2],
    order: u32,
}

fn to_doc(cfg: &Config) -> ConfigDoc {
    let curves = cfg
        .curves
        .values()
        .map(|c| CurveDoc {
            id: c.id.clone(),
            self_int: c.self_int,
            genus: c.genus,
            mult: c.mult,
            is_branch: c.is_branch,
            sigma_mark: c.sigma_mark.clone(),
        })
        .collect();
    let mut edges: Vec<EdgeDoc> = cfg
        .edges
        .iter()
        .map(|e| EdgeDoc {
            a: e.a.clone(),
            b: e.b.clone(),
            local_mult: e.local_mult,
            point: e.point.clone(),
        })
        .collect();
    edges.sort_by(|x, y| {
        (&x.a, &x.b, &x.point, x.local_mult).cmp(&(&y.a, &y.b, &y.point, y.local_mult))
    });
    let points = cfg
        .points
        .values()
        .map(|p| PointDoc {
            id: p.id.clone(),
            branches: p.branches.clone(),
            contacts: p
                .contacts
                .iter()
                .map(|(&(i, j), &order)| ContactDoc {
                    pair: [i, j],
                    order,
                })
                .collect(),
        })
        .collect();
    ConfigDoc {
        curves,
        edges,
        points,
        ledger: cfg.ledger.clone(),
    }
}

fn from_doc(doc: ConfigDoc) -> Result<Config> {
    let mut cfg = Config::new(doc.ledger);
    for c in doc.curves {
        cfg.curves.insert(
            c.id.clone(),
            CurveNode {
                id: c.id,
                self_int: c.self_int,
                genus: c.genus,
                mult: c.mult,
                is_branch: c.is_branch,
                sigma_mark: c.sigma_mark,
            },
        );
    }
    for p in doc.points {
        let mut contacts = BTreeMap::new();
        for c in p.contacts {
            let (i, j) = (c.pair[0].min(c.pair[1]), c.pair[0].max(c.pair[1]));
            contacts.insert((i, j), c.order);
        }
        cfg.points.insert(
            p.id.clone(),
            MarkedPoint {
                id: p.id,
                branches: p.branches,
                contacts,
            },
        );
    }
    for e in doc.edges {
        cfg.edges.push(Edge::new(e.a, e.b, e.local_mult, e.point));
    }
    let violations = cfg.validate();
    if violations.is_empty() {
        Ok(cfg)
    } else {
        Err(K3Error::InvalidConfig(violations.join("; ")))
    }
}

pub fn to_json(cfg: &Config) -> String {
    serde_json::to_string_pretty(&to_doc(cfg)).expect("config serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<Config> {
    let doc: ConfigDoc = serde_json::from_str(s).map_err(|e| K3Error::Json(e.to_string()))?;
    from_doc(doc)
}

pub fn to_dot(cfg: &Config) -> String {
    let mut out = String::from("graph config {\n  node [shape=circle];\n");
    for c in cfg.curves.values() {
        let color = match c.sigma_mark {
            SigmaMark::Fixed => ",color=red",
            SigmaMark::StableNotFixed => ",color=blue",
            SigmaMark::Swapped(_) => ",color=green",
            SigmaMark::Unmarked => "",
        };
        let shape = if c.is_branch { ",peripheries=2" } else { "" };
        out.push_str(&format!(
            "  \"{}\" [label=\"{}/{}\"{color}{shape}];\n",
            c.id, c.self_int, c.mult
        ));
    }
    let mut edges: Vec<&Edge> = cfg.edges.iter().collect();
    edges.sort_by_key(|e| (&e.a, &e.b, &e.point));
    for e in edges {
        if e.local_mult == 1 {
            out.push_str(&format!("  \"{}\" -- \"{}\";\n", e.a, e.b));
        } else {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                e.a, e.b, e.local_mult
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Spec-level entry point.
pub fn emit(cfg: &Config, format: EmitFormat) -> String {
    match format {
        EmitFormat::Json => to_json(cfg),
        EmitFormat::Dot => to_dot(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::ConfigBuilder;

    fn sample() -> Config {
        let mut b = ConfigBuilder::new(InvariantLedger::rational_elliptic());
        b.add_full("D", -4, 0, 1, true, SigmaMark::Unmarked);
        b.add_mult("H", -1, 0, 2);
        b.contact("D", "H", 2);
        b.build().unwrap()
    }

    #[test]
    fn json_round_trip_identity() {
        let cfg = sample();
        let s = to_json(&cfg);
        let back = from_json(&s).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(s, to_json(&back), "emission is byte-stable");
    }

    #[test]
    fn dot_has_one_node_per_curve() {
        let cfg = sample();
        let dot = to_dot(&cfg);
        let node_lines = dot
            .lines()
            .filter(|l| l.contains("label=\"") && !l.contains("--"))
            .count();
        assert_eq!(node_lines, 2);
        assert!(dot.contains("\"-4/1\""));
        assert!(dot.contains("\"-1/2\""));
    }

    #[test]
    fn unknown_format_rejected() {
        assert!(matches!(
            "yaml".parse::<EmitFormat>(),
            Err(K3Error::UnknownFormat(_))
        ));
    }
}
