//! Decidability classification of membership problems for labelled graph
//! groups.
//!
//! The verdicts come from forbidden induced subgraphs. With every edge
//! label 1 the group is a right-angled Artin group: submonoid and
//! rational subset membership are decidable exactly when the graph has no
//! induced four-vertex path, and an induced four-cycle already makes
//! subgroup membership undecidable. With labels of size at least 2 the
//! known boundaries run through the one-labelled-edge path, the uniform
//! star, and the chorded square; everything else is reported as unknown.
//! Unknown is a first-class verdict, not a failure.

use crate::graph::{
    are_isomorphic, detect_star, find_induced_p3k, gamma2_graph, LabelledDigraph,
    UndirectedGraph,
};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Decidable,
    Undecidable,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Decidable => "decidable",
            Verdict::Undecidable => "undecidable",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Submonoid,
    Rational,
    Subgroup,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Submonoid => "submonoid",
            Problem::Rational => "rational",
            Problem::Subgroup => "subgroup",
        })
    }
}

/// Why a verdict holds: the structural rule that fired and the concrete
/// subgraph or family identification witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub problem: Problem,
    pub verdict: Verdict,
    pub rule: String,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub graph: LabelledDigraph,
    pub submonoid_membership: Verdict,
    pub rational_subset: Verdict,
    pub subgroup_membership: Verdict,
    pub certificates: Vec<Certificate>,
}

impl ClassificationReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let certs: Vec<serde_json::Value> = self
            .certificates
            .iter()
            .map(|c| {
                serde_json::json!({
                    "problem": c.problem.to_string(),
                    "verdict": c.verdict.to_string(),
                    "rule": c.rule,
                    "witness": c.witness,
                })
            })
            .collect();
        serde_json::json!({
            "graph": self.graph.to_json_value(),
            "submonoid_membership": self.submonoid_membership.to_string(),
            "rational_subset": self.rational_subset.to_string(),
            "subgroup_membership": self.subgroup_membership.to_string(),
            "certificates": certs,
        })
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("submonoid membership", Problem::Submonoid, self.submonoid_membership),
            ("rational subset membership", Problem::Rational, self.rational_subset),
            ("subgroup membership", Problem::Subgroup, self.subgroup_membership),
        ];
        for (label, problem, verdict) in rows {
            writeln!(f, "{label}: {verdict}")?;
            for c in self.certificates.iter().filter(|c| c.problem == problem) {
                writeln!(f, "  via {}: {}", c.rule, c.witness)?;
            }
        }
        Ok(())
    }
}

/// Ordered induced path on four vertices, if any.
fn find_induced_p4(u: &UndirectedGraph) -> Option<[usize; 4]> {
    let n = u.vertex_count();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d || a > d {
                        continue;
                    }
                    if u.has_edge(a, b)
                        && u.has_edge(b, c)
                        && u.has_edge(c, d)
                        && !u.has_edge(a, c)
                        && !u.has_edge(a, d)
                        && !u.has_edge(b, d)
                    {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Ordered induced four-cycle, if any.
fn find_induced_c4(u: &UndirectedGraph) -> Option<[usize; 4]> {
    let n = u.vertex_count();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    if a > b.min(c).min(d) || b > d {
                        continue;
                    }
                    if u.has_edge(a, b)
                        && u.has_edge(b, c)
                        && u.has_edge(c, d)
                        && u.has_edge(d, a)
                        && !u.has_edge(a, c)
                        && !u.has_edge(b, d)
                    {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

fn path_names(u: &UndirectedGraph, vs: &[usize]) -> String {
    vs.iter().map(|&v| u.vertices()[v].as_str()).collect::<Vec<_>>().join(" - ")
}

/// Runs every applicable rule, recording one certificate per firing; the
/// verdict for each problem is the first certificate's, or unknown.
pub fn classify_membership(g: &LabelledDigraph) -> ClassificationReport {
    let mut certs: Vec<Certificate> = Vec::new();
    let mut fire = |problem: Problem, verdict: Verdict, rule: &str, witness: String| {
        certs.push(Certificate { problem, verdict, rule: rule.to_string(), witness });
    };

    if g.all_labels_one() {
        let u = g.underlying_undirected();
        let p4 = find_induced_p4(&u);
        match &p4 {
            None => {
                let w = "no induced path on four vertices".to_string();
                fire(Problem::Submonoid, Verdict::Decidable, "p4-free", w.clone());
                fire(Problem::Rational, Verdict::Decidable, "p4-free", w);
            }
            Some(path) => {
                let w = format!("induced path {}", path_names(&u, path));
                fire(Problem::Submonoid, Verdict::Undecidable, "induced-p4", w.clone());
                fire(Problem::Rational, Verdict::Undecidable, "induced-p4", w);
            }
        }
        if let Some(c4) = find_induced_c4(&u) {
            let w = format!("induced four-cycle {}", path_names(&u, &c4));
            fire(Problem::Subgroup, Verdict::Undecidable, "induced-c4", w);
        } else if p4.is_none() {
            let w = "no induced four-vertex path or four-cycle".to_string();
            fire(Problem::Subgroup, Verdict::Decidable, "transitive-forest", w);
        }
    } else {
        if let Some((arms, label)) = detect_star(g) {
            debug_assert!(label >= 2, "a star with label 1 has all labels 1");
            if arms == 1 {
                let w = format!("the graph is a single edge with label {label}");
                fire(Problem::Submonoid, Verdict::Decidable, "one-arm-star", w.clone());
                fire(Problem::Rational, Verdict::Decidable, "one-arm-star", w);
            } else {
                let w = format!("the graph is the {arms}-arm star with edge label {label}");
                fire(Problem::Submonoid, Verdict::Undecidable, "bs-star", w.clone());
                fire(Problem::Rational, Verdict::Undecidable, "bs-star", w);
            }
        }
        if are_isomorphic(g, &gamma2_graph()) {
            let w = "isomorphic to the four-cycle with one chord of label 2, whose \
                     index 2 subgroup is the hub-and-square group"
                .to_string();
            fire(Problem::Subgroup, Verdict::Undecidable, "chorded-square", w);
        }
        if let Some(p) = find_induced_p3k(g) {
            let names = g.vertices();
            let w = format!(
                "induced {} - {} -[{}]-> {}",
                names[p.undirected_leaf], names[p.center], p.k, names[p.directed_leaf]
            );
            fire(Problem::Submonoid, Verdict::Undecidable, "induced-weighted-path", w);
        }
    }

    let verdict_for = |problem: Problem| {
        certs
            .iter()
            .find(|c| c.problem == problem)
            .map(|c| c.verdict)
            .unwrap_or(Verdict::Unknown)
    };
    ClassificationReport {
        graph: g.clone(),
        submonoid_membership: verdict_for(Problem::Submonoid),
        rational_subset: verdict_for(Problem::Rational),
        subgroup_membership: verdict_for(Problem::Subgroup),
        certificates: certs,
    }
}
