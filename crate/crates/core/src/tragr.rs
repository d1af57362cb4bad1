//! Trace graphs (tragrs): interfaced port graphs tracking what happens to
//! every letter occurrence along a computation.
//!
//! The interface is kept implicit: a tragr stores its source and target
//! strings, one node per rule occurrence, and letter-typed edges. Every
//! source position, target position and rule port is the endpoint of
//! exactly one edge. Edges run from source positions or rule output ports
//! to rule input ports or target positions.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::proofterm::{MultistepReduction, Node, ProofTerm};
use crate::system::{LString, Letter, RewriteSystem, Rule};
use crate::toposort;

/// Where an edge starts or ends. Ports are numbered left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Endpoint {
    Src { index: usize },
    Tgt { index: usize },
    In { node: usize, port: usize },
    Out { node: usize, port: usize },
}

impl Endpoint {
    fn shifted(self, src: usize, tgt: usize, nodes: usize) -> Endpoint {
        match self {
            Endpoint::Src { index } => Endpoint::Src { index: index + src },
            Endpoint::Tgt { index } => Endpoint::Tgt { index: index + tgt },
            Endpoint::In { node, port } => Endpoint::In {
                node: node + nodes,
                port,
            },
            Endpoint::Out { node, port } => Endpoint::Out {
                node: node + nodes,
                port,
            },
        }
    }

    pub(crate) fn renumbered(self, map: &[usize]) -> Endpoint {
        match self {
            Endpoint::In { node, port } => Endpoint::In {
                node: map[node],
                port,
            },
            Endpoint::Out { node, port } => Endpoint::Out {
                node: map[node],
                port,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: Endpoint,
    pub to: Endpoint,
    pub letter: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tragr {
    source: LString,
    target: LString,
    nodes: Vec<Rule>,
    edges: Vec<Edge>,
}

impl Tragr {
    /// Builds a tragr, checking ranges, edge directions, degrees and letter
    /// agreement. Planarity is not checked here; see [`Tragr::check_readable`].
    pub fn from_parts(
        source: LString,
        target: LString,
        nodes: Vec<Rule>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let g = Tragr::from_parts_unchecked(source, target, nodes, edges);
        g.check_structure()?;
        Ok(g)
    }

    pub(crate) fn from_parts_unchecked(
        source: LString,
        target: LString,
        nodes: Vec<Rule>,
        mut edges: Vec<Edge>,
    ) -> Self {
        edges.sort_by_key(|e| (e.from, e.to));
        Tragr {
            source,
            target,
            nodes,
            edges,
        }
    }

    pub fn empty() -> Self {
        Tragr::ladder(&LString::empty())
    }

    /// The tragr of the empty computation on `s`.
    pub fn ladder(s: &LString) -> Self {
        let edges = s
            .iter()
            .enumerate()
            .map(|(i, l)| Edge {
                from: Endpoint::Src { index: i },
                to: Endpoint::Tgt { index: i },
                letter: l.clone(),
            })
            .collect();
        Tragr::from_parts_unchecked(s.clone(), s.clone(), Vec::new(), edges)
    }

    /// A single rule node wired to its lhs and rhs.
    pub fn rule(rule: &Rule) -> Self {
        let mut edges = Vec::new();
        for (i, l) in rule.lhs().iter().enumerate() {
            edges.push(Edge {
                from: Endpoint::Src { index: i },
                to: Endpoint::In { node: 0, port: i },
                letter: l.clone(),
            });
        }
        for (j, l) in rule.rhs().iter().enumerate() {
            edges.push(Edge {
                from: Endpoint::Out { node: 0, port: j },
                to: Endpoint::Tgt { index: j },
                letter: l.clone(),
            });
        }
        Tragr::from_parts_unchecked(
            rule.lhs().clone(),
            rule.rhs().clone(),
            vec![rule.clone()],
            edges,
        )
    }

    pub fn source(&self) -> &LString {
        &self.source
    }

    pub fn target(&self) -> &LString {
        &self.target
    }

    /// Rule labels indexed by node id.
    pub fn nodes(&self) -> &[Rule] {
        &self.nodes
    }

    /// Edges, sorted by origin.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges between two rule nodes, as `(from node, to node)` pairs.
    pub fn causal_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().filter_map(|e| match (e.from, e.to) {
            (Endpoint::Out { node: a, .. }, Endpoint::In { node: b, .. }) => Some((a, b)),
            _ => None,
        })
    }

    fn endpoint_letter(&self, ep: Endpoint) -> Option<&Letter> {
        match ep {
            Endpoint::Src { index } => self.source.get(index),
            Endpoint::Tgt { index } => self.target.get(index),
            Endpoint::In { node, port } => self.nodes.get(node)?.lhs().get(port),
            Endpoint::Out { node, port } => self.nodes.get(node)?.rhs().get(port),
        }
    }

    fn check_structure(&self) -> Result<()> {
        let bad = |m: String| Err(Error::NotPlanarOrIllFormed(m));
        let mut seen: HashMap<Endpoint, usize> = HashMap::new();
        for e in &self.edges {
            if !matches!(e.from, Endpoint::Src { .. } | Endpoint::Out { .. }) {
                return bad(format!("edge starts at input endpoint {:?}", e.from));
            }
            if !matches!(e.to, Endpoint::Tgt { .. } | Endpoint::In { .. }) {
                return bad(format!("edge ends at output endpoint {:?}", e.to));
            }
            for ep in [e.from, e.to] {
                match self.endpoint_letter(ep) {
                    None => return bad(format!("endpoint {ep:?} out of range")),
                    Some(l) if *l != e.letter => {
                        return bad(format!(
                            "edge letter {} disagrees with endpoint {ep:?}",
                            e.letter
                        ))
                    }
                    Some(_) => {}
                }
                *seen.entry(ep).or_default() += 1;
            }
        }
        if let Some((ep, _)) = seen.iter().find(|(_, &n)| n > 1) {
            return bad(format!("endpoint {ep:?} used by several edges"));
        }
        let expected = self.source.len()
            + self.target.len()
            + self
                .nodes
                .iter()
                .map(|r| r.lhs().len() + r.rhs().len())
                .sum::<usize>();
        if seen.len() != expected {
            return bad("dangling endpoint".to_string());
        }
        Ok(())
    }

    /// Renumbers nodes in read-back order (stage by stage, left to right).
    /// Two tragrs are the same up to isomorphism iff their canonical forms
    /// are structurally equal.
    pub fn canonicalize(&self) -> Result<Tragr> {
        let (_, order) = toposort::read_back(self)?;
        let mut map = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            map[old] = new;
        }
        let nodes = order.iter().map(|&old| self.nodes[old].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                from: e.from.renumbered(&map),
                to: e.to.renumbered(&map),
                letter: e.letter.clone(),
            })
            .collect();
        Ok(Tragr::from_parts_unchecked(
            self.source.clone(),
            self.target.clone(),
            nodes,
            edges,
        ))
    }

    /// Checks that the tragr reads back to a greedy multistep reduction whose
    /// evaluation reproduces it. Fails on cycles and crossing wires.
    pub fn check_readable(&self) -> Result<()> {
        let canonical = self.canonicalize()?;
        let reduction = toposort::ts(self)?;
        if eval_reduction(&reduction) != canonical {
            return Err(Error::NotPlanarOrIllFormed(
                "graph differs from the evaluation of its read-back".to_string(),
            ));
        }
        Ok(())
    }
}

/// Parallel composition.
pub fn juxt_tragr(g: &Tragr, h: &Tragr) -> Tragr {
    let (ds, dt, dn) = (g.source.len(), g.target.len(), g.nodes.len());
    let mut nodes = g.nodes.clone();
    nodes.extend(h.nodes.iter().cloned());
    let mut edges = g.edges.clone();
    edges.extend(h.edges.iter().map(|e| Edge {
        from: e.from.shifted(ds, dt, dn),
        to: e.to.shifted(ds, dt, dn),
        letter: e.letter.clone(),
    }));
    Tragr::from_parts_unchecked(
        g.source.concat(&h.source),
        g.target.concat(&h.target),
        nodes,
        edges,
    )
}

/// Serial composition: plugs the target of `g` into the source of `h` and
/// splices each pair of edges meeting at the intermediate interface.
pub fn vcomp_tragr(g: &Tragr, h: &Tragr) -> Result<Tragr> {
    if g.target != h.source {
        return Err(Error::NotComposable {
            left: g.target.clone(),
            right: h.source.clone(),
        });
    }
    let dn = g.nodes.len();
    let mut continuation = vec![None; h.source.len()];
    let mut edges = Vec::with_capacity(g.edges.len() + h.edges.len());
    for e in &h.edges {
        let to = e.to.shifted(0, 0, dn);
        match e.from {
            Endpoint::Src { index } => continuation[index] = Some(to),
            from => edges.push(Edge {
                from: from.shifted(0, 0, dn),
                to,
                letter: e.letter.clone(),
            }),
        }
    }
    for e in &g.edges {
        let to = match e.to {
            Endpoint::Tgt { index } => {
                continuation[index].expect("every source position has an edge")
            }
            to => to,
        };
        edges.push(Edge {
            from: e.from,
            to,
            letter: e.letter.clone(),
        });
    }
    let mut nodes = g.nodes.clone();
    nodes.extend(h.nodes.iter().cloned());
    Ok(Tragr::from_parts_unchecked(
        g.source.clone(),
        h.target.clone(),
        nodes,
        edges,
    ))
}

/// Interprets a proof term as a tragr.
pub fn eval(p: &ProofTerm) -> Tragr {
    match p.node() {
        Node::Empty => Tragr::empty(),
        Node::Letter(l) => Tragr::ladder(&LString::from_letters(vec![l.clone()])),
        Node::Rule(r) => Tragr::rule(r),
        Node::Juxt(a, b) => juxt_tragr(&eval(a), &eval(b)),
        Node::Comp(a, b) => vcomp_tragr(&eval(a), &eval(b)).expect("proof terms compose"),
    }
}

pub fn eval_reduction(r: &MultistepReduction) -> Tragr {
    eval(&r.to_term())
}

/// Equality up to renumbering of rule nodes.
pub fn tragr_eq(g: &Tragr, h: &Tragr) -> bool {
    if g.source != h.source || g.target != h.target {
        return false;
    }
    match (toposort::ts(g), toposort::ts(h)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TragrDoc {
    source: Vec<String>,
    target: Vec<String>,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    rule: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: Endpoint,
    to: Endpoint,
    letter: String,
}

/// JSON document for `g`.
pub fn serialize_tragr(g: &Tragr) -> String {
    let names = |s: &LString| s.iter().map(|l| l.name().to_string()).collect();
    let doc = TragrDoc {
        source: names(&g.source),
        target: names(&g.target),
        nodes: g
            .nodes
            .iter()
            .enumerate()
            .map(|(id, r)| NodeDoc {
                id,
                rule: r.name().to_string(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeDoc {
                from: e.from,
                to: e.to,
                letter: e.letter.name().to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tragr documents serialize")
}

/// Reads and fully validates a tragr document.
pub fn parse_tragr(text: &str, system: &RewriteSystem) -> Result<Tragr> {
    let doc: TragrDoc =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let letter = |name: &str| {
        system
            .letter(name)
            .cloned()
            .ok_or_else(|| Error::MalformedDocument(format!("unknown letter `{name}`")))
    };
    let string = |names: &[String]| names.iter().map(|n| letter(n)).collect::<Result<LString>>();
    let source = string(&doc.source)?;
    let target = string(&doc.target)?;

    let mut nodes: Vec<Option<Rule>> = vec![None; doc.nodes.len()];
    for n in &doc.nodes {
        let rule = system
            .rule(&n.rule)
            .cloned()
            .ok_or_else(|| Error::MalformedDocument(format!("unknown rule `{}`", n.rule)))?;
        match nodes.get_mut(n.id) {
            Some(slot @ None) => *slot = Some(rule),
            _ => {
                return Err(Error::MalformedDocument(format!(
                    "bad or repeated node id {}",
                    n.id
                )))
            }
        }
    }
    let nodes = nodes
        .into_iter()
        .map(|n| n.expect("ids form a permutation"))
        .collect();
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                from: e.from,
                to: e.to,
                letter: letter(&e.letter)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let g = Tragr::from_parts(source, target, nodes, edges)?;
    g.check_readable()?;
    Ok(g)
}

fn dot_name(ep: Endpoint) -> String {
    match ep {
        Endpoint::Src { index } => format!("s{index}"),
        Endpoint::Tgt { index } => format!("t{index}"),
        Endpoint::In { node, .. } | Endpoint::Out { node, .. } => format!("n{node}"),
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: source row on top, rule nodes, target row at the
/// bottom. Output is deterministic.
pub fn to_dot(g: &Tragr) -> String {
    let mut out = String::from("digraph tragr {\n  rankdir=TB;\n  ordering=out;\n");
    let row = |out: &mut String, prefix: char, s: &LString| {
        out.push_str("  { rank=same;");
        for (i, l) in s.iter().enumerate() {
            let _ = write!(
                out,
                " {prefix}{i} [label={}, shape=plaintext];",
                dot_quote(l.name())
            );
        }
        out.push_str(" }\n");
    };
    row(&mut out, 's', &g.source);
    for (i, r) in g.nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}, shape=box];", dot_quote(r.name()));
    }
    row(&mut out, 't', &g.target);
    let mut edges: Vec<&Edge> = g.edges.iter().collect();
    edges.sort_by_key(|e| match e.from {
        Endpoint::Src { index } => (0, index, 0),
        Endpoint::Out { node, port } => (1, node, port),
        _ => (2, 0, 0),
    });
    for e in edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_name(e.from),
            dot_name(e.to),
            dot_quote(e.letter.name())
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofterm::parse_proofterm;
    use crate::system::parse_system;

    fn running() -> RewriteSystem {
        parse_system("alphabet: A B\nrules:\n alpha: B B -> A\n beta: A A B -> B A A B").unwrap()
    }

    fn ev(sys: &RewriteSystem, t: &str) -> Tragr {
        eval(&parse_proofterm(t, sys).unwrap())
    }

    #[test]
    fn ladders_and_units() {
        let sys = running();
        let ab = juxt_tragr(&ev(&sys, "A"), &ev(&sys, "B"));
        assert_eq!(ab, ev(&sys, "A B"));
        assert_eq!(ab.edges().len(), 2);
        assert!(ab.nodes().is_empty());

        let g = ev(&sys, "A alpha beta");
        assert_eq!(juxt_tragr(&Tragr::empty(), &g), g);
        assert_eq!(juxt_tragr(&g, &Tragr::empty()), g);
        assert_eq!(vcomp_tragr(&Tragr::ladder(g.source()), &g).unwrap(), g);
        assert_eq!(vcomp_tragr(&g, &Tragr::ladder(g.target())).unwrap(), g);
        assert_eq!(juxt_tragr(&ev(&sys, "A alpha"), &ev(&sys, "beta")), g);
    }

    #[test]
    fn rule_tragr() {
        let sys = running();
        let g = ev(&sys, "beta");
        assert_eq!(g.nodes().len(), 1);
        let ins = g
            .edges()
            .iter()
            .filter(|e| matches!(e.to, Endpoint::In { .. }))
            .count();
        let outs = g
            .edges()
            .iter()
            .filter(|e| matches!(e.from, Endpoint::Out { .. }))
            .count();
        assert_eq!((ins, outs), (3, 4));
    }

    #[test]
    fn vcomp_rejects_mismatch() {
        let sys = running();
        assert!(matches!(
            vcomp_tragr(&ev(&sys, "A"), &ev(&sys, "B")),
            Err(Error::NotComposable { .. })
        ));
    }

    #[test]
    fn serialization_of_a_letter() {
        let sys = running();
        let doc = serialize_tragr(&ev(&sys, "A"));
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["source"], serde_json::json!(["A"]));
        assert_eq!(v["target"], serde_json::json!(["A"]));
        assert_eq!(v["nodes"], serde_json::json!([]));
        assert_eq!(
            v["edges"],
            serde_json::json!([{"from": {"kind": "src", "index": 0}, "to": {"kind": "tgt", "index": 0}, "letter": "A"}])
        );
        assert_eq!(parse_tragr(&doc, &sys).unwrap(), ev(&sys, "A"));
    }

    #[test]
    fn crossing_wires_are_rejected() {
        let sys = running();
        let doc = r#"{"source":["A","B"],"target":["B","A"],"nodes":[],
            "edges":[{"from":{"kind":"src","index":0},"to":{"kind":"tgt","index":1},"letter":"A"},
                     {"from":{"kind":"src","index":1},"to":{"kind":"tgt","index":0},"letter":"B"}]}"#;
        assert!(matches!(
            parse_tragr(doc, &sys),
            Err(Error::NotPlanarOrIllFormed(_))
        ));
    }

    #[test]
    fn malformed_documents() {
        let sys = running();
        assert!(matches!(
            parse_tragr("{", &sys),
            Err(Error::MalformedDocument(_))
        ));
        let unknown = r#"{"source":["C"],"target":["C"],"nodes":[],"edges":[]}"#;
        assert!(matches!(
            parse_tragr(unknown, &sys),
            Err(Error::MalformedDocument(_))
        ));
        let dangling = r#"{"source":["A"],"target":["A"],"nodes":[],"edges":[]}"#;
        assert!(matches!(
            parse_tragr(dangling, &sys),
            Err(Error::NotPlanarOrIllFormed(_))
        ));
        let wrong_letter = r#"{"source":["A"],"target":["A"],"nodes":[],
            "edges":[{"from":{"kind":"src","index":0},"to":{"kind":"tgt","index":0},"letter":"B"}]}"#;
        assert!(matches!(
            parse_tragr(wrong_letter, &sys),
            Err(Error::NotPlanarOrIllFormed(_))
        ));
        let backwards = r#"{"source":["A"],"target":["A"],"nodes":[],
            "edges":[{"from":{"kind":"tgt","index":0},"to":{"kind":"src","index":0},"letter":"A"}]}"#;
        assert!(matches!(
            parse_tragr(backwards, &sys),
            Err(Error::NotPlanarOrIllFormed(_))
        ));
        let dup_id = r#"{"source":["B","B"],"target":["A"],"nodes":[{"id":0,"rule":"alpha"},{"id":0,"rule":"alpha"}],"edges":[]}"#;
        assert!(matches!(
            parse_tragr(dup_id, &sys),
            Err(Error::MalformedDocument(_))
        ));
    }

    #[test]
    fn cycles_are_rejected() {
        // alpha feeds itself: A -> alpha-in ... built by hand
        let sys = parse_system("alphabet: A\nrules:\n r: A A -> A A").unwrap();
        let r = sys.rule("r").unwrap().clone();
        let a = sys.letter("A").unwrap().clone();
        let e = |from, to| Edge {
            from,
            to,
            letter: a.clone(),
        };
        let g = Tragr::from_parts(
            LString::from_letters(vec![a.clone()]),
            LString::from_letters(vec![a.clone()]),
            vec![r],
            vec![
                e(
                    Endpoint::Src { index: 0 },
                    Endpoint::In { node: 0, port: 0 },
                ),
                e(
                    Endpoint::Out { node: 0, port: 0 },
                    Endpoint::In { node: 0, port: 1 },
                ),
                e(
                    Endpoint::Out { node: 0, port: 1 },
                    Endpoint::Tgt { index: 0 },
                ),
            ],
        )
        .unwrap();
        assert!(matches!(
            g.check_readable(),
            Err(Error::NotPlanarOrIllFormed(_))
        ));
    }

    #[test]
    fn dot_output() {
        let sys = running();
        let empty = to_dot(&Tragr::empty());
        assert_eq!(empty.matches("->").count(), 0);
        assert_eq!(empty.matches("rank=same").count(), 2);

        let dot = to_dot(&ev(&sys, "beta"));
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches("shape=plaintext").count(), 7);
        assert_eq!(dot.matches(" -> ").count(), 7);
        assert!(dot.contains("s0 -> n0 [label=\"A\"];"));
        assert!(dot.contains("n0 -> t3 [label=\"B\"];"));
    }
}
