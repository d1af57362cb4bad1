//! Reading a tragr back into its greedy multistep reduction, one layer of
//! minimal rule nodes at a time.

use crate::error::{Error, Result};
use crate::proofterm::{Item, Multistep, MultistepReduction};
use crate::residuals::Interval;
use crate::tragr::{Edge, Endpoint, Tragr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerEntry {
    pub node: usize,
    /// Source positions consumed by the node.
    pub interval: Interval,
}

/// The minimal rule nodes of a tragr, left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    entries: Vec<LayerEntry>,
}

impl Layer {
    pub fn entries(&self) -> &[LayerEntry] {
        &self.entries
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.node)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn ill_formed<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::NotPlanarOrIllFormed(message.into()))
}

/// Nodes fed only by the source interface. Fails on an empty node set, on
/// a cycle, and on inputs that are not a contiguous run in lhs order.
pub fn minimal_layer(g: &Tragr) -> Result<Layer> {
    let n = g.nodes().len();
    if n == 0 {
        return ill_formed("no rule nodes left to sort");
    }
    let mut inputs: Vec<Vec<Option<Endpoint>>> = g
        .nodes()
        .iter()
        .map(|r| vec![None; r.lhs().len()])
        .collect();
    for e in g.edges() {
        if let Endpoint::In { node, port } = e.to {
            inputs[node][port] = Some(e.from);
        }
    }
    let mut entries = Vec::new();
    for (node, ins) in inputs.iter().enumerate() {
        let mut positions = Vec::with_capacity(ins.len());
        for from in ins {
            match from {
                Some(Endpoint::Src { index }) => positions.push(*index),
                _ => break,
            }
        }
        if positions.len() < ins.len() {
            continue;
        }
        let start = positions[0];
        if positions.iter().enumerate().any(|(k, &p)| p != start + k) {
            return ill_formed(format!("inputs of node {node} are not a contiguous run"));
        }
        entries.push(LayerEntry {
            node,
            interval: Interval::new(start, start + positions.len()),
        });
    }
    if entries.is_empty() {
        return ill_formed("causal graph has a cycle");
    }
    entries.sort_by_key(|e| e.interval.start);
    Ok(Layer { entries })
}

fn check_ladder(g: &Tragr) -> Result<()> {
    if g.source() != g.target() {
        return ill_formed("rule-free graph has different source and target");
    }
    for e in g.edges() {
        match (e.from, e.to) {
            (Endpoint::Src { index: i }, Endpoint::Tgt { index: j }) if i == j => {}
            _ => return ill_formed("rule-free graph has crossing wires"),
        }
    }
    Ok(())
}

struct Stage {
    layer: Layer,
    step: Multistep,
    rest: Tragr,
}

/// One stage of the read-back: the multistep of the minimal layer and the
/// tragr of what remains after it.
fn peel(g: &Tragr) -> Result<Stage> {
    let layer = minimal_layer(g)?;
    let source = g.source();
    let mut starts = vec![None; source.len()];
    for entry in layer.entries() {
        starts[entry.interval.start] = Some(entry.node);
    }
    let mut consumed = vec![false; g.nodes().len()];
    let mut items = Vec::new();
    let mut letter_pos = vec![usize::MAX; source.len()];
    let mut out_base = vec![usize::MAX; g.nodes().len()];
    let (mut p, mut q) = (0, 0);
    while p < source.len() {
        match starts[p] {
            Some(node) => {
                let rule = &g.nodes()[node];
                consumed[node] = true;
                out_base[node] = q;
                items.push(Item::Rule(rule.clone()));
                q += rule.rhs().len();
                p += rule.lhs().len();
            }
            None => {
                items.push(Item::Letter(source[p].clone()));
                letter_pos[p] = q;
                q += 1;
                p += 1;
            }
        }
    }
    let step = Multistep::new(items);
    if step.source() != *source {
        return ill_formed("minimal layer overlaps itself");
    }

    let mut renumber = vec![usize::MAX; g.nodes().len()];
    let mut nodes = Vec::new();
    for (old, rule) in g.nodes().iter().enumerate() {
        if !consumed[old] {
            renumber[old] = nodes.len();
            nodes.push(rule.clone());
        }
    }
    let mut edges = Vec::with_capacity(g.edges().len());
    for e in g.edges() {
        if let Endpoint::In { node, .. } = e.to {
            if consumed[node] {
                continue;
            }
        }
        let from = match e.from {
            Endpoint::Src { index } => Endpoint::Src {
                index: letter_pos[index],
            },
            Endpoint::Out { node, port } if consumed[node] => Endpoint::Src {
                index: out_base[node] + port,
            },
            other => other.renumbered(&renumber),
        };
        edges.push(Edge {
            from,
            to: e.to.renumbered(&renumber),
            letter: e.letter.clone(),
        });
    }
    let rest = Tragr::from_parts_unchecked(step.target(), g.target().clone(), nodes, edges);
    Ok(Stage { layer, step, rest })
}

/// The read-back together with the original ids of the rule nodes in the
/// order they were emitted.
pub(crate) fn read_back(g: &Tragr) -> Result<(MultistepReduction, Vec<usize>)> {
    let mut order = Vec::with_capacity(g.nodes().len());
    let mut ids: Vec<usize> = (0..g.nodes().len()).collect();
    let mut steps = Vec::new();
    let mut current = g.clone();
    while !current.nodes().is_empty() {
        let stage = peel(&current)?;
        order.extend(stage.layer.nodes().map(|n| ids[n]));
        ids = ids
            .iter()
            .enumerate()
            .filter(|(n, _)| !stage.layer.nodes().any(|m| m == *n))
            .map(|(_, &id)| id)
            .collect();
        steps.push(stage.step);
        current = stage.rest;
    }
    check_ladder(&current)?;
    Ok((
        MultistepReduction::new_unchecked(g.source().clone(), steps),
        order,
    ))
}

/// The greedy multistep reduction whose evaluation is `g`.
pub fn ts(g: &Tragr) -> Result<MultistepReduction> {
    read_back(g).map(|(r, _)| r)
}

/// The tragrs seen at every stage of the read-back, from `g` itself down
/// to the final ladder.
pub fn ts_stages(g: &Tragr) -> Result<Vec<Tragr>> {
    let mut stages = vec![g.clone()];
    let mut current = g.clone();
    while !current.nodes().is_empty() {
        current = peel(&current)?.rest;
        stages.push(current.clone());
    }
    check_ladder(&current)?;
    Ok(stages)
}
