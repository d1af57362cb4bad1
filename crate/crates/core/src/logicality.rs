//! Sequentialising arbitrary proof terms into single-step reductions.

use crate::proofterm::{Item, Multistep, MultistepReduction, Node, ProofTerm};
use crate::system::LString;

/// Places every layer of `r` in the context `prefix _ suffix`.
pub fn embed(r: &MultistepReduction, prefix: &LString, suffix: &LString) -> MultistepReduction {
    let wrap = |m: &Multistep| {
        let mut items: Vec<Item> = prefix.iter().cloned().map(Item::Letter).collect();
        items.extend_from_slice(m.items());
        items.extend(suffix.iter().cloned().map(Item::Letter));
        Multistep::new(items)
    };
    MultistepReduction::new_unchecked(
        prefix.concat(r.source()).concat(suffix),
        r.steps().iter().map(wrap).collect(),
    )
}

/// Turns `p` into a reduction (one rule occurrence per layer) with the same
/// source and target.
///
/// For a juxtaposition the left component is run first, padded with the
/// source of the right one, followed by the right component, prefixed with
/// the target of the left one.
pub fn flatten(p: &ProofTerm) -> MultistepReduction {
    match p.node() {
        Node::Empty | Node::Letter(_) => MultistepReduction::empty(p.source().clone()),
        Node::Rule(r) => MultistepReduction::new_unchecked(
            r.lhs().clone(),
            vec![Multistep::new(vec![Item::Rule(r.clone())])],
        ),
        Node::Juxt(left, right) => {
            let first = embed(&flatten(left), &LString::empty(), right.source());
            let second = embed(&flatten(right), left.target(), &LString::empty());
            let mut steps = first.into_steps();
            steps.extend(second.into_steps());
            MultistepReduction::new_unchecked(p.source().clone(), steps)
        }
        Node::Comp(upper, lower) => {
            let mut steps = flatten(upper).into_steps();
            steps.extend(flatten(lower).into_steps());
            MultistepReduction::new_unchecked(p.source().clone(), steps)
        }
    }
}
