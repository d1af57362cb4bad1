//! Containment and residuals of multisteps, loath pairs and greedy
//! normalisation by swapping.
//!
//! Rule occurrences inside a multistep are addressed by their item index.
//! Patterns in strings are half-open intervals of letter positions; a pair
//! `phi . psi` is loath when some rule source of `psi` is disjoint from all
//! rule targets of `phi`, in which case that rule can be pulled up into
//! `phi`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::proofterm::{Item, Multistep, MultistepReduction};
use crate::system::Rule;

/// Item indices of selected rule occurrences in a multistep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccurrenceSet(BTreeSet<usize>);

impl OccurrenceSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        OccurrenceSet(indices.into_iter().collect())
    }

    pub fn none() -> Self {
        OccurrenceSet::default()
    }

    /// Every rule occurrence of `m`.
    pub fn all(m: &Multistep) -> Self {
        OccurrenceSet(m.rule_indices().collect())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, m: &Multistep) -> Result<()> {
        for &i in &self.0 {
            if m.items().get(i).and_then(Item::as_rule).is_none() {
                return Err(Error::InvalidOccurrence(i));
            }
        }
        Ok(())
    }
}

/// Half-open interval `[start, end)` of letter positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start.max(other.start) < self.end.min(other.end)
    }
}

/// A rule occurrence of the second multistep of a loath pair, together with
/// the interval of the first multistep's source where its lhs sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapWitness {
    pub occ: usize,
    pub pulled_back: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// The multistep contained in `psi` that fires only the occurrences in `keep`.
pub fn select(psi: &Multistep, keep: &OccurrenceSet) -> Result<Multistep> {
    keep.check(psi)?;
    let mut items = Vec::with_capacity(psi.items().len());
    for (i, item) in psi.items().iter().enumerate() {
        match item {
            Item::Rule(r) if !keep.contains(i) => {
                items.extend(r.lhs().iter().cloned().map(Item::Letter))
            }
            _ => items.push(item.clone()),
        }
    }
    Ok(Multistep::new(items))
}

/// What remains of `psi` after performing `select(psi, keep)`: the kept
/// occurrences are replaced by their targets, the others still fire.
pub fn residual(psi: &Multistep, keep: &OccurrenceSet) -> Result<Multistep> {
    keep.check(psi)?;
    let mut items = Vec::with_capacity(psi.items().len());
    for (i, item) in psi.items().iter().enumerate() {
        match item {
            Item::Rule(r) if keep.contains(i) => {
                items.extend(r.rhs().iter().cloned().map(Item::Letter))
            }
            _ => items.push(item.clone()),
        }
    }
    Ok(Multistep::new(items))
}

/// Intervals occupied by each rule's lhs in `src(m)` or its rhs in `tgt(m)`.
pub fn rule_intervals(m: &Multistep, side: Side) -> Vec<(Rule, Interval)> {
    let mut pos = 0;
    let mut out = Vec::new();
    for item in m.items() {
        let width = match side {
            Side::Source => item.source_len(),
            Side::Target => item.target_len(),
        };
        if let Item::Rule(r) = item {
            out.push((r.clone(), Interval::new(pos, pos + width)));
        }
        pos += width;
    }
    out
}

fn check_composable(phi: &Multistep, psi: &Multistep) -> Result<()> {
    let (left, right) = (phi.target(), psi.source());
    if left != right {
        return Err(Error::NotComposable { left, right });
    }
    Ok(())
}

/// Maps an interval of `tgt(phi)` that only covers letter items back to
/// `src(phi)`.
fn pull_back(phi: &Multistep, interval: Interval) -> Option<Interval> {
    let (mut src, mut tgt) = (0, 0);
    for item in phi.items() {
        if tgt == interval.start {
            return match item {
                Item::Letter(_) => Some(Interval::new(src, src + interval.len())),
                Item::Rule(_) => None,
            };
        }
        src += item.source_len();
        tgt += item.target_len();
    }
    None
}

fn witness_for(
    phi: &Multistep,
    psi: &Multistep,
    occ: usize,
    targets: &[Interval],
) -> Option<SwapWitness> {
    let mut start = 0;
    for item in &psi.items()[..occ] {
        start += item.source_len();
    }
    let rule = psi.items().get(occ)?.as_rule()?;
    let interval = Interval::new(start, start + rule.lhs().len());
    if targets.iter().any(|t| t.overlaps(&interval)) {
        return None;
    }
    pull_back(phi, interval).map(|pulled_back| SwapWitness { occ, pulled_back })
}

fn target_intervals(phi: &Multistep) -> Vec<Interval> {
    rule_intervals(phi, Side::Target)
        .into_iter()
        .map(|(_, i)| i)
        .collect()
}

/// Every rule occurrence of `psi` that could be pulled up into `phi`.
pub fn loath_witnesses(phi: &Multistep, psi: &Multistep) -> Result<Vec<SwapWitness>> {
    check_composable(phi, psi)?;
    let targets = target_intervals(phi);
    Ok(psi
        .rule_indices()
        .filter_map(|occ| witness_for(phi, psi, occ, &targets))
        .collect())
}

/// The leftmost swappable occurrence of `psi`, if `phi . psi` is loath.
pub fn find_loath(phi: &Multistep, psi: &Multistep) -> Result<Option<SwapWitness>> {
    check_composable(phi, psi)?;
    let targets = target_intervals(phi);
    Ok(psi
        .rule_indices()
        .find_map(|occ| witness_for(phi, psi, occ, &targets)))
}

/// Pulls the occurrence named by `w` from `psi` up into `phi`.
///
/// Returns `(chi, rest)` with `chi` firing everything `phi` fires plus the
/// pulled rule and `rest` the residual of `psi` after that rule.
pub fn swap(phi: &Multistep, psi: &Multistep, w: &SwapWitness) -> Result<(Multistep, Multistep)> {
    check_composable(phi, psi)?;
    let expected = witness_for(phi, psi, w.occ, &target_intervals(phi));
    if expected.as_ref() != Some(w) {
        return Err(Error::StaleWitness);
    }
    let rule = psi.items()[w.occ]
        .as_rule()
        .expect("checked witness")
        .clone();

    let mut items = Vec::with_capacity(phi.items().len());
    let mut src = 0;
    for item in phi.items() {
        let here = src;
        src += item.source_len();
        if here == w.pulled_back.start {
            items.push(Item::Rule(rule.clone()));
        } else if here > w.pulled_back.start && here < w.pulled_back.end {
            continue;
        } else {
            items.push(item.clone());
        }
    }
    let rest = residual(psi, &OccurrenceSet::new([w.occ]))?;
    Ok((Multistep::new(items), rest))
}

/// True iff no two consecutive layers form a loath pair.
pub fn is_greedy(r: &MultistepReduction) -> bool {
    r.steps()
        .windows(2)
        .all(|pair| matches!(find_loath(&pair[0], &pair[1]), Ok(None)))
}

/// Rule counts per layer, last layer first.
pub fn layer_measure(layers: &[Multistep]) -> Vec<usize> {
    layers.iter().rev().map(Multistep::rule_count).collect()
}

/// Sekar-Ramakrishnan measure: rule counts per layer from tail to head,
/// compared lexicographically.
pub fn sr_measure(r: &MultistepReduction) -> Vec<usize> {
    layer_measure(r.steps())
}

/// Swaps loath pairs until none remain, dropping layers that become empty.
///
/// Pairs are scanned front to back; after a swap at `(i, i+1)` the pair
/// `(i-1, i)` is examined again since layer `i` grew.
pub fn greedy_normalize(r: &MultistepReduction) -> MultistepReduction {
    let mut layers = r.steps().to_vec();
    let mut i = 0;
    while i + 1 < layers.len() {
        let witness = find_loath(&layers[i], &layers[i + 1]).expect("reduction layers chain");
        let Some(w) = witness else {
            i += 1;
            continue;
        };
        let (chi, rest) = swap(&layers[i], &layers[i + 1], &w).expect("fresh witness");
        let before = cfg!(debug_assertions).then(|| layer_measure(&layers));
        layers[i] = chi;
        layers[i + 1] = rest;
        debug_assert!(
            before.is_none_or(|m| layer_measure(&layers) < m),
            "swap must decrease the Sekar-Ramakrishnan measure"
        );
        if layers[i + 1].is_identity() {
            layers.remove(i + 1);
        }
        i = i.saturating_sub(1);
    }
    MultistepReduction::new_unchecked(r.source().clone(), layers)
}
