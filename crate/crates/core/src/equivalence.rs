//! Deciding permutation equivalence through canonical greedy forms, and a
//! brute-force search over the equivalence laws used to test it.

use std::collections::{HashSet, VecDeque};

use crate::logicality::flatten;
use crate::proofterm::{MultistepReduction, Node, ProofTerm};
use crate::residuals::greedy_normalize;
use crate::system::{LString, Letter, Rule};
use crate::toposort::ts;
use crate::tragr::eval;

/// The unique greedy multistep reduction equivalent to `p`, read back from
/// its tragr.
pub fn canonical_greedy(p: &ProofTerm) -> MultistepReduction {
    ts(&eval(p)).expect("evaluated proof terms read back")
}

/// The same form obtained by flattening and swapping loath pairs.
pub fn canonical_greedy_by_swapping(p: &ProofTerm) -> MultistepReduction {
    greedy_normalize(&flatten(p))
}

pub fn equiv(p: &ProofTerm, q: &ProofTerm) -> bool {
    p.source() == q.source()
        && p.target() == q.target()
        && canonical_greedy(p) == canonical_greedy(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent,
    NotProvenWithinBudget,
}

/// Searches breadth first from `p` for `q`, applying the unit,
/// associativity and exchange laws in both directions at any position.
/// `budget` bounds the number of terms whose neighbours are generated.
/// Terms are compared modulo the unit and associativity laws, so only
/// exchange moves are enumerated explicitly.
pub fn oracle_equiv(p: &ProofTerm, q: &ProofTerm, budget: usize) -> OracleVerdict {
    oracle_search(p, q, budget).0
}

/// As [`oracle_equiv`], also reporting how many expansions were spent.
pub fn oracle_search(p: &ProofTerm, q: &ProofTerm, budget: usize) -> (OracleVerdict, usize) {
    if p.source() != q.source() || p.target() != q.target() {
        return (OracleVerdict::NotProvenWithinBudget, 0);
    }
    let start = normal_form(p);
    let goal = normal_form(q);
    if start == goal {
        return (OracleVerdict::Equivalent, 0);
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut expansions = 0;
    while let Some(term) = queue.pop_front() {
        if expansions == budget {
            break;
        }
        expansions += 1;
        for next in neighbours_v(&term) {
            if next == goal {
                return (OracleVerdict::Equivalent, expansions);
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    (OracleVerdict::NotProvenWithinBudget, expansions)
}

// Normal form modulo units and associativity: a vertical list of
// horizontal lists of atoms. Layers firing no rule are dropped unless
// nothing else is left; a nested vertical always has two or more layers.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Atom {
    Letter(Letter),
    Rule(Rule),
    Vert(Vec<Horiz>),
}

type Horiz = Vec<Atom>;
type Vert = Vec<Horiz>;

fn has_rule(h: &[Atom]) -> bool {
    h.iter().any(|a| !matches!(a, Atom::Letter(_)))
}

fn atom_ends(a: &Atom) -> (LString, LString) {
    match a {
        Atom::Letter(l) => {
            let s = LString::from_letters(vec![l.clone()]);
            (s.clone(), s)
        }
        Atom::Rule(r) => (r.lhs().clone(), r.rhs().clone()),
        Atom::Vert(v) => (horiz_ends(&v[0]).0, horiz_ends(&v[v.len() - 1]).1),
    }
}

fn horiz_ends(h: &[Atom]) -> (LString, LString) {
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for a in h {
        let (s, t) = atom_ends(a);
        src.extend(s.into_letters());
        tgt.extend(t.into_letters());
    }
    (LString::from_letters(src), LString::from_letters(tgt))
}

fn letters(s: &LString) -> Horiz {
    s.iter().cloned().map(Atom::Letter).collect()
}

fn norm_horiz(h: Horiz) -> Horiz {
    let mut out = Vec::with_capacity(h.len());
    for a in h {
        match a {
            Atom::Vert(v) => {
                let mut v = norm_vert(v);
                if v.len() == 1 {
                    out.append(&mut v[0]);
                } else {
                    out.push(Atom::Vert(v));
                }
            }
            other => out.push(other),
        }
    }
    out
}

fn norm_vert(v: Vert) -> Vert {
    let mut layers = Vec::with_capacity(v.len());
    for h in v {
        let h = norm_horiz(h);
        match <[Atom; 1]>::try_from(h) {
            Ok([Atom::Vert(inner)]) => layers.extend(inner),
            Ok([a]) => layers.push(vec![a]),
            Err(h) => layers.push(h),
        }
    }
    let first = layers[0].clone();
    layers.retain(|h| has_rule(h));
    if layers.is_empty() {
        layers.push(first);
    }
    layers
}

fn to_vert(p: &ProofTerm) -> Vert {
    match p.node() {
        Node::Comp(a, b) => {
            let mut v = to_vert(a);
            v.extend(to_vert(b));
            v
        }
        _ => vec![to_horiz(p)],
    }
}

fn to_horiz(p: &ProofTerm) -> Horiz {
    match p.node() {
        Node::Empty => Vec::new(),
        Node::Letter(l) => vec![Atom::Letter(l.clone())],
        Node::Rule(r) => vec![Atom::Rule(r.clone())],
        Node::Juxt(a, b) => {
            let mut h = to_horiz(a);
            h.extend(to_horiz(b));
            h
        }
        Node::Comp(..) => vec![Atom::Vert(to_vert(p))],
    }
}

fn normal_form(p: &ProofTerm) -> Vert {
    norm_vert(to_vert(p))
}

/// `top . bottom` readings of a horizontal piece: any cut of a single
/// nested vertical, and the two unit paddings.
fn vertical_splits(x: &[Atom]) -> Vec<(Vert, Vert)> {
    let (src, tgt) = horiz_ends(x);
    let mut out = vec![
        (vec![x.to_vec()], vec![letters(&tgt)]),
        (vec![letters(&src)], vec![x.to_vec()]),
    ];
    if let [Atom::Vert(v)] = x {
        for cut in 1..v.len() {
            out.push((v[..cut].to_vec(), v[cut..].to_vec()));
        }
    }
    out
}

fn as_horiz(v: Vert) -> Horiz {
    vec![Atom::Vert(v)]
}

/// Terms one exchange move away from the horizontal list `h`, including
/// moves inside nested verticals.
fn neighbours_h(h: &[Atom]) -> Vec<Horiz> {
    let mut out = Vec::new();
    for (k, a) in h.iter().enumerate() {
        if let Atom::Vert(v) = a {
            for w in neighbours_v(v) {
                let mut next = h.to_vec();
                next[k] = Atom::Vert(w);
                out.push(norm_horiz(next));
            }
        }
    }
    // (X . X') (Y . Y') = (X Y) . (X' Y')
    for lo in 0..h.len() {
        for cut in lo + 1..h.len() {
            for hi in cut + 1..=h.len() {
                let (x, y) = (&h[lo..cut], &h[cut..hi]);
                let nested = |z: &[Atom]| matches!(z, [Atom::Vert(_)]);
                if !(has_rule(x) && has_rule(y)) && !nested(x) && !nested(y) {
                    continue;
                }
                for (xt, xb) in vertical_splits(x) {
                    for (yt, yb) in vertical_splits(y) {
                        let top = [as_horiz(xt.clone()), as_horiz(yt)].concat();
                        let bottom = [as_horiz(xb.clone()), as_horiz(yb)].concat();
                        let mut next = h[..lo].to_vec();
                        next.push(Atom::Vert(vec![top, bottom]));
                        next.extend_from_slice(&h[hi..]);
                        out.push(norm_horiz(next));
                    }
                }
            }
        }
    }
    out
}

/// Terms one exchange move away from the vertical list `v`.
fn neighbours_v(v: &[Horiz]) -> Vec<Vert> {
    let mut out = Vec::new();
    for (i, h) in v.iter().enumerate() {
        for next in neighbours_h(h) {
            let mut w = v.to_vec();
            w[i] = next;
            out.push(norm_vert(w));
        }
    }
    // (G D) . (Z E) = (G . Z) (D . E)
    for i in 0..v.len().saturating_sub(1) {
        let (x, y) = (&v[i], &v[i + 1]);
        for a in 1..x.len() {
            let mid = horiz_ends(&x[..a]).1.len();
            let mut width = 0;
            for b in 0..=y.len() {
                if width == mid && b > 0 && b < y.len() {
                    let left = Atom::Vert(vec![x[..a].to_vec(), y[..b].to_vec()]);
                    let right = Atom::Vert(vec![x[a..].to_vec(), y[b..].to_vec()]);
                    let mut w = v[..i].to_vec();
                    w.push(vec![left, right]);
                    w.extend_from_slice(&v[i + 2..]);
                    out.push(norm_vert(w));
                }
                if b < y.len() {
                    width += atom_ends(&y[b]).0.len();
                }
            }
        }
    }
    out
}
