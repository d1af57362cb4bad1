//! Random systems, proof terms and law instances, plus oracles that do not
//! go through the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tragr::{
    parse_proofterm, parse_system, LString, Letter, Multistep, MultistepReduction, Node, ProofTerm,
    RewriteSystem, Rule, Tragr,
};

pub const RUNNING: &str = "alphabet: A B\nrules:\n alpha: B B -> A\n beta: A A B -> B A A B\n";
pub const GAMMA: &str =
    "A B beta . A alpha A A B . A A beta . beta A A B . B beta A A B . alpha A A B A A B . A beta A A B";
pub const GAMMA_P: &str = "A B beta . A alpha beta . beta A A B . B beta A A B . alpha beta A A B";

pub fn running() -> RewriteSystem {
    parse_system(RUNNING).unwrap()
}

pub fn term(sys: &RewriteSystem, text: &str) -> ProofTerm {
    parse_proofterm(text, sys).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 4] = ["A", "B", "C", "D"];

fn random_string(rng: &mut impl Rng, alphabet: &[Letter], len: usize) -> LString {
    (0..len)
        .map(|_| alphabet.choose(rng).unwrap().clone())
        .collect()
}

/// At most four letters and four rules, sides of length one to four.
pub fn random_system(rng: &mut impl Rng) -> RewriteSystem {
    let letters: Vec<Letter> = NAMES[..rng.gen_range(1..=4)]
        .iter()
        .map(|n| Letter::new(n).unwrap())
        .collect();
    let mut rules: Vec<Rule> = Vec::new();
    for i in 0..rng.gen_range(1..=4) {
        let (l, r) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let lhs = random_string(rng, &letters, l);
        let rhs = random_string(rng, &letters, r);
        rules.push(Rule::new(&format!("r{i}"), lhs, rhs).unwrap());
    }
    RewriteSystem::new(letters, rules).unwrap()
}

/// Left-hand sides glued together with a few stray letters, so that terms
/// built on it have something to rewrite.
pub fn random_source(rng: &mut impl Rng, sys: &RewriteSystem) -> LString {
    let mut letters = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        if rng.gen_bool(0.3) {
            letters.push(sys.alphabet().choose(rng).unwrap().clone());
        }
        let rule = sys.rules().choose(rng).unwrap();
        letters.extend(rule.lhs().iter().cloned());
    }
    LString::from_letters(letters)
}

/// Random binary bracketing of `parts` under juxtaposition, with the odd
/// empty term thrown in.
fn random_juxt(rng: &mut impl Rng, mut parts: Vec<ProofTerm>) -> ProofTerm {
    if rng.gen_bool(0.1) {
        let at = rng.gen_range(0..=parts.len());
        parts.insert(at, ProofTerm::empty());
    }
    match parts.len() {
        0 => ProofTerm::empty(),
        1 => parts.pop().unwrap(),
        n => {
            let cut = rng.gen_range(1..n);
            let right = parts.split_off(cut);
            ProofTerm::juxt(random_juxt(rng, parts), random_juxt(rng, right))
        }
    }
}

fn matches_at(s: &LString, at: usize, lhs: &LString) -> bool {
    s.len() >= at + lhs.len() && s[at..at + lhs.len()] == lhs[..]
}

/// A composition-free term on `s` firing at most `budget` rules.
pub fn random_multistep(
    rng: &mut impl Rng,
    sys: &RewriteSystem,
    s: &LString,
    budget: &mut usize,
) -> ProofTerm {
    let mut parts = Vec::new();
    let mut at = 0;
    while at < s.len() {
        let candidates: Vec<&Rule> = sys
            .rules()
            .iter()
            .filter(|r| matches_at(s, at, r.lhs()))
            .collect();
        if *budget > 0 && !candidates.is_empty() && rng.gen_bool(0.6) {
            let rule = candidates.choose(rng).unwrap();
            parts.push(ProofTerm::rule((*rule).clone()));
            at += rule.lhs().len();
            *budget -= 1;
        } else {
            parts.push(ProofTerm::letter(s[at].clone()));
            at += 1;
        }
    }
    random_juxt(rng, parts)
}

/// A term with source `s` mixing juxtaposition and composition freely.
pub fn random_term(
    rng: &mut impl Rng,
    sys: &RewriteSystem,
    s: &LString,
    budget: &mut usize,
    depth: usize,
) -> ProofTerm {
    let choice = if depth == 0 { 2 } else { rng.gen_range(0..4) };
    match choice {
        0 | 3 => {
            let upper = random_multistep(rng, sys, s, budget);
            let lower = random_term(rng, sys, upper.target(), budget, depth - 1);
            match lower.node() {
                Node::Comp(a, b) if rng.gen_bool(0.5) => {
                    let left = ProofTerm::comp(upper, a.clone()).unwrap();
                    ProofTerm::comp(left, b.clone()).unwrap()
                }
                _ => ProofTerm::comp(upper, lower).unwrap(),
            }
        }
        1 => {
            let cut = rng.gen_range(0..=s.len());
            let left = random_term(rng, sys, &s.slice(0, cut), budget, depth - 1);
            let right = random_term(rng, sys, &s.slice(cut, s.len()), budget, depth - 1);
            ProofTerm::juxt(left, right)
        }
        _ => random_multistep(rng, sys, s, budget),
    }
}

pub struct Case {
    pub system: RewriteSystem,
    pub term: ProofTerm,
}

/// A random system with a term firing at most `max_rules` rules.
pub fn random_case(rng: &mut impl Rng, max_rules: usize) -> Case {
    let system = random_system(rng);
    let source = random_source(rng, &system);
    let mut budget = max_rules;
    let term = random_term(rng, &system, &source, &mut budget, 4);
    Case { system, term }
}

/// A term on the source of `p`'s system with the given source.
pub fn random_term_on(
    rng: &mut impl Rng,
    sys: &RewriteSystem,
    s: &LString,
    max_rules: usize,
) -> ProofTerm {
    let mut budget = max_rules;
    random_term(rng, sys, s, &mut budget, 4)
}

/// Source and target computed straight from the term structure.
pub fn ends(p: &ProofTerm) -> (LString, LString) {
    match p.node() {
        Node::Empty => (LString::empty(), LString::empty()),
        Node::Letter(l) => {
            let s = LString::from_letters(vec![l.clone()]);
            (s.clone(), s)
        }
        Node::Rule(r) => (r.lhs().clone(), r.rhs().clone()),
        Node::Juxt(a, b) => {
            let (sa, ta) = ends(a);
            let (sb, tb) = ends(b);
            (sa.concat(&sb), ta.concat(&tb))
        }
        Node::Comp(a, b) => (ends(a).0, ends(b).1),
    }
}

/// A one-rule-per-step sequentialisation of `p`; the steps of the two
/// sides of a juxtaposition are interleaved at random. Steps are
/// `(position, rule)` pairs on the current string.
pub fn random_steps(rng: &mut impl Rng, p: &ProofTerm) -> Vec<(usize, Rule)> {
    match p.node() {
        Node::Empty | Node::Letter(_) => Vec::new(),
        Node::Rule(r) => vec![(0, r.clone())],
        Node::Comp(a, b) => {
            let mut steps = random_steps(rng, a);
            steps.extend(random_steps(rng, b));
            steps
        }
        Node::Juxt(a, b) => {
            let left = random_steps(rng, a);
            let right = random_steps(rng, b);
            let mut left_len = a.source().len();
            let (mut i, mut j) = (0, 0);
            let mut out = Vec::new();
            while i < left.len() || j < right.len() {
                let take_left = j == right.len() || (i < left.len() && rng.gen_bool(0.5));
                if take_left {
                    let (pos, rule) = left[i].clone();
                    left_len = left_len + rule.rhs().len() - rule.lhs().len();
                    out.push((pos, rule));
                    i += 1;
                } else {
                    let (pos, rule) = right[j].clone();
                    out.push((pos + left_len, rule));
                    j += 1;
                }
            }
            out
        }
    }
}

/// Replays positioned steps from `source` as a reduction.
pub fn replay(source: &LString, steps: &[(usize, Rule)]) -> MultistepReduction {
    let mut current = source.clone();
    let mut layers = Vec::new();
    for (pos, rule) in steps {
        assert!(
            matches_at(&current, *pos, rule.lhs()),
            "step does not match"
        );
        let mut items: Vec<tragr::Item> = current[..*pos]
            .iter()
            .cloned()
            .map(tragr::Item::Letter)
            .collect();
        items.push(tragr::Item::Rule(rule.clone()));
        let rest = pos + rule.lhs().len();
        items.extend(current[rest..].iter().cloned().map(tragr::Item::Letter));
        let mut next = current[..*pos].to_vec();
        next.extend(rule.rhs().iter().cloned());
        next.extend(current[rest..].iter().cloned());
        layers.push(Multistep::new(items));
        current = LString::from_letters(next);
    }
    MultistepReduction::new(source.clone(), layers).unwrap()
}

pub fn random_sequentialisation(rng: &mut impl Rng, p: &ProofTerm) -> MultistepReduction {
    let steps = random_steps(rng, p);
    replay(p.source(), &steps)
}

/// Number of nodes on the longest path of the causal dag.
pub fn longest_path(g: &Tragr) -> usize {
    let n = g.nodes().len();
    let mut succ: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (a, b) in g.causal_edges() {
        succ.entry(a).or_default().insert(b);
    }
    fn depth(
        v: usize,
        succ: &HashMap<usize, BTreeSet<usize>>,
        memo: &mut Vec<Option<usize>>,
    ) -> usize {
        if let Some(d) = memo[v] {
            return d;
        }
        let d = 1 + succ
            .get(&v)
            .map(|s| s.iter().map(|&w| depth(w, succ, memo)).max().unwrap_or(0))
            .unwrap_or(0);
        memo[v] = Some(d);
        d
    }
    let mut memo = vec![None; n];
    (0..n)
        .map(|v| depth(v, &succ, &mut memo))
        .max()
        .unwrap_or(0)
}

pub const LAWS: [&str; 7] = [
    "h-left unit",
    "h-right unit",
    "h-associativity",
    "v-left unit",
    "v-right unit",
    "v-associativity",
    "exchange",
];

/// Both sides of a random instance of the named law.
pub fn law_instance<R: Rng>(rng: &mut R, law: &str) -> (RewriteSystem, ProofTerm, ProofTerm) {
    let sys = random_system(rng);
    let fresh = |rng: &mut R, s: Option<&LString>| {
        let s = s.cloned().unwrap_or_else(|| random_source(rng, &sys));
        random_term_on(rng, &sys, &s, 3)
    };
    let r = rng;
    let (lhs, rhs) = match law {
        "h-left unit" => {
            let g = fresh(r, None);
            (ProofTerm::juxt(ProofTerm::empty(), g.clone()), g)
        }
        "h-right unit" => {
            let g = fresh(r, None);
            (ProofTerm::juxt(g.clone(), ProofTerm::empty()), g)
        }
        "h-associativity" => {
            let (g, d, z) = (fresh(r, None), fresh(r, None), fresh(r, None));
            (
                ProofTerm::juxt(ProofTerm::juxt(g.clone(), d.clone()), z.clone()),
                ProofTerm::juxt(g, ProofTerm::juxt(d, z)),
            )
        }
        "v-left unit" => {
            let g = fresh(r, None);
            let unit = ProofTerm::from_string(g.source());
            (ProofTerm::comp(unit, g.clone()).unwrap(), g)
        }
        "v-right unit" => {
            let g = fresh(r, None);
            let unit = ProofTerm::from_string(g.target());
            (ProofTerm::comp(g.clone(), unit).unwrap(), g)
        }
        "v-associativity" => {
            let g = fresh(r, None);
            let d = fresh(r, Some(g.target()));
            let z = fresh(r, Some(d.target()));
            (
                ProofTerm::comp(ProofTerm::comp(g.clone(), d.clone()).unwrap(), z.clone()).unwrap(),
                ProofTerm::comp(g, ProofTerm::comp(d, z).unwrap()).unwrap(),
            )
        }
        "exchange" => {
            let g = fresh(r, None);
            let d = fresh(r, None);
            let z = fresh(r, Some(g.target()));
            let e = fresh(r, Some(d.target()));
            (
                ProofTerm::comp(
                    ProofTerm::juxt(g.clone(), d.clone()),
                    ProofTerm::juxt(z.clone(), e.clone()),
                )
                .unwrap(),
                ProofTerm::juxt(
                    ProofTerm::comp(g, z).unwrap(),
                    ProofTerm::comp(d, e).unwrap(),
                ),
            )
        }
        other => panic!("unknown law {other}"),
    };
    (sys, lhs, rhs)
}

/// Every normal form reachable by swapping loath pairs in any order, with
/// each swap checked to decrease the layer measure.
pub fn all_swap_normal_forms(r: &MultistepReduction) -> BTreeSet<String> {
    use std::collections::HashSet;
    let mut seen: HashSet<Vec<Multistep>> = HashSet::new();
    let mut stack = vec![r.steps().to_vec()];
    let mut normal = BTreeSet::new();
    while let Some(layers) = stack.pop() {
        if !seen.insert(layers.clone()) {
            continue;
        }
        let mut terminal = true;
        for i in 0..layers.len().saturating_sub(1) {
            for w in tragr::loath_witnesses(&layers[i], &layers[i + 1]).unwrap() {
                terminal = false;
                let (chi, rest) = tragr::swap(&layers[i], &layers[i + 1], &w).unwrap();
                let mut next = layers.clone();
                next[i] = chi;
                next[i + 1] = rest;
                assert!(
                    tragr::layer_measure(&next) < tragr::layer_measure(&layers),
                    "swap did not decrease the measure"
                );
                if next[i + 1].is_identity() {
                    next.remove(i + 1);
                }
                stack.push(next);
            }
        }
        if terminal {
            let nf = MultistepReduction::new(r.source().clone(), layers).unwrap();
            normal.insert(nf.to_string());
        }
    }
    normal
}
