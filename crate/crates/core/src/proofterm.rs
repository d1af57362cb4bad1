//! Proof terms, multisteps and multistep reductions.
//!
//! A [`ProofTerm`] is built from the empty term, letters, rule symbols,
//! juxtaposition (horizontal composition) and vertical composition. Source
//! and target strings are computed once, at construction, and a vertical
//! composition is only constructible when the target of the upper term
//! equals the source of the lower one.
//!
//! Textual syntax: juxtaposition is whitespace, `.` is vertical composition
//! (right-associative, binding weaker than juxtaposition), `eps` is the
//! empty term and parentheses group.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::{LString, Letter, RewriteSystem, Rule, Symbol, EPSILON};

/// Shape of a proof term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Empty,
    Letter(Letter),
    Rule(Rule),
    /// Horizontal composition.
    Juxt(ProofTerm, ProofTerm),
    /// Vertical composition, upper term first.
    Comp(ProofTerm, ProofTerm),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProofTerm {
    node: Arc<Node>,
    source: LString,
    target: LString,
}

impl ProofTerm {
    pub fn empty() -> Self {
        ProofTerm {
            node: Arc::new(Node::Empty),
            source: LString::empty(),
            target: LString::empty(),
        }
    }

    pub fn letter(letter: Letter) -> Self {
        let s = LString::from_letters(vec![letter.clone()]);
        ProofTerm {
            node: Arc::new(Node::Letter(letter)),
            source: s.clone(),
            target: s,
        }
    }

    pub fn rule(rule: Rule) -> Self {
        ProofTerm {
            source: rule.lhs().clone(),
            target: rule.rhs().clone(),
            node: Arc::new(Node::Rule(rule)),
        }
    }

    pub fn juxt(left: ProofTerm, right: ProofTerm) -> Self {
        ProofTerm {
            source: left.source.concat(&right.source),
            target: left.target.concat(&right.target),
            node: Arc::new(Node::Juxt(left, right)),
        }
    }

    /// Vertical composition `upper . lower`.
    pub fn comp(upper: ProofTerm, lower: ProofTerm) -> Result<Self> {
        if upper.target != lower.source {
            return Err(Error::CompositionMismatch {
                upper_target: upper.target.clone(),
                lower_source: lower.source.clone(),
            });
        }
        Ok(ProofTerm {
            source: upper.source.clone(),
            target: lower.target.clone(),
            node: Arc::new(Node::Comp(upper, lower)),
        })
    }

    /// Right-nested juxtaposition of atoms; `eps` for an empty sequence.
    pub fn juxt_all(atoms: Vec<ProofTerm>) -> Self {
        atoms
            .into_iter()
            .rev()
            .reduce(|acc, t| ProofTerm::juxt(t, acc))
            .unwrap_or_else(ProofTerm::empty)
    }

    /// The string `s` read as the empty proof term on `s`.
    pub fn from_string(s: &LString) -> Self {
        ProofTerm::juxt_all(s.iter().cloned().map(ProofTerm::letter).collect())
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn source(&self) -> &LString {
        &self.source
    }

    pub fn target(&self) -> &LString {
        &self.target
    }

    /// Number of rule symbol occurrences.
    pub fn rule_count(&self) -> usize {
        match self.node() {
            Node::Empty | Node::Letter(_) => 0,
            Node::Rule(_) => 1,
            Node::Juxt(a, b) | Node::Comp(a, b) => a.rule_count() + b.rule_count(),
        }
    }

    fn has_comp(&self) -> bool {
        match self.node() {
            Node::Empty | Node::Letter(_) | Node::Rule(_) => false,
            Node::Juxt(a, b) => a.has_comp() || b.has_comp(),
            Node::Comp(..) => true,
        }
    }
}

impl fmt::Debug for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProofTerm({self})")
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}

/// Source and target of a proof term.
pub fn src_tgt(p: &ProofTerm) -> (LString, LString) {
    (p.source().clone(), p.target().clone())
}

/// One position of a multistep: a letter left untouched or a rule fired.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Letter(Letter),
    Rule(Rule),
}

impl Item {
    pub fn source_len(&self) -> usize {
        match self {
            Item::Letter(_) => 1,
            Item::Rule(r) => r.lhs().len(),
        }
    }

    pub fn target_len(&self) -> usize {
        match self {
            Item::Letter(_) => 1,
            Item::Rule(r) => r.rhs().len(),
        }
    }

    pub fn as_rule(&self) -> Option<&Rule> {
        match self {
            Item::Rule(r) => Some(r),
            Item::Letter(_) => None,
        }
    }
}

/// A proof term without vertical composition, stored flat.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Multistep {
    items: Vec<Item>,
}

impl Multistep {
    pub fn new(items: Vec<Item>) -> Self {
        Multistep { items }
    }

    /// The empty multistep on `s`: every letter kept.
    pub fn identity(s: &LString) -> Self {
        Multistep::new(s.iter().cloned().map(Item::Letter).collect())
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }

    pub fn source(&self) -> LString {
        self.items
            .iter()
            .flat_map(|item| match item {
                Item::Letter(l) => std::slice::from_ref(l).iter().cloned(),
                Item::Rule(r) => r.lhs().letters().iter().cloned(),
            })
            .collect()
    }

    pub fn target(&self) -> LString {
        self.items
            .iter()
            .flat_map(|item| match item {
                Item::Letter(l) => std::slice::from_ref(l).iter().cloned(),
                Item::Rule(r) => r.rhs().letters().iter().cloned(),
            })
            .collect()
    }

    pub fn rule_count(&self) -> usize {
        self.items.iter().filter(|i| i.as_rule().is_some()).count()
    }

    /// True when no rule fires.
    pub fn is_identity(&self) -> bool {
        self.rule_count() == 0
    }

    /// Item indices of rule occurrences, left to right.
    pub fn rule_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.as_rule().is_some())
            .map(|(i, _)| i)
    }

    pub fn to_term(&self) -> ProofTerm {
        ProofTerm::juxt_all(
            self.items
                .iter()
                .map(|item| match item {
                    Item::Letter(l) => ProofTerm::letter(l.clone()),
                    Item::Rule(r) => ProofTerm::rule(r.clone()),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Multistep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return f.write_str(EPSILON);
        }
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match item {
                Item::Letter(l) => f.write_str(l.name())?,
                Item::Rule(r) => f.write_str(r.name())?,
            }
        }
        Ok(())
    }
}

/// A chain of nonempty multisteps starting at `source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultistepReduction {
    source: LString,
    steps: Vec<Multistep>,
}

impl MultistepReduction {
    pub fn new(source: LString, steps: Vec<Multistep>) -> Result<Self> {
        let mut current = source.clone();
        for (i, step) in steps.iter().enumerate() {
            if step.is_identity() {
                return Err(Error::InvalidReduction(format!("layer {} is empty", i + 1)));
            }
            if step.source() != current {
                return Err(Error::InvalidReduction(format!(
                    "layer {} starts at `{}` instead of `{}`",
                    i + 1,
                    step.source(),
                    current
                )));
            }
            current = step.target();
        }
        Ok(MultistepReduction { source, steps })
    }

    /// Builds a reduction from raw layers, dropping layers that fire no rule.
    pub fn from_layers(source: LString, layers: Vec<Multistep>) -> Result<Self> {
        let steps = layers.into_iter().filter(|m| !m.is_identity()).collect();
        MultistepReduction::new(source, steps)
    }

    pub(crate) fn new_unchecked(source: LString, steps: Vec<Multistep>) -> Self {
        MultistepReduction { source, steps }
    }

    pub fn empty(source: LString) -> Self {
        MultistepReduction {
            source,
            steps: Vec::new(),
        }
    }

    pub fn source(&self) -> &LString {
        &self.source
    }

    pub fn target(&self) -> LString {
        self.steps
            .last()
            .map(Multistep::target)
            .unwrap_or_else(|| self.source.clone())
    }

    pub fn steps(&self) -> &[Multistep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Multistep> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rule_count(&self) -> usize {
        self.steps.iter().map(Multistep::rule_count).sum()
    }

    /// Right-associated vertical composition of the layers; the string
    /// itself for the empty reduction.
    pub fn to_term(&self) -> ProofTerm {
        let mut terms = self.steps.iter().rev().map(Multistep::to_term);
        match terms.next() {
            None => ProofTerm::from_string(&self.source),
            Some(last) => terms.fold(last, |acc, t| {
                ProofTerm::comp(t, acc).expect("chained layers compose")
            }),
        }
    }
}

impl fmt::Display for MultistepReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "{}", self.source);
        }
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Most specific class of a proof term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    EmptyMultistep,
    Step,
    Multistep,
    Reduction,
    MultistepReduction,
    General,
}

pub fn classify(p: &ProofTerm) -> Class {
    if !p.has_comp() {
        return match p.rule_count() {
            0 => Class::EmptyMultistep,
            1 => Class::Step,
            _ => Class::Multistep,
        };
    }
    // Right-associated spine of nonempty comp-free layers.
    let mut all_steps = true;
    let mut cur = p;
    loop {
        let (layer, rest) = match cur.node() {
            Node::Comp(upper, lower) => (upper, Some(lower)),
            _ => (cur, None),
        };
        if layer.has_comp() {
            return Class::General;
        }
        match layer.rule_count() {
            0 => return Class::General,
            1 => {}
            _ => all_steps = false,
        }
        match rest {
            Some(lower) => cur = lower,
            None => break,
        }
    }
    if all_steps {
        Class::Reduction
    } else {
        Class::MultistepReduction
    }
}

fn collect_items(p: &ProofTerm, out: &mut Vec<Item>) -> Result<()> {
    match p.node() {
        Node::Empty => {}
        Node::Letter(l) => out.push(Item::Letter(l.clone())),
        Node::Rule(r) => out.push(Item::Rule(r.clone())),
        Node::Juxt(a, b) => {
            collect_items(a, out)?;
            collect_items(b, out)?;
        }
        Node::Comp(..) => return Err(Error::NotAMultistep),
    }
    Ok(())
}

/// Flattens a composition-free proof term.
pub fn to_multistep(p: &ProofTerm) -> Result<Multistep> {
    let mut items = Vec::new();
    collect_items(p, &mut items)?;
    Ok(Multistep::new(items))
}

fn collect_layers(p: &ProofTerm, out: &mut Vec<Multistep>) -> Result<()> {
    match p.node() {
        Node::Comp(upper, lower) => {
            collect_layers(upper, out)?;
            collect_layers(lower, out)
        }
        _ => {
            let layer = to_multistep(p).map_err(|_| {
                Error::NotAReduction(format!("vertical composition nested inside `{p}`"))
            })?;
            out.push(layer);
            Ok(())
        }
    }
}

/// Reads the vertical spine of `p` as a multistep reduction. Layers firing
/// no rule are dropped; any association of the spine is accepted.
pub fn to_reduction(p: &ProofTerm) -> Result<MultistepReduction> {
    let mut layers = Vec::new();
    collect_layers(p, &mut layers)?;
    let steps = layers.into_iter().filter(|m| !m.is_identity()).collect();
    Ok(MultistepReduction::new_unchecked(p.source().clone(), steps))
}

/// Prints `p` so that [`parse_proofterm`] reads back the same structure.
pub fn pretty_print(p: &ProofTerm) -> String {
    let mut out = String::new();
    print_into(p, &mut out);
    out
}

fn print_into(p: &ProofTerm, out: &mut String) {
    match p.node() {
        Node::Empty => out.push_str(EPSILON),
        Node::Letter(l) => out.push_str(l.name()),
        Node::Rule(r) => out.push_str(r.name()),
        Node::Juxt(a, b) => {
            print_wrapped(a, matches!(a.node(), Node::Juxt(..) | Node::Comp(..)), out);
            out.push(' ');
            print_wrapped(b, matches!(b.node(), Node::Comp(..)), out);
        }
        Node::Comp(a, b) => {
            print_wrapped(a, matches!(a.node(), Node::Comp(..)), out);
            out.push_str(" . ");
            print_into(b, out);
        }
    }
}

fn print_wrapped(p: &ProofTerm, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        print_into(p, out);
        out.push(')');
    } else {
        print_into(p, out);
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Dot,
    Open,
    Close,
}

struct Lexeme {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexeme>> {
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            let column = pos + 1;
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '.' | '(' | ')' => {
                    let token = match c {
                        '.' => Token::Dot,
                        '(' => Token::Open,
                        _ => Token::Close,
                    };
                    out.push(Lexeme {
                        token,
                        line: line_no,
                        column,
                    });
                    i += 1;
                }
                c if c.is_ascii_alphabetic() => {
                    let start = pos;
                    while i < chars.len()
                        && (chars[i].1.is_ascii_alphanumeric()
                            || chars[i].1 == '_'
                            || chars[i].1 == '\'')
                    {
                        i += 1;
                    }
                    let end = chars.get(i).map_or(line.len(), |&(p, _)| p);
                    out.push(Lexeme {
                        token: Token::Ident(line[start..end].to_string()),
                        line: line_no,
                        column,
                    });
                }
                other => {
                    return Err(Error::Syntax {
                        line: line_no,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    lexemes: Vec<Lexeme>,
    pos: usize,
    system: &'a RewriteSystem,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.lexemes.get(self.pos).map(|l| &l.token)
    }

    fn error_here(&self, message: &str) -> Error {
        let (line, column) = match self.lexemes.get(self.pos) {
            Some(l) => (l.line, l.column),
            None => self
                .lexemes
                .last()
                .map_or((1, 1), |l| (l.line, l.column + 1)),
        };
        Error::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn term(&mut self) -> Result<ProofTerm> {
        let upper = self.seq()?;
        if self.peek() == Some(&Token::Dot) {
            self.pos += 1;
            let lower = self.term()?;
            ProofTerm::comp(upper, lower)
        } else {
            Ok(upper)
        }
    }

    fn seq(&mut self) -> Result<ProofTerm> {
        let mut atoms = Vec::new();
        while matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::Open)) {
            atoms.push(self.atom()?);
        }
        if atoms.is_empty() {
            return Err(self.error_here("expected a letter, rule, `eps` or `(`"));
        }
        let last = atoms.pop().unwrap();
        Ok(atoms
            .into_iter()
            .rev()
            .fold(last, |acc, t| ProofTerm::juxt(t, acc)))
    }

    fn atom(&mut self) -> Result<ProofTerm> {
        let lexeme = &self.lexemes[self.pos];
        let column = lexeme.column;
        match lexeme.token.clone() {
            Token::Ident(name) => {
                self.pos += 1;
                if name == EPSILON {
                    return Ok(ProofTerm::empty());
                }
                match self.system.resolve(&name) {
                    Some(Symbol::Letter(l)) => Ok(ProofTerm::letter(l)),
                    Some(Symbol::Rule(r)) => Ok(ProofTerm::rule(r)),
                    None => Err(Error::UnresolvedIdentifier { name, column }),
                }
            }
            Token::Open => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error_here("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error_here("expected an atom")),
        }
    }
}

/// Parses a proof term over `system`.
pub fn parse_proofterm(text: &str, system: &RewriteSystem) -> Result<ProofTerm> {
    let mut parser = Parser {
        lexemes: lex(text)?,
        pos: 0,
        system,
    };
    let term = parser.term()?;
    if parser.pos != parser.lexemes.len() {
        return Err(parser.error_here("unexpected trailing input"));
    }
    Ok(term)
}
