//! Alphabets, canonical strings, rules and string rewrite systems.
//!
//! Strings are only ever stored in monoid normal form, as a flat sequence
//! of letters; the empty sequence is the empty string. Letters are
//! whitespace-separated tokens, so every string has exactly one reading.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Token reserved for the empty string / empty proof term.
pub const EPSILON: &str = "eps";

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    s != EPSILON && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A letter of an alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Result<Self> {
        if is_identifier(name) {
            Ok(Letter(name.into()))
        } else {
            Err(Error::InvalidIdentifier(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A string over an alphabet, in canonical (flat) form.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LString(Vec<Letter>);

impl LString {
    pub fn empty() -> Self {
        LString(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        LString(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// Horizontal composition of strings.
    pub fn concat(&self, other: &LString) -> LString {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        LString(letters)
    }

    pub fn slice(&self, start: usize, end: usize) -> LString {
        LString(self.0[start..end].to_vec())
    }
}

impl Deref for LString {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromIterator<Letter> for LString {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        LString(iter.into_iter().collect())
    }
}

impl fmt::Debug for LString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl fmt::Display for LString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON);
        }
        for (i, letter) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(letter.name())?;
        }
        Ok(())
    }
}

/// Free function form of [`LString::concat`].
pub fn concat(x: &LString, y: &LString) -> LString {
    x.concat(y)
}

#[derive(PartialEq, Eq, Hash)]
struct RuleDef {
    name: String,
    lhs: LString,
    rhs: LString,
}

/// A named rule `name : lhs -> rhs` with nonempty sides. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule(Arc<RuleDef>);

impl Rule {
    pub fn new(name: &str, lhs: LString, rhs: LString) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::InvalidIdentifier(name.to_string()));
        }
        if lhs.is_empty() || rhs.is_empty() {
            return Err(Error::EmptyRuleSide(name.to_string()));
        }
        Ok(Rule(Arc::new(RuleDef {
            name: name.to_string(),
            lhs,
            rhs,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn lhs(&self) -> &LString {
        &self.0.lhs
    }

    pub fn rhs(&self) -> &LString {
        &self.0.rhs
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name(), self.lhs(), self.rhs())
    }
}

/// What an identifier of a system resolves to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbol {
    Letter(Letter),
    Rule(Rule),
}

/// A string rewrite system: an alphabet together with named rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    alphabet: Vec<Letter>,
    rules: Vec<Rule>,
}

impl RewriteSystem {
    /// Builds a system, checking every invariant of alphabet and rules.
    pub fn new(alphabet: Vec<Letter>, rules: Vec<Rule>) -> Result<Self> {
        let mut letters = HashSet::new();
        for letter in &alphabet {
            if !letters.insert(letter.name()) {
                return Err(Error::DuplicateLetter(letter.name().to_string()));
            }
        }
        let mut names = HashSet::new();
        for rule in &rules {
            if letters.contains(rule.name()) {
                return Err(Error::NameClash(rule.name().to_string()));
            }
            if !names.insert(rule.name()) {
                return Err(Error::DuplicateRule(rule.name().to_string()));
            }
            for letter in rule.lhs().iter().chain(rule.rhs().iter()) {
                if !letters.contains(letter.name()) {
                    return Err(Error::UndeclaredLetter {
                        rule: rule.name().to_string(),
                        letter: letter.name().to_string(),
                    });
                }
            }
        }
        Ok(RewriteSystem { alphabet, rules })
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn letter(&self, name: &str) -> Option<&Letter> {
        self.alphabet.iter().find(|l| l.name() == name)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name() == name)
    }

    pub fn resolve(&self, name: &str) -> Option<Symbol> {
        if let Some(letter) = self.letter(name) {
            return Some(Symbol::Letter(letter.clone()));
        }
        self.rule(name).map(|r| Symbol::Rule(r.clone()))
    }

    /// Reads a whitespace-separated string of letters of this alphabet.
    /// `eps` or blank input denotes the empty string.
    pub fn string(&self, text: &str) -> Result<LString> {
        let mut letters = Vec::new();
        for (column, token) in tokens(text) {
            if token == EPSILON {
                continue;
            }
            match self.letter(token) {
                Some(l) => letters.push(l.clone()),
                None => {
                    return Err(Error::UnresolvedIdentifier {
                        name: token.to_string(),
                        column,
                    })
                }
            }
        }
        Ok(LString(letters))
    }
}

/// Whitespace-separated tokens paired with their 1-based column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a system file:
///
/// ```text
/// alphabet: A B
/// rules:
///   alpha: B B -> A
///   beta: A A B -> B A A B
/// ```
///
/// `#` starts a comment running to the end of the line.
pub fn parse_system(text: &str) -> Result<RewriteSystem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());

    let (line_no, line) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "expected `alphabet:`"))?;
    let rest = expect_keyword(line_no, line, "alphabet:")?;
    let mut alphabet = Vec::new();
    for (column, token) in tokens(rest) {
        let column = column + (line.len() - rest.len());
        if !is_identifier(token) {
            return Err(syntax(line_no, column, format!("invalid letter `{token}`")));
        }
        alphabet.push(Letter(token.into()));
    }
    if alphabet.is_empty() {
        return Err(syntax(
            line_no,
            line.len() + 1,
            "alphabet must declare at least one letter",
        ));
    }

    let (line_no, line) = lines
        .next()
        .ok_or_else(|| syntax(line_no + 1, 1, "expected `rules:`"))?;
    let rest = expect_keyword(line_no, line, "rules:")?;
    if let Some((column, token)) = tokens(rest).next() {
        let column = column + (line.len() - rest.len());
        return Err(syntax(
            line_no,
            column,
            format!("unexpected `{token}` after `rules:`"),
        ));
    }

    let mut rules = Vec::new();
    for (line_no, line) in lines {
        rules.push(parse_rule(line_no, line, &alphabet)?);
    }
    RewriteSystem::new(alphabet, rules)
}

fn expect_keyword<'a>(line_no: usize, line: &'a str, keyword: &str) -> Result<&'a str> {
    let trimmed = line.trim_start();
    let offset = line.len() - trimmed.len();
    trimmed
        .strip_prefix(keyword)
        .ok_or_else(|| syntax(line_no, offset + 1, format!("expected `{keyword}`")))
}

fn parse_rule(line_no: usize, line: &str, alphabet: &[Letter]) -> Result<Rule> {
    let colon = line
        .find(':')
        .ok_or_else(|| syntax(line_no, 1, "expected `name: lhs -> rhs`"))?;
    let name = line[..colon].trim();
    if !is_identifier(name) {
        let column = line.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
        return Err(syntax(
            line_no,
            column,
            format!("invalid rule name `{name}`"),
        ));
    }
    let body = &line[colon + 1..];
    let arrow = body
        .find("->")
        .ok_or_else(|| syntax(line_no, colon + 2, "expected `->`"))?;
    let side = |text: &str, offset: usize| -> Result<LString> {
        let mut letters = Vec::new();
        for (column, token) in tokens(text) {
            if !is_identifier(token) {
                return Err(syntax(
                    line_no,
                    offset + column,
                    format!("invalid letter `{token}`"),
                ));
            }
            match alphabet.iter().find(|l| l.name() == token) {
                Some(l) => letters.push(l.clone()),
                None => {
                    return Err(Error::UndeclaredLetter {
                        rule: name.to_string(),
                        letter: token.to_string(),
                    })
                }
            }
        }
        Ok(LString(letters))
    };
    let lhs = side(&body[..arrow], colon + 1)?;
    let rhs = side(&body[arrow + 2..], colon + 1 + arrow + 2)?;
    Rule::new(name, lhs, rhs)
}
