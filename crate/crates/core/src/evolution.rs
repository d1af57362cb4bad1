//! Plain-text picture of a reduction: each intermediate string, with a row
//! under it marking where the next layer's rules fire.

use crate::proofterm::{Item, MultistepReduction};
use crate::system::LString;

fn cell(text: &str, width: usize) -> String {
    format!("{text:<width$}")
}

/// Renders `r` on a grid of fixed-width cells. Letters that stay put are
/// shown as `.`, and a rule occurrence shows the first character of its
/// name under every letter of its lhs.
pub fn render_evolution(r: &MultistepReduction) -> String {
    let mut strings = vec![r.source().clone()];
    for step in r.steps() {
        strings.push(step.target());
    }
    let width = strings
        .iter()
        .flat_map(|s| s.iter().map(|l| l.name().chars().count()))
        .max()
        .unwrap_or(1);

    let row = |cells: Vec<String>| cells.join(" ").trim_end().to_string();
    let string_row = |s: &LString| row(s.iter().map(|l| cell(l.name(), width)).collect());

    let mut lines = vec![string_row(&strings[0])];
    for (step, after) in r.steps().iter().zip(&strings[1..]) {
        let mut cells = Vec::new();
        for item in step.items() {
            match item {
                Item::Letter(_) => cells.push(cell(".", width)),
                Item::Rule(rule) => {
                    let initial: String = rule.name().chars().take(1).collect();
                    cells.extend((0..rule.lhs().len()).map(|_| cell(&initial, width)));
                }
            }
        }
        lines.push(row(cells));
        lines.push(string_row(after));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
