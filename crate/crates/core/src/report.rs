//! Structured reports with a stable schema.
//!
//! Every solver and audit result renders through one tree of named entries,
//! so output is diffable and golden-testable. Field order is insertion
//! order, never a hash order. Two renderings share the same tree:
//!
//! * text: `name: value` lines, nesting shown by two-space indentation;
//! * machine: one `path=value` line per leaf, paths dotted, no indentation.

use std::fmt;

/// Output shape for [`Report::render`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Entry {
    Value(String),
    Section(Report),
}

/// An ordered tree of `name: value` entries.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    entries: Vec<(String, Entry)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Appends a leaf entry. Values render via `Display`, so rationals,
    /// booleans, and labels all keep their canonical text forms.
    pub fn value(&mut self, name: impl Into<String>, v: impl fmt::Display) {
        self.entries.push((name.into(), Entry::Value(v.to_string())));
    }

    /// Appends a nested section populated by `fill`.
    pub fn section(&mut self, name: impl Into<String>, fill: impl FnOnce(&mut Report)) {
        let mut sub = Report::new();
        fill(&mut sub);
        self.entries.push((name.into(), Entry::Section(sub)));
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => self.render_text(&mut out, 0),
            Format::Machine => self.render_machine(&mut out, ""),
        }
        out
    }

    fn render_text(&self, out: &mut String, depth: usize) {
        for (name, entry) in &self.entries {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match entry {
                Entry::Value(v) => {
                    out.push_str(name);
                    out.push_str(": ");
                    out.push_str(v);
                    out.push('\n');
                }
                Entry::Section(sub) => {
                    out.push_str(name);
                    out.push_str(":\n");
                    sub.render_text(out, depth + 1);
                }
            }
        }
    }

    fn render_machine(&self, out: &mut String, prefix: &str) {
        for (name, entry) in &self.entries {
            let path = if prefix.is_empty() {
                name.clone()
            } else {
                format!("{prefix}.{name}")
            };
            match entry {
                Entry::Value(v) => {
                    out.push_str(&path);
                    out.push('=');
                    out.push_str(v);
                    out.push('\n');
                }
                Entry::Section(sub) => sub.render_machine(out, &path),
            }
        }
    }
}
