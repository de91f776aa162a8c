//! Rendering of command results as JSON or TSV.

use serde_json::{Map, Value};

use crate::config::Format;

pub const SCHEMA: &str = "ellcoh/1";

/// A command result: a JSON document plus a flat table for TSV mode.
///
/// `ok` is false when the command ran but a requested check failed.
#[derive(Debug)]
pub struct Output {
    pub json: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Output {
    pub fn new(command: &str) -> Self {
        let mut json = Map::new();
        json.insert("schema".into(), SCHEMA.into());
        json.insert("command".into(), command.into());
        Output {
            json,
            header: Vec::new(),
            rows: Vec::new(),
            ok: true,
        }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.json.insert(key.into(), value.into());
        self
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = self.header.join("\t");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_has_header_and_one_line_per_row() {
        let out = Output::new("x").table(
            vec!["a", "b"],
            vec![vec!["1".into(), "2".into()], vec!["3".into(), "4".into()]],
        );
        assert_eq!(out.render(Format::Tsv), "a\tb\n1\t2\n3\t4\n");
    }

    #[test]
    fn json_keeps_insertion_independent_order() {
        let a = Output::new("x").field("z", 1).field("a", 2);
        let b = Output::new("x").field("a", 2).field("z", 1);
        assert_eq!(a.render(Format::Json), b.render(Format::Json));
        assert!(a.render(Format::Json).contains("\"schema\": \"ellcoh/1\""));
    }
}
