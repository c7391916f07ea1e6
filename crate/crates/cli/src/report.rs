use std::fmt::{Display, Write};

/// `key: value` lines in insertion order.
#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        writeln!(self.text, "{key}: {value}").unwrap();
        self
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Space separated, using the shortest round-trip form of each value.
pub fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}
