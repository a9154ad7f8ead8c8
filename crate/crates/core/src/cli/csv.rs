//! Deterministic CSV: 17 significant digits, `.` decimal point, `\n` endings.

use std::fmt::Write;

/// Formats a number with 17 significant digits in scientific notation.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Default)]
pub struct CsvBuffer {
    text: String,
    columns: usize,
}

impl CsvBuffer {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut text = columns.join(",");
        text.push('\n');
        CsvBuffer {
            text,
            columns: columns.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            let _ = write!(self.text, "{v:.16e}");
        }
        self.text.push('\n');
    }

    /// A row of preformatted fields.
    pub fn raw_row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
