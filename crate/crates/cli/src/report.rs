//! Tab-separated `utt-id<TAB>metric<TAB>value` reports.

use std::fmt::{Display, Write as _};
use std::path::Path;

use crate::files;

#[derive(Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn row(&mut self, id: &str, metric: &str, value: impl Display) {
        let _ = writeln!(self.text, "{id}\t{metric}\t{value}");
    }

    pub fn ratio(&mut self, id: &str, metric: &str, value: f64) {
        self.row(id, metric, format_args!("{value:.6}"));
    }

    /// Writes to `dest`, or stdout when absent.
    pub fn emit(&self, dest: Option<&Path>) -> anyhow::Result<()> {
        match dest {
            Some(p) => files::write(p, &self.text),
            None => {
                print!("{}", self.text);
                Ok(())
            }
        }
    }
}
