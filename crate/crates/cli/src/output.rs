use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::args::{Format, OutputArgs};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    schema_version: &'static str,
    command: &'a str,
    passed: bool,
    config: &'a Value,
    report: &'a R,
}

/// One finished command: the JSON report plus optional CSV and text views.
pub struct Rendered<'a, R: Serialize> {
    pub command: &'a str,
    pub passed: bool,
    pub config: Value,
    pub report: &'a R,
    pub csv: Option<String>,
    pub text: String,
}

impl<R: Serialize> Rendered<'_, R> {
    pub fn emit(self, output: &OutputArgs) -> Result<Outcome, String> {
        let body = match output.format {
            Format::Json => {
                let envelope = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command: self.command,
                    passed: self.passed,
                    config: &self.config,
                    report: self.report,
                };
                let mut s = serde_json::to_string_pretty(&envelope).map_err(|e| e.to_string())?;
                s.push('\n');
                s
            }
            Format::Csv => self
                .csv
                .ok_or_else(|| format!("`{}` has no CSV view; use --format json or text", self.command))?,
            Format::Text => {
                let mut s = self.text;
                s.push_str(if self.passed { "result: PASS\n" } else { "result: FAIL\n" });
                s
            }
        };
        match &output.out {
            Some(path) => fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display()))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes()).map_err(|e| e.to_string())?;
            }
        }
        Ok(Outcome::from_passed(self.passed))
    }
}
