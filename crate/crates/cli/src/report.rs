//! Command reports: named checks with verdicts and serializable witnesses.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub witness: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub millis: u128,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            checks: Vec::new(),
            millis: 0,
        }
    }

    pub fn input(mut self, name: &str, value: impl ToString) -> Report {
        self.inputs.push((name.to_string(), value.to_string()));
        self
    }

    /// A report for a command that failed input validation.
    pub fn invalid(command: &str, message: &str) -> Report {
        let mut report = Report::new(command);
        report.checks.push(Check {
            name: "input".to_string(),
            verdict: Verdict::Error,
            witness: serde_json::Value::String(message.to_string()),
        });
        report
    }

    pub fn check(&mut self, name: &str, ok: bool, witness: serde_json::Value) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness,
        });
    }

    /// A single-value result, rendered plainly in human mode.
    pub fn result(&mut self, witness: serde_json::Value) {
        self.checks.push(Check {
            name: "result".to_string(),
            verdict: Verdict::Pass,
            witness,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render_human(&self) -> String {
        // a bare value prints as itself
        if self.checks.len() == 1 && self.checks[0].name == "result" {
            return render_value(&self.checks[0].witness);
        }
        let mut out = String::new();
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            out.push_str(&format!("{:<28} {}", c.name, verdict));
            if !c.witness.is_null() {
                out.push_str(&format!("  {}", compact(&c.witness)));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} ({} ms)\n",
            self.command,
            if self.all_pass() { "ok" } else { "failed" },
            self.millis
        ));
        out
    }
}

fn render_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => format!("{s}\n"),
        other => format!("{}\n", serde_json::to_string_pretty(other).expect("serializable")),
    }
}

fn compact(v: &serde_json::Value) -> String {
    let text = serde_json::to_string(v).expect("serializable");
    if text.len() > 120 {
        format!("{}…", &text[..119])
    } else {
        text
    }
}
