use serde_json::json;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Checks in registry order; passes iff every check passes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, name: &'static str, outcome: Result<String, String>) {
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check { name, pass, detail });
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn ok(&self) -> bool {
        self.passed() == self.checks.len()
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<width$}  {}\n", c.name, c.detail));
        }
        out.push_str(&format!("{}/{} checks passed\n", self.passed(), self.checks.len()));
        out
    }

    pub fn to_json(&self) -> String {
        let checks: Vec<_> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": if c.pass { "PASS" } else { "FAIL" },
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = json!({
            "checks": checks,
            "passed": self.passed(),
            "total": self.checks.len(),
        });
        serde_json::to_string_pretty(&doc).expect("plain JSON values") + "\n"
    }
}
