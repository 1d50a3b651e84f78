use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gkz::operators::CertifiedReport;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

/// `key: value` lines in insertion order, the artifacts they refer to, and
/// the overall verdict. Nothing time- or path-dependent goes in here, so
/// reruns are byte-identical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    lines: Vec<(String, String)>,
    artifacts: Vec<Artifact>,
    failures: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        let mut r = RunReport::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn artifact(&mut self, name: impl Into<String>, content: String) {
        let name = name.into();
        self.push("artifact", &name);
        self.artifacts.push(Artifact { name, content });
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.failures.push(why.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    pub fn get(&self, key: &str) -> Vec<&str> {
        self.lines
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    /// Records a certified operator check; violations are archived next to
    /// the checked artifact.
    pub fn verification(&mut self, artifact: &str, kind: &str, rep: &CertifiedReport) {
        self.push(
            "verify",
            format!(
                "{artifact} {kind} checked={} uncertified={} violations={}",
                rep.checked_term_count,
                rep.uncertified_term_count,
                rep.violations.len()
            ),
        );
        if !rep.passed() {
            let mut body = String::new();
            for t in &rep.violations {
                let _ = writeln!(body, "{t}");
            }
            self.artifact(format!("{artifact}.{kind}-violations"), body);
            self.fail(format!("{artifact}: {kind} operators leave nonzero terms"));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# gkz run report\n");
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k}: {v}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "failure: {f}");
        }
        let _ = writeln!(
            out,
            "status: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }

    /// Writes every artifact and `report.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            fs::write(dir.join(&a.name), &a.content)?;
        }
        fs::write(dir.join("report.txt"), self.render())?;
        Ok(())
    }
}
