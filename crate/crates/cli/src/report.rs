use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Mismatch on a soft entry: reported, not fatal.
    Flagged,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub label: String,
    pub value: String,
    pub expected: Option<String>,
    pub status: Option<Status>,
}

/// Output of one command. Field order is fixed and nothing depends on time
/// or hashing, so identical inputs give identical bytes.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub results: Vec<Entry>,
    pub certificates: Vec<(String, bool)>,
    pub verdicts: Vec<(String, String)>,
    pub discrepancies: Vec<String>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report { command, ..Default::default() }
    }

    pub fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.push((k.into(), v.to_string()));
    }

    pub fn value(&mut self, label: impl Into<String>, value: impl ToString) {
        self.results.push(Entry { label: label.into(), value: value.to_string(), expected: None, status: None });
    }

    /// Records a comparison. Soft entries are flagged instead of failing.
    pub fn check(&mut self, label: impl Into<String>, expected: impl ToString, value: impl ToString, hard: bool) -> bool {
        let (expected, value) = (expected.to_string(), value.to_string());
        let label = label.into();
        let ok = expected == value;
        let status = match (ok, hard) {
            (true, _) => Status::Pass,
            (false, true) => Status::Fail,
            (false, false) => Status::Flagged,
        };
        if status == Status::Flagged {
            self.discrepancies.push(format!("{label}: expected {expected}, computed {value}"));
        }
        self.results.push(Entry { label, value, expected: Some(expected), status: Some(status) });
        ok
    }

    pub fn certificate(&mut self, name: impl Into<String>, ok: bool) {
        self.certificates.push((name.into(), ok));
    }

    pub fn verdict(&mut self, k: impl Into<String>, v: impl ToString) {
        self.verdicts.push((k.into(), v.to_string()));
    }

    pub fn hard_failures(&self) -> usize {
        self.results.iter().filter(|e| e.status == Some(Status::Fail)).count()
    }

    pub fn certificates_ok(&self) -> bool {
        self.certificates.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("command".into(), json!(self.command));
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        root.insert("inputs".into(), Value::Object(inputs));
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("label".into(), json!(e.label));
                m.insert("value".into(), json!(e.value));
                if let Some(x) = &e.expected {
                    m.insert("expected".into(), json!(x));
                }
                if let Some(s) = e.status {
                    m.insert("status".into(), json!(s.as_str()));
                }
                Value::Object(m)
            })
            .collect();
        root.insert("results".into(), Value::Array(results));
        let certs: Vec<Value> = self.certificates.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect();
        root.insert("certificates".into(), Value::Array(certs));
        let verdicts: Map<String, Value> = self.verdicts.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        root.insert("verdicts".into(), Value::Object(verdicts));
        root.insert("discrepancies".into(), json!(self.discrepancies));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            for (k, v) in &self.inputs {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        out.push_str("results:\n");
        for e in &self.results {
            match (&e.expected, e.status) {
                (Some(x), Some(s)) => {
                    out.push_str(&format!("  [{}] {}: expected {x}, computed {}\n", s.as_str().to_uppercase(), e.label, e.value))
                }
                _ => out.push_str(&format!("  {}: {}\n", e.label, e.value)),
            }
        }
        if !self.certificates.is_empty() {
            out.push_str("certificates:\n");
            for (n, ok) in &self.certificates {
                out.push_str(&format!("  {n}: {}\n", if *ok { "ok" } else { "FAILED" }));
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for (k, v) in &self.verdicts {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        if !self.discrepancies.is_empty() {
            out.push_str("discrepancies:\n");
            for d in &self.discrepancies {
                out.push_str(&format!("  {d}\n"));
            }
        }
        out
    }
}
