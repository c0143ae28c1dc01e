use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Reserved for answers limited by a truncation or an unsupported input.
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub caps_used: Value,
    pub check_id: String,
    pub numerics: Value,
    pub paper_bound: Value,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, check_id: &str, status: Status, numerics: Value) -> &mut Record {
        self.records.push(Record {
            caps_used: Value::Null,
            check_id: check_id.to_string(),
            numerics,
            paper_bound: Value::Null,
            status,
        });
        self.records.last_mut().unwrap()
    }

    pub fn check(&mut self, check_id: &str, ok: bool, numerics: Value) -> &mut Record {
        self.push(check_id, Status::from_bool(ok), numerics)
    }

    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    /// Records sorted by id, as pretty JSON.
    pub fn finish(mut self) -> String {
        self.records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        serde_json::to_string_pretty(&self).expect("serializable") + "\n"
    }
}

impl Record {
    pub fn caps(&mut self, caps: Value) -> &mut Self {
        self.caps_used = caps;
        self
    }

    pub fn bound(&mut self, bound: Value) -> &mut Self {
        self.paper_bound = bound;
        self
    }
}
