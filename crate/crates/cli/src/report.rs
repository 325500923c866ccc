//! `key=value` report records, one block per statement.

use std::fmt;

use crate::parser::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub fields: Vec<(String, String)>,
    pub status: Status,
}

impl Record {
    pub fn new() -> Record {
        Record { fields: Vec::new(), status: Status::Ok }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        // values stay on one line so every record line is a single pair
        let v = value.to_string().lines().map(str::trim).collect::<Vec<_>>().join("; ");
        self.fields.push((key.into(), v));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl Default for Record {
    fn default() -> Self {
        Record::new()
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}={v}")?;
        }
        writeln!(f, "status={}", self.status)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
    pub parse_error: bool,
}

impl Report {
    pub fn from_parse_error(e: &ParseError) -> Report {
        let mut r = Record::new();
        r.push("kind", "parse-error");
        r.push("line", e.line);
        r.push("column", e.column);
        r.push("token", &e.token);
        r.push("error", &e.message);
        r.status = Status::Error;
        Report { records: vec![r], parse_error: true }
    }

    /// 0 when everything passed, 1 for a failed check, 2 for an evaluation
    /// error and 3 for a parse error.
    pub fn exit_code(&self) -> i32 {
        if self.parse_error {
            return 3;
        }
        match self.records.iter().map(|r| r.status).max() {
            Some(Status::Error) => 2,
            Some(Status::Fail) => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.records.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_render_as_blocks() {
        let mut a = Record::new();
        a.push("kind", "count");
        a.push("value", "two\nlines");
        let mut b = Record::new();
        b.push("kind", "check");
        b.status = Status::Fail;
        let r = Report { records: vec![a, b], parse_error: false };
        assert_eq!(r.to_string(), "kind=count\nvalue=two; lines\nstatus=ok\n\nkind=check\nstatus=fail\n");
        assert_eq!(r.exit_code(), 1);
        assert_eq!(Report::default().to_string(), "");
        assert_eq!(Report::default().exit_code(), 0);
    }
}
