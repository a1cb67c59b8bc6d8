//! Per-goal verification reports, as an aligned table or JSON.

use std::fmt::Write;

use rlv_core::mem::MemState;
use rlv_core::smt::Verdict;
use rlv_core::vcgen::Vc;
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub name: String,
    pub hypothesis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub procedure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u128,
}

impl Row {
    pub fn new(vc: &Vc, verdict: &Verdict, millis: u128) -> Self {
        let detail = match verdict {
            Verdict::Valid => None,
            Verdict::Invalid(model) => Some(
                model
                    .states
                    .iter()
                    .map(|(name, s)| format!("{name}: {s}"))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            Verdict::Unknown(reason) => Some(reason.to_string()),
        };
        Row {
            name: vc.name.clone(),
            hypothesis: vc.origin.hypothesis.to_string(),
            procedure: vc.origin.procedure.clone(),
            pos: vc.origin.pos.map(|p| p.to_string()),
            verdict: verdict.label().to_string(),
            detail,
            millis,
        }
    }

    fn origin(&self) -> String {
        let mut s = self.hypothesis.clone();
        if let Some(p) = &self.procedure {
            let _ = write!(s, " {p}");
        }
        if let Some(pos) = &self.pos {
            let _ = write!(s, " @{pos}");
        }
        s
    }
}

/// Serializes states as objects from decimal addresses to decimal values,
/// in address order.
fn states_as_maps<S: Serializer>(states: &[MemState], ser: S) -> Result<S::Ok, S::Error> {
    struct Cells<'a>(&'a MemState);
    impl Serialize for Cells<'_> {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            ser.collect_map(self.0.iter().map(|(a, v)| (a.to_string(), v.to_string())))
        }
    }
    ser.collect_seq(states.iter().map(Cells))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Proved,
    NotProved,
    /// A countermodel whose execution violates the postcondition.
    Refuted {
        #[serde(serialize_with = "states_as_maps")]
        initial: Vec<MemState>,
        #[serde(serialize_with = "states_as_maps")]
        finals: Vec<MemState>,
    },
}

impl Status {
    pub fn exit_code(&self) -> u8 {
        match self {
            Status::Proved => 0,
            Status::NotProved | Status::Refuted { .. } => 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::NotProved => "not proved",
            Status::Refuted { .. } => "refuted",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub file: String,
    pub goal: String,
    pub vcgen: String,
    pub rows: Vec<Row>,
    #[serde(flatten)]
    pub status: Status,
}

impl RunReport {
    pub fn to_table(&self) -> String {
        let headers = ["VC", "ORIGIN", "VERDICT", "TIME"];
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    r.origin(),
                    r.verdict.clone(),
                    format!("{}ms", r.millis),
                ]
            })
            .collect();
        let mut widths = headers.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cols: [&str; 4]| {
            let mut s = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                if i + 1 == cols.len() {
                    let _ = write!(s, "{c:>w$}");
                } else {
                    let _ = write!(s, "{c:<w$}  ");
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&mut out, headers);
        for row in &cells {
            line(&mut out, [&row[0], &row[1], &row[2], &row[3]]);
        }
        for r in &self.rows {
            if let Some(d) = &r.detail {
                let _ = writeln!(out, "  {}: {d}", r.name);
            }
        }
        let _ = writeln!(out, "{}: {}", self.goal, self.status.label());
        if let Status::Refuted { initial, finals } = &self.status {
            for (k, (i, f)) in initial.iter().zip(finals).enumerate() {
                let _ = writeln!(out, "  initial state {}: {i}", k + 1);
                let _ = writeln!(out, "  final state {}:   {f}", k + 1);
            }
        }
        out
    }
}
