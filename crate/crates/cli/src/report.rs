//! Deterministic check reports.

use std::fmt::Write as _;

pub use degen_core::deligne::Verdict;
use degen_core::LeadingValue;

/// One verdict for one check at one place (`"-"` for global checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub check: String,
    pub place: String,
    pub verdict: Verdict,
    pub value: String,
    pub witnesses: Vec<String>,
}

impl ReportRow {
    pub fn new(
        check: impl Into<String>,
        place: impl Into<String>,
        verdict: Verdict,
        value: impl Into<String>,
    ) -> Self {
        ReportRow {
            check: check.into(),
            place: place.into(),
            verdict,
            value: value.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn with_witnesses(mut self, ws: impl IntoIterator<Item = String>) -> Self {
        self.witnesses.extend(ws);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub title: String,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    /// Extra lines printed before the rows in text mode.
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport {
            title: title.into(),
            rows: Vec::new(),
            notes: Vec::new(),
            details: Vec::new(),
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
        self.details.extend(other.details);
    }

    /// FAIL if any row fails, PASS if every row passes, otherwise
    /// INCONCLUSIVE (including an empty report).
    pub fn verdict(&self) -> Verdict {
        if self.rows.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if !self.rows.is_empty() && self.rows.iter().all(|r| r.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.verdict())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.title).unwrap();
        for d in &self.details {
            writeln!(s, "{d}").unwrap();
        }
        let wc = self
            .rows
            .iter()
            .map(|r| r.check.chars().count())
            .max()
            .unwrap_or(0);
        let wp = self
            .rows
            .iter()
            .map(|r| r.place.chars().count())
            .max()
            .unwrap_or(0);
        for r in &self.rows {
            writeln!(
                s,
                "  {:<wc$}  {:<wp$}  {:<12}  {}",
                r.check,
                r.place,
                r.verdict.to_string(),
                r.value
            )
            .unwrap();
            for w in &r.witnesses {
                writeln!(s, "      witness: {w}").unwrap();
            }
        }
        if self.rows.is_empty() {
            writeln!(s, "  (nothing to check)").unwrap();
        }
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        writeln!(s, "overall: {}", self.verdict()).unwrap();
        s
    }

    /// `check  place  verdict  value` rows; witnesses are appended to the
    /// value after `" | "`.
    pub fn to_tsv(&self) -> String {
        let clean = |x: &str| x.replace(['\t', '\n'], " ");
        let mut s = String::from("check\tplace\tverdict\tvalue\n");
        for r in &self.rows {
            let mut value = clean(&r.value);
            for w in &r.witnesses {
                value.push_str(" | ");
                value.push_str(&clean(w));
            }
            writeln!(
                s,
                "{}\t{}\t{}\t{}",
                clean(&r.check),
                clean(&r.place),
                r.verdict,
                value
            )
            .unwrap();
        }
        s
    }
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

/// Exit code for unreadable or inconsistent input.
pub const EXIT_INPUT_ERROR: i32 = 3;

/// `r · log(q)^k`.
pub fn fmt_leading(v: &LeadingValue) -> String {
    format!("{} · log(q)^{}", v.coeff, v.logpow)
}
