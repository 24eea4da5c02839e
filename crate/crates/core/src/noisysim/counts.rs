use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::BitString;

#[derive(Debug, Error)]
pub enum CountsError {
    #[error("line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("bitstring {0} has width {1}, expected {2}")]
    Width(String, usize, usize),
    #[error("counts sum to {sum} but total_shots is {total}")]
    Total { sum: u64, total: u64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Shot histogram over fixed-width bitstrings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsRepr")]
pub struct Counts {
    width: usize,
    total_shots: u64,
    counts: BTreeMap<BitString, u64>,
}

#[derive(Deserialize)]
struct CountsRepr {
    width: usize,
    total_shots: u64,
    counts: BTreeMap<BitString, u64>,
}

impl TryFrom<CountsRepr> for Counts {
    type Error = CountsError;
    fn try_from(r: CountsRepr) -> Result<Self, CountsError> {
        let mut c = Counts::new(r.width);
        for (s, n) in r.counts {
            c.checked_add(s, n)?;
        }
        if c.total_shots != r.total_shots {
            return Err(CountsError::Total {
                sum: c.total_shots,
                total: r.total_shots,
            });
        }
        Ok(c)
    }
}

impl Counts {
    pub fn new(width: usize) -> Self {
        Counts {
            width,
            total_shots: 0,
            counts: BTreeMap::new(),
        }
    }

    fn checked_add(&mut self, s: BitString, n: u64) -> Result<(), CountsError> {
        if s.width() != self.width {
            return Err(CountsError::Width(s.to_string(), s.width(), self.width));
        }
        self.add(s, n);
        Ok(())
    }

    /// Record `n` shots of `s`. Panics on a width mismatch.
    pub fn add(&mut self, s: BitString, n: u64) {
        assert_eq!(s.width(), self.width, "bitstring width mismatch");
        if n == 0 {
            return;
        }
        *self.counts.entry(s).or_insert(0) += n;
        self.total_shots += n;
    }

    pub fn merge(&mut self, other: &Counts) {
        for (s, &n) in &other.counts {
            self.add(s.clone(), n);
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    /// Number of distinct strings observed.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, s: &BitString) -> u64 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn probability(&self, s: &BitString) -> f64 {
        if self.total_shots == 0 {
            0.0
        } else {
            self.get(s) as f64 / self.total_shots as f64
        }
    }

    /// Observed strings in ascending order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (&BitString, u64)> {
        self.counts.iter().map(|(s, &n)| (s, n))
    }

    pub fn distribution(&self) -> BTreeMap<BitString, f64> {
        self.iter()
            .map(|(s, n)| (s.clone(), n as f64 / self.total_shots as f64))
            .collect()
    }

    /// `bitstring,count` rows under a header, strings ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,count\n");
        for (s, n) in self.iter() {
            let _ = writeln!(out, "{s},{n}");
        }
        out
    }

    /// Parse the CSV form. The width is taken from the first row, or
    /// `empty_width` when there are none.
    pub fn from_csv(text: &str, empty_width: usize) -> Result<Self, CountsError> {
        let mut out: Option<Counts> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || (i == 0 && line.starts_with("bitstring")) {
                continue;
            }
            let err = |msg: &str| CountsError::Csv {
                line: i + 1,
                msg: msg.to_string(),
            };
            let (s, n) = line.split_once(',').ok_or_else(|| err("expected `bitstring,count`"))?;
            let s: BitString = s.trim().parse().map_err(|_| err("invalid bitstring"))?;
            let n: u64 = n.trim().parse().map_err(|_| err("invalid count"))?;
            out.get_or_insert_with(|| Counts::new(s.width())).checked_add(s, n)?;
        }
        Ok(out.unwrap_or_else(|| Counts::new(empty_width)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counts serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CountsError> {
        Ok(serde_json::from_str(text)?)
    }
}
