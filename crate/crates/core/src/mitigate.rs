//! Canary ordering, per-string rank correlation and reweighting.
//!
//! Each ensemble member yields a target histogram and a canary histogram.
//! Members are ordered by canary fidelity; every frequently seen output
//! string gets the Spearman correlation between its per-member probability
//! and that ordering, and the pooled distribution is reweighted by the
//! clipped correlation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::circuit::{BitString, Circuit};
use crate::noisysim::Counts;
use crate::stabsim::{ideal_probability, StabError};

/// Distribution over output strings.
pub type Distribution = BTreeMap<BitString, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MitigateError {
    #[error("canary: {0}")]
    Canary(#[from] StabError),
    #[error("vectors of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {need} values, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("no string reaches f_min = {0} on any member")]
    EmptyStrings(f64),
    #[error("f_min must lie in (0, 1], got {0}")]
    BadFMin(f64),
    #[error("ensemble run is inconsistent: {0}")]
    Inconsistent(String),
}

/// Target and canary histograms of every ensemble member.
#[derive(Clone, Debug)]
pub struct EnsembleRun {
    pub members: Vec<String>,
    pub target_counts: Vec<Counts>,
    pub canary_counts: Vec<Counts>,
    pub target_circuit: Circuit,
    pub canary_circuit: Circuit,
}

impl EnsembleRun {
    pub fn new(
        members: Vec<String>,
        target_counts: Vec<Counts>,
        canary_counts: Vec<Counts>,
        target_circuit: Circuit,
        canary_circuit: Circuit,
    ) -> Result<Self, MitigateError> {
        let bad = |m: &str| Err(MitigateError::Inconsistent(m.to_string()));
        if members.is_empty() {
            return bad("no members");
        }
        if target_counts.len() != members.len() || canary_counts.len() != members.len() {
            return bad("one target and one canary histogram per member");
        }
        let unique: BTreeSet<&String> = members.iter().collect();
        if unique.len() != members.len() {
            return bad("member labels must be unique");
        }
        for set in [&target_counts, &canary_counts] {
            if set.iter().any(|c| c.total_shots() != set[0].total_shots() || c.total_shots() == 0) {
                return bad("every member needs the same nonzero shot count per circuit");
            }
        }
        Ok(EnsembleRun {
            members,
            target_counts,
            canary_counts,
            target_circuit,
            canary_circuit,
        })
    }

    /// A sub-ensemble made of the first `k` members.
    pub fn prefix(&self, k: usize) -> EnsembleRun {
        EnsembleRun {
            members: self.members[..k].to_vec(),
            target_counts: self.target_counts[..k].to_vec(),
            canary_counts: self.canary_counts[..k].to_vec(),
            target_circuit: self.target_circuit.clone(),
            canary_circuit: self.canary_circuit.clone(),
        }
    }

    /// Shot-weighted mean of the member target distributions.
    pub fn pooled(&self) -> Distribution {
        let mut sum: BTreeMap<BitString, u64> = BTreeMap::new();
        let mut total = 0u64;
        for c in &self.target_counts {
            for (s, n) in c.iter() {
                *sum.entry(s.clone()).or_insert(0) += n;
            }
            total += c.total_shots();
        }
        sum.into_iter()
            .map(|(s, n)| (s, n as f64 / total as f64))
            .collect()
    }
}

/// Overlap `Σ min(a(s), b(s))` of two distributions.
pub fn overlap(a: &Distribution, b: &Distribution) -> f64 {
    a.iter()
        .filter_map(|(s, &p)| b.get(s).map(|&q| p.min(q)))
        .sum()
}

/// Histogram overlap between noisy canary counts and the canary's ideal
/// distribution. The ideal side is only evaluated on observed strings.
pub fn canary_fidelity(counts: &Counts, canary: &Circuit) -> Result<f64, MitigateError> {
    let mut f = 0.0;
    for (s, _) in counts.iter() {
        f += counts.probability(s).min(ideal_probability(canary, s)?);
    }
    Ok(f)
}

/// Canary fidelity of every member, evaluating each distinct string's
/// ideal probability once.
pub fn canary_fidelities(run: &EnsembleRun) -> Result<Vec<f64>, MitigateError> {
    let strings: BTreeSet<&BitString> = run
        .canary_counts
        .iter()
        .flat_map(|c| c.iter().map(|(s, _)| s))
        .collect();
    let ideal: HashMap<&BitString, f64> = strings
        .into_par_iter()
        .map(|s| Ok((s, ideal_probability(&run.canary_circuit, s)?)))
        .collect::<Result<_, MitigateError>>()?;
    Ok(run
        .canary_counts
        .iter()
        .map(|c| c.iter().map(|(s, _)| c.probability(s).min(ideal[s])).sum())
        .collect())
}

/// 1-based ranks in ascending order; tied values share their mean rank.
pub fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Members ranked by ascending canary fidelity.
pub fn canary_ordering(fidelities: &[f64]) -> Vec<f64> {
    fractional_ranks(fidelities)
}

/// Pearson correlation of the fractional ranks; 0 when either side is
/// constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, MitigateError> {
    if x.len() != y.len() {
        return Err(MitigateError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MitigateError::TooShort {
            need: 2,
            got: x.len(),
        });
    }
    Ok(pearson(&fractional_ranks(x), &fractional_ranks(y)))
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Strings whose probability reaches `f_min` on at least one member, by
/// pooled count descending (ties ascending), at most `⌈1/f_min⌉` of them.
pub fn collect_strings(run: &EnsembleRun, f_min: f64) -> Result<Vec<BitString>, MitigateError> {
    if !(f_min > 0.0 && f_min <= 1.0) {
        return Err(MitigateError::BadFMin(f_min));
    }
    let mut stats: BTreeMap<&BitString, (f64, u64)> = BTreeMap::new();
    for c in &run.target_counts {
        for (s, n) in c.iter() {
            let e = stats.entry(s).or_insert((0.0, 0));
            e.0 = e.0.max(c.probability(s));
            e.1 += n;
        }
    }
    let mut keep: Vec<(&BitString, u64)> = stats
        .into_iter()
        .filter(|&(_, (pmax, _))| pmax >= f_min)
        .map(|(s, (_, n))| (s, n))
        .collect();
    if keep.is_empty() {
        return Err(MitigateError::EmptyStrings(f_min));
    }
    keep.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    keep.truncate(string_bound(f_min));
    Ok(keep.into_iter().map(|(s, _)| s.clone()).collect())
}

/// `⌈1/f_min⌉`, the most strings a run ever analyzes.
pub fn string_bound(f_min: f64) -> usize {
    (1.0 / f_min - 1e-9).ceil() as usize
}

/// Spearman correlation of each string's per-member probability with the
/// per-member canary fidelity.
pub fn correlate(run: &EnsembleRun, strings: &[BitString], fidelities: &[f64]) -> Vec<f64> {
    let canary_ranks = fractional_ranks(fidelities);
    strings
        .par_iter()
        .map(|s| {
            let p: Vec<f64> = run.target_counts.iter().map(|c| c.probability(s)).collect();
            if p.len() < 2 {
                return 0.0;
            }
            pearson(&fractional_ranks(&p), &canary_ranks)
        })
        .collect()
}

/// How a correlation turns into a reweighting factor.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum WeightFn {
    /// `max(ρ, 0)`
    #[default]
    Linear,
    /// `max(ρ, 0)²`
    Squared,
    /// 1 when `ρ ≥ τ`, else 0.
    Threshold(f64),
}

impl WeightFn {
    pub fn weight(self, rho: f64) -> f64 {
        match self {
            WeightFn::Linear => rho.max(0.0),
            WeightFn::Squared => rho.max(0.0).powi(2),
            WeightFn::Threshold(t) => {
                if rho >= t && rho > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFn::Linear => f.write_str("linear"),
            WeightFn::Squared => f.write_str("squared"),
            WeightFn::Threshold(t) => write!(f, "threshold:{t}"),
        }
    }
}

impl FromStr for WeightFn {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(WeightFn::Linear),
            "squared" => Ok(WeightFn::Squared),
            _ => s
                .strip_prefix("threshold:")
                .and_then(|t| t.parse::<f64>().ok())
                .filter(|t| t.is_finite())
                .map(WeightFn::Threshold)
                .ok_or_else(|| {
                    format!("unknown weight function {s:?} (linear, squared, threshold:<tau>)")
                }),
        }
    }
}

impl Serialize for WeightFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Reweighted distribution `q ∝ p_base · w(ρ)`. When every weight is zero
/// `q = p_base` and the returned flag is set.
pub fn weight_distribution(p_base: &[f64], rho: &[f64], wf: WeightFn) -> (Vec<f64>, Vec<f64>, bool) {
    let weights: Vec<f64> = rho.iter().map(|&r| wf.weight(r)).collect();
    let raw: Vec<f64> = p_base.iter().zip(&weights).map(|(p, w)| p * w).collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        (weights, raw.iter().map(|x| x / total).collect(), false)
    } else {
        (weights, p_base.to_vec(), true)
    }
}

/// Position of a string in the correlation ranking, or absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    At(usize),
    Absent,
}

impl Rank {
    pub fn position(self) -> Option<usize> {
        match self {
            Rank::At(r) => Some(r),
            Rank::Absent => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::At(r) => write!(f, "{r}"),
            Rank::Absent => f.write_str("inf"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::At(r) => s.serialize_u64(*r as u64),
            Rank::Absent => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(usize),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(r) => Ok(Rank::At(r)),
            Repr::S(s) if s == "inf" => Ok(Rank::Absent),
            Repr::S(s) => Err(serde::de::Error::custom(format!("invalid rank {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub string: BitString,
    pub rho: f64,
    pub p_base: f64,
    pub weight: f64,
    pub q: f64,
}

/// Sort records by ρ descending, then `p_base` descending, then string.
pub fn sort_records(records: &mut [CorrelationRecord]) {
    records.sort_by(|a, b| {
        b.rho
            .total_cmp(&a.rho)
            .then_with(|| b.p_base.total_cmp(&a.p_base))
            .then_with(|| a.string.cmp(&b.string))
    });
}

/// Best and worst 1-based positions of the `correct` strings in the
/// correlation ranking. Any correct string missing from the records makes
/// the worst rank absent; all missing makes both absent.
pub fn rank_of(records: &[CorrelationRecord], correct: &BTreeSet<BitString>) -> (Rank, Rank) {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let positions: Vec<usize> = sorted
        .iter()
        .enumerate()
        .filter(|(_, r)| correct.contains(&r.string))
        .map(|(i, _)| i + 1)
        .collect();
    let best = positions.first().map_or(Rank::Absent, |&p| Rank::At(p));
    let worst = if positions.len() == correct.len() {
        positions.last().map_or(Rank::Absent, |&p| Rank::At(p))
    } else {
        Rank::Absent
    };
    (best, worst)
}

/// Outcome metrics against an ideal distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Strings counted as correct for the rank metric.
    pub correct: Vec<BitString>,
    pub rank_best: Rank,
    pub rank_worst: Rank,
    pub fidelity_q: f64,
    pub fidelity_pooled: f64,
    pub member_fidelities: Vec<f64>,
    pub mean_member_fidelity: f64,
    pub best_member_fidelity: f64,
    /// `fidelity_q` over the mean member fidelity; absent when that is 0.
    pub boost_mean: Option<f64>,
    /// `fidelity_q` over the best member fidelity; absent when that is 0.
    pub boost_vs_best: Option<f64>,
}

/// Overlap of each member's target histogram with `ideal`.
pub fn member_fidelities(run: &EnsembleRun, ideal: &Distribution) -> Vec<f64> {
    run.target_counts
        .iter()
        .map(|c| overlap(&c.distribution(), ideal))
        .collect()
}

/// Fidelity of `q` against `ideal`, and its ratio to the mean and to the
/// best member fidelity (`None` when that baseline is 0).
pub fn metrics(run: &EnsembleRun, q: &Distribution, ideal: &Distribution) -> (f64, Option<f64>, Option<f64>) {
    let fq = overlap(q, ideal);
    let members = member_fidelities(run, ideal);
    let mean = members.iter().sum::<f64>() / members.len() as f64;
    let best = members.iter().copied().fold(0.0, f64::max);
    let ratio = |d: f64| (d > 0.0).then(|| fq / d);
    (fq, ratio(mean), ratio(best))
}

/// Strings whose ideal probability is at least `relative` times the
/// largest ideal probability.
pub fn correct_set(ideal: &Distribution, relative: f64) -> BTreeSet<BitString> {
    let max = ideal.values().copied().fold(0.0, f64::max);
    ideal
        .iter()
        .filter(|&(_, &p)| p > 0.0 && p >= relative * max)
        .map(|(s, _)| s.clone())
        .collect()
}

/// Knobs of the post-processing stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub f_min: f64,
    pub weight: WeightFn,
    /// Ideal strings within this factor of the most likely one count as
    /// correct for the rank metric.
    pub correct_relative: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            f_min: 1e-3,
            weight: WeightFn::Linear,
            correct_relative: 0.5,
        }
    }
}

/// Everything the method computes for one ensemble run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Resolved configuration of the run that produced this report.
    pub config: serde_json::Value,
    pub members: Vec<String>,
    pub canary_fidelities: Vec<f64>,
    pub canary_ranks: Vec<f64>,
    pub strings_analyzed: usize,
    pub string_bound: usize,
    pub fallback: bool,
    /// In correlation-rank order.
    pub records: Vec<CorrelationRecord>,
    pub metrics: Option<Metrics>,
}

/// Run the whole post-processing stage on `run`.
pub fn analyze(
    run: &EnsembleRun,
    cfg: &AnalysisConfig,
    ideal: Option<&Distribution>,
) -> Result<Report, MitigateError> {
    let fidelities = canary_fidelities(run)?;
    analyze_with_fidelities(run, cfg, ideal, fidelities)
}

/// As [`analyze`] with canary fidelities already computed (they depend only
/// on the canary histograms, so sub-ensembles can reuse them).
pub fn analyze_with_fidelities(
    run: &EnsembleRun,
    cfg: &AnalysisConfig,
    ideal: Option<&Distribution>,
    fidelities: Vec<f64>,
) -> Result<Report, MitigateError> {
    if fidelities.len() != run.members.len() {
        return Err(MitigateError::LengthMismatch(fidelities.len(), run.members.len()));
    }
    let strings = collect_strings(run, cfg.f_min)?;
    let rho = correlate(run, &strings, &fidelities);
    let pooled = run.pooled();
    let raw: Vec<f64> = strings.iter().map(|s| pooled[s]).collect();
    let total: f64 = raw.iter().sum();
    let p_base: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let (weights, q, fallback) = weight_distribution(&p_base, &rho, cfg.weight);
    let mut records: Vec<CorrelationRecord> = strings
        .iter()
        .enumerate()
        .map(|(i, s)| CorrelationRecord {
            string: s.clone(),
            rho: rho[i],
            p_base: p_base[i],
            weight: weights[i],
            q: q[i],
        })
        .collect();
    sort_records(&mut records);

    let metrics = ideal.map(|ideal| {
        let qd: Distribution = records.iter().map(|r| (r.string.clone(), r.q)).collect();
        let (fidelity_q, boost_mean, boost_vs_best) = metrics(run, &qd, ideal);
        let member_fidelities = member_fidelities(run, ideal);
        let correct = correct_set(ideal, cfg.correct_relative);
        let (rank_best, rank_worst) = rank_of(&records, &correct);
        let mean = member_fidelities.iter().sum::<f64>() / member_fidelities.len() as f64;
        let best = member_fidelities.iter().copied().fold(0.0, f64::max);
        Metrics {
            correct: correct.into_iter().collect(),
            rank_best,
            rank_worst,
            fidelity_q,
            fidelity_pooled: overlap(&pooled, ideal),
            member_fidelities,
            mean_member_fidelity: mean,
            best_member_fidelity: best,
            boost_mean,
            boost_vs_best,
        }
    });

    Ok(Report {
        config: serde_json::Value::Null,
        members: run.members.clone(),
        canary_ranks: canary_ordering(&fidelities),
        canary_fidelities: fidelities,
        strings_analyzed: records.len(),
        string_bound: string_bound(cfg.f_min),
        fallback,
        records,
        metrics,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Records table `string,rho,p_base,q` in rank order.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("string,rho,p_base,q\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.string, r.rho, r.p_base, r.q);
        }
        out
    }

    pub fn record(&self, s: &BitString) -> Option<&CorrelationRecord> {
        self.records.iter().find(|r| &r.string == s)
    }

    /// Human-readable digest.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "members            {}", self.members.len());
        let fmin = self.canary_fidelities.iter().copied().fold(f64::INFINITY, f64::min);
        let fmax = self.canary_fidelities.iter().copied().fold(0.0, f64::max);
        let _ = writeln!(out, "canary fidelity    {fmin:.4} .. {fmax:.4}");
        let _ = writeln!(
            out,
            "strings analyzed   {} (bound {})",
            self.strings_analyzed, self.string_bound
        );
        if self.fallback {
            let _ = writeln!(out, "fallback           no positive correlation; q = p_base");
        }
        if let Some(m) = &self.metrics {
            let ratio = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.3}x"));
            let _ = writeln!(out, "correct strings    {}", m.correct.len());
            let _ = writeln!(out, "rank of correct    best {} worst {}", m.rank_best, m.rank_worst);
            let _ = writeln!(out, "fidelity q         {:.4}", m.fidelity_q);
            let _ = writeln!(out, "fidelity pooled    {:.4}", m.fidelity_pooled);
            let _ = writeln!(
                out,
                "member fidelity    mean {:.4} best {:.4}",
                m.mean_member_fidelity, m.best_member_fidelity
            );
            let _ = writeln!(out, "boost              mean {} vs best {}", ratio(m.boost_mean), ratio(m.boost_vs_best));
        }
        let _ = writeln!(out, "top strings");
        let _ = writeln!(out, "  {:<w$}  {:>8}  {:>8}  {:>8}", "string", "rho", "p_base", "q", w = self.records.first().map_or(6, |r| r.string.width().max(6)));
        for r in self.records.iter().take(10) {
            let _ = writeln!(
                out,
                "  {:<w$}  {:>8.4}  {:>8.4}  {:>8.4}",
                r.string.to_string(),
                r.rho,
                r.p_base,
                r.q,
                w = r.string.width().max(6)
            );
        }
        out
    }
}
