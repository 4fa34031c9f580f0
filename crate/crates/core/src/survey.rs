//! Classification of single words, the bounded-length survey, and the
//! finite counterexample pipeline.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::certificates::{certify_word, CertificateReport, Family};
use crate::error::{Error, Result};
use crate::gp::{Counterexample, GpElement, GpGroup};
use crate::modp::{default_smooth_bound, find_suitable_prime, prime_profile_with, PrimeProfile};
use crate::par::{self, Execution};
use crate::radical::{solve_decomposable, RadicalExpr};
use crate::word::{decompose, enumerate_words, DecompositionWitness, Word};

/// Longest word length the survey accepts.
pub const SURVEY_LENGTH_BUDGET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyVerdict {
    Decomposable,
    EvidenceNotUniversal,
    Unresolved,
}

impl SurveyVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SurveyVerdict::Decomposable => "decomposable",
            SurveyVerdict::EvidenceNotUniversal => "evidence-not-universal",
            SurveyVerdict::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub p_min: u64,
    pub p_max: u64,
    /// Exceptional primes at or below this are tolerated.
    pub cutoff: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            p_min: crate::modp::DEFAULT_P_MIN,
            p_max: crate::modp::DEFAULT_P_MAX,
            cutoff: crate::modp::DEFAULT_SMALL_PRIME_CUTOFF,
        }
    }
}

/// Full result of classifying one word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub word: Word,
    pub decomposable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DecompositionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<RadicalExpr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PrimeProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    pub verdict: SurveyVerdict,
}

impl Classification {
    pub fn exceptional_primes(&self) -> Vec<u64> {
        self.profile.as_ref().map(|p| p.exceptional.clone()).unwrap_or_default()
    }
}

pub fn classify(w: &Word, opts: &ScanOptions) -> Result<Classification> {
    classify_with(w, opts, Execution::default())
}

pub fn classify_with(w: &Word, opts: &ScanOptions, exec: Execution) -> Result<Classification> {
    if w.x_count() == 0 {
        return Err(Error::InvalidArgument(format!("{w} contains no X")));
    }
    if let Some(witness) = decompose(w) {
        return Ok(Classification {
            word: w.clone(),
            decomposable: true,
            solution: Some(solve_decomposable(&witness)),
            witness: Some(witness),
            profile: None,
            certificate: None,
            verdict: SurveyVerdict::Decomposable,
        });
    }
    let profile = prime_profile_with(w, opts.p_min, opts.p_max, exec)?;
    let certificate = certify_word(&w.strip_a());
    let certified = certificate.as_ref().is_some_and(CertificateReport::is_certified);
    let verdict = if certified || profile.exceptional_above(opts.cutoff).is_empty() {
        SurveyVerdict::EvidenceNotUniversal
    } else {
        SurveyVerdict::Unresolved
    };
    Ok(Classification {
        word: w.clone(),
        decomposable: false,
        witness: None,
        solution: None,
        profile: Some(profile),
        certificate,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateHit {
    pub family: Family,
    pub params: Vec<u32>,
    pub certified: bool,
}

/// One line of the survey output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub word: String,
    pub length: usize,
    pub x_count: usize,
    pub decomposable: bool,
    pub witness: Option<DecompositionWitness>,
    /// Exceptional primes in the scanned range (empty for decomposable words).
    pub exceptional_primes: Vec<u64>,
    pub certificate: Option<CertificateHit>,
    pub verdict: SurveyVerdict,
    /// Present only on unresolved rows.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub profile: Option<PrimeProfile>,
}

impl SurveyRow {
    pub fn from_classification(c: Classification) -> Self {
        let exceptional_primes = c.exceptional_primes();
        let unresolved = c.verdict == SurveyVerdict::Unresolved;
        SurveyRow {
            word: c.word.render(),
            length: c.word.len(),
            x_count: c.word.x_count(),
            decomposable: c.decomposable,
            witness: c.witness,
            exceptional_primes,
            certificate: c.certificate.map(|r| CertificateHit {
                certified: r.is_certified(),
                family: r.family,
                params: r.params,
            }),
            verdict: c.verdict,
            profile: if unresolved { c.profile } else { None },
        }
    }
}

/// Classifies every word of length at most `max_len` that begins and ends
/// with `X`, in enumeration order.
pub fn run_survey(max_len: usize, opts: &ScanOptions, exec: Execution) -> Result<Vec<SurveyRow>> {
    if max_len > SURVEY_LENGTH_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "max length {max_len} exceeds the budget of {SURVEY_LENGTH_BUDGET}"
        )));
    }
    let words: Vec<Word> = enumerate_words(max_len, true).collect();
    par::map(exec, &words, |w| classify_with(w, opts, Execution::Sequential).map(SurveyRow::from_classification))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SurveySummary {
    pub total: usize,
    pub decomposable: usize,
    pub evidence_not_universal: usize,
    pub unresolved: usize,
}

pub fn summarize(rows: &[SurveyRow]) -> SurveySummary {
    let mut s = SurveySummary {
        total: rows.len(),
        ..Default::default()
    };
    for r in rows {
        match r.verdict {
            SurveyVerdict::Decomposable => s.decomposable += 1,
            SurveyVerdict::EvidenceNotUniversal => s.evidence_not_universal += 1,
            SurveyVerdict::Unresolved => s.unresolved += 1,
        }
    }
    s
}

pub fn write_jsonl<W: Write>(rows: &[SurveyRow], mut out: W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(rows: &[SurveyRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(["word", "length", "x_count", "decomposable", "witness", "exceptional_primes", "certificate", "verdict"])
        .map_err(io)?;
    for r in rows {
        let exceptional = r.exceptional_primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let cert = r
            .certificate
            .as_ref()
            .map(|c| {
                let params = c.params.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                format!("{:?}({params}){}", c.family, if c.certified { "" } else { "?" })
            })
            .unwrap_or_default();
        wtr.write_record([
            r.word.clone(),
            r.length.to_string(),
            r.x_count.to_string(),
            r.decomposable.to_string(),
            r.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
            exceptional,
            cert,
            r.verdict.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub x1: GpElement,
    pub x2: GpElement,
    pub value: GpElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub word: Word,
    pub p: u64,
    pub q: u64,
    pub t: u64,
    pub order: u64,
    /// Suitable primes skipped because `P_w(x^2, y^2)` had no nonzero zero.
    pub skipped: Vec<u64>,
    pub counterexample: Counterexample,
    pub no_solution_verified: bool,
    pub collision: Option<Collision>,
}

impl CounterexampleReport {
    pub fn transcript(&self) -> Vec<String> {
        let c = &self.counterexample;
        let mut lines = vec![format!("word {}", self.word)];
        for p in &self.skipped {
            lines.push(format!("p = {p}: no nonzero zero of P_w(x^2, y^2), skipped"));
        }
        lines.push(format!(
            "p = {}, q = {}, t = {}, |G_p| = {}",
            self.p, self.q, self.t, self.order
        ));
        lines.push(format!(
            "zero (x, y) = ({}, {}); x^2 = t^{}, y^2 = t^{}",
            c.x, c.y, c.delta, c.alpha
        ));
        lines.push(format!("a = {}", fmt_elem(c.a)));
        lines.push(format!("b = {}", fmt_elem(c.b)));
        lines.push(format!(
            "w(X, a) = b over all {} elements: {}",
            self.order,
            if self.no_solution_verified { "no solution" } else { "SOLUTION FOUND" }
        ));
        match &self.collision {
            Some(col) => lines.push(format!(
                "b' = {}: w(X, a) = b' for X = {} and X = {}",
                fmt_elem(col.value),
                fmt_elem(col.x1),
                fmt_elem(col.x2)
            )),
            None => lines.push("no collision found".into()),
        }
        lines
    }
}

/// `z -> t^beta z + gamma` shown as `(gamma, beta)`.
fn fmt_elem(g: GpElement) -> String {
    format!("(gamma={}, beta={})", g.gamma, g.beta)
}

/// Builds a finite group in which `w(X, a) = b` has no solution, starting at
/// the first suitable prime at or above `p_min` and moving on while the word
/// polynomial has no usable zero.
pub fn counterexample_pipeline(w: &Word, p_min: u64, exec: Execution) -> Result<CounterexampleReport> {
    if w.x_count() == 0 {
        return Err(Error::InvalidArgument(format!("{w} contains no X")));
    }
    if decompose(w).is_some() {
        return Err(Error::Hypothesis(format!(
            "{w} is totally decomposable, so the equation is solvable in every uniquely divisible group"
        )));
    }
    let n = w.x_count() as u64;
    let mut lower = p_min.saturating_sub(1);
    let mut skipped = Vec::new();
    loop {
        let p = find_suitable_prime(n, lower, default_smooth_bound(n))?;
        let group = GpGroup::new(p)?;
        match group.construct_counterexample(w)? {
            Some(ce) => {
                let no_solution_verified = group.verify_no_solution_with(w, ce.a, ce.b, exec);
                let collision = group
                    .find_collision_with(w, ce.a, exec)
                    .map(|(x1, x2, value)| Collision { x1, x2, value });
                return Ok(CounterexampleReport {
                    word: w.clone(),
                    p,
                    q: group.q(),
                    t: group.t(),
                    order: group.order(),
                    skipped,
                    counterexample: ce,
                    no_solution_verified,
                    collision,
                });
            }
            None => {
                skipped.push(p);
                lower = p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        let opts = ScanOptions::default();
        let c = classify(&w("XAXAX"), &opts).unwrap();
        assert_eq!(c.verdict, SurveyVerdict::Decomposable);
        assert!(c.solution.is_some());
        let c = classify(&w("X"), &opts).unwrap();
        assert!(c.witness.unwrap().is_empty());
        let c = classify(&w("X^2AX"), &opts).unwrap();
        assert_eq!(c.verdict, SurveyVerdict::EvidenceNotUniversal);
        assert!(c.certificate.unwrap().is_certified());
        assert!(classify(&w("A"), &opts).is_err());
    }

    #[test]
    fn small_surveys() {
        let opts = ScanOptions { p_min: 5, p_max: 97, cutoff: 13 };
        let rows = run_survey(3, &opts, Execution::Sequential).unwrap();
        let words: Vec<_> = rows.iter().map(|r| r.word.as_str()).collect();
        assert_eq!(words, ["X", "X^2", "X^3", "XAX"]);
        assert!(rows.iter().all(|r| r.verdict == SurveyVerdict::Decomposable));

        let rows = run_survey(4, &opts, Execution::Sequential).unwrap();
        let xaax = rows.iter().find(|r| r.word == "XA^2X").unwrap();
        assert_eq!(xaax.witness.as_ref().unwrap().to_string(), "pi(1,2) (X)");
        assert_eq!(summarize(&rows).unresolved, 0);
        assert!(run_survey(SURVEY_LENGTH_BUDGET + 1, &opts, Execution::Sequential).is_err());
    }

    #[test]
    fn survey_modes_agree() {
        let opts = ScanOptions { p_min: 5, p_max: 61, cutoff: 13 };
        let a = run_survey(6, &opts, Execution::Sequential).unwrap();
        let b = run_survey(6, &opts, Execution::Parallel).unwrap();
        let (mut ja, mut jb) = (Vec::new(), Vec::new());
        write_jsonl(&a, &mut ja).unwrap();
        write_jsonl(&b, &mut jb).unwrap();
        assert_eq!(ja, jb);
        let mut csv = Vec::new();
        write_csv(&a, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("word,length,x_count"));
        assert_eq!(text.lines().count(), a.len() + 1);
    }

    #[test]
    fn counterexample_for_x2ax() {
        let r = counterexample_pipeline(&w("X^2AX"), 5, Execution::Sequential).unwrap();
        assert_eq!(r.p, 11);
        assert_eq!(r.order, 55);
        assert!(r.no_solution_verified);
        let col = r.collision.unwrap();
        assert_ne!(col.x1, col.x2);
        assert!(counterexample_pipeline(&w("XAXAX"), 5, Execution::Sequential).is_err());
    }
}
