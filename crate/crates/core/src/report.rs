//! JSON and plain-text renderings of analysis results.

use std::fmt::Write as _;

use serde::Serialize;

use crate::deviation::{Bounds, DeviationResult, Verdict};
use crate::nft::{run_words, Nft, Run};
use crate::oracle::OracleResult;
use crate::word::ExtNat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub b: u64,
    #[serde(rename = "B")]
    pub big_b: u64,
    #[serde(rename = "Lconj")]
    pub lconj: u64,
    #[serde(rename = "Lwit")]
    pub lwit: u64,
}

impl From<Bounds> for BoundsReport {
    fn from(b: Bounds) -> Self {
        BoundsReport { b: b.shift, big_b: b.deviation, lconj: b.conjugacy_witness, lwit: b.threshold_witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub length_preserving: bool,
    pub verdict: &'static str,
    pub deviation: Option<u64>,
    pub bounds: BoundsReport,
    pub witness: Option<Vec<usize>>,
}

pub fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::EmptyRelation => "empty",
        Verdict::NotLengthPreserving { .. } => "not-length-preserving",
        Verdict::UnboundedMismatchCycle { .. } => "unbounded",
        Verdict::Bounded { .. } => "bounded",
    }
}

/// The witness as one run: for an unbounded verdict, prefix, one turn of the cycle and suffix.
pub fn witness_run(v: &Verdict) -> Option<Run> {
    match v {
        Verdict::EmptyRelation => None,
        Verdict::NotLengthPreserving { witness } | Verdict::Bounded { witness, .. } => Some(witness.clone()),
        Verdict::UnboundedMismatchCycle { prefix, cycle, suffix, .. } => Some(prefix.concat(cycle).concat(suffix)),
    }
}

impl Report {
    pub fn new(result: &DeviationResult) -> Self {
        Report {
            length_preserving: result.length_preserving,
            verdict: verdict_name(&result.verdict),
            deviation: result.deviation().finite(),
            bounds: result.bounds.into(),
            witness: witness_run(&result.verdict).map(|r| r.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    /// `null` stands for an unbounded distance.
    pub max_seen: ExtNat,
    pub saturated: bool,
    pub witness: Option<Vec<usize>>,
}

impl From<&OracleResult> for OracleReport {
    fn from(r: &OracleResult) -> Self {
        OracleReport { max_seen: r.max_seen, saturated: r.saturated, witness: r.witness.as_ref().map(|w| w.0.clone()) }
    }
}

fn indices(run: &Run) -> String {
    let parts: Vec<String> = run.0.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(" "))
}

fn words(t: &Nft, run: &Run) -> String {
    match run_words(t, run) {
        Ok((u, v)) => format!("({u}, {v})"),
        Err(e) => format!("<{e}>"),
    }
}

/// Human-readable summary of an analysis of `t`.
pub fn render_text(t: &Nft, result: &DeviationResult) -> String {
    let mut out = String::new();
    let b = result.bounds;
    let yes_no = if result.length_preserving { "yes" } else { "no" };
    let _ = writeln!(out, "nft: {}", t.name());
    let _ = writeln!(out, "length-preserving: {yes_no}");
    let _ = writeln!(out, "verdict: {}", verdict_name(&result.verdict));
    let _ = writeln!(out, "deviation: {}", result.deviation());
    let _ = writeln!(
        out,
        "bounds: b={} B={} Lconj={} Lwit={}",
        b.shift, b.deviation, b.conjugacy_witness, b.threshold_witness
    );
    match &result.verdict {
        Verdict::EmptyRelation => {}
        Verdict::NotLengthPreserving { witness } | Verdict::Bounded { witness, .. } => {
            let _ = writeln!(out, "witness: {} over {}", indices(witness), words(t, witness));
        }
        Verdict::UnboundedMismatchCycle { prefix, cycle, suffix, anchor } => {
            let _ = writeln!(
                out,
                "witness: prefix {} cycle {} at state {} suffix {}",
                indices(prefix),
                indices(cycle),
                t.state_name(*anchor),
                indices(suffix)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deviation::{analyze_deviation, DEFAULT_MAX_CONFIGS};
    use crate::gadgets::gen_family;
    use crate::nft::NftBuilder;

    #[test]
    fn family_report_json() {
        let t = gen_family(4).unwrap().nft;
        let r = analyze_deviation(&t, DEFAULT_MAX_CONFIGS).unwrap();
        let json: serde_json::Value = serde_json::to_value(Report::new(&r)).unwrap();
        assert_eq!(json["lengthPreserving"], true);
        assert_eq!(json["verdict"], "bounded");
        assert_eq!(json["deviation"], 10);
        assert_eq!(json["bounds"]["B"], 96);
        assert_eq!(json["bounds"]["b"], 8);
        assert!(json["bounds"]["Lconj"].is_u64() && json["bounds"]["Lwit"].is_u64());
        assert!(json["witness"].is_array());
    }

    #[test]
    fn deviation_is_null_exactly_for_infinite_verdicts() {
        let mut b = NftBuilder::new("d");
        b.letter('a');
        let i = b.add_state("i");
        let f = b.add_state("f");
        b.set_initial(i, true).set_final(f, true);
        b.add_transition(i, "a", "", f);
        let t = b.build().unwrap();
        let r = analyze_deviation(&t, DEFAULT_MAX_CONFIGS).unwrap();
        let json = serde_json::to_value(Report::new(&r)).unwrap();
        assert_eq!(json["verdict"], "not-length-preserving");
        assert!(json["deviation"].is_null());
        assert_eq!(json["witness"], serde_json::json!([0]));

        let mut b = NftBuilder::new("e");
        b.letter('a');
        let i = b.add_state("i");
        b.set_initial(i, true);
        let r = analyze_deviation(&b.build().unwrap(), DEFAULT_MAX_CONFIGS).unwrap();
        let json = serde_json::to_value(Report::new(&r)).unwrap();
        assert_eq!(json["verdict"], "empty");
        assert_eq!(json["deviation"], 0);
        assert!(json["witness"].is_null());
    }

    #[test]
    fn text_mentions_witness_words() {
        let t = gen_family(2).unwrap().nft;
        let r = analyze_deviation(&t, DEFAULT_MAX_CONFIGS).unwrap();
        let text = render_text(&t, &r);
        assert!(text.contains("deviation: 3"));
        assert!(text.contains("witness: ["));
    }
}
