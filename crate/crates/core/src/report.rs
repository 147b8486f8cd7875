//! Output documents for the command-line tool, in JSON and plain text.
//!
//! JSON keys appear in declaration order, so equal inputs give byte-equal output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classify::{
    is_coflabby, is_flabby, is_invertible, is_permutation, is_stably_permutation, matrix_rows, rationality_verdict,
    Certificate, Fact, Mode, RationalityReport, SearchOptions, Status, Verdict,
};
use crate::cohomology::{h1_at, h1_profile, tate_minus1_at, tate_minus1_profile, CohomologyProfile};
use crate::error::Result;
use crate::group::Subgroup;
use crate::lattice::GLattice;
use crate::linalg::FiniteAbelianGroup;
use crate::resolution::{flabby_resolution, verify_resolution};

type Rows = Vec<Vec<serde_json::Value>>;

#[derive(Serialize)]
pub struct InputEcho {
    pub name: String,
    pub rank: usize,
    pub group_order: usize,
    pub generators: Vec<Rows>,
}

impl InputEcho {
    pub fn of(name: &str, m: &GLattice) -> Self {
        InputEcho {
            name: name.to_string(),
            rank: m.rank(),
            group_order: m.group().order(),
            generators: m.generator_actions().iter().map(matrix_rows).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct Profiles {
    #[serde(rename = "H^1")]
    pub h1: CohomologyProfile,
    #[serde(rename = "H^-1")]
    pub tate_minus1: CohomologyProfile,
}

impl Profiles {
    pub fn of(m: &GLattice) -> Result<Self> {
        Ok(Profiles { h1: h1_profile(m)?, tate_minus1: tate_minus1_profile(m)? })
    }
}

/// A flabby or coflabby test, with the first subgroup where it fails.
#[derive(Serialize)]
pub struct ConditionVerdict {
    pub status: Status,
    pub mode: Mode,
    pub failing_subgroup: Option<Vec<usize>>,
    pub group: Option<FiniteAbelianGroup>,
}

fn condition(m: &GLattice, mode: Mode, holds: bool, at: fn(&GLattice, &Subgroup) -> Result<FiniteAbelianGroup>) -> Result<ConditionVerdict> {
    let mut failing = None;
    if !holds {
        let subgroups = match mode {
            Mode::Strict => m.group().class_representatives(),
            Mode::PaperLiteral => vec![m.group().whole()],
        };
        for h in subgroups {
            let v = at(m, &h)?;
            if !v.is_trivial() {
                failing = Some((h.members().to_vec(), v));
                break;
            }
        }
    }
    let (failing_subgroup, group) = match failing {
        Some((h, v)) => (Some(h), Some(v)),
        None => (None, None),
    };
    Ok(ConditionVerdict {
        status: if holds { Status::Yes } else { Status::No },
        mode,
        failing_subgroup,
        group,
    })
}

#[derive(Serialize)]
pub struct Verdicts {
    pub permutation: Verdict,
    pub stably_permutation: Verdict,
    pub invertible: Verdict,
    pub flabby: ConditionVerdict,
    pub coflabby: ConditionVerdict,
}

#[derive(Serialize)]
pub struct ClassifyDocument {
    pub input: InputEcho,
    pub profiles: Profiles,
    pub verdicts: Verdicts,
    pub report: RationalityReport,
}

pub fn classify_document(name: &str, m: &GLattice, mode: Mode, options: &SearchOptions) -> Result<ClassifyDocument> {
    let bounds = options.resolve(m);
    let verdicts = Verdicts {
        permutation: is_permutation(m, &bounds)?,
        stably_permutation: is_stably_permutation(m, &bounds)?,
        invertible: is_invertible(m, &bounds)?,
        flabby: condition(m, mode, is_flabby(m, mode)?, tate_minus1_at)?,
        coflabby: condition(m, mode, is_coflabby(m, mode)?, h1_at)?,
    };
    Ok(ClassifyDocument {
        input: InputEcho::of(name, m),
        profiles: Profiles::of(m)?,
        verdicts,
        report: rationality_verdict(m, options)?,
    })
}

#[derive(Serialize)]
pub struct CohomologyDocument {
    pub input: InputEcho,
    pub profiles: Profiles,
}

pub fn cohomology_document(name: &str, m: &GLattice) -> Result<CohomologyDocument> {
    Ok(CohomologyDocument { input: InputEcho::of(name, m), profiles: Profiles::of(m)? })
}

#[derive(Serialize)]
pub struct Summand {
    pub subgroup: Vec<usize>,
    pub subgroup_order: usize,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct ResolutionSummary {
    pub middle_description: Vec<Summand>,
    pub middle_rank: usize,
    pub quotient_rank: usize,
    pub quotient_generators: Vec<Rows>,
    pub embedding: Rows,
    pub projection: Rows,
    #[serde(rename = "quotient_H^1")]
    pub quotient_h1: CohomologyProfile,
}

#[derive(Serialize)]
pub struct ResolveDocument {
    pub input: InputEcho,
    pub resolution: ResolutionSummary,
    pub verified: bool,
}

pub fn resolve_document(name: &str, m: &GLattice) -> Result<ResolveDocument> {
    let r = flabby_resolution(m)?;
    let resolution = ResolutionSummary {
        middle_description: r
            .middle_description
            .iter()
            .map(|(h, k)| Summand { subgroup: h.members().to_vec(), subgroup_order: h.order(), multiplicity: *k })
            .collect(),
        middle_rank: r.middle.rank(),
        quotient_rank: r.quotient.rank(),
        quotient_generators: r.quotient.generator_actions().iter().map(matrix_rows).collect(),
        embedding: matrix_rows(&r.embedding),
        projection: matrix_rows(&r.projection),
        quotient_h1: h1_profile(&r.quotient)?,
    };
    Ok(ResolveDocument { input: InputEcho::of(name, m), resolution, verified: verify_resolution(&r) })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

// text rendering

fn subgroup_label(members: &[usize]) -> String {
    format!("H{:?} (order {})", members, members.len())
}

fn text_input(out: &mut String, input: &InputEcho) {
    let _ = writeln!(out, "lattice {}: rank {}, group order {}", input.name, input.rank, input.group_order);
}

fn text_profile(out: &mut String, title: &str, p: &CohomologyProfile) {
    let _ = writeln!(out, "{}", title);
    for (h, g) in &p.entries {
        let _ = writeln!(out, "  {}: {}", subgroup_label(h.members()), g);
    }
}

fn text_profiles(out: &mut String, p: &Profiles) {
    text_profile(out, "H^1(H, M)", &p.h1);
    text_profile(out, "H^-1(H, M)", &p.tate_minus1);
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Yes => "yes",
        Status::No => "no",
        Status::Unknown => "unknown",
    }
}

fn verdict_line(v: &Verdict) -> String {
    let detail = match &v.certificate {
        Some(Certificate::Permutation { summands, .. }) => {
            format!("M = {}", coset_sum(summands))
        }
        Some(Certificate::StablyPermutation { p, q, .. }) => {
            format!("M + {} = {}", coset_sum(p), coset_sum(q))
        }
        Some(Certificate::Invertible { p, complement, .. }) => {
            format!("M + M' = {}, rank M' = {}", coset_sum(p), complement.rank())
        }
        Some(Certificate::StablyEquivalent { p1, p2, .. }) => {
            format!("M1 + {} = M2 + {}", coset_sum(p1), coset_sum(p2))
        }
        Some(Certificate::Refuted { candidates }) => format!("{} candidates refuted", candidates.len()),
        Some(Certificate::Cohomology { group, subgroup, value }) => {
            let g = match group {
                crate::classify::CohomologyKind::H1 => "H^1",
                crate::classify::CohomologyKind::TateMinus1 => "H^-1",
            };
            format!("{} at {} is {}", g, subgroup_label(subgroup.members()), value)
        }
        Some(Certificate::StableInvariant { obstruction }) => obstruction.to_string(),
        None => format!(
            "search exhausted (rank bound {}, coefficient bound {}, {} candidates)",
            v.bounds.rank_bound, v.bounds.coeff_bound, v.candidates_tried
        ),
    };
    format!("{} ({})", status_word(v.status), detail)
}

fn coset_sum(hs: &[Subgroup]) -> String {
    if hs.is_empty() {
        return "0".into();
    }
    hs.iter()
        .map(|h| format!("Z[G/H{:?}]", h.members()))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn condition_line(c: &ConditionVerdict) -> String {
    let mode = match c.mode {
        Mode::Strict => "strict",
        Mode::PaperLiteral => "paper-literal",
    };
    match (&c.failing_subgroup, &c.group) {
        (Some(h), Some(g)) => format!("{} [{}] (fails at {}: {})", status_word(c.status), mode, subgroup_label(h), g),
        _ => format!("{} [{}]", status_word(c.status), mode),
    }
}

fn text_report(out: &mut String, r: &RationalityReport) {
    let _ = writeln!(out, "rationality: {}", r.level);
    for f in &r.justification {
        match f {
            Fact::Verdict { claim, verdict } => {
                let _ = writeln!(out, "  - {}: {}", claim, verdict_line(verdict));
            }
            Fact::Cohomology { claim, subgroup, value, .. } => {
                let _ = writeln!(out, "  - {}: {} at {}", claim, value, subgroup_label(subgroup.members()));
            }
            Fact::Resolution { claim, middle_rank, quotient_rank, verified } => {
                let _ = writeln!(
                    out,
                    "  - {}: rank P = {}, rank F = {}, verified {}",
                    claim, middle_rank, quotient_rank, verified
                );
            }
        }
    }
}

impl ClassifyDocument {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        text_input(&mut out, &self.input);
        text_profiles(&mut out, &self.profiles);
        let v = &self.verdicts;
        let _ = writeln!(out, "permutation: {}", verdict_line(&v.permutation));
        let _ = writeln!(out, "stably permutation: {}", verdict_line(&v.stably_permutation));
        let _ = writeln!(out, "invertible: {}", verdict_line(&v.invertible));
        let _ = writeln!(out, "flabby: {}", condition_line(&v.flabby));
        let _ = writeln!(out, "coflabby: {}", condition_line(&v.coflabby));
        text_report(&mut out, &self.report);
        out
    }
}

impl CohomologyDocument {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        text_input(&mut out, &self.input);
        text_profiles(&mut out, &self.profiles);
        out
    }
}

impl ResolveDocument {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        text_input(&mut out, &self.input);
        let r = &self.resolution;
        let p = r
            .middle_description
            .iter()
            .map(|s| format!("Z[G/H{:?}]^{}", s.subgroup, s.multiplicity))
            .collect::<Vec<_>>()
            .join(" + ");
        let _ = writeln!(out, "0 -> M -> P -> F -> 0");
        let _ = writeln!(out, "P = {} (rank {})", if p.is_empty() { "0".into() } else { p }, r.middle_rank);
        let _ = writeln!(out, "rank F = {}", r.quotient_rank);
        text_profile(&mut out, "H^1(H, F)", &r.quotient_h1);
        let _ = writeln!(out, "verified: {}", self.verified);
        out
    }
}
