//! The bundled scenario corpus.
//!
//! Every scenario is a presentation file `<id>.grp`, an expectation file
//! `<id>.expect.json` and optionally frozen certificates in
//! `<id>.certs.json`. Some scenarios refer to further presentation files by
//! stem. All files are compiled into the library, so loading never touches
//! the filesystem; [`file_text`] exposes the raw bytes for checksumming and
//! for the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::CorpusError;
use crate::presentation::{parse_presentation_with, Presentation};
use crate::word::CommutatorConvention;

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../corpus/", $name)))),*]
    };
}

static FILES: &[(&str, &str)] = corpus_files![
    "conjugacy-x.expect.json",
    "conjugacy-x.grp",
    "conjugacy-x.certs.json",
    "conjugacy-x-substituted.grp",
    "derive-cx-commute.expect.json",
    "derive-cx-commute.grp",
    "derive-cx-commute.certs.json",
    "derive-cx-commute-converse.grp",
    "derive-gx2.expect.json",
    "derive-gx2.grp",
    "derive-gx2.certs.json",
    "derive-qc-commute.expect.json",
    "derive-qc-commute.grp",
    "derive-qc-commute.certs.json",
    "elimination-y-w.expect.json",
    "elimination-y-w.grp",
    "eleven-new-relators.expect.json",
    "eleven-new-relators.grp",
    "pi1-E0-tilde.expect.json",
    "pi1-E0-tilde.grp",
    "pi1-N-full.expect.json",
    "pi1-N-full.grp",
    "pi1-N-reduced.expect.json",
    "pi1-N-reduced.grp",
    "redundancy-nine.expect.json",
    "redundancy-nine.grp",
    "battery/cyclic-12.grp",
    "battery/q8.grp",
    "battery/s3.grp",
    "battery/trivial.grp",
    "battery/z2.grp",
    "battery/z3.grp",
];

/// Every bundled file name, relative to the corpus root, sorted.
pub fn file_names() -> Vec<&'static str> {
    let mut v: Vec<&str> = FILES.iter().map(|(n, _)| *n).collect();
    v.sort_unstable();
    v
}

/// Raw contents of a bundled file.
pub fn file_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses the bundled presentation `<stem>.grp`.
pub fn load_presentation(stem: &str, convention: CommutatorConvention) -> Result<Presentation, CorpusError> {
    let file = format!("{stem}.grp");
    let text = file_text(&file).ok_or_else(|| CorpusError::MissingFile(file.clone()))?;
    parse_presentation_with(text, convention).map_err(|source| CorpusError::Parse { file, source })
}

/// A relation to eliminate a generator with, given as text and matched
/// against the relators up to rotation and inversion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub generator: String,
    pub via: String,
}

/// One expected outcome of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// Generator and relator counts of the main presentation.
    Shape { generators: usize, relators: usize },
    /// First homology of the main presentation.
    H1 { free_rank: usize, torsion: Vec<u64> },
    /// Coset enumeration over the trivial subgroup reaches index 1.
    Trivial,
    /// Each target relation is a consequence of the relators of `over`
    /// (default: the main presentation).
    Consequences {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        over: Option<String>,
        targets: Vec<String>,
        max_factors: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_conjugator_len: Option<usize>,
    },
    /// The main presentation and `other` define the same group: relators of
    /// each, translated through the dictionaries, follow from the other's.
    /// Generators missing from a dictionary map to themselves.
    Equivalent {
        other: String,
        #[serde(default)]
        to_other: BTreeMap<String, String>,
        #[serde(default)]
        from_other: BTreeMap<String, String>,
    },
    /// Eliminating the listed generators in order leaves `generators`, and
    /// the result is equivalent to the presentation `equivalent_to`.
    EliminatesTo { eliminate: Vec<Elimination>, generators: Vec<String>, equivalent_to: String },
    /// At least this many relators are each a consequence of all the others.
    Redundant { at_least: usize },
    /// Relators can be dropped one after another, each certified from what
    /// is left, until at least this many are gone.
    RedundantTogether { at_least: usize },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Shape { .. } => "shape",
            Check::H1 { .. } => "h1",
            Check::Trivial => "trivial",
            Check::Consequences { .. } => "consequences",
            Check::Equivalent { .. } => "equivalent",
            Check::EliminatesTo { .. } => "eliminates_to",
            Check::Redundant { .. } => "redundant",
            Check::RedundantTogether { .. } => "redundant_together",
        }
    }
}

/// Contents of `<id>.expect.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub id: String,
    pub summary: String,
    /// Where in the source the claim is made.
    pub location: String,
    /// The claim, quoted verbatim.
    pub quote: String,
    pub checks: Vec<Check>,
}

/// A frozen certificate for one target of a `consequences` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredCertificate {
    /// Stem of the presentation whose relators the factors index.
    pub over: String,
    /// The relation as written in the expectation file.
    pub relation: String,
    pub certificate: Certificate,
}

/// Contents of `<id>.certs.json`. Relator indices only make sense under the
/// convention the certificates were produced with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub convention: CommutatorConvention,
    pub certificates: Vec<StoredCertificate>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub id: String,
    pub expectation: Expectation,
    pub source: &'static str,
    pub presentation: Presentation,
    pub certificates: Option<CertificateFile>,
    pub convention: CommutatorConvention,
}

/// Short listing entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioSummary {
    pub id: String,
    pub summary: String,
    pub quote: String,
    pub checks: Vec<&'static str>,
}

/// Registered scenario ids, sorted.
pub fn scenario_ids() -> Vec<&'static str> {
    let mut ids: Vec<&str> = FILES.iter().filter_map(|(n, _)| n.strip_suffix(".expect.json")).collect();
    ids.sort_unstable();
    ids
}

pub fn load_scenario(id: &str) -> Result<Scenario, CorpusError> {
    load_scenario_with(id, CommutatorConvention::Default)
}

/// Loads and validates a scenario, parsing every presentation under
/// `convention`.
pub fn load_scenario_with(id: &str, convention: CommutatorConvention) -> Result<Scenario, CorpusError> {
    let expect_file = format!("{id}.expect.json");
    let expect_text = file_text(&expect_file).ok_or_else(|| CorpusError::UnknownScenario(id.to_string()))?;
    let expectation: Expectation = serde_json::from_str(expect_text)
        .map_err(|source| CorpusError::Json { file: expect_file.clone(), source })?;
    let invalid = |message: String| CorpusError::Invalid { id: id.to_string(), message };
    if expectation.id != id {
        return Err(invalid(format!("expectation file names scenario `{}`", expectation.id)));
    }
    if expectation.quote.trim().is_empty() {
        return Err(invalid("missing provenance quote".into()));
    }
    let grp = format!("{id}.grp");
    let source = file_text(&grp).ok_or_else(|| CorpusError::MissingFile(grp.clone()))?;
    let presentation = load_presentation(id, convention)?;
    for check in &expectation.checks {
        for stem in referenced_files(check) {
            load_presentation(stem, convention)?;
        }
    }
    let certs_file = format!("{id}.certs.json");
    let certificates = match file_text(&certs_file) {
        Some(text) => Some(
            serde_json::from_str::<CertificateFile>(text)
                .map_err(|source| CorpusError::Json { file: certs_file, source })?,
        ),
        None => None,
    };
    Ok(Scenario { id: id.to_string(), expectation, source, presentation, certificates, convention })
}

fn referenced_files(check: &Check) -> Vec<&str> {
    match check {
        Check::Consequences { over: Some(o), .. } => vec![o.as_str()],
        Check::Equivalent { other, .. } => vec![other.as_str()],
        Check::EliminatesTo { equivalent_to, .. } => vec![equivalent_to.as_str()],
        _ => Vec::new(),
    }
}

pub fn list_scenarios() -> Vec<ScenarioSummary> {
    scenario_ids()
        .into_iter()
        .filter_map(|id| load_scenario(id).ok())
        .map(|s| ScenarioSummary {
            id: s.id,
            summary: s.expectation.summary,
            quote: s.expectation.quote,
            checks: s.expectation.checks.iter().map(Check::kind).collect(),
        })
        .collect()
}
