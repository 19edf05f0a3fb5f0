//! Mechanical verification of claims about finitely presented groups.
//!
//! The crate parses presentations, runs Todd-Coxeter coset enumeration,
//! computes first homology through the Smith normal form, applies certified
//! Tietze transformations, and checks consequence certificates. Every
//! "relator is redundant" or "presentations agree" answer it gives comes
//! with a certificate that is checked by free reduction alone.
//!
//! ```
//! use fpverify::{parse_presentation, enumerate, Strategy};
//!
//! let s3 = parse_presentation("< a, b | a^2, b^3, (ab)^2 >").unwrap();
//! let run = enumerate(&s3, &[], Strategy::Felsch, 10_000).unwrap();
//! assert_eq!(run.index, Some(6));
//! ```

pub mod abelian;
pub mod certificate;
pub mod coset;
pub mod coset_proof;
pub mod corpus;
pub mod error;
pub mod presentation;
pub mod runner;
pub mod word;

pub use abelian::{homology_h1, smith_normal_form, smith_normal_form_with, AbelianGroup, IntegerMatrix, SmithForm};
pub use certificate::{
    check_equivalence, search_certificate, verify_certificate, verify_derivation, Certificate, Derivation, Factor, NotFound,
    SearchBound,
};
pub use coset::{enumerate, verify_trivial, EnumerationResult, EnumerationStatus, Strategy, TrivialityVerdict};
pub use error::{CertificateError, CorpusError, ParseError, PresentationError, WordError};
pub use presentation::{parse_presentation, parse_presentation_with, parse_relation, parse_word, Presentation, TietzeMove};
pub use runner::{run_scenarios, Outcome, RunOptions, RunReport};
pub use word::{CommutatorConvention, Generator, Letter, Word};
