//! Finitely presented groups `< generators | relators >`.
//!
//! Relations `w = v` are stored as relators `w v^-1`. Every stored relator is
//! freely and cyclically reduced and non-trivial.

mod parser;
mod tietze;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::IntegerMatrix;
use crate::error::PresentationError;
use crate::word::{Generator, Word};

pub use parser::{parse_presentation, parse_presentation_with, parse_relation, parse_word};
pub use tietze::{eliminate_generator, eliminate_generator_via, replay, simplify, TietzeMove};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Validates generators and relators. Relators are cyclically reduced;
    /// those that reduce to the identity are dropped with a warning.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Generator>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let name = name.into();
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.name().to_string()));
            }
        }
        let mut kept = Vec::with_capacity(relators.len());
        for (index, r) in relators.into_iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| !generators.contains(l.generator())) {
                return Err(PresentationError::UndeclaredGenerator {
                    index,
                    generator: l.generator().name().to_string(),
                });
            }
            let (core, _) = r.cyclic_reduce();
            if core.is_identity() {
                log::warn!("presentation `{name}`: relator {index} is trivial and was dropped");
            } else {
                kept.push(core);
            }
        }
        Ok(Presentation { name, generators, relators: kept })
    }

    /// Builds a presentation from text-form generator names and relators;
    /// convenient in tests and examples.
    pub fn from_parts(name: &str, generators: &[&str], relators: Vec<Word>) -> Result<Self, PresentationError> {
        let gens = generators
            .iter()
            .map(|g| Generator::new(g).map_err(|_| PresentationError::UnknownGenerator(g.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(name, gens, relators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    pub fn generator_index(&self, gen: &Generator) -> Option<usize> {
        self.generators.iter().position(|g| g == gen)
    }

    /// Total number of letters over all relators.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Same generators, relators replaced.
    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Presentation::new(self.name.clone(), self.generators.clone(), relators)
    }

    /// One row per relator, one column per generator; entries are exponent sums.
    pub fn abelianized_relation_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.relators.len(), self.generators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for l in r.letters() {
                let j = self.generator_index(l.generator()).expect("relator generators are declared");
                m.add_to(i, j, l.exponent() as i64);
            }
        }
        m
    }

    /// True when every relator of `other` matches some relator here up to
    /// rotation and inversion, and vice versa, over the same generator set.
    pub fn same_relator_set(&self, other: &Presentation) -> bool {
        let mut a = self.generators.clone();
        let mut b = other.generators.clone();
        a.sort();
        b.sort();
        a == b
            && self.relators.iter().all(|r| other.relators.iter().any(|s| r.same_relator(s)))
            && other.relators.iter().all(|r| self.relators.iter().any(|s| r.same_relator(s)))
    }

    /// Canonical text form; parses back to an equal presentation.
    pub fn to_text(&self) -> String {
        let spaced = self.generators.iter().any(|g| g.name().len() > 1);
        let gens: Vec<&str> = self.generators.iter().map(Generator::name).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_text_with(spaced)).collect();
        let body = if rels.is_empty() {
            format!("< {} | >", gens.join(", "))
        } else {
            format!("< {} | {} >", gens.join(", "), rels.join(", "))
        };
        if self.name.is_empty() {
            body
        } else {
            format!("name: {}\n{}", self.name, body)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PresentationJson::from(self)).expect("presentation JSON is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: PresentationJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let gens = raw
            .generators
            .iter()
            .map(|g| Generator::new(g).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(raw.name, gens, raw.relators).map_err(|e| e.to_string())
    }
}

/// Prints in the canonical grammar form (the `name:` header is emitted only
/// for named presentations).
pub fn print_presentation(p: &Presentation) -> String {
    p.to_text()
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.to_text().replace('\n', "; "))
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    name: String,
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> Self {
        PresentationJson {
            name: p.name.clone(),
            generators: p.generators.iter().map(|g| g.name().to_string()).collect(),
            relators: p.relators.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntegerMatrix;

    #[test]
    fn trivial_relators_are_dropped() {
        let a = Generator::new("a").unwrap();
        let r = Word::generator(&a) * Word::generator(&a).inverse();
        let p = Presentation::new("", vec![a.clone()], vec![r, Word::generator(&a)]).unwrap();
        assert_eq!(p.relators().len(), 1);
    }

    #[test]
    fn rejects_undeclared_and_duplicate() {
        let a = Generator::new("a").unwrap();
        let b = Generator::new("b").unwrap();
        assert!(matches!(
            Presentation::new("", vec![a.clone()], vec![Word::generator(&b)]),
            Err(PresentationError::UndeclaredGenerator { .. })
        ));
        assert!(matches!(
            Presentation::new("", vec![a.clone(), a], vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn zero_generators_is_allowed() {
        let p = Presentation::new("", vec![], vec![]).unwrap();
        assert_eq!(p.to_text(), "<  | >");
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn relation_matrix_rows() {
        let p = parse_presentation("< a | a^2 >").unwrap();
        assert_eq!(p.abelianized_relation_matrix(), IntegerMatrix::from_rows(&[vec![2]]));

        let p = parse_presentation("< a, c, q | [a,q]=c >").unwrap();
        assert_eq!(p.abelianized_relation_matrix(), IntegerMatrix::from_rows(&[vec![0, -1, 0]]));

        let p = parse_presentation("< g, q | g q^-2 g = q^-1 g q^-1 >").unwrap();
        assert_eq!(p.abelianized_relation_matrix(), IntegerMatrix::from_rows(&[vec![1, 0]]));
    }

    #[test]
    fn json_export_is_bit_exact() {
        let p = parse_presentation("name: z2\n< a | a^2 >").unwrap();
        assert_eq!(p.to_json(), r#"{"name":"z2","generators":["a"],"relators":[[["a",1],["a",1]]]}"#);
        assert_eq!(Presentation::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn printing_examples() {
        assert_eq!(parse_presentation("<a|a>").unwrap().to_text(), "< a | a >");
        assert_eq!(parse_presentation("<a,b|>").unwrap().to_text(), "< a, b | >");
        let multi = parse_presentation("< x1, y | x1^2 y^-1 >").unwrap();
        assert_eq!(multi.to_text(), "< x1, y | x1^2 y^-1 >");
        assert_eq!(parse_presentation(&multi.to_text()).unwrap(), multi);
    }
}
