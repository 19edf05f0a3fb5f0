//! Tietze transformations.
//!
//! Every move carries what it needs to be replayed on the presentation it
//! was produced from; moves that add or remove relators carry a
//! certificate that is re-checked on replay.

use serde::{Deserialize, Serialize};

use crate::certificate::{rotation_witness, verify_certificate, Certificate, Factor};
use crate::error::PresentationError;
use crate::word::{Generator, Letter, Word};

use super::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TietzeMove {
    /// Remove `generator` together with relator `relator`, which reads
    /// `generator = definition`; substitute the definition elsewhere.
    EliminateGenerator { generator: Generator, definition: Word, relator: usize },
    /// Append `relator`, a consequence of the current relators.
    AddRedundantRelator { relator: Word, certificate: Certificate },
    /// Remove relator `index`; `certificate` derives it from the relators
    /// that remain after removal (indices refer to the shrunken list).
    RemoveRedundantRelator { index: usize, relator: Word, certificate: Certificate },
    /// Rewrite every relator with `generator -> replacement` and append the
    /// relator `generator replacement^-1`; `certificate` derives that
    /// relator from the current ones.
    SubstituteInRelators { generator: Generator, replacement: Word, certificate: Certificate },
}

impl TietzeMove {
    /// Applies the move, re-checking its side conditions.
    pub fn apply(&self, p: &Presentation) -> Result<Presentation, PresentationError> {
        match self {
            TietzeMove::EliminateGenerator { generator, definition, relator } => {
                if p.generator_index(generator).is_none() {
                    return Err(PresentationError::UnknownGenerator(generator.name().to_string()));
                }
                let r = p.relators().get(*relator).ok_or(PresentationError::RelatorIndex {
                    index: *relator,
                    count: p.relators().len(),
                })?;
                if definition.contains(generator) {
                    return Err(PresentationError::MoveMismatch(format!(
                        "definition of `{generator}` mentions `{generator}`"
                    )));
                }
                let expected = (Word::generator(generator) * definition.inverse()).cyclic_reduce().0;
                if !r.same_relator(&expected) {
                    return Err(PresentationError::MoveMismatch(format!(
                        "relator {relator} does not read `{generator} = {definition}`"
                    )));
                }
                Ok(substitute_out(p, generator, definition, *relator))
            }
            TietzeMove::AddRedundantRelator { relator, certificate } => {
                check_cert(p, relator, certificate)?;
                let mut rels = p.relators().to_vec();
                rels.push(relator.clone());
                p.with_relators(rels)
            }
            TietzeMove::RemoveRedundantRelator { index, relator, certificate } => {
                let current = p.relators().get(*index).ok_or(PresentationError::RelatorIndex {
                    index: *index,
                    count: p.relators().len(),
                })?;
                if current != relator {
                    return Err(PresentationError::MoveMismatch(format!("relator {index} is `{current}`, not `{relator}`")));
                }
                let mut rels = p.relators().to_vec();
                rels.remove(*index);
                let q = p.with_relators(rels)?;
                check_cert(&q, relator, certificate)?;
                Ok(q)
            }
            TietzeMove::SubstituteInRelators { generator, replacement, certificate } => {
                if p.generator_index(generator).is_none() {
                    return Err(PresentationError::UnknownGenerator(generator.name().to_string()));
                }
                let link = Word::generator(generator) * replacement.inverse();
                check_cert(p, &link, certificate)?;
                let mut rels: Vec<Word> =
                    p.relators().iter().map(|r| r.substitute(generator, replacement)).collect();
                rels.push(link);
                p.with_relators(rels)
            }
        }
    }

    /// Undoes the move up to isomorphism: the result presents the same group
    /// as the presentation the move was applied to.
    pub fn undo(&self, after: &Presentation) -> Result<Presentation, PresentationError> {
        match self {
            TietzeMove::EliminateGenerator { generator, definition, relator } => {
                let mut gens = after.generators().to_vec();
                gens.push(generator.clone());
                let mut rels = after.relators().to_vec();
                let at = (*relator).min(rels.len());
                rels.insert(at, Word::generator(generator) * definition.inverse());
                Presentation::new(after.name(), gens, rels)
            }
            TietzeMove::AddRedundantRelator { .. } => {
                let mut rels = after.relators().to_vec();
                rels.pop();
                after.with_relators(rels)
            }
            TietzeMove::RemoveRedundantRelator { index, relator, .. } => {
                let mut rels = after.relators().to_vec();
                rels.insert((*index).min(rels.len()), relator.clone());
                after.with_relators(rels)
            }
            // the output already contains `generator = replacement` and is
            // equivalent to the input as it stands
            TietzeMove::SubstituteInRelators { .. } => Ok(after.clone()),
        }
    }
}

fn check_cert(p: &Presentation, target: &Word, cert: &Certificate) -> Result<(), PresentationError> {
    if cert.target != *target {
        return Err(PresentationError::MoveMismatch(format!(
            "certificate target `{}` differs from `{target}`",
            cert.target
        )));
    }
    match verify_certificate(p, cert) {
        Ok(true) => Ok(()),
        Ok(false) => Err(PresentationError::MoveMismatch(format!("certificate for `{target}` does not verify"))),
        Err(e) => Err(PresentationError::MoveMismatch(e.to_string())),
    }
}

fn substitute_out(p: &Presentation, gen: &Generator, definition: &Word, defining: usize) -> Presentation {
    let gens: Vec<Generator> = p.generators().iter().filter(|g| *g != gen).cloned().collect();
    let rels: Vec<Word> = p
        .relators()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != defining)
        .map(|(_, r)| r.substitute(gen, definition))
        .collect();
    Presentation::new(p.name(), gens, rels).expect("substitution keeps generators declared")
}

/// Reads `gen = w` off a relator in which `gen` occurs exactly once.
fn definition_from(r: &Word, gen: &Generator) -> Option<Word> {
    if r.occurrences(gen) != 1 {
        return None;
    }
    let k = r.letters().iter().position(|l| l.generator() == gen)?;
    let rotated = r.rotate(k);
    let first: &Letter = &rotated.letters()[0];
    let tail = Word::free_reduce(rotated.letters()[1..].iter().cloned());
    Some(if first.exponent() == 1 { tail.inverse() } else { tail })
}

/// Eliminates `gen` using the shortest relator in which it occurs exactly
/// once.
pub fn eliminate_generator(p: &Presentation, gen: &Generator) -> Result<(Presentation, TietzeMove), PresentationError> {
    if p.generator_index(gen).is_none() {
        return Err(PresentationError::UnknownGenerator(gen.name().to_string()));
    }
    let best = p
        .relators()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.occurrences(gen) == 1)
        .min_by_key(|(i, r)| (r.len(), *i))
        .map(|(i, _)| i);
    match best {
        Some(i) => eliminate_generator_via(p, gen, i),
        None => Err(PresentationError::NoDefiningRelator {
            generator: gen.name().to_string(),
            candidates: p.relators().iter().enumerate().filter(|(_, r)| r.contains(gen)).map(|(i, _)| i).collect(),
        }),
    }
}

/// Eliminates `gen` using relator `index`.
pub fn eliminate_generator_via(
    p: &Presentation,
    gen: &Generator,
    index: usize,
) -> Result<(Presentation, TietzeMove), PresentationError> {
    let r = p
        .relators()
        .get(index)
        .ok_or(PresentationError::RelatorIndex { index, count: p.relators().len() })?;
    let definition = definition_from(r, gen).ok_or_else(|| PresentationError::NoDefiningRelator {
        generator: gen.name().to_string(),
        candidates: p.relators().iter().enumerate().filter(|(_, r)| r.contains(gen)).map(|(i, _)| i).collect(),
    })?;
    let mv = TietzeMove::EliminateGenerator { generator: gen.clone(), definition, relator: index };
    let q = mv.apply(p)?;
    Ok((q, mv))
}

/// Finds a relator that repeats an earlier one up to rotation and inversion.
fn duplicate_move(p: &Presentation) -> Option<TietzeMove> {
    let rels = p.relators();
    for j in 1..rels.len() {
        for i in 0..j {
            if let Some((conjugator, sign)) = rotation_witness(&rels[j], &rels[i]) {
                return Some(TietzeMove::RemoveRedundantRelator {
                    index: j,
                    relator: rels[j].clone(),
                    certificate: Certificate {
                        target: rels[j].clone(),
                        factors: vec![Factor { conjugator, relator: i, sign }],
                    },
                });
            }
        }
    }
    None
}

/// Greedy simplification: drop duplicate relators, then eliminate the
/// generator with the shortest defining relator. Ties go to the generator
/// declared last. Stops after `budget` moves or when nothing applies.
pub fn simplify(p: &Presentation, budget: usize) -> (Presentation, Vec<TietzeMove>) {
    let mut current = p.clone();
    let mut moves = Vec::new();
    while moves.len() < budget {
        if let Some(mv) = duplicate_move(&current) {
            current = mv.apply(&current).expect("duplicate removal is certified");
            moves.push(mv);
            continue;
        }
        let mut best: Option<(usize, std::cmp::Reverse<usize>, usize, Generator)> = None;
        for (i, r) in current.relators().iter().enumerate() {
            for g in r.generators() {
                if r.occurrences(&g) == 1 {
                    let pos = current.generator_index(&g).expect("declared");
                    let key = (r.len(), std::cmp::Reverse(pos), i, g);
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, _, index, gen)) = best else { break };
        let (next, mv) = eliminate_generator_via(&current, &gen, index).expect("candidate isolates its generator");
        current = next;
        moves.push(mv);
    }
    (current, moves)
}

/// Replays a move list produced by [`simplify`] (or built by hand).
pub fn replay(p: &Presentation, moves: &[TietzeMove]) -> Result<Presentation, PresentationError> {
    moves.iter().try_fold(p.clone(), |acc, mv| mv.apply(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn gen(p: &Presentation, name: &str) -> Generator {
        p.generator(name).unwrap().clone()
    }

    #[test]
    fn eliminate_y_then_w() {
        let p = parse_presentation("< g, q, x, y, w | qy^-1, xyx^-1wy^-1, wg^-1 >").unwrap();
        let (p1, mv) = eliminate_generator(&p, &gen(&p, "y")).unwrap();
        assert!(matches!(&mv, TietzeMove::EliminateGenerator { definition, .. } if definition.to_text() == "q"));
        assert_eq!(p1.relators()[0].to_text(), "xqx^-1wq^-1");
        let (p2, _) = eliminate_generator(&p1, &gen(&p1, "w")).unwrap();
        assert_eq!(p2.relators()[0].to_text(), "xqx^-1gq^-1");
    }

    #[test]
    fn eliminate_w_gives_commutator() {
        let p = parse_presentation("< e, g, w | we^-1w^-1e, wg^-1 >").unwrap();
        let (q, _) = eliminate_generator(&p, &gen(&p, "w")).unwrap();
        assert_eq!(q.relators()[0].to_text(), "ge^-1g^-1e");
    }

    #[test]
    fn eliminate_to_free_group() {
        let p = parse_presentation("< a, b | ab^-1 >").unwrap();
        let (q, _) = eliminate_generator(&p, &gen(&p, "a")).unwrap();
        assert_eq!(q.to_text(), "< b | >");
    }

    #[test]
    fn missing_definition_lists_candidates() {
        let p = parse_presentation("< a, b | a^2, abab >").unwrap();
        match eliminate_generator(&p, &gen(&p, "a")) {
            Err(PresentationError::NoDefiningRelator { candidates, .. }) => assert_eq!(candidates, vec![0, 1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_free_cyclic_is_noop() {
        let p = parse_presentation("< a | >").unwrap();
        let (q, moves) = simplify(&p, 10);
        assert_eq!(q, p);
        assert!(moves.is_empty());
    }

    #[test]
    fn simplify_drops_duplicates_and_replays() {
        let p = parse_presentation("< a, b, c | aba^-1b^-1, ba^-1b^-1a, c a^-2 >").unwrap();
        let (q, moves) = simplify(&p, 10);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.generators().len(), 2);
        assert_eq!(replay(&p, &moves).unwrap(), q);
    }

    #[test]
    fn replay_rejects_tampered_move() {
        let p = parse_presentation("< a, b | ab^-1 >").unwrap();
        let bad = TietzeMove::EliminateGenerator {
            generator: gen(&p, "a"),
            definition: Word::generator(&gen(&p, "b")).pow(2),
            relator: 0,
        };
        assert!(bad.apply(&p).is_err());
    }

    #[test]
    fn undo_restores_generator() {
        let p = parse_presentation("< a, b | ab^-1, b^3 >").unwrap();
        let (q, mv) = eliminate_generator(&p, &gen(&p, "a")).unwrap();
        let back = mv.undo(&q).unwrap();
        assert_eq!(back.generators().len(), 2);
        assert_eq!(back.relators().len(), 2);
    }
}
