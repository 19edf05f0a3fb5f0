//! Consequence certificates.
//!
//! A [`Certificate`] writes a target word as a product
//! `prod_i c_i r_i^(s_i) c_i^-1` of conjugated relators. Checking it is a
//! single free reduction, so a verified certificate proves the target is
//! trivial in the presented group without trusting whatever produced it.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::CertificateError;
use crate::presentation::Presentation;
use crate::word::{Generator, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub target: Word,
    pub factors: Vec<Factor>,
}

impl Certificate {
    /// The empty product, certifying the identity.
    pub fn identity() -> Self {
        Certificate { target: Word::identity(), factors: Vec::new() }
    }

    /// A relator as its own consequence.
    pub fn relator(p: &Presentation, index: usize) -> Self {
        Certificate {
            target: p.relators()[index].clone(),
            factors: vec![Factor { conjugator: Word::identity(), relator: index, sign: 1 }],
        }
    }

    /// Certificate for `self.target · other.target`.
    pub fn then(&self, other: &Certificate) -> Certificate {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Certificate { target: &self.target * &other.target, factors }
    }

    /// Certificate for `target^-1`.
    pub fn inverse(&self) -> Certificate {
        Certificate {
            target: self.target.inverse(),
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| Factor { conjugator: f.conjugator.clone(), relator: f.relator, sign: -f.sign })
                .collect(),
        }
    }

    /// Certificate for `by · target · by^-1`.
    pub fn conjugate(&self, by: &Word) -> Certificate {
        Certificate {
            target: self.target.conjugate(by),
            factors: self
                .factors
                .iter()
                .map(|f| Factor { conjugator: by * &f.conjugator, relator: f.relator, sign: f.sign })
                .collect(),
        }
    }

    /// Rewrites relator indices, e.g. when moving between presentations
    /// that share relators.
    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> Certificate {
        Certificate {
            target: self.target.clone(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor { conjugator: f.conjugator.clone(), relator: map(f.relator), sign: f.sign })
                .collect(),
        }
    }

    /// Freely reduced product of the factors.
    pub fn product(&self, p: &Presentation) -> Result<Word, CertificateError> {
        let rels = p.relators();
        let mut letters: Vec<Letter> = Vec::new();
        for (k, f) in self.factors.iter().enumerate() {
            let r = rels.get(f.relator).ok_or(CertificateError::RelatorIndex {
                factor: k,
                index: f.relator,
                count: rels.len(),
            })?;
            let body = match f.sign {
                1 => r.clone(),
                -1 => r.inverse(),
                s => return Err(CertificateError::BadSign { factor: k, sign: s }),
            };
            letters.extend(body.conjugate(&f.conjugator).letters().iter().cloned());
        }
        Ok(Word::free_reduce(letters))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate JSON is infallible")
    }
}

/// True iff the factor product reduces exactly to the target.
pub fn verify_certificate(p: &Presentation, cert: &Certificate) -> Result<bool, CertificateError> {
    Ok(cert.product(p)? == cert.target)
}

/// One step of a [`Derivation`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Proves `conjugator · relator^sign · conjugator^-1`.
    Relator { conjugator: Word, relator: usize, sign: i8 },
    /// Proves the product of what two earlier steps prove.
    Product { left: usize, right: usize },
    /// Proves the inverse of what an earlier step proves.
    Inverse { of: usize },
}

/// A certificate with shared subproducts.
///
/// Each step proves a word in the normal closure of the relators, either
/// directly or from earlier steps; the last step proves the target. Checking
/// one means freely reducing every step's word once, so it stays cheap even
/// when the equivalent flat [`Certificate`] would have astronomically many
/// factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivation {
    pub target: Word,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let mut steps = Vec::with_capacity(2 * cert.factors.len());
        for f in &cert.factors {
            steps.push(Step::Relator { conjugator: f.conjugator.clone(), relator: f.relator, sign: f.sign });
            if steps.len() > 1 {
                let n = steps.len();
                let left = if n == 2 { 0 } else { n - 2 };
                steps.push(Step::Product { left, right: n - 1 });
            }
        }
        Derivation { target: cert.target.clone(), steps }
    }

    /// Derivation of `self.target · other.target`.
    pub fn then(&self, other: &Derivation) -> Derivation {
        if self.steps.is_empty() {
            return Derivation { target: &self.target * &other.target, steps: other.steps.clone() };
        }
        if other.steps.is_empty() {
            return Derivation { target: &self.target * &other.target, steps: self.steps.clone() };
        }
        let shift = self.steps.len();
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().map(|s| match s {
            Step::Relator { .. } => s.clone(),
            Step::Product { left, right } => Step::Product { left: left + shift, right: right + shift },
            Step::Inverse { of } => Step::Inverse { of: of + shift },
        }));
        steps.push(Step::Product { left: shift - 1, right: steps.len() - 1 });
        Derivation { target: &self.target * &other.target, steps }
    }

    pub fn inverse(&self) -> Derivation {
        let mut steps = self.steps.clone();
        if !steps.is_empty() {
            steps.push(Step::Inverse { of: steps.len() - 1 });
        }
        Derivation { target: self.target.inverse(), steps }
    }

    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> Derivation {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Relator { conjugator, relator, sign } => {
                    Step::Relator { conjugator: conjugator.clone(), relator: map(*relator), sign: *sign }
                }
                other => other.clone(),
            })
            .collect();
        Derivation { target: self.target.clone(), steps }
    }

    /// Number of relator factors in the flat expansion.
    pub fn expanded_len(&self) -> f64 {
        let mut counts: Vec<f64> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let c = match s {
                Step::Relator { .. } => 1.0,
                Step::Product { left, right } => {
                    counts.get(*left).copied().unwrap_or(0.0) + counts.get(*right).copied().unwrap_or(0.0)
                }
                Step::Inverse { of } => counts.get(*of).copied().unwrap_or(0.0),
            };
            counts.push(c);
        }
        counts.last().copied().unwrap_or(0.0)
    }

    /// Flat certificate, if its expansion has at most `max_factors` factors.
    pub fn to_certificate(&self, max_factors: usize) -> Option<Certificate> {
        if self.expanded_len() > max_factors as f64 {
            return None;
        }
        let mut factors = Vec::new();
        if let Some(last) = self.steps.len().checked_sub(1) {
            let mut stack = vec![(last, false)];
            while let Some((i, inverted)) = stack.pop() {
                match &self.steps[i] {
                    Step::Relator { conjugator, relator, sign } => factors.push(Factor {
                        conjugator: conjugator.clone(),
                        relator: *relator,
                        sign: if inverted { -sign } else { *sign },
                    }),
                    Step::Product { left, right } => {
                        if inverted {
                            stack.push((*left, true));
                            stack.push((*right, true));
                        } else {
                            stack.push((*right, false));
                            stack.push((*left, false));
                        }
                    }
                    Step::Inverse { of } => stack.push((*of, !inverted)),
                }
            }
        }
        Some(Certificate { target: self.target.clone(), factors })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("derivation JSON is infallible")
    }
}

/// Checks every step in order; true iff the last one proves the target.
pub fn verify_derivation(p: &Presentation, d: &Derivation) -> Result<bool, CertificateError> {
    let rels = p.relators();
    let mut proved: Vec<Word> = Vec::with_capacity(d.steps.len());
    for (k, s) in d.steps.iter().enumerate() {
        let earlier = |i: usize| {
            proved.get(i).ok_or(CertificateError::StepReference { step: k, refers: i })
        };
        let w = match s {
            Step::Relator { conjugator, relator, sign } => {
                let r = rels.get(*relator).ok_or(CertificateError::RelatorIndex {
                    factor: k,
                    index: *relator,
                    count: rels.len(),
                })?;
                match sign {
                    1 => r.conjugate(conjugator),
                    -1 => r.inverse().conjugate(conjugator),
                    s => return Err(CertificateError::BadSign { factor: k, sign: *s }),
                }
            }
            Step::Product { left, right } => earlier(*left)? * earlier(*right)?,
            Step::Inverse { of } => earlier(*of)?.inverse(),
        };
        proved.push(w);
    }
    Ok(proved.last().cloned().unwrap_or_default() == d.target)
}

/// If `target` is a rotation of `relator` or of its inverse, returns the
/// conjugator and sign with `target = c relator^sign c^-1`.
pub fn rotation_witness(target: &Word, relator: &Word) -> Option<(Word, i8)> {
    if target.len() != relator.len() || target.is_empty() {
        return None;
    }
    for sign in [1i8, -1] {
        let base = if sign == 1 { relator.clone() } else { relator.inverse() };
        for k in 0..base.len() {
            if base.rotate(k) == *target {
                // rotate(k) = s^-1 base s with s the first k letters
                let s = Word::free_reduce(base.letters()[..k].iter().cloned());
                return Some((s.inverse(), sign));
            }
        }
    }
    None
}

/// Limits for [`search_certificate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    pub max_factors: usize,
    /// Upper bound on each factor's conjugator length, if any.
    pub max_conjugator_len: Option<usize>,
    /// Intermediate words longer than this are not explored.
    pub max_word_len: usize,
    /// Total search states before giving up.
    pub max_nodes: usize,
}

impl SearchBound {
    pub fn new(max_factors: usize, max_conjugator_len: Option<usize>) -> Self {
        SearchBound { max_factors, max_conjugator_len, max_word_len: 24, max_nodes: 200_000 }
    }

    pub fn with_word_len(mut self, n: usize) -> Self {
        self.max_word_len = n;
        self
    }

    pub fn with_nodes(mut self, n: usize) -> Self {
        self.max_nodes = n;
        self
    }
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound::new(12, None)
    }
}

/// Why a search came back empty. Either way nothing is claimed about the
/// target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotFound {
    /// Every reachable state within the bounds was explored.
    Exhausted { nodes: usize },
    /// The node budget ran out first.
    Budget { nodes: usize },
    /// The target's exponent sums cannot be produced by the relators at all.
    ExponentObstruction,
}

// Letters as table columns: generator i is 2i, its inverse 2i + 1.
type Cols = Vec<u32>;

fn to_cols(p: &Presentation, w: &Word) -> Option<Cols> {
    w.letters()
        .iter()
        .map(|l| p.generator_index(l.generator()).map(|g| (2 * g + usize::from(l.exponent() < 0)) as u32))
        .collect()
}

fn to_word(p: &Presentation, c: &[u32]) -> Word {
    Word::free_reduce(c.iter().map(|&x| {
        let g = p.generators()[(x / 2) as usize].clone();
        if x % 2 == 0 {
            Letter::pos(g)
        } else {
            Letter::neg(g)
        }
    }))
}

fn inv_cols(w: &[u32]) -> Cols {
    w.iter().rev().map(|&x| x ^ 1).collect()
}

/// Freely reduced concatenation.
fn cat(a: &[u32], b: &[u32]) -> Cols {
    let mut out: Cols = Vec::with_capacity(a.len() + b.len());
    for &x in a.iter().chain(b) {
        if out.last() == Some(&(x ^ 1)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Splits `w = d core d^-1` and rotates `core` to its least rotation `t^-1 core t`.
/// Returns `(canonical, d t)`.
fn canonical_cyclic(w: &[u32]) -> (Cols, Cols) {
    let n = w.len();
    let mut k = 0;
    while 2 * k + 1 < n && w[k] == (w[n - 1 - k] ^ 1) {
        k += 1;
    }
    let core = &w[k..n - k];
    let d = &w[..k];
    if core.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let m = core.len();
    let best = (0..m)
        .min_by(|&a, &b| {
            let ra = core[a..].iter().chain(&core[..a]);
            let rb = core[b..].iter().chain(&core[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0);
    let mut canon = core[best..].to_vec();
    canon.extend_from_slice(&core[..best]);
    let frame = cat(d, &core[..best]);
    (canon, frame)
}

struct Piece {
    // rotation of relator^sign, as `prefix^-1 relator^sign prefix`
    body_inv: Cols,
    prefix_inv: Cols,
    relator: usize,
    sign: i8,
}

struct Node {
    word: Cols,
    frame: Cols,
    parent: usize,
    factor: Option<(Cols, usize, i8)>,
    depth: usize,
}

/// Searches for a certificate expressing `target` through the relators of
/// `p`.
///
/// The search rewrites the target as a cyclic word: each step picks a cyclic
/// conjugate `rho` of a relator or its inverse whose first letter matches
/// the current word somewhere, splices `rho^-1` in at that point and
/// cyclically reduces. Each step contributes exactly one conjugated relator.
/// States are explored shortest-word first, so short derivations are found
/// before long ones.
pub fn search_certificate(p: &Presentation, target: &Word, bound: SearchBound) -> Result<Certificate, NotFound> {
    let all: Vec<usize> = (0..p.relators().len()).collect();
    search_certificate_using(p, target, bound, &all)
}

/// As [`search_certificate`], restricted to the relators in `allowed`.
pub fn search_certificate_using(
    p: &Presentation,
    target: &Word,
    bound: SearchBound,
    allowed: &[usize],
) -> Result<Certificate, NotFound> {
    let Some(t) = to_cols(p, target) else {
        return Err(NotFound::ExponentObstruction);
    };
    if exponent_obstructed(p, target, allowed) {
        return Err(NotFound::ExponentObstruction);
    }

    let ncols = 2 * p.generators().len();
    let mut by_first: Vec<Vec<Piece>> = (0..ncols).map(|_| Vec::new()).collect();
    let mut seen_pieces: std::collections::HashSet<Cols> = std::collections::HashSet::new();
    for &ri in allowed {
        let r = to_cols(p, &p.relators()[ri]).expect("relators are declared");
        for sign in [1i8, -1] {
            let body = if sign == 1 { r.clone() } else { inv_cols(&r) };
            for k in 0..body.len() {
                let mut rot = body[k..].to_vec();
                rot.extend_from_slice(&body[..k]);
                if !seen_pieces.insert(rot.clone()) {
                    continue;
                }
                by_first[rot[0] as usize].push(Piece {
                    body_inv: inv_cols(&rot),
                    prefix_inv: inv_cols(&body[..k]),
                    relator: ri,
                    sign,
                });
            }
        }
    }

    let (w0, f0) = canonical_cyclic(&t);
    let mut nodes = vec![Node { word: w0.clone(), frame: f0, parent: usize::MAX, factor: None, depth: 0 }];
    let mut best_depth: HashMap<Cols, usize> = HashMap::new();
    best_depth.insert(w0.clone(), 0);
    let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
    heap.push(Reverse((score(w0.len(), 0), 0, 0)));
    let mut exhausted = true;

    while let Some(Reverse((_, _, id))) = heap.pop() {
        if nodes[id].word.is_empty() {
            return Ok(rebuild(p, target, &nodes, id));
        }
        if nodes[id].depth >= bound.max_factors {
            continue;
        }
        if nodes.len() >= bound.max_nodes {
            exhausted = false;
            break;
        }
        let word = nodes[id].word.clone();
        let frame = nodes[id].frame.clone();
        let depth = nodes[id].depth + 1;
        let n = word.len();
        for k in 0..n {
            let mut rot = word[k..].to_vec();
            rot.extend_from_slice(&word[..k]);
            let rframe = cat(&frame, &word[..k]);
            for piece in &by_first[rot[0] as usize] {
                let raw = cat(&piece.body_inv, &rot);
                let (next, d) = canonical_cyclic(&raw);
                if next.len() > bound.max_word_len {
                    continue;
                }
                if best_depth.get(&next).is_some_and(|&bd| bd <= depth) {
                    continue;
                }
                let conj = cat(&rframe, &piece.prefix_inv);
                if bound.max_conjugator_len.is_some_and(|m| conj.len() > m) {
                    continue;
                }
                best_depth.insert(next.clone(), depth);
                let nid = nodes.len();
                let done = next.is_empty();
                let s = score(next.len(), depth);
                nodes.push(Node {
                    word: next,
                    frame: cat(&rframe, &d),
                    parent: id,
                    factor: Some((conj, piece.relator, piece.sign)),
                    depth,
                });
                if done {
                    return Ok(rebuild(p, target, &nodes, nid));
                }
                heap.push(Reverse((s, nid, nid)));
            }
        }
    }
    if exhausted {
        Err(NotFound::Exhausted { nodes: nodes.len() })
    } else {
        Err(NotFound::Budget { nodes: nodes.len() })
    }
}

fn score(len: usize, depth: usize) -> usize {
    2 * len + depth
}

fn rebuild(p: &Presentation, target: &Word, nodes: &[Node], mut id: usize) -> Certificate {
    let mut factors = Vec::new();
    while let Some((conj, relator, sign)) = &nodes[id].factor {
        factors.push(Factor { conjugator: to_word(p, conj), relator: *relator, sign: *sign });
        id = nodes[id].parent;
    }
    factors.reverse();
    let cert = Certificate { target: target.clone(), factors };
    debug_assert_eq!(verify_certificate(p, &cert), Ok(true));
    cert
}

/// Every consequence of the relators has an exponent-sum vector in the
/// integer span of theirs; a target outside that span can never be
/// certified.
fn exponent_obstructed(p: &Presentation, target: &Word, allowed: &[usize]) -> bool {
    let gens = p.generators();
    let rows: Vec<Vec<i64>> =
        allowed.iter().map(|&i| gens.iter().map(|g| p.relators()[i].exponent_sum(g)).collect()).collect();
    let want: Vec<i64> = gens.iter().map(|g| target.exponent_sum(g)).collect();
    !crate::abelian::in_integer_row_span(&rows, &want, gens.len())
}

/// Translates every relator of `p2` through `dictionary` and checks that the
/// matching certificate (by position) derives it from the relators of `p1`.
/// This is the one-directional consequence check; call it both ways for
/// equivalence.
pub fn check_equivalence(
    p1: &Presentation,
    p2: &Presentation,
    dictionary: &BTreeMap<Generator, Word>,
    certs: &[Certificate],
) -> Result<bool, CertificateError> {
    for g in p2.generators() {
        if !dictionary.contains_key(g) {
            return Err(CertificateError::MissingDictionaryEntry(g.name().to_string()));
        }
    }
    if certs.len() != p2.relators().len() {
        return Err(CertificateError::CertificateCount { expected: p2.relators().len(), got: certs.len() });
    }
    for (r, cert) in p2.relators().iter().zip(certs) {
        let translated = r.substitute_all(|g| dictionary.get(g).cloned());
        if cert.target != translated || !verify_certificate(p1, cert)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches certificates for every translated relator of `p2` over `p1`.
/// Returns one certificate per relator, or the index of the first relator
/// the search could not certify.
pub fn certify_translation(
    p1: &Presentation,
    p2: &Presentation,
    dictionary: &BTreeMap<Generator, Word>,
    bound: SearchBound,
) -> Result<Vec<Certificate>, usize> {
    p2.relators()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let translated = r.substitute_all(|g| dictionary.get(g).cloned());
            search_certificate(p1, &translated, bound).map_err(|_| i)
        })
        .collect()
}

/// Identity dictionary on the generators of `p`.
pub fn identity_dictionary(p: &Presentation) -> BTreeMap<Generator, Word> {
    p.generators().iter().map(|g| (g.clone(), Word::generator(g))).collect()
}

/// Outcome of [`find_redundant_relators`].
#[derive(Clone, Debug)]
pub struct Redundancy {
    /// One `RemoveRedundantRelator` move per relator dropped, in order;
    /// replaying them on the input reproduces `reduced`.
    pub moves: Vec<crate::presentation::TietzeMove>,
    /// Original indices of the dropped relators.
    pub removed: Vec<usize>,
    pub reduced: Presentation,
}

/// Greedily removes relators that the search can derive from the others.
/// Candidates are tried in `order` (original indices); each removal is
/// certified against the relators still present at that point.
pub fn find_redundant_relators(p: &Presentation, order: &[usize], bound: SearchBound) -> Redundancy {
    use crate::presentation::TietzeMove;

    let mut current = p.clone();
    // position in `current` -> original index
    let mut origin: Vec<usize> = (0..p.relators().len()).collect();
    let mut moves = Vec::new();
    let mut removed = Vec::new();
    for &orig in order {
        let Some(pos) = origin.iter().position(|&o| o == orig) else { continue };
        let relator = current.relators()[pos].clone();
        let others: Vec<usize> = (0..current.relators().len()).filter(|&i| i != pos).collect();
        let Ok(cert) = search_certificate_using(&current, &relator, bound, &others) else { continue };
        // indices after removal shift down past `pos`
        let cert = cert.reindex(|i| if i > pos { i - 1 } else { i });
        let mv = TietzeMove::RemoveRedundantRelator { index: pos, relator, certificate: cert };
        current = mv.apply(&current).expect("search certificates verify");
        origin.remove(pos);
        moves.push(mv);
        removed.push(orig);
    }
    Redundancy { moves, removed, reduced: current }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, parse_word};
    use crate::word::CommutatorConvention;

    fn word(p: &Presentation, text: &str) -> Word {
        parse_word(text, p.generators(), CommutatorConvention::Default).unwrap()
    }

    #[test]
    fn trivial_certificates() {
        let p = parse_presentation("< a, b | aba^-1b^-2 >").unwrap();
        assert_eq!(verify_certificate(&p, &Certificate::identity()), Ok(true));
        assert_eq!(verify_certificate(&p, &Certificate::relator(&p, 0)), Ok(true));
        let bad = Certificate { target: word(&p, "a"), factors: vec![] };
        assert_eq!(verify_certificate(&p, &bad), Ok(false));
        let oob = Certificate {
            target: Word::identity(),
            factors: vec![Factor { conjugator: Word::identity(), relator: 3, sign: 1 }],
        };
        assert!(matches!(verify_certificate(&p, &oob), Err(CertificateError::RelatorIndex { .. })));
    }

    #[test]
    fn hand_certificate_for_commuting_q_c() {
        let p = parse_presentation("< c, e, g, q | [q^-1,c][g^-1,e], [g,e] >").unwrap();
        // [g^-1, e]^-1 = e g^-1 e^-1 g = g^-1 [g, e] g
        let cert = Certificate {
            target: word(&p, "[q^-1,c]"),
            factors: vec![
                Factor { conjugator: Word::identity(), relator: 0, sign: 1 },
                Factor { conjugator: word(&p, "g^-1"), relator: 1, sign: 1 },
            ],
        };
        assert_eq!(verify_certificate(&p, &cert), Ok(true));
    }

    #[test]
    fn combinators_preserve_validity() {
        let p = parse_presentation("< a, b | a^3, b^2, abab >").unwrap();
        let c0 = Certificate::relator(&p, 0);
        let c2 = Certificate::relator(&p, 2).conjugate(&word(&p, "ba"));
        for c in [c0.then(&c2), c2.inverse(), c0.inverse().then(&c0).conjugate(&word(&p, "b"))] {
            assert_eq!(verify_certificate(&p, &c), Ok(true));
        }
    }

    #[test]
    fn rotation_witness_matches() {
        let p = parse_presentation("< u, v | vu^-1vu >").unwrap();
        let t = word(&p, "uvu^-1v");
        let (c, s) = rotation_witness(&t, &p.relators()[0]).unwrap();
        assert_eq!(p.relators()[0].pow(s as i64).conjugate(&c), t);
        assert!(rotation_witness(&word(&p, "uuvv"), &p.relators()[0]).is_none());
    }

    #[test]
    fn search_finds_short_consequences() {
        let p = parse_presentation("< c, e, g, q | [q^-1,c][g^-1,e], [g,e] >").unwrap();
        let target = word(&p, "[q,c]");
        let cert = search_certificate(&p, &target, SearchBound::new(4, Some(6))).unwrap();
        assert_eq!(verify_certificate(&p, &cert), Ok(true));
        assert_eq!(cert.target, target);
    }

    #[test]
    fn fresh_generator_is_obstructed() {
        let p = parse_presentation("< a, b, z | aba^-1b^-1 >").unwrap();
        let z = word(&p, "z");
        assert_eq!(search_certificate(&p, &z, SearchBound::default()), Err(NotFound::ExponentObstruction));
    }

    #[test]
    fn equivalence_with_identity_dictionary() {
        let p = parse_presentation("< a, b | a^2, b^3, (ab)^2 >").unwrap();
        let certs: Vec<Certificate> = (0..3).map(|i| Certificate::relator(&p, i)).collect();
        assert_eq!(check_equivalence(&p, &p, &identity_dictionary(&p), &certs), Ok(true));
        let mut short = identity_dictionary(&p);
        short.remove(p.generator("a").unwrap());
        assert!(matches!(
            check_equivalence(&p, &p, &short, &certs),
            Err(CertificateError::MissingDictionaryEntry(_))
        ));
    }

    #[test]
    fn redundancy_of_duplicated_consequence() {
        // the third relator is the product of the first two
        let p = parse_presentation("< a, b | a^2, b^2, a^2 b^2 >").unwrap();
        let red = find_redundant_relators(&p, &[2, 1, 0], SearchBound::default());
        assert_eq!(red.removed, vec![2]);
        assert_eq!(crate::presentation::replay(&p, &red.moves).unwrap(), red.reduced);
    }
}
