//! Coset enumeration that records why every table entry holds.
//!
//! Each coset `k` carries the word `rep(k)` along which it was defined, and
//! each entry `k^x = m` carries a proof that `rep(k) x rep(m)^-1` lies in
//! the normal closure of the relators. Proofs are shared nodes in a DAG built
//! from conjugated relators, products and inverses. When the enumeration
//! over the trivial subgroup completes, tracing a word `w` from coset 0
//! multiplies entry proofs into a proof of `w` itself, returned as a
//! [`Derivation`] that keeps the sharing.

use std::collections::VecDeque;

use crate::certificate::{Derivation, Step};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;
const ID: u32 = 0;

#[derive(Clone, Debug, PartialEq)]
pub enum ProofError {
    /// The enumeration did not finish within the coset limit.
    LimitExceeded { cosets: usize },
    /// The word does not trace back to the subgroup coset, so it is not a
    /// consequence of the relators.
    NotAConsequence { target: usize },
    /// A target uses a generator outside the presentation.
    UnknownGenerator { target: usize },
}

impl std::fmt::Display for ProofError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProofError::LimitExceeded { cosets } => write!(f, "enumeration exceeded {cosets} cosets"),
            ProofError::NotAConsequence { target } => write!(f, "target {target} is not a consequence"),
            ProofError::UnknownGenerator { target } => write!(f, "target {target} uses an unknown generator"),
        }
    }
}

impl std::error::Error for ProofError {}

#[derive(Clone, Debug)]
enum Node {
    Identity,
    /// `conj · relator^sign · conj^-1`
    Relator { index: u32, sign: i8, conj: Vec<u32> },
    Mul(u32, u32),
    Inv(u32),
}

fn cat(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(a.len() + b.len());
    for &x in a.iter().chain(b) {
        if out.last() == Some(&(x ^ 1)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

struct Prover {
    cols: usize,
    table: Vec<u32>,
    proof: Vec<u32>,
    rep: Vec<Vec<u32>>,
    parent: Vec<u32>,
    parent_proof: Vec<u32>,
    nodes: Vec<Node>,
    live: usize,
    queue: VecDeque<u32>,
    max_cosets: usize,
    overflow: bool,
}

impl Prover {
    fn new(cols: usize, max_cosets: usize) -> Self {
        Prover {
            cols,
            table: vec![NONE; cols],
            proof: vec![ID; cols],
            rep: vec![Vec::new()],
            parent: vec![0],
            parent_proof: vec![ID],
            nodes: vec![Node::Identity],
            live: 1,
            queue: VecDeque::new(),
            max_cosets,
            overflow: false,
        }
    }

    fn push(&mut self, n: Node) -> u32 {
        self.nodes.push(n);
        (self.nodes.len() - 1) as u32
    }

    fn mul(&mut self, a: u32, b: u32) -> u32 {
        match (a, b) {
            (ID, _) => b,
            (_, ID) => a,
            _ => self.push(Node::Mul(a, b)),
        }
    }

    fn inv(&mut self, a: u32) -> u32 {
        if a == ID {
            return ID;
        }
        if let Node::Inv(inner) = self.nodes[a as usize] {
            return inner;
        }
        self.push(Node::Inv(a))
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    fn entry_proof(&self, c: u32, x: usize) -> u32 {
        self.proof[c as usize * self.cols + x]
    }

    /// Records `c^x = d` with `pr` proving `rep(c) x rep(d)^-1`.
    fn set(&mut self, c: u32, x: usize, d: u32, pr: u32) {
        let ip = self.inv(pr);
        self.table[c as usize * self.cols + x] = d;
        self.proof[c as usize * self.cols + x] = pr;
        self.table[d as usize * self.cols + (x ^ 1)] = c;
        self.proof[d as usize * self.cols + (x ^ 1)] = ip;
    }

    fn define(&mut self, c: u32, x: usize) -> Option<u32> {
        if self.live >= self.max_cosets {
            self.overflow = true;
            return None;
        }
        let d = self.rep.len() as u32;
        self.rep.push(cat(&self.rep[c as usize], &[x as u32]));
        self.parent.push(d);
        self.parent_proof.push(ID);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.proof.extend(std::iter::repeat_n(ID, self.cols));
        self.live += 1;
        self.set(c, x, d, ID);
        Some(d)
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    /// Root of `c` with a proof of `rep(c) rep(root)^-1`.
    fn find(&mut self, c: u32) -> (u32, u32) {
        let mut path = Vec::new();
        let mut x = c;
        while self.parent[x as usize] != x {
            path.push(x);
            x = self.parent[x as usize];
        }
        let root = x;
        // compress from the top so each node composes with an already
        // compressed parent
        for &y in path.iter().rev() {
            let p = self.parent[y as usize];
            if p != root {
                let a = self.parent_proof[y as usize];
                let b = self.parent_proof[p as usize];
                let m = self.mul(a, b);
                self.parent[y as usize] = root;
                self.parent_proof[y as usize] = m;
            }
        }
        if c == root {
            (root, ID)
        } else {
            (root, self.parent_proof[c as usize])
        }
    }

    /// Joins the classes of `a` and `b`, given a proof of `rep(a) rep(b)^-1`.
    fn merge(&mut self, a: u32, b: u32, pr: u32) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return;
        }
        // rep(ra) rep(rb)^-1 = (rep(a) rep(ra)^-1)^-1 · pr · (rep(b) rep(rb)^-1)
        let ipa = self.inv(pa);
        let t = self.mul(ipa, pr);
        let link = self.mul(t, pb);
        let (lo, hi, hi_to_lo) = if ra < rb {
            let il = self.inv(link);
            (ra, rb, il)
        } else {
            (rb, ra, link)
        };
        self.parent[hi as usize] = lo;
        self.parent_proof[hi as usize] = hi_to_lo;
        self.live -= 1;
        self.queue.push_back(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32, pr: u32) {
        self.merge(a, b, pr);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let pe = self.entry_proof(e, x);
                if self.get(f, x ^ 1) == e {
                    self.table[f as usize * self.cols + (x ^ 1)] = NONE;
                }
                let (e1, pe1) = self.find(e);
                let (f1, pf1) = self.find(f);
                // rep(e1) x rep(f1)^-1
                let ie = self.inv(pe1);
                let t = self.mul(ie, pe);
                let stmt = self.mul(t, pf1);
                let g = self.get(e1, x);
                if g != NONE {
                    let pg = self.entry_proof(e1, x);
                    let ig = self.inv(pg);
                    let m = self.mul(ig, stmt);
                    self.merge(g, f1, m);
                    continue;
                }
                let h = self.get(f1, x ^ 1);
                if h != NONE {
                    let ph = self.entry_proof(f1, x ^ 1);
                    let m = self.mul(stmt, ph);
                    self.merge(e1, h, m);
                    continue;
                }
                self.set(e1, x, f1, stmt);
            }
        }
    }

    /// HLT scan of relator `r` (columns) at coset `k`, defining cosets as
    /// needed.
    fn scan_and_fill(&mut self, k: u32, index: u32, r: &[u32]) {
        let n = r.len();
        let mut f = k;
        let mut i = 0;
        let mut fp = ID;
        let mut b = k;
        let mut j = n;
        let mut bp = ID;
        loop {
            while i < j {
                let nx = self.get(f, r[i] as usize);
                if nx == NONE {
                    break;
                }
                let ep = self.entry_proof(f, r[i] as usize);
                fp = self.mul(fp, ep);
                f = nx;
                i += 1;
            }
            while j > i {
                let col = (r[j - 1] ^ 1) as usize;
                let nx = self.get(b, col);
                if nx == NONE {
                    break;
                }
                let ep = self.entry_proof(b, col);
                bp = self.mul(bp, ep);
                b = nx;
                j -= 1;
            }
            if j <= i + 1 {
                // F^-1 R B proves rep(f) r[i..j] rep(b)^-1
                let rel = self.push(Node::Relator { index, sign: 1, conj: self.rep[k as usize].clone() });
                let ifp = self.inv(fp);
                let t = self.mul(ifp, rel);
                let stmt = self.mul(t, bp);
                if j == i {
                    if f != b {
                        self.coincidence(f, b, stmt);
                    }
                } else {
                    self.set(f, r[i] as usize, b, stmt);
                }
                return;
            }
            let Some(d) = self.define(f, r[i] as usize) else { return };
            f = d;
            i += 1;
        }
    }

    fn run(&mut self, rels: &[(u32, Vec<u32>)]) -> bool {
        let mut k: u32 = 0;
        while (k as usize) < self.rep.len() {
            if self.is_live(k) {
                for (index, r) in rels {
                    self.scan_and_fill(k, *index, r);
                    if self.overflow {
                        return false;
                    }
                    if !self.is_live(k) {
                        break;
                    }
                }
                for x in 0..self.cols {
                    if !self.is_live(k) {
                        break;
                    }
                    if self.get(k, x) == NONE && self.define(k, x).is_none() {
                        return false;
                    }
                }
            }
            k += 1;
        }
        true
    }

    /// The part of the DAG below `root`, as derivation steps.
    fn extract(&self, p: &Presentation, root: u32, target: &Word) -> Derivation {
        if root == ID {
            return Derivation { target: target.clone(), steps: Vec::new() };
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        seen[root as usize] = true;
        while let Some(id) = stack.pop() {
            let kids: &[u32] = match &self.nodes[id as usize] {
                Node::Mul(a, b) => &[*a, *b],
                Node::Inv(a) => &[*a],
                _ => &[],
            };
            for &k in kids {
                if !seen[k as usize] {
                    seen[k as usize] = true;
                    stack.push(k);
                }
            }
        }
        // children always precede parents, so id order is topological
        let mut index = vec![usize::MAX; self.nodes.len()];
        let mut steps = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !seen[id] {
                continue;
            }
            index[id] = steps.len();
            steps.push(match node {
                Node::Identity => unreachable!("identity is never a child"),
                Node::Relator { index: r, sign, conj } => {
                    Step::Relator { conjugator: to_word(p, conj), relator: *r as usize, sign: *sign }
                }
                Node::Mul(a, b) => Step::Product { left: index[*a as usize], right: index[*b as usize] },
                Node::Inv(a) => Step::Inverse { of: index[*a as usize] },
            });
        }
        Derivation { target: target.clone(), steps }
    }
}

fn to_cols(p: &Presentation, w: &Word) -> Option<Vec<u32>> {
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

/// Proves each target a consequence of the relators of `p` by a complete
/// enumeration over the trivial subgroup, returning one derivation per
/// target. Only enumerations that finish within `max_cosets` prove
/// anything; when the group is finite the enumeration also decides which
/// targets are consequences at all.
pub fn prove_words(p: &Presentation, targets: &[Word], max_cosets: usize) -> Result<Vec<Derivation>, ProofError> {
    let cols = 2 * p.generators().len();
    let target_cols: Vec<Vec<u32>> = targets
        .iter()
        .enumerate()
        .map(|(i, t)| to_cols(p, t).ok_or(ProofError::UnknownGenerator { target: i }))
        .collect::<Result<_, _>>()?;
    if cols == 0 {
        return Ok(targets.iter().map(|t| Derivation { target: t.clone(), steps: Vec::new() }).collect());
    }
    let mut rels: Vec<(u32, Vec<u32>)> = p
        .relators()
        .iter()
        .enumerate()
        .map(|(i, r)| (i as u32, to_cols(p, r).expect("relators use declared generators")))
        .collect();
    rels.sort_by_key(|(_, r)| r.len());

    let mut pr = Prover::new(cols, max_cosets);
    if !pr.run(&rels) {
        return Err(ProofError::LimitExceeded { cosets: max_cosets });
    }
    let mut out = Vec::with_capacity(targets.len());
    for (ti, t) in target_cols.iter().enumerate() {
        let mut c = 0u32;
        let mut acc = ID;
        for &x in t {
            let ep = pr.entry_proof(c, x as usize);
            acc = pr.mul(acc, ep);
            c = pr.get(c, x as usize);
        }
        if c != 0 {
            return Err(ProofError::NotAConsequence { target: ti });
        }
        out.push(pr.extract(p, acc, &targets[ti]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_derivation;
    use crate::presentation::{parse_presentation, parse_word};
    use crate::word::CommutatorConvention;

    fn w(p: &Presentation, s: &str) -> Word {
        parse_word(s, p.generators(), CommutatorConvention::Default).unwrap()
    }

    #[test]
    fn generators_of_trivial_groups() {
        for text in ["< a | a >", "< a, b | a b^-1, b^2 a^-3 >", "< a, b | aba^-1b^-2, bab^-1a^-2 >"] {
            let p = parse_presentation(text).unwrap();
            let targets: Vec<Word> = p.generators().iter().map(Word::generator).collect();
            let proofs = prove_words(&p, &targets, 10_000).unwrap();
            for d in &proofs {
                assert_eq!(verify_derivation(&p, d), Ok(true), "{text}");
                let flat = d.to_certificate(1_000_000).unwrap();
                assert_eq!(crate::certificate::verify_certificate(&p, &flat), Ok(true), "{text}");
            }
        }
    }

    #[test]
    fn consequences_in_a_finite_group() {
        let p = parse_presentation("< a, b | a^2, b^3, (ab)^2 >").unwrap();
        let good = [w(&p, "(ba)^2"), w(&p, "b^-3"), w(&p, "[a, b]^3"), Word::identity()];
        for d in prove_words(&p, &good, 1000).unwrap() {
            assert_eq!(verify_derivation(&p, &d), Ok(true));
        }
        assert_eq!(
            prove_words(&p, &[w(&p, "b")], 1000).unwrap_err(),
            ProofError::NotAConsequence { target: 0 }
        );
    }

    #[test]
    fn infinite_group_hits_the_limit() {
        let p = parse_presentation("< a, b | [a, b] >").unwrap();
        assert!(matches!(prove_words(&p, &[w(&p, "[a,b]")], 500), Err(ProofError::LimitExceeded { .. })));
    }
}
