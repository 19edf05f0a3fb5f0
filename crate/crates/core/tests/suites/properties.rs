use fpverify::corpus::{file_names, file_text};
use fpverify::presentation::{eliminate_generator, replay, simplify};
use fpverify::{
    homology_h1, parse_presentation, smith_normal_form, smith_normal_form_with, Certificate, Generator, IntegerMatrix,
    Letter, Presentation, TietzeMove, Word,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};

fn run<S: Strategy>(cases: u32, strategy: &S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    if let Err(e) = runner.run(strategy, test) {
        panic!("{e}");
    }
}

const NAMES: [&str; 3] = ["a", "b", "c"];

fn letter() -> impl Strategy<Value = Letter> {
    (0..NAMES.len(), prop::bool::ANY).prop_map(|(i, pos)| {
        let g = Generator::new(NAMES[i]).unwrap();
        if pos {
            Letter::pos(g)
        } else {
            Letter::neg(g)
        }
    })
}

/// Raw, possibly unreduced letter sequences.
fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..40)
}

fn word() -> impl Strategy<Value = Word> {
    letters().prop_map(Word::free_reduce)
}

/// Free-reduction laws on random raw letter sequences.
pub fn word_laws(cases: u32) {
    run(cases, &(letters(), word(), word(), word()), |(raw, u, v, w)| {
        let r = Word::free_reduce(raw.clone());
        // idempotent, and nothing left to cancel
        prop_assert_eq!(Word::free_reduce(r.letters().to_vec()), r.clone());
        prop_assert!(r.letters().windows(2).all(|p| !p[0].cancels(&p[1])));
        prop_assert!(r.len() <= raw.len());
        prop_assert_eq!(raw.len() % 2, r.len() % 2);

        prop_assert!((&r * &r.inverse()).is_identity());
        prop_assert!((&r.inverse() * &r).is_identity());
        prop_assert_eq!(r.inverse().inverse(), r.clone());

        // reduction is a homomorphism from the free monoid on letters
        let mut cat = raw.clone();
        cat.extend(u.letters().iter().cloned());
        prop_assert_eq!(Word::free_reduce(cat), &r * &u);
        prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
        prop_assert_eq!((&u * &v).inverse(), &v.inverse() * &u.inverse());

        for name in NAMES {
            let g = Generator::new(name).unwrap();
            let raw_sum: i64 = raw.iter().filter(|l| *l.generator() == g).map(|l| i64::from(l.exponent())).sum();
            prop_assert_eq!(r.exponent_sum(&g), raw_sum);
        }
        Ok(())
    });
}

/// Determinant by fraction-free elimination.
fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from gcds of k-by-k minors.
fn minor_gcd_factors(rows: &[Vec<i64>], ncols: usize) -> Vec<BigInt> {
    let nrows = rows.len();
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=nrows.min(ncols) {
        let mut g = BigInt::zero();
        for rs in subsets(nrows, k) {
            for cs in subsets(ncols, k) {
                let minor = rs.iter().map(|&i| cs.iter().map(|&j| BigInt::from(rows[i][j])).collect()).collect();
                g = g.gcd(&det(minor));
            }
        }
        if g.is_zero() {
            out.resize(nrows.min(ncols), BigInt::zero());
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (prop::collection::vec(prop::collection::vec(-4i64..=4, c), r), Just(c)))
}

fn to_rows(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

/// Smith normal form against the gcd-of-minors characterisation, plus the
/// transform identity `U A V = D` with unimodular `U`, `V`.
pub fn smith_vs_minors(cases: u32) {
    run(cases, &matrix(), |(rows, ncols)| {
        let m = IntegerMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&snf.diagonal, &minor_gcd_factors(&rows, ncols));
        prop_assert_eq!(snf.rank, snf.diagonal.iter().filter(|d| !d.is_zero()).count());

        let with = smith_normal_form_with(&m, true);
        let (u, v) = with.transforms.clone().unwrap();
        let d = u.mul(&m).mul(&v);
        prop_assert!(d.is_diagonal());
        for (i, x) in with.diagonal.iter().enumerate() {
            prop_assert_eq!(d.get(i, i), x);
        }
        prop_assert_eq!(det(to_rows(&u)).abs(), BigInt::one());
        prop_assert_eq!(det(to_rows(&v)).abs(), BigInt::one());
        Ok(())
    });
}

fn small_presentation() -> impl Strategy<Value = Presentation> {
    let rel = prop::collection::vec(letter(), 1..8).prop_map(Word::free_reduce);
    (prop::collection::vec(rel, 1..4), prop::collection::vec(letter(), 1..5)).prop_map(|(mut rels, def)| {
        // a fourth generator with a defining relator, so elimination applies
        let z = Generator::new("z").unwrap();
        rels.push(Word::generator(&z) * Word::free_reduce(def).inverse());
        let gens: Vec<&str> = NAMES.iter().copied().chain(["z"]).collect();
        Presentation::from_parts("random", &gens, rels).unwrap()
    })
}

fn assert_moves_preserve_h1(p: &Presentation) -> Result<(), TestCaseError> {
    let h = homology_h1(p);
    let (q, moves) = simplify(p, 50);
    prop_assert_eq!(homology_h1(&q), h.clone(), "simplify {}", p);
    prop_assert_eq!(replay(p, &moves).unwrap(), q);
    for g in p.generators() {
        if let Ok((q, mv)) = eliminate_generator(p, g) {
            prop_assert_eq!(homology_h1(&q), h.clone(), "eliminate {} from {}", g, p);
            prop_assert_eq!(homology_h1(&mv.undo(&q).unwrap()), h.clone());
        }
    }
    if !p.relators().is_empty() {
        let g = &p.generators()[0];
        let cert = Certificate::relator(p, 0)
            .conjugate(&Word::generator(g))
            .then(&Certificate::relator(p, p.relators().len() - 1).inverse());
        let added = cert.product(p).unwrap();
        if !added.is_identity() {
            let mv = TietzeMove::AddRedundantRelator { relator: added, certificate: cert };
            prop_assert_eq!(homology_h1(&mv.apply(p).unwrap()), h.clone());
        }
    }
    Ok(())
}

/// Tietze moves keep H1 on random small presentations.
pub fn tietze_random(cases: u32) {
    run(cases, &small_presentation(), |p| assert_moves_preserve_h1(&p));
}

/// Tietze moves keep H1 on every corpus presentation.
pub fn tietze_corpus() {
    for name in file_names().into_iter().filter(|n| n.ends_with(".grp")) {
        let p = parse_presentation(file_text(name).unwrap()).unwrap();
        assert_moves_preserve_h1(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
