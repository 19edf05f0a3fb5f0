use std::collections::BTreeSet;

use fpverify::coset::permutation_action;
use fpverify::corpus::file_text;
use fpverify::{enumerate, parse_presentation, parse_word, Presentation, Strategy};

const STRATEGIES: [Strategy; 3] = [Strategy::Hlt, Strategy::HltLookahead, Strategy::Felsch];

pub fn battery(name: &str) -> Presentation {
    parse_presentation(file_text(&format!("battery/{name}.grp")).unwrap()).unwrap()
}

/// Enumerates under every strategy, checks the table is a genuine action,
/// and returns the common order.
fn order(p: &Presentation) -> usize {
    let mut seen = BTreeSet::new();
    for s in STRATEGIES {
        let r = enumerate(p, &[], s, 100_000).unwrap();
        let table = r.table.as_ref().expect("complete");
        assert!(table.relators_close(p), "{} {s}", p.name());
        let n = r.index.unwrap();
        for rel in p.relators() {
            let perm = permutation_action(p, table, rel).unwrap();
            assert_eq!(perm, (0..n).collect::<Vec<_>>(), "{} acts nontrivially", rel);
        }
        seen.insert(n);
    }
    assert_eq!(seen.len(), 1, "strategies disagree on {}", p.name());
    seen.into_iter().next().unwrap()
}

/// Size of the closure of `gens` under composition.
fn closure<T: Ord + Clone>(identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> usize {
    let mut all = BTreeSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if all.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    all.len()
}

/// Cyclic groups of order up to 12 plus the small battery files.
pub fn cyclic_groups() {
    for n in 1..=12 {
        let p = parse_presentation(&format!("< a | a^{n} >")).unwrap();
        assert_eq!(order(&p), n);
    }
    assert_eq!(order(&battery("cyclic-12")), 12);
    assert_eq!(order(&battery("z2")), 2);
    assert_eq!(order(&battery("z3")), 3);
    assert_eq!(order(&battery("trivial")), 1);
}

/// S3 against a permutation closure, and a subgroup index.
pub fn symmetric_group_on_three_points() {
    let compose = |x: &[usize; 3], y: &[usize; 3]| [y[x[0]], y[x[1]], y[x[2]]];
    let r = [1, 2, 0];
    let s = [1, 0, 2];
    let oracle = closure([0, 1, 2], &[r, s], compose);
    assert_eq!(oracle, 6);
    // the permutations satisfy the relators, so the group maps onto them
    let id = [0, 1, 2];
    assert_eq!(compose(&compose(&r, &r), &r), id);
    assert_eq!(compose(&s, &s), id);
    let rs = compose(&r, &s);
    assert_eq!(compose(&rs, &rs), id);

    let p = battery("s3");
    assert_eq!(order(&p), oracle);
    let sub = [parse_word("s", p.generators(), Default::default()).unwrap()];
    for st in STRATEGIES {
        assert_eq!(enumerate(&p, &sub, st, 1000).unwrap().index, Some(3));
    }
}

type Quaternion = [i32; 4];

fn hamilton(x: &Quaternion, y: &Quaternion) -> Quaternion {
    let [a1, b1, c1, d1] = *x;
    let [a2, b2, c2, d2] = *y;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Q8 against a Hamilton-product multiplication table.
pub fn quaternion_group() {
    let one = [1, 0, 0, 0];
    let i = [0, 1, 0, 0];
    let j = [0, 0, 1, 0];
    let oracle = closure(one, &[i, j], hamilton);
    assert_eq!(oracle, 8);
    let pow = |x: &Quaternion, n: usize| (0..n).fold(one, |acc, _| hamilton(&acc, x));
    let inv = |x: &Quaternion| pow(x, 3);
    assert_eq!(pow(&i, 4), one);
    assert_eq!(hamilton(&pow(&i, 2), &pow(&inv(&j), 2)), one);
    assert_eq!(hamilton(&hamilton(&hamilton(&inv(&j), &i), &j), &i), one);

    assert_eq!(order(&battery("q8")), oracle);
}
