mod suites;

use fpverify::{parse_presentation, verify_trivial, TrivialityVerdict};
use suites::battery::*;

#[test]
fn cyclic() {
    cyclic_groups();
}

#[test]
fn symmetric_group() {
    symmetric_group_on_three_points();
}

#[test]
fn quaternion() {
    quaternion_group();
}

#[test]
fn triviality_verdicts() {
    assert!(verify_trivial(&battery("trivial"), 1000).unwrap().is_trivial());
    assert!(matches!(verify_trivial(&battery("s3"), 1000).unwrap(), TrivialityVerdict::Nontrivial { order: 6, .. }));
    let free_abelian = parse_presentation("< a, b | [a,b] >").unwrap();
    assert!(matches!(verify_trivial(&free_abelian, 1000).unwrap(), TrivialityVerdict::Unknown(_)));
}
