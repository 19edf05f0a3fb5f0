//! First homology via the Smith normal form of the exponent-sum matrix.
//!
//! All arithmetic is on arbitrary-precision integers: intermediate entries
//! grow during elimination even when the input and the final diagonal are
//! small.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::presentation::Presentation;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` nonnegative entries; nonzero ones form a divisibility chain.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// `(U, V)` with `U * A * V` equal to the diagonal form.
    pub transforms: Option<(IntegerMatrix, IntegerMatrix)>,
}

struct Reducer {
    a: IntegerMatrix,
    u: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(u) = &mut self.u {
            u.swap_rows(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(v) = &mut self.v {
            v.swap_cols(x, y);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, k);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Smallest nonzero |entry| in the lower-right block from `t`; ties go to
    /// the first in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `t` outside the pivot. Returns false if a
    /// remainder appeared and a smaller pivot was swapped in.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.a.rows {
            if self.a.get(i, t).is_zero() {
                continue;
            }
            let q = self.a.get(i, t).div_floor(self.a.get(t, t));
            self.add_row(i, t, &-q);
            if !self.a.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.a.cols {
            if self.a.get(t, j).is_zero() {
                continue;
            }
            let q = self.a.get(t, j).div_floor(self.a.get(t, t));
            self.add_col(j, t, &-q);
            if !self.a.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            // bring the smallest remaining entry of the cross to (t, t)
            let mut best = (t, t);
            for i in t + 1..self.a.rows {
                let x = self.a.get(i, t);
                if !x.is_zero() && x.abs() < self.a.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..self.a.cols {
                let x = self.a.get(t, j);
                if !x.is_zero() && x.abs() < self.a.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            self.swap_rows(t, best.0);
            self.swap_cols(t, best.1);
        }
        clean
    }

    fn run(&mut self) -> usize {
        let n = self.a.rows.min(self.a.cols);
        let mut rank = 0;
        for t in 0..n {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                while !self.clear_cross(t) {}
                // divisibility: fold an offending row into row t and retry
                let d = self.a.get(t, t).clone();
                let bad = (t + 1..self.a.rows)
                    .find(|&i| (t + 1..self.a.cols).any(|j| !self.a.get(i, j).is_multiple_of(&d)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            rank += 1;
        }
        rank
    }
}

/// Computes the Smith normal form; `with_transforms` also records `U`, `V`.
pub fn smith_normal_form_with(m: &IntegerMatrix, with_transforms: bool) -> SmithForm {
    let mut r = Reducer {
        a: m.clone(),
        u: with_transforms.then(|| IntegerMatrix::identity(m.rows)),
        v: with_transforms.then(|| IntegerMatrix::identity(m.cols)),
    };
    let rank = r.run();
    let n = m.rows.min(m.cols);
    let diagonal = (0..n).map(|i| r.a.get(i, i).clone()).collect();
    let transforms = match (r.u, r.v) {
        (Some(u), Some(v)) => Some((u, v)),
        _ => None,
    };
    SmithForm { diagonal, rank, transforms }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    smith_normal_form_with(m, false)
}

/// Whether `want` is an integer combination of `rows` (each of length `width`).
pub fn in_integer_row_span(rows: &[Vec<i64>], want: &[i64], width: usize) -> bool {
    if rows.is_empty() {
        return want.iter().all(|&x| x == 0);
    }
    // x A = b  <=>  A^T x^T = b^T; with U A^T V = D this is D y = U b
    let mut at = IntegerMatrix::zeros(width, rows.len());
    for (j, row) in rows.iter().enumerate() {
        for (i, &x) in row.iter().enumerate() {
            at.set(i, j, BigInt::from(x));
        }
    }
    let snf = smith_normal_form_with(&at, true);
    let (u, _) = snf.transforms.expect("requested transforms");
    let b = IntegerMatrix::from_rows(&want.iter().map(|&x| vec![x]).collect::<Vec<_>>());
    let ub = u.mul(&b);
    (0..width).all(|i| {
        let c = ub.get(i, 0);
        if i < snf.rank {
            c.is_multiple_of(&snf.diagonal[i])
        } else {
            c.is_zero()
        }
    })
}

/// A finitely generated abelian group `Z^free_rank + Z/t1 + ... + Z/tk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("abelian group JSON is infallible")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match t.to_u64() {
                Some(n) => serde_json::Value::from(n),
                None => serde_json::Value::from(t.to_string()),
            })
            .collect();
        let mut s = serializer.serialize_struct("AbelianGroup", 2)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        s.serialize_field("torsion", &torsion)?;
        s.end()
    }
}

/// H1 of the presented group: its abelianization.
pub fn homology_h1(p: &Presentation) -> AbelianGroup {
    let m = p.abelianized_relation_matrix();
    let snf = smith_normal_form(&m);
    AbelianGroup {
        free_rank: p.generators().len() - snf.rank,
        torsion: snf.diagonal.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
    }
}
