//! Exact integer linear algebra on small matrices: gcds, minors, elementary
//! row/column operations with replayable transcripts, Smith normal form, and
//! lattice membership.
//!
//! All arithmetic is checked `i64`; overflow is a hard error, never a wrap.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub fn checked_neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow)
}

/// gcd with the convention gcd(0, 0) = 0; always nonnegative.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// gcd of a nonempty list; all-zero lists yield 0.
pub fn gcd_vec(v: &[i64]) -> i64 {
    assert!(!v.is_empty(), "gcd_vec needs a nonempty slice");
    v.iter().fold(0, |acc, &x| gcd(acc, x))
}

/// An m-by-r integer matrix presenting the graph Cay(Z^m/H, {H +/- e_i}),
/// where H is the integer column span.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeubergerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl HeubergerMatrix {
    pub fn new(data: Vec<Vec<i64>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Shape {
                expected: "at least one row".into(),
                got: "0 rows".into(),
            });
        }
        let cols = data[0].len();
        if cols == 0 {
            return Err(Error::Shape {
                expected: "at least one column".into(),
                got: "0 columns".into(),
            });
        }
        let mut entries = Vec::with_capacity(data.len() * cols);
        for row in &data {
            if row.len() != cols {
                return Err(Error::Parse("ragged rows in matrix".into()));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            rows: data.len(),
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Parses "1 0; -1 2; -4 5" (rows split on ';', entries on whitespace,
    /// optional surrounding brackets). Ragged rows are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')'])
            .trim();
        if trimmed.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        let mut data = Vec::new();
        for row_text in trimmed.split(';') {
            let row: Vec<i64> = row_text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer {tok:?}")))
                })
                .collect::<Result<_>>()?;
            if row.is_empty() {
                return Err(Error::Parse("empty row".into()));
            }
            data.push(row);
        }
        Self::new(data)
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.get(i, j) == 0)
    }

    pub fn is_zero_col(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j) == 0)
    }

    pub fn matmul(&self, other: &HeubergerMatrix) -> Result<HeubergerMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = HeubergerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = checked_add(acc, checked_mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.cols),
                got: format!("length {}", v.len()),
            });
        }
        let mut out = vec![0i64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0i64;
            for j in 0..self.cols {
                acc = checked_add(acc, checked_mul(self.get(i, j), v[j])?)?;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Determinant of a square matrix, by cofactor expansion along the
    /// first row.
    pub fn det(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::Shape {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        match self.rows {
            1 => Ok(self.get(0, 0)),
            2 => det2(
                self.get(0, 0),
                self.get(0, 1),
                self.get(1, 0),
                self.get(1, 1),
            ),
            n => {
                let mut acc = 0i64;
                for j in 0..n {
                    if self.get(0, j) == 0 {
                        continue;
                    }
                    let minor_rows: Vec<Vec<i64>> = (1..n)
                        .map(|i| {
                            (0..n)
                                .filter(|&c| c != j)
                                .map(|c| self.get(i, c))
                                .collect()
                        })
                        .collect();
                    let minor = HeubergerMatrix::new(minor_rows)?.det()?;
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc = checked_add(
                        acc,
                        checked_mul(checked_mul(sign, self.get(0, j))?, minor)?,
                    )?;
                }
                Ok(acc)
            }
        }
    }
}

fn det2(a: i64, b: i64, c: i64, d: i64) -> Result<i64> {
    checked_add(checked_mul(a, d)?, checked_neg(checked_mul(b, c)?)?)
}

impl fmt::Display for HeubergerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

/// Signed determinants of the row-pair submatrices of a 3x2 matrix, in the
/// fixed order (rows 1,2), (rows 1,3), (rows 2,3).
pub fn minors_3x2(m: &HeubergerMatrix) -> Result<(i64, i64, i64)> {
    if m.num_rows() != 3 || m.num_cols() != 2 {
        return Err(Error::Shape {
            expected: "3x2".into(),
            got: format!("{}x{}", m.num_rows(), m.num_cols()),
        });
    }
    let d = |i: usize, j: usize| det2(m.get(i, 0), m.get(i, 1), m.get(j, 0), m.get(j, 1));
    Ok((d(0, 1)?, d(0, 2)?, d(1, 2)?))
}

/// Whether a step leaves the graph unchanged/isomorphic, or merely preserves
/// the chromatic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EffectClass {
    Isomorphism,
    ChiPreserving,
}

/// One elementary operation. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args")]
pub enum Step {
    #[serde(rename = "swap_rows")]
    SwapRows(usize, usize),
    #[serde(rename = "negate_row")]
    NegateRow(usize),
    #[serde(rename = "swap_cols")]
    SwapCols(usize, usize),
    #[serde(rename = "negate_col")]
    NegateCol(usize),
    /// col[dst] += k * col[src]
    #[serde(rename = "add_col_multiple")]
    AddColMultiple { k: i64, src: usize, dst: usize },
    #[serde(rename = "delete_zero_col")]
    DeleteZeroCol(usize),
    #[serde(rename = "delete_zero_row")]
    DeleteZeroRow(usize),
    #[serde(rename = "insert_zero_col")]
    InsertZeroCol(usize),
}

impl Step {
    pub fn effect(&self) -> EffectClass {
        match self {
            Step::DeleteZeroRow(_) => EffectClass::ChiPreserving,
            _ => EffectClass::Isomorphism,
        }
    }
}

/// A replayable sequence of elementary operations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn extend(&mut self, other: &Transcript) {
        self.steps.extend_from_slice(&other.steps);
    }

    /// Composes the row swap/negate steps into a signed permutation acting on
    /// row indices: returns P such that applying the transcript's row steps to
    /// v in Z^m yields P*v. Only valid when no row deletions occur.
    pub fn row_transform(&self, m: usize) -> Result<HeubergerMatrix> {
        let mut p = HeubergerMatrix::identity(m);
        for step in &self.steps {
            match step {
                Step::SwapRows(i, j) => {
                    let swap = swap_matrix(m, *i, *j)?;
                    p = swap.matmul(&p)?;
                }
                Step::NegateRow(i) => {
                    let neg = negate_matrix(m, *i)?;
                    p = neg.matmul(&p)?;
                }
                Step::DeleteZeroRow(_) => {
                    return Err(Error::Precondition(
                        "row_transform with row deletion".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(p)
    }
}

fn swap_matrix(n: usize, i: usize, j: usize) -> Result<HeubergerMatrix> {
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange(format!("swap {i},{j} in size {n}")));
    }
    let mut p = HeubergerMatrix::identity(n);
    p.set(i, i, 0);
    p.set(j, j, 0);
    p.set(i, j, 1);
    p.set(j, i, 1);
    Ok(p)
}

fn negate_matrix(n: usize, i: usize) -> Result<HeubergerMatrix> {
    if i >= n {
        return Err(Error::IndexOutOfRange(format!("negate {i} in size {n}")));
    }
    let mut p = HeubergerMatrix::identity(n);
    p.set(i, i, -1);
    Ok(p)
}

/// Applies a transcript to a matrix, step by step. Deterministic; index or
/// overflow errors abort.
pub fn apply_ops(m: &HeubergerMatrix, t: &Transcript) -> Result<HeubergerMatrix> {
    let mut cur = m.clone();
    for step in &t.steps {
        cur = apply_step(&cur, *step)?;
    }
    Ok(cur)
}

pub fn apply_step(m: &HeubergerMatrix, step: Step) -> Result<HeubergerMatrix> {
    let (rows, cols) = (m.num_rows(), m.num_cols());
    let check_row = |i: usize| {
        if i < rows {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("row {i} of {rows}")))
        }
    };
    let check_col = |j: usize| {
        if j < cols {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("col {j} of {cols}")))
        }
    };
    let mut out = m.clone();
    match step {
        Step::SwapRows(i, j) => {
            check_row(i)?;
            check_row(j)?;
            for c in 0..cols {
                let a = out.get(i, c);
                let b = out.get(j, c);
                out.set(i, c, b);
                out.set(j, c, a);
            }
        }
        Step::NegateRow(i) => {
            check_row(i)?;
            for c in 0..cols {
                let v = checked_neg(out.get(i, c))?;
                out.set(i, c, v);
            }
        }
        Step::SwapCols(i, j) => {
            check_col(i)?;
            check_col(j)?;
            for r in 0..rows {
                let a = out.get(r, i);
                let b = out.get(r, j);
                out.set(r, i, b);
                out.set(r, j, a);
            }
        }
        Step::NegateCol(j) => {
            check_col(j)?;
            for r in 0..rows {
                let v = checked_neg(out.get(r, j))?;
                out.set(r, j, v);
            }
        }
        Step::AddColMultiple { k, src, dst } => {
            check_col(src)?;
            check_col(dst)?;
            if src == dst {
                return Err(Error::IndexOutOfRange("src == dst column".into()));
            }
            for r in 0..rows {
                let v = checked_add(out.get(r, dst), checked_mul(k, out.get(r, src))?)?;
                out.set(r, dst, v);
            }
        }
        Step::DeleteZeroCol(j) => {
            check_col(j)?;
            if !out.is_zero_col(j) {
                return Err(Error::Precondition(format!("column {j} is not zero")));
            }
            if cols == 1 {
                return Err(Error::Precondition("cannot delete the only column".into()));
            }
            let mut data = out.rows_vec();
            for row in &mut data {
                row.remove(j);
            }
            out = HeubergerMatrix::new(data)?;
        }
        Step::DeleteZeroRow(i) => {
            check_row(i)?;
            if !out.is_zero_row(i) {
                return Err(Error::Precondition(format!("row {i} is not zero")));
            }
            if rows == 1 {
                return Err(Error::Precondition("cannot delete the only row".into()));
            }
            let mut data = out.rows_vec();
            data.remove(i);
            out = HeubergerMatrix::new(data)?;
        }
        Step::InsertZeroCol(j) => {
            if j > cols {
                return Err(Error::IndexOutOfRange(format!("insert at {j} of {cols}")));
            }
            let mut data = out.rows_vec();
            for row in &mut data {
                row.insert(j, 0);
            }
            out = HeubergerMatrix::new(data)?;
        }
    }
    Ok(out)
}

/// U * M * V = D with U, V unimodular and D diagonal with the divisibility
/// chain d1 | d2 | ... and nonnegative diagonal entries.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: HeubergerMatrix,
    pub d: HeubergerMatrix,
    pub v: HeubergerMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.num_rows().min(self.d.num_cols());
        (0..n).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

/// Smith normal form by repeated pivoting on the smallest-absolute-value
/// nonzero entry (ties broken by lowest (row, col) index).
pub fn smith_normal_form(m: &HeubergerMatrix) -> Result<SmithDecomposition> {
    let (rows, cols) = (m.num_rows(), m.num_cols());
    let mut d = m.clone();
    let mut u = HeubergerMatrix::identity(rows);
    let mut v = HeubergerMatrix::identity(cols);

    // row op helpers keep U in sync; col ops keep V in sync
    fn swap_rows(d: &mut HeubergerMatrix, u: &mut HeubergerMatrix, i: usize, j: usize) {
        for c in 0..d.num_cols() {
            let (a, b) = (d.get(i, c), d.get(j, c));
            d.set(i, c, b);
            d.set(j, c, a);
        }
        for c in 0..u.num_cols() {
            let (a, b) = (u.get(i, c), u.get(j, c));
            u.set(i, c, b);
            u.set(j, c, a);
        }
    }
    fn swap_cols(d: &mut HeubergerMatrix, v: &mut HeubergerMatrix, i: usize, j: usize) {
        for r in 0..d.num_rows() {
            let (a, b) = (d.get(r, i), d.get(r, j));
            d.set(r, i, b);
            d.set(r, j, a);
        }
        for r in 0..v.num_rows() {
            let (a, b) = (v.get(r, i), v.get(r, j));
            v.set(r, i, b);
            v.set(r, j, a);
        }
    }
    fn add_row(d: &mut HeubergerMatrix, u: &mut HeubergerMatrix, k: i64, src: usize, dst: usize) -> Result<()> {
        for c in 0..d.num_cols() {
            let val = checked_add(d.get(dst, c), checked_mul(k, d.get(src, c))?)?;
            d.set(dst, c, val);
        }
        for c in 0..u.num_cols() {
            let val = checked_add(u.get(dst, c), checked_mul(k, u.get(src, c))?)?;
            u.set(dst, c, val);
        }
        Ok(())
    }
    fn add_col(d: &mut HeubergerMatrix, v: &mut HeubergerMatrix, k: i64, src: usize, dst: usize) -> Result<()> {
        for r in 0..d.num_rows() {
            let val = checked_add(d.get(r, dst), checked_mul(k, d.get(r, src))?)?;
            d.set(r, dst, val);
        }
        for r in 0..v.num_rows() {
            let val = checked_add(v.get(r, dst), checked_mul(k, v.get(r, src))?)?;
            v.set(r, dst, val);
        }
        Ok(())
    }
    fn negate_row(d: &mut HeubergerMatrix, u: &mut HeubergerMatrix, i: usize) -> Result<()> {
        for c in 0..d.num_cols() {
            let val = checked_neg(d.get(i, c))?;
            d.set(i, c, val);
        }
        for c in 0..u.num_cols() {
            let val = checked_neg(u.get(i, c))?;
            u.set(i, c, val);
        }
        Ok(())
    }

    // unimodular 2x2 Bezout transform clearing d[i][t] against the pivot
    fn bezout_rows(
        d: &mut HeubergerMatrix,
        u: &mut HeubergerMatrix,
        t: usize,
        i: usize,
    ) -> Result<()> {
        let (a, b) = (d.get(t, t), d.get(i, t));
        if b == 0 {
            return Ok(());
        }
        if a == 0 {
            swap_rows(d, u, t, i);
            return Ok(());
        }
        if b % a == 0 {
            // plain elimination keeps the pivot row fixed
            return add_row(d, u, checked_neg(b / a)?, t, i);
        }
        let (g, x, y) = egcd(a, b);
        let (p, q) = (a / g, b / g);
        for m in [&mut *d, &mut *u] {
            for c in 0..m.num_cols() {
                let (rt, ri) = (m.get(t, c), m.get(i, c));
                let new_t = checked_add(checked_mul(x, rt)?, checked_mul(y, ri)?)?;
                let new_i = checked_add(checked_mul(-q, rt)?, checked_mul(p, ri)?)?;
                m.set(t, c, new_t);
                m.set(i, c, new_i);
            }
        }
        Ok(())
    }
    fn bezout_cols(
        d: &mut HeubergerMatrix,
        v: &mut HeubergerMatrix,
        t: usize,
        j: usize,
    ) -> Result<()> {
        let (a, b) = (d.get(t, t), d.get(t, j));
        if b == 0 {
            return Ok(());
        }
        if a == 0 {
            swap_cols(d, v, t, j);
            return Ok(());
        }
        if b % a == 0 {
            return add_col(d, v, checked_neg(b / a)?, t, j);
        }
        let (g, x, y) = egcd(a, b);
        let (p, q) = (a / g, b / g);
        for m in [&mut *d, &mut *v] {
            for r in 0..m.num_rows() {
                let (ct, cj) = (m.get(r, t), m.get(r, j));
                let new_t = checked_add(checked_mul(x, ct)?, checked_mul(y, cj)?)?;
                let new_j = checked_add(checked_mul(-q, ct)?, checked_mul(p, cj)?)?;
                m.set(r, t, new_t);
                m.set(r, j, new_j);
            }
        }
        Ok(())
    }

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // smallest-|value| nonzero pivot in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let val = d.get(i, j);
                if val != 0 {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => val.unsigned_abs() < d.get(pi, pj).unsigned_abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut d, &mut u, t, pi);
        }
        if pj != t {
            swap_cols(&mut d, &mut v, t, pj);
        }

        loop {
            for i in t + 1..rows {
                bezout_rows(&mut d, &mut u, t, i)?;
            }
            for j in t + 1..cols {
                bezout_cols(&mut d, &mut v, t, j)?;
            }
            let col_clear = (t + 1..rows).all(|i| d.get(i, t) == 0);
            let row_clear = (t + 1..cols).all(|j| d.get(t, j) == 0);
            if col_clear && row_clear {
                break;
            }
        }

        if d.get(t, t) < 0 {
            negate_row(&mut d, &mut u, t)?;
        }

        // enforce divisibility: if the pivot misses an entry, fold that row in
        let p = d.get(t, t);
        let mut redo = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if d.get(i, j) % p != 0 {
                    add_row(&mut d, &mut u, 1, i, t)?;
                    redo = true;
                    break 'outer;
                }
            }
        }
        if !redo {
            t += 1;
        }
    }

    Ok(SmithDecomposition { u, d, v })
}

/// Extended gcd: returns (g, x, y) with g = gcd(a, b) >= 0 and
/// x*a + y*b = g. Both inputs must not be zero simultaneously.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// True iff v lies in the integer column span of M (decided via Smith form).
pub fn membership(m: &HeubergerMatrix, v: &[i64]) -> Result<bool> {
    if v.len() != m.num_rows() {
        return Err(Error::Shape {
            expected: format!("vector of length {}", m.num_rows()),
            got: format!("length {}", v.len()),
        });
    }
    let snf = smith_normal_form(m)?;
    let mut vm = HeubergerMatrix::zero(v.len(), 1);
    for (i, &x) in v.iter().enumerate() {
        vm.set(i, 0, x);
    }
    let w = snf.u.matmul(&vm)?;
    let diag = snf.diagonal();
    for i in 0..m.num_rows() {
        let d = if i < diag.len() { diag[i] } else { 0 };
        let wi = w.get(i, 0);
        if d == 0 {
            if wi != 0 {
                return Ok(false);
            }
        } else if wi % d != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves M x = v over the integers, if possible.
pub fn solve(m: &HeubergerMatrix, v: &[i64]) -> Result<Option<Vec<i64>>> {
    let snf = smith_normal_form(m)?;
    let mut vm = HeubergerMatrix::zero(v.len(), 1);
    for (i, &x) in v.iter().enumerate() {
        vm.set(i, 0, x);
    }
    let w = snf.u.matmul(&vm)?;
    let diag = snf.diagonal();
    let mut xprime = vec![0i64; m.num_cols()];
    for i in 0..m.num_rows() {
        let d = if i < diag.len() { diag[i] } else { 0 };
        let wi = w.get(i, 0);
        if d == 0 {
            if wi != 0 {
                return Ok(None);
            }
        } else {
            if wi % d != 0 {
                return Ok(None);
            }
            xprime[i] = wi / d;
        }
    }
    let mut xm = HeubergerMatrix::zero(m.num_cols(), 1);
    for (i, &x) in xprime.iter().enumerate() {
        xm.set(i, 0, x);
    }
    let x = snf.v.matmul(&xm)?;
    Ok(Some((0..m.num_cols()).map(|i| x.get(i, 0)).collect()))
}

/// True iff the columns are linearly dependent over Q.
pub fn columns_dependent(m: &HeubergerMatrix) -> Result<bool> {
    Ok(smith_normal_form(m)?.rank() < m.num_cols())
}
