//! Reductions that preserve the graph (up to isomorphism) or at least its
//! chromatic number: 2x2 lower-triangularization, the constructive modified
//! Hermite normal form for 3x2 matrices, and shape reduction (zero rows,
//! dependent columns).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{
    apply_step, columns_dependent, minors_3x2, HeubergerMatrix, Step, Transcript,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeClass {
    Row1xR,
    Lower2x2,
    Mhnf3x2,
    Unsupported,
}

#[derive(Debug, Clone)]
pub struct ReducedForm {
    pub matrix: HeubergerMatrix,
    pub transcript: Transcript,
    pub shape_class: ShapeClass,
    pub deleted_zero_rows: usize,
}

/// Matrix plus the transcript of every operation applied to it.
struct Tracked {
    m: HeubergerMatrix,
    t: Transcript,
}

impl Tracked {
    fn new(m: &HeubergerMatrix) -> Self {
        Self {
            m: m.clone(),
            t: Transcript::new(),
        }
    }

    fn apply(&mut self, step: Step) -> Result<()> {
        self.m = apply_step(&self.m, step)?;
        self.t.push(step);
        Ok(())
    }
}

/// All six conditions of modified Hermite normal form, checked entrywise.
/// Returns the first failing condition number, or None if all hold.
pub fn mhnf_failing_condition(m: &HeubergerMatrix) -> Result<Option<u8>> {
    if m.num_rows() != 3 || m.num_cols() != 2 {
        return Err(Error::Shape {
            expected: "3x2".into(),
            got: format!("{}x{}", m.num_rows(), m.num_cols()),
        });
    }
    let (y11, y12) = (m.get(0, 0), m.get(0, 1));
    let (y21, y22) = (m.get(1, 0), m.get(1, 1));
    let (y31, y32) = (m.get(2, 0), m.get(2, 1));
    if y11 <= 0 {
        return Ok(Some(1));
    }
    if y12 != 0 {
        return Ok(Some(2));
    }
    if (y11 * y22 - y11 * y32).rem_euclid(3) != 0 {
        return Ok(Some(3));
    }
    if y22 > y32 {
        return Ok(Some(4));
    }
    if y22.abs() > y32.abs() {
        return Ok(Some(5));
    }
    let six_i = y22 == 0 && 2 * y31 >= -y32.abs() && y31 <= 0;
    let six_ii = 2 * y21 >= -y22.abs() && y21 <= 0;
    if !(six_i || six_ii) {
        return Ok(Some(6));
    }
    Ok(None)
}

pub fn is_mhnf(m: &HeubergerMatrix) -> Result<bool> {
    Ok(mhnf_failing_condition(m)?.is_none())
}

/// Lower-triangularizes a 2x2 matrix with nonnegative diagonal, via
/// graph-isomorphism column operations only.
pub fn lower_triangular_2x2(m: &HeubergerMatrix) -> Result<(HeubergerMatrix, Transcript)> {
    if m.num_rows() != 2 || m.num_cols() != 2 {
        return Err(Error::Shape {
            expected: "2x2".into(),
            got: format!("{}x{}", m.num_rows(), m.num_cols()),
        });
    }
    if m.get(0, 1) == 0 && m.get(0, 0) >= 0 && m.get(1, 1) >= 0 {
        return Ok((m.clone(), Transcript::new()));
    }
    let mut w = Tracked::new(m);
    // Euclid on the top row until the (0,1) entry vanishes
    loop {
        let (a, b) = (w.m.get(0, 0), w.m.get(0, 1));
        if b == 0 {
            break;
        }
        if a == 0 {
            w.apply(Step::SwapCols(0, 1))?;
            continue;
        }
        let q = b / a;
        if q != 0 {
            w.apply(Step::AddColMultiple {
                k: -q,
                src: 0,
                dst: 1,
            })?;
        } else {
            w.apply(Step::SwapCols(0, 1))?;
        }
    }
    if w.m.get(0, 0) < 0 {
        w.apply(Step::NegateCol(0))?;
    }
    if w.m.get(1, 1) < 0 {
        w.apply(Step::NegateCol(1))?;
    }
    debug_assert_eq!(w.m.get(0, 1), 0);
    Ok((w.m, w.t))
}

/// Brings a 3x2 matrix with no zero rows and Q-independent columns into
/// modified Hermite normal form. The transcript contains isomorphism-class
/// steps only; row steps compose to a signed permutation.
pub fn mhnf_3x2(m: &HeubergerMatrix) -> Result<(HeubergerMatrix, Transcript)> {
    if m.num_rows() != 3 || m.num_cols() != 2 {
        return Err(Error::Shape {
            expected: "3x2".into(),
            got: format!("{}x{}", m.num_rows(), m.num_cols()),
        });
    }
    for i in 0..3 {
        if m.is_zero_row(i) {
            return Err(Error::Precondition(format!("row {i} is zero")));
        }
    }
    if columns_dependent(m)? {
        return Err(Error::Precondition("columns dependent over Q".into()));
    }
    if is_mhnf(m)? {
        return Ok((m.clone(), Transcript::new()));
    }

    let mut w = Tracked::new(m);
    step_zero(&mut w)?;

    // Step One: make the top row nonnegative
    for j in 0..2 {
        if w.m.get(0, j) < 0 {
            w.apply(Step::NegateCol(j))?;
        }
    }

    // Step Two: positive (0,0) entry
    if w.m.get(0, 0) == 0 {
        w.apply(Step::SwapCols(0, 1))?;
    }
    debug_assert!(w.m.get(0, 0) > 0);

    // Step Three: Euclid on the top row (both entries positive going in)
    while w.m.get(0, 1) != 0 {
        let (a, b) = (w.m.get(0, 0), w.m.get(0, 1));
        if a == 0 {
            w.apply(Step::SwapCols(0, 1))?;
        } else if b >= a {
            w.apply(Step::AddColMultiple {
                k: -(b / a),
                src: 0,
                dst: 1,
            })?;
        } else {
            w.apply(Step::AddColMultiple {
                k: -(a / b),
                src: 1,
                dst: 0,
            })?;
        }
        if w.m.get(0, 0) == 0 {
            w.apply(Step::SwapCols(0, 1))?;
        }
    }
    debug_assert!(w.m.get(0, 0) > 0 && w.m.get(0, 1) == 0);

    // Step Four: order the second column so y22 <= y32 and |y22| <= |y32|,
    // choosing the first of {identity, swap rows 2&3, negate col 2, both}
    // that works.
    let ok4 = |mm: &HeubergerMatrix| {
        let (z, v) = (mm.get(1, 1), mm.get(2, 1));
        z <= v && z.abs() <= v.abs()
    };
    if !ok4(&w.m) {
        let candidates: [&[Step]; 3] = [
            &[Step::SwapRows(1, 2)],
            &[Step::NegateCol(1)],
            &[Step::SwapRows(1, 2), Step::NegateCol(1)],
        ];
        let mut done = false;
        for steps in candidates {
            let mut trial = w.m.clone();
            for &s in steps {
                trial = apply_step(&trial, s)?;
            }
            if ok4(&trial) {
                for &s in steps {
                    w.apply(s)?;
                }
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Internal("MHNF step four has no valid move".into()));
        }
    }

    // Steps Five and Six: shift the first column against the second. When
    // y22 = 0 the same procedure runs on the third row instead.
    let row = if w.m.get(1, 1) != 0 { 1 } else { 2 };
    let b = w.m.get(row, 1);
    debug_assert!(b != 0);
    let a = w.m.get(row, 0);
    let mut r = a.rem_euclid(b.abs());
    if r > 0 {
        r -= b.abs();
    }
    let t = (r - a) / b;
    if t != 0 {
        w.apply(Step::AddColMultiple {
            k: t,
            src: 1,
            dst: 0,
        })?;
    }
    let c = w.m.get(row, 0);
    if 2 * c < -b.abs() {
        w.apply(Step::AddColMultiple {
            k: b.signum(),
            src: 1,
            dst: 0,
        })?;
        w.apply(Step::NegateCol(0))?;
        w.apply(Step::NegateRow(0))?;
    }

    if let Some(cond) = mhnf_failing_condition(&w.m)? {
        return Err(Error::Internal(format!(
            "MHNF construction left condition {cond} unsatisfied for {m}"
        )));
    }
    Ok((w.m, w.t))
}

/// Step Zero: permute/negate rows so that the (rows 1,2) minor is congruent
/// to the (rows 1,3) minor mod 3. Candidates are tried in lexicographic
/// order: row permutations first, then at most one row negation.
fn step_zero(w: &mut Tracked) -> Result<()> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in perms {
        for neg in [None, Some(0usize), Some(1), Some(2)] {
            let data: Vec<Vec<i64>> = perm
                .iter()
                .enumerate()
                .map(|(new_i, &old_i)| {
                    let mut row = w.m.row(old_i);
                    if neg == Some(new_i) {
                        for x in &mut row {
                            *x = -*x;
                        }
                    }
                    row
                })
                .collect();
            let trial = HeubergerMatrix::new(data)?;
            let (alpha, beta, _) = minors_3x2(&trial)?;
            if (alpha - beta).rem_euclid(3) == 0 {
                // realize the permutation with explicit swaps
                let mut pos = [0usize, 1, 2]; // pos[i]: where original row i lives now
                for target in 0..3 {
                    let want = perm[target];
                    // which original row currently sits at `target`
                    let here = (0..3).find(|&orig| pos[orig] == target).unwrap();
                    if here != want {
                        let from = pos[want];
                        w.apply(Step::SwapRows(target, from))?;
                        pos[want] = target;
                        pos[here] = from;
                    }
                }
                if let Some(i) = neg {
                    w.apply(Step::NegateRow(i))?;
                }
                debug_assert_eq!(w.m, trial);
                return Ok(());
            }
        }
    }
    Err(Error::Internal(
        "step zero: no congruent minor pair mod 3".into(),
    ))
}

/// Whether a matrix is already a fixed point of `reduce`.
fn canonical_class(m: &HeubergerMatrix) -> Result<Option<ShapeClass>> {
    let (rows, cols) = (m.num_rows(), m.num_cols());
    if rows == 1 {
        return Ok(Some(ShapeClass::Row1xR));
    }
    let any_zero_row = (0..rows).any(|i| m.is_zero_row(i));
    if any_zero_row {
        return Ok(None);
    }
    if rows == 2 && cols == 1 {
        // reduce pads this shape with a zero column
        return Ok(None);
    }
    if rows == 2 && cols == 2 {
        let lower = m.get(0, 1) == 0 && m.get(0, 0) >= 0 && m.get(1, 1) >= 0;
        // columns must be independent, except for the canonical zero pad
        let pad_ok = !columns_dependent(m)? || m.is_zero_col(1);
        return Ok(if lower && pad_ok {
            Some(ShapeClass::Lower2x2)
        } else {
            None
        });
    }
    if rows == 3 && cols == 2 {
        if columns_dependent(m)? {
            return Ok(None);
        }
        return Ok(if is_mhnf(m)? {
            Some(ShapeClass::Mhnf3x2)
        } else {
            None
        });
    }
    if columns_dependent(m)? {
        return Ok(None);
    }
    Ok(Some(ShapeClass::Unsupported))
}

/// Full reduction: delete zero rows, eliminate Q-dependent columns, then
/// normalize the shape. A zero 1xr row is kept when it is the only row.
pub fn reduce(m: &HeubergerMatrix) -> Result<ReducedForm> {
    if let Some(class) = canonical_class(m)? {
        return Ok(ReducedForm {
            matrix: m.clone(),
            transcript: Transcript::new(),
            shape_class: class,
            deleted_zero_rows: 0,
        });
    }

    let mut w = Tracked::new(m);
    let mut deleted_zero_rows = 0usize;

    loop {
        // (a) delete zero rows, never the last remaining row
        let mut changed = false;
        loop {
            let rows = w.m.num_rows();
            if rows == 1 {
                break;
            }
            match (0..rows).find(|&i| w.m.is_zero_row(i)) {
                Some(i) => {
                    w.apply(Step::DeleteZeroRow(i))?;
                    deleted_zero_rows += 1;
                    changed = true;
                }
                None => break,
            }
        }
        if w.m.num_rows() == 1 {
            break;
        }
        // (b) column-Euclid until the columns are Q-independent
        if columns_dependent(&w.m)? {
            eliminate_dependent_columns(&mut w)?;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    // (c) shape-normalize
    let (rows, cols) = (w.m.num_rows(), w.m.num_cols());
    let class = match (rows, cols) {
        (1, _) => ShapeClass::Row1xR,
        (2, 2) => {
            let (out, t) = lower_triangular_2x2(&w.m)?;
            w.m = out;
            w.t.extend(&t);
            ShapeClass::Lower2x2
        }
        (2, 1) => {
            w.apply(Step::InsertZeroCol(1))?;
            let (out, t) = lower_triangular_2x2(&w.m)?;
            w.m = out;
            w.t.extend(&t);
            ShapeClass::Lower2x2
        }
        (3, 2) => {
            let (out, t) = mhnf_3x2(&w.m)?;
            w.m = out;
            w.t.extend(&t);
            ShapeClass::Mhnf3x2
        }
        _ => ShapeClass::Unsupported,
    };

    Ok(ReducedForm {
        matrix: w.m,
        transcript: w.t,
        shape_class: class,
        deleted_zero_rows,
    })
}

/// Column echelon over Z via unimodular column operations (smallest-|entry|
/// pivot), producing zero columns from dependent ones, which are deleted.
fn eliminate_dependent_columns(w: &mut Tracked) -> Result<()> {
    let rows = w.m.num_rows();
    let mut fixed = 0usize;
    for row in 0..rows {
        if fixed >= w.m.num_cols() {
            break;
        }
        loop {
            let nz: Vec<usize> = (fixed..w.m.num_cols())
                .filter(|&j| w.m.get(row, j) != 0)
                .collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    if c != fixed {
                        w.apply(Step::SwapCols(fixed, c))?;
                    }
                    fixed += 1;
                }
                break;
            }
            let pivot = *nz
                .iter()
                .min_by_key(|&&j| (w.m.get(row, j).unsigned_abs(), j))
                .unwrap();
            for &j in &nz {
                if j == pivot {
                    continue;
                }
                let q = w.m.get(row, j) / w.m.get(row, pivot);
                if q != 0 {
                    w.apply(Step::AddColMultiple {
                        k: -q,
                        src: pivot,
                        dst: j,
                    })?;
                }
            }
        }
    }
    // drop zero columns, highest index first, keeping at least one column
    let mut j = w.m.num_cols();
    while j > 0 {
        j -= 1;
        if w.m.num_cols() > 1 && w.m.is_zero_col(j) {
            w.apply(Step::DeleteZeroCol(j))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::apply_ops;

    fn mat(s: &str) -> HeubergerMatrix {
        HeubergerMatrix::parse(s).unwrap()
    }

    #[test]
    fn lower_triangular_examples() {
        let (out, t) = lower_triangular_2x2(&mat("4 0; 2 4")).unwrap();
        assert_eq!(out, mat("4 0; 2 4"));
        assert!(t.is_empty());

        let (out, _) = lower_triangular_2x2(&mat("0 3; 1 1")).unwrap();
        assert_eq!(out, mat("3 0; 1 1"));

        let (out, _) = lower_triangular_2x2(&mat("2 2; 0 4")).unwrap();
        assert_eq!(out, mat("2 0; 0 4"));
    }

    #[test]
    fn lower_triangular_det_preserved() {
        for m in [
            mat("0 3; 1 1"),
            mat("2 2; 0 4"),
            mat("-3 5; 7 -2"),
            mat("6 4; 1 9"),
        ] {
            let (out, t) = lower_triangular_2x2(&m).unwrap();
            assert_eq!(out.det().unwrap().abs(), m.det().unwrap().abs());
            assert_eq!(apply_ops(&m, &t).unwrap(), out);
            assert_eq!(out.get(0, 1), 0);
            assert!(out.get(0, 0) >= 0 && out.get(1, 1) >= 0);
        }
    }

    #[test]
    fn mhnf_fixed_point() {
        let m = mat("1 0; 0 -1; 3 2");
        let (out, t) = mhnf_3x2(&m).unwrap();
        assert_eq!(out, m);
        assert!(t.is_empty());
    }

    #[test]
    fn mhnf_example_identity_on_top() {
        let m = mat("1 0; 0 1; 2 3");
        let (out, t) = mhnf_3x2(&m).unwrap();
        assert!(is_mhnf(&out).unwrap());
        assert_eq!(apply_ops(&m, &t).unwrap(), out);
        // minor multiset preserved in absolute value
        let (a0, b0, c0) = minors_3x2(&m).unwrap();
        let (a1, b1, c1) = minors_3x2(&out).unwrap();
        let mut before = [a0.abs(), b0.abs(), c0.abs()];
        let mut after = [a1.abs(), b1.abs(), c1.abs()];
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn mhnf_preserves_minor_multiset() {
        let m = mat("2 4; 1 1; 0 5");
        let (out, t) = mhnf_3x2(&m).unwrap();
        assert!(is_mhnf(&out).unwrap());
        assert_eq!(apply_ops(&m, &t).unwrap(), out);
        let (a, b, c) = minors_3x2(&out).unwrap();
        let mut got = [a.abs(), b.abs(), c.abs()];
        got.sort();
        assert_eq!(got, [2, 5, 10]);
    }

    #[test]
    fn mhnf_rejects_zero_row_and_dependent_columns() {
        assert!(matches!(
            mhnf_3x2(&mat("0 0; 1 2; 3 4")),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            mhnf_3x2(&mat("2 4; 1 2; 3 6")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reduce_zero_row() {
        let rf = reduce(&mat("1 2; 0 0")).unwrap();
        assert_eq!(rf.matrix, mat("1 2"));
        assert_eq!(rf.shape_class, ShapeClass::Row1xR);
        assert_eq!(rf.deleted_zero_rows, 1);
    }

    #[test]
    fn reduce_dependent_columns_to_unsupported() {
        let rf = reduce(&mat("2 4; 1 2; 3 6")).unwrap();
        assert_eq!(rf.shape_class, ShapeClass::Unsupported);
        assert_eq!(rf.matrix.num_cols(), 1);
        assert_eq!(rf.matrix.num_rows(), 3);
    }

    #[test]
    fn reduce_3x3_rank2_to_mhnf() {
        let rf = reduce(&mat("1 0 2; 0 1 3; 2 3 13")).unwrap();
        assert_eq!(rf.shape_class, ShapeClass::Mhnf3x2);
        assert!(is_mhnf(&rf.matrix).unwrap());
    }

    #[test]
    fn reduce_keeps_all_zero_single_row() {
        let rf = reduce(&mat("0 0; 0 0")).unwrap();
        assert_eq!(rf.shape_class, ShapeClass::Row1xR);
        assert_eq!(rf.matrix.num_rows(), 1);
        assert!(rf.matrix.is_zero_row(0));
    }

    #[test]
    fn reduce_idempotent() {
        for m in [
            mat("1 2; 0 0"),
            mat("2 4; 1 2; 3 6"),
            mat("1 0 2; 0 1 3; 2 3 13"),
            mat("0 3; 1 1"),
            mat("1 0; 0 1; 2 3"),
            mat("4 0; 2 4"),
            mat("7; 3"),
        ] {
            let rf = reduce(&m).unwrap();
            let rf2 = reduce(&rf.matrix).unwrap();
            assert_eq!(rf2.matrix, rf.matrix, "input {m}");
            assert!(rf2.transcript.is_empty(), "input {m}");
            assert_eq!(rf2.shape_class, rf.shape_class, "input {m}");
        }
    }

    #[test]
    fn reduce_pads_2x1() {
        let rf = reduce(&mat("5; 3")).unwrap();
        assert_eq!(rf.shape_class, ShapeClass::Lower2x2);
        assert_eq!(rf.matrix.num_cols(), 2);
        assert!(rf.matrix.is_zero_col(1));
    }

    #[test]
    fn transcript_replays() {
        for m in [
            mat("1 2; 0 0"),
            mat("2 4; 1 2; 3 6"),
            mat("1 0 2; 0 1 3; 2 3 13"),
            mat("6 4; 1 9"),
        ] {
            let rf = reduce(&m).unwrap();
            assert_eq!(apply_ops(&m, &rf.transcript).unwrap(), rf.matrix);
        }
    }
}
