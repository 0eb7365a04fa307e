//! Sparse matrices over ℚ and the exact elimination engine.
//!
//! Everything downstream — cohomology dimensions, kernels, lifts,
//! connecting maps — reduces to rank-revealing elimination of sparse
//! rational matrices. The engine keeps rows over ℤ (each input row is
//! scaled by the lcm of its denominators, which changes neither rank,
//! kernel, nor solution sets), combines rows fraction-free as
//! `piv·r − c·p`, divides every updated row by the gcd of its entries to
//! keep magnitudes small, and chooses pivots by Markowitz count to limit
//! fill-in. All tie-breaks are deterministic, so every basis produced here
//! is reproducible across runs.

use crate::rat::{Int, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("entry ({0},{1}) outside a {2}x{3} matrix")]
    OutOfBounds(usize, usize, usize, usize),
    #[error("duplicate entry at ({0},{1})")]
    Duplicate(usize, usize),
    #[error("shape mismatch: {0}x{1} against {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("block ({0},{1}) has shape {2}x{3}, expected {4}x{5}")]
    BlockShape(usize, usize, usize, usize, usize, usize),
}

/// Sparse rational matrix in row-major form.
///
/// Each row is a column-sorted list of `(col, value)` pairs with no explicit
/// zeros, so structural equality (`==`) is entrywise equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rat)>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rat::one())]).collect();
        SparseMat { rows: n, cols: n, data }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        trips: impl IntoIterator<Item = (usize, usize, Rat)>,
    ) -> Result<Self, MatrixError> {
        let mut maps: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in trips {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfBounds(r, c, rows, cols));
            }
            if maps[r].insert(c, v).is_some() {
                return Err(MatrixError::Duplicate(r, c));
            }
        }
        let data = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseMat { rows, cols, data })
    }

    /// Like [`from_triplets`](Self::from_triplets), but entries at repeated
    /// positions are summed instead of rejected. Used when assembling
    /// operators as signed sums of faces that may land on the same entry.
    pub fn from_triplets_accumulate(
        rows: usize,
        cols: usize,
        trips: impl IntoIterator<Item = (usize, usize, Rat)>,
    ) -> Result<Self, MatrixError> {
        let mut maps: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in trips {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfBounds(r, c, rows, cols));
            }
            *maps[r].entry(c).or_insert_with(Rat::zero) += v;
        }
        let data = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseMat { rows, cols, data })
    }

    /// Builds from dense rows; all rows must have length `cols`.
    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Rat>]) -> Result<Self, MatrixError> {
        if dense.len() != rows {
            return Err(MatrixError::Shape(dense.len(), cols, rows, cols));
        }
        let mut data = Vec::with_capacity(rows);
        for row in dense {
            if row.len() != cols {
                return Err(MatrixError::Shape(rows, row.len(), rows, cols));
            }
            data.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect(),
            );
        }
        Ok(SparseMat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.data[r]
            .binary_search_by_key(&c, |(j, _)| *j)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "set out of bounds");
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(i) => {
                if v.is_zero() {
                    self.data[r].remove(i);
                } else {
                    self.data[r][i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    self.data[r].insert(i, (c, v));
                }
            }
        }
    }

    /// Sorted nonzero entries of row `r`.
    pub fn row(&self, r: usize) -> &[(usize, Rat)] {
        &self.data[r]
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> SparseMat {
        let mut data: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            data[c].push((r, v.clone()));
        }
        SparseMat { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, rhs: &SparseMat) -> Result<SparseMat, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &rhs.data[*k] {
                    let e = acc.entry(*j).or_insert_with(Rat::zero);
                    *e += a * b;
                }
            }
            data.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(SparseMat { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        self.data
            .iter()
            .map(|row| {
                let mut s = Rat::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        s += a * &v[*c];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, rhs: &SparseMat) -> Result<SparseMat, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut data = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            data.push(merge_rows(&self.data[r], &rhs.data[r], &Rat::one()));
        }
        Ok(SparseMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &SparseMat) -> Result<SparseMat, MatrixError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SparseMat {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, a: &Rat) -> SparseMat {
        if a.is_zero() {
            return SparseMat::zero(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * a)).collect())
            .collect();
        SparseMat { rows: self.rows, cols: self.cols, data }
    }

    /// Assembles a block matrix. `rdims`/`cdims` give the block grid;
    /// `blocks` places a matrix at grid position `(i, j)`. Unplaced blocks
    /// are zero; placing two blocks at one position is an error.
    pub fn from_blocks(
        rdims: &[usize],
        cdims: &[usize],
        blocks: Vec<(usize, usize, SparseMat)>,
    ) -> Result<SparseMat, MatrixError> {
        let roff = offsets(rdims);
        let coff = offsets(cdims);
        let rows = roff[rdims.len()];
        let cols = coff[cdims.len()];
        let mut seen = std::collections::BTreeSet::new();
        let mut out = SparseMat::zero(rows, cols);
        for (i, j, m) in blocks {
            if i >= rdims.len() || j >= cdims.len() {
                return Err(MatrixError::OutOfBounds(i, j, rdims.len(), cdims.len()));
            }
            if m.rows != rdims[i] || m.cols != cdims[j] {
                return Err(MatrixError::BlockShape(i, j, m.rows, m.cols, rdims[i], cdims[j]));
            }
            if !seen.insert((i, j)) {
                return Err(MatrixError::Duplicate(i, j));
            }
            for (r, row) in m.data.into_iter().enumerate() {
                let target = &mut out.data[roff[i] + r];
                for (c, v) in row {
                    target.push((coff[j] + c, v));
                }
            }
        }
        for row in &mut out.data {
            row.sort_by_key(|(c, _)| *c);
        }
        Ok(out)
    }

    /// Sparse rows as owned vectors (input form for the elimination engine).
    /// Submatrix at the given row and column coordinates, in the given
    /// order. Coordinates must be in range and, per axis, duplicate-free.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMat {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (j, c) in cols.iter().enumerate() {
            col_pos[*c] = j;
        }
        let data = rows
            .iter()
            .map(|r| {
                let mut row: Vec<(usize, Rat)> = self.data[*r]
                    .iter()
                    .filter(|(c, _)| col_pos[*c] != usize::MAX)
                    .map(|(c, v)| (col_pos[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        SparseMat { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Rat)>> {
        self.data.clone()
    }

    /// Columns as sparse vectors (length `rows`).
    pub fn sparse_cols(&self) -> Vec<Vec<(usize, Rat)>> {
        self.transpose().data
    }

    pub fn dense_rows(&self) -> Vec<Vec<Rat>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![Rat::zero(); self.cols];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    off.push(0);
    for d in dims {
        acc += d;
        off.push(acc);
    }
    off
}

/// `a + s·b` for sorted sparse rows.
fn merge_rows(a: &[(usize, Rat)], b: &[(usize, Rat)], s: &Rat) -> Vec<(usize, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va + vb * s;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = vb * s;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = vb * s;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Elimination engine
// ---------------------------------------------------------------------------

type IntRow = Vec<(usize, Int)>;

/// Row-echelon form produced by [`echelonize`].
///
/// Rows are integer, gcd-reduced, and listed in ascending pivot-column
/// order. Pivot columns are confined to `[0, pivot_limit)`; columns at or
/// beyond the limit ride along as an augmented part (used for simultaneous
/// right-hand sides). `residual` collects the fully-eliminated rows whose
/// support lies entirely in the augmented part — a nonzero residual entry in
/// an augmented column means that column's system is inconsistent.
pub struct Echelon {
    cols: usize,
    pivot_limit: usize,
    /// `(pivot_col, row)`, ascending in `pivot_col`.
    rows: Vec<(usize, IntRow)>,
    residual: Vec<IntRow>,
}

/// Scales a rational row to a primitive integer row (lcm of denominators,
/// divided by the gcd of the results). Returns `None` for zero rows.
fn primitive_int_row(row: &[(usize, Rat)]) -> Option<IntRow> {
    if row.is_empty() {
        return None;
    }
    let mut l = Int::one();
    for (_, v) in row {
        l = num::integer::lcm(l, v.denom().clone());
    }
    let mut out: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    let mut g = Int::zero();
    for (_, v) in &out {
        g = num::integer::gcd(g, v.clone());
    }
    if !g.is_one() {
        for (_, v) in &mut out {
            *v /= &g;
        }
    }
    Some(out)
}

fn gcd_reduce(row: &mut IntRow) {
    let mut g = Int::zero();
    for (_, v) in row.iter() {
        g = num::integer::gcd(g, v.clone());
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `piv·a − c·p` for sorted integer rows, gcd-reduced afterwards.
fn combine_int_rows(a: &IntRow, piv: &Int, p: &IntRow, c: &Int) -> IntRow {
    let mut out: IntRow = Vec::with_capacity(a.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < p.len() {
        match (a.get(i), p.get(j)) {
            (Some((ca, va)), Some((cp, vp))) if ca == cp => {
                let v = va * piv - vp * c;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cp, _))) if ca < cp => {
                out.push((*ca, va * piv));
                i += 1;
            }
            (Some(_), Some((cp, vp))) => {
                out.push((*cp, -(vp * c)));
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va * piv));
                i += 1;
            }
            (None, Some((cp, vp))) => {
                out.push((*cp, -(vp * c)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let mut out = out;
    gcd_reduce(&mut out);
    out
}

/// Markowitz-pivoted elimination pass. Returns echelon rows in pivot
/// chronology (each row has zeros at all chronologically earlier pivot
/// columns) plus the residual rows supported on non-pivotable columns.
fn markowitz_eliminate(
    rows: Vec<Vec<(usize, Rat)>>,
    pivot_limit: usize,
) -> (Vec<(usize, IntRow)>, Vec<IntRow>) {
    let mut active: Vec<IntRow> = rows.iter().filter_map(|r| primitive_int_row(r)).collect();
    let mut ech: Vec<(usize, IntRow)> = Vec::new();
    let mut residual: Vec<IntRow> = Vec::new();

    loop {
        // Column occupancy over the pivotable region of active rows.
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for row in &active {
            for (c, _) in row.iter().take_while(|(c, _)| *c < pivot_limit) {
                *col_count.entry(*c).or_insert(0) += 1;
            }
        }
        if col_count.is_empty() {
            residual.extend(active.drain(..).filter(|r| !r.is_empty()));
            break;
        }

        // Markowitz pivot search: minimize (row_support−1)·(col_support−1),
        // then pivot magnitude, then column, then row.
        let mut best: Option<(usize, usize)> = None;
        let mut best_key: Option<(usize, u64, usize, usize)> = None;
        for (ri, row) in active.iter().enumerate() {
            let rsupp = row.iter().take_while(|(c, _)| *c < pivot_limit).count();
            if rsupp == 0 {
                continue;
            }
            for (c, v) in row.iter().take_while(|(c, _)| *c < pivot_limit) {
                let score = (rsupp - 1) * (col_count[c] - 1);
                let key = (score, v.magnitude().bits(), *c, ri);
                if best_key.as_ref().map_or(true, |bk| key < *bk) {
                    best_key = Some(key);
                    best = Some((ri, *c));
                }
            }
        }
        let (pri, pcol) = best.expect("nonempty occupancy implies a pivot");

        let pivot_row = active.swap_remove(pri);
        let pval = pivot_row
            .iter()
            .find(|(c, _)| *c == pcol)
            .expect("chosen pivot entry exists")
            .1
            .clone();

        let mut next: Vec<IntRow> = Vec::with_capacity(active.len());
        for row in active.drain(..) {
            let coef = row.iter().find(|(c, _)| *c == pcol).map(|(_, v)| v.clone());
            let row = match coef {
                Some(cf) => combine_int_rows(&row, &pval, &pivot_row, &cf),
                None => row,
            };
            if !row.is_empty() {
                next.push(row);
            }
        }
        active = next;
        ech.push((pcol, pivot_row));
    }

    (ech, residual)
}

/// Clears every pivot column from all rows but its own (Gauss–Jordan pass).
///
/// For any two echelon rows the chronologically later one is zero at the
/// earlier one's pivot, so eliminating a column never cancels another row's
/// pivot entry, and processing pivot columns in ascending order never
/// reintroduces an already-cleared column. One pass therefore suffices.
fn jordan_normalize(mut rows: Vec<(usize, IntRow)>) -> Vec<(usize, IntRow)> {
    rows.sort_by_key(|(c, _)| *c);
    for i in 0..rows.len() {
        let (pc, pivot_row) = rows[i].clone();
        let pval = pivot_row.iter().find(|(c, _)| *c == pc).unwrap().1.clone();
        for j in 0..rows.len() {
            if j == i {
                continue;
            }
            let coef = rows[j].1.iter().find(|(c, _)| *c == pc).map(|(_, v)| v.clone());
            if let Some(cf) = coef {
                rows[j].1 = combine_int_rows(&rows[j].1, &pval, &pivot_row, &cf);
            }
        }
    }
    rows
}

/// Reduces sparse rational rows with pivots restricted to columns
/// `< pivot_limit`, then normalizes so each row is zero at every other
/// pivot column. Row operations are invertible, so the result spans the
/// same row space and defines the same solution sets as the input.
pub fn echelonize(rows: Vec<Vec<(usize, Rat)>>, cols: usize, pivot_limit: usize) -> Echelon {
    let (ech, residual) = markowitz_eliminate(rows, pivot_limit);
    let rows = jordan_normalize(ech);
    Echelon { cols, pivot_limit, rows, residual }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    /// Non-pivot columns of the pivotable region, ascending.
    pub fn free_cols(&self) -> Vec<usize> {
        let piv: std::collections::BTreeSet<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        (0..self.pivot_limit).filter(|c| !piv.contains(c)).collect()
    }

    /// Canonically reduces `v` (length `pivot_limit` ≤ ambient) modulo the
    /// row space: subtracts echelon rows until every pivot coordinate is
    /// zero. The result is the unique coset representative supported on
    /// free columns, so `v` lies in the row space iff the result is zero.
    pub fn reduce_vec(&self, v: &mut [Rat]) {
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let pval = row.iter().find(|(c, _)| c == pc).unwrap().1.clone();
            let coef = &v[*pc] / Rat::from_integer(pval);
            for (c, rv) in row {
                if *c < v.len() {
                    let delta = &coef * Rat::from_integer(rv.clone());
                    v[*c] -= delta;
                }
            }
        }
    }

    pub fn in_row_space(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce_vec(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Solves `A·x = b` where the echelon came from `[A | B]` and `b` is
    /// augmented column `aug_col` (an absolute column index
    /// `≥ pivot_limit`). Free variables are set to zero, so the solution is
    /// deterministic. Returns `None` when inconsistent.
    pub fn solve(&self, aug_col: usize) -> Option<Vec<Rat>> {
        assert!(aug_col >= self.pivot_limit && aug_col < self.cols);
        for row in &self.residual {
            if row.iter().any(|(c, v)| *c == aug_col && !v.is_zero()) {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); self.pivot_limit];
        // Back-substitute in descending pivot order.
        for (pc, row) in self.rows.iter().rev() {
            let mut rhs = Rat::zero();
            let mut pval = Int::zero();
            for (c, v) in row {
                if c == pc {
                    pval = v.clone();
                } else if *c == aug_col {
                    // The augmented entry is this equation's right-hand side.
                    rhs += Rat::from_integer(v.clone());
                } else if *c < self.pivot_limit && !x[*c].is_zero() {
                    rhs -= Rat::from_integer(v.clone()) * &x[*c];
                }
            }
            x[*pc] = rhs / Rat::from_integer(pval);
        }
        Some(x)
    }

    /// Echelonized kernel basis of the pivotable block (requires the
    /// echelon to have been built without augmented columns). Vector `i`
    /// has value 1 at the `i`-th free column and 0 at the others; entries
    /// are scaled to primitive integers with positive free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        assert_eq!(self.pivot_limit, self.cols);
        let mut out = Vec::new();
        for f in self.free_cols() {
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            for (pc, row) in self.rows.iter().rev() {
                let mut rhs = Rat::zero();
                let mut pval = Int::zero();
                for (c, v) in row {
                    if c == pc {
                        pval = v.clone();
                    } else if !x[*c].is_zero() {
                        rhs -= Rat::from_integer(v.clone()) * &x[*c];
                    }
                }
                x[*pc] = rhs / Rat::from_integer(pval);
            }
            // Primitive-integer normalization keeps printed bases tidy.
            let mut l = Int::one();
            for v in &x {
                l = num::integer::lcm(l, v.denom().clone());
            }
            let scaled: Vec<Rat> = x.iter().map(|v| v * Rat::from_integer(l.clone())).collect();
            let mut g = Int::zero();
            for v in &scaled {
                g = num::integer::gcd(g, v.numer().clone());
            }
            let g = if g.is_zero() { Int::one() } else { g };
            out.push(scaled.into_iter().map(|v| v / Rat::from_integer(g.clone())).collect());
        }
        out
    }
}

/// Rank over ℚ (elimination only, no normalization pass).
pub fn rank(m: &SparseMat) -> usize {
    markowitz_eliminate(m.sparse_rows(), m.cols()).0.len()
}

/// Echelonized basis of `{x : m·x = 0}`, deterministic.
pub fn kernel_basis(m: &SparseMat) -> Vec<Vec<Rat>> {
    echelonize(m.sparse_rows(), m.cols(), m.cols()).kernel_basis()
}

/// Row-space echelon of a list of vectors (used for image/span reduction).
pub fn span_echelon(vectors: &[Vec<Rat>], ambient: usize) -> Echelon {
    let rows = vectors
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, x.clone()))
                .collect()
        })
        .collect();
    echelonize(rows, ambient, ambient)
}

/// Same, from sparse vectors.
pub fn span_echelon_sparse(vectors: Vec<Vec<(usize, Rat)>>, ambient: usize) -> Echelon {
    echelonize(vectors, ambient, ambient)
}

/// Solves `a·x = b` for each right-hand side simultaneously (one
/// elimination pass). `None` marks an inconsistent column. Solutions have
/// free variables pinned to zero.
pub fn solve_many(a: &SparseMat, rhs: &[Vec<Rat>]) -> Vec<Option<Vec<Rat>>> {
    let n = a.cols();
    let mut rows = a.sparse_rows();
    for (j, b) in rhs.iter().enumerate() {
        assert_eq!(b.len(), a.rows(), "rhs length mismatch");
        for (r, v) in b.iter().enumerate() {
            if !v.is_zero() {
                rows[r].push((n + j, v.clone()));
            }
        }
    }
    // Entries were appended past the sorted region; restore order.
    for row in &mut rows {
        row.sort_by_key(|(c, _)| *c);
    }
    let ech = echelonize(rows, n + rhs.len(), n);
    (0..rhs.len()).map(|j| ech.solve(n + j)).collect()
}

/// Solves `a·x = b`, free variables zero.
pub fn solve(a: &SparseMat, b: &[Rat]) -> Option<Vec<Rat>> {
    solve_many(a, std::slice::from_ref(&b.to_vec())).pop().unwrap()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(a: &SparseMat) -> Option<SparseMat> {
    if a.rows() != a.cols() {
        return None;
    }
    let n = a.rows();
    let rhs: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            e
        })
        .collect();
    let sols = solve_many(a, &rhs);
    let mut trips = Vec::new();
    for (j, s) in sols.into_iter().enumerate() {
        let col = s?;
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                trips.push((i, j, v));
            }
        }
    }
    let inv = SparseMat::from_triplets(n, n, trips).ok()?;
    // A singular square system can still be consistent on some columns;
    // verify the two-sided identity.
    if a.mul(&inv).ok()? == SparseMat::identity(n) {
        Some(inv)
    } else {
        None
    }
}
