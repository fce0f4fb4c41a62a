//! Matrices of energy functions and vectors of predicates.
//!
//! Entry `(i, j)` of a transition matrix is the function on the transition
//! from state `j` to state `i`, so products compose right to left and a path
//! `j → k → i` contributes `M[i][k] ∘ M[k][j]`. Predicate vectors are row
//! vectors acted on from the right: `(v·M)_j = ⋁_i v_i ∘ M[i][j]`, the
//! predicate on the energy at `j`.

use crate::function::EnergyFunction;
use crate::predicate::{omega, ThresholdPredicate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    Dimension { left: (usize, usize), right: (usize, usize) },
    #[error("split {split} out of range for a {n}x{n} matrix")]
    Split { split: usize, n: usize },
}

/// A `rows × cols` matrix over energy functions; square for transition matrices,
/// rectangular for the blocks of the recursive star and omega.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<EnergyFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateVector(pub Vec<ThresholdPredicate>);

/// A column vector over `{⊥̄, id}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitVector(Vec<bool>);

impl UnitVector {
    /// `I^s`: identity at `s` only.
    pub fn unit(n: usize, s: usize) -> Self {
        UnitVector((0..n).map(|i| i == s).collect())
    }

    /// `F^{≤k}`: identity on the first `k` positions.
    pub fn prefix(n: usize, k: usize) -> Self {
        UnitVector((0..n).map(|i| i < k).collect())
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        UnitVector(mask)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }
}

impl FunctionMatrix {
    pub fn filled(rows: usize, cols: usize, f: EnergyFunction) -> Self {
        FunctionMatrix { rows, cols, entries: vec![f; rows * cols] }
    }

    pub fn bottom(rows: usize, cols: usize) -> Self {
        FunctionMatrix::filled(rows, cols, EnergyFunction::bottom())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FunctionMatrix::bottom(n, n);
        for i in 0..n {
            m.set(i, i, EnergyFunction::identity());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> EnergyFunction) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        FunctionMatrix { rows, cols, entries }
    }

    /// Row-major construction; `rows` must be rectangular.
    pub fn from_rows(rows: Vec<Vec<EnergyFunction>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(MatrixError::Dimension { left: (r, c), right: (1, bad.len()) });
        }
        Ok(FunctionMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &EnergyFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: EnergyFunction) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[EnergyFunction] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<EnergyFunction>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    pub fn mul(&self, other: &FunctionMatrix) -> Result<FunctionMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &FunctionMatrix) -> FunctionMatrix {
        FunctionMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(EnergyFunction::bottom(), |acc, k| {
                acc.join(&self.get(i, k).compose(other.get(k, j)))
            })
        })
    }

    pub fn join(&self, other: &FunctionMatrix) -> Result<FunctionMatrix, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::Dimension {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(self.join_unchecked(other))
    }

    fn join_unchecked(&self, other: &FunctionMatrix) -> FunctionMatrix {
        FunctionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(f, g)| f.join(g)).collect(),
        }
    }

    /// `M*` by Floyd–Warshall elimination: for each pivot `k`, every pair `(i, j)`
    /// gains `M[i][k] ∘ M[k][k]* ∘ M[k][j]`; the result is `Id ∨ M⁺`.
    pub fn star(&self) -> FunctionMatrix {
        assert_eq!(self.rows, self.cols, "star of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        for k in 0..n {
            let loop_star = m.get(k, k).star();
            // paths entering the pivot, closed under its self-loop
            let into: Vec<EnergyFunction> = (0..n).map(|j| loop_star.compose(m.get(k, j))).collect();
            let prev = m.clone();
            for i in 0..n {
                let out_k = prev.get(i, k);
                if out_k.is_bottom() {
                    continue;
                }
                for (j, via) in into.iter().enumerate() {
                    let f = prev.get(i, j).join(&out_k.compose(via));
                    m.set(i, j, f);
                }
            }
        }
        for i in 0..n {
            let f = m.get(i, i).join(&EnergyFunction::identity());
            m.set(i, i, f);
        }
        m
    }

    fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> FunctionMatrix {
        FunctionMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `(a, b, c, d)` with `a` the leading `k × k` block.
    fn split(&self, k: usize) -> (FunctionMatrix, FunctionMatrix, FunctionMatrix, FunctionMatrix) {
        let n = self.rows;
        (self.block(0, k, 0, k), self.block(0, k, k, n), self.block(k, n, 0, k), self.block(k, n, k, n))
    }

    fn assemble(a: &FunctionMatrix, b: &FunctionMatrix, c: &FunctionMatrix, d: &FunctionMatrix) -> FunctionMatrix {
        let k = a.rows;
        let n = k + d.rows;
        FunctionMatrix::from_fn(n, n, |i, j| match (i < k, j < k) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - k).clone(),
            (false, true) => c.get(i - k, j).clone(),
            (false, false) => d.get(i - k, j - k).clone(),
        })
    }

    /// `M*` by the block recursion
    /// `[(a ∨ bd*c)*, (a ∨ bd*c)* b d*; (d ∨ ca*b)* c a*, (d ∨ ca*b)*]`,
    /// splitting off the leading `split × split` block at the top level and
    /// `1 | n-1` below it.
    pub fn star_blocks(&self, split: usize) -> Result<FunctionMatrix, MatrixError> {
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(FunctionMatrix::filled(1, 1, self.get(0, 0).star()));
        }
        if split == 0 || split >= n {
            return Err(MatrixError::Split { split, n });
        }
        let (a, b, c, d) = self.split(split);
        let a_star = a.star_blocks(1)?;
        let d_star = d.star_blocks(1)?;
        let top = a.join_unchecked(&b.mul_unchecked(&d_star).mul_unchecked(&c)).star_blocks(1)?;
        let bottom = d.join_unchecked(&c.mul_unchecked(&a_star).mul_unchecked(&b)).star_blocks(1)?;
        let tr = top.mul_unchecked(&b).mul_unchecked(&d_star);
        let bl = bottom.mul_unchecked(&c).mul_unchecked(&a_star);
        Ok(FunctionMatrix::assemble(&top, &tr, &bl, &bottom))
    }

    /// `M^ω` by the block recursion with the leading `split × split` block:
    /// `[(a ∨ bd*c)^ω ∨ d^ω c (a ∨ bd*c)*, (d ∨ ca*b)^ω ∨ a^ω b (d ∨ ca*b)*]`.
    /// Component `j` holds at `x` iff some infinite path from `j` survives with
    /// initial energy `x`.
    pub fn omega_split(&self, split: usize) -> Result<PredicateVector, MatrixError> {
        let n = self.rows;
        if n == 0 {
            return Ok(PredicateVector(Vec::new()));
        }
        if n == 1 {
            return Ok(PredicateVector(vec![omega(self.get(0, 0))]));
        }
        if split == 0 || split >= n {
            return Err(MatrixError::Split { split, n });
        }
        let (a, b, c, d) = self.split(split);
        let a_star = a.star();
        let d_star = d.star();
        let top = a.join_unchecked(&b.mul_unchecked(&d_star).mul_unchecked(&c));
        let bottom = d.join_unchecked(&c.mul_unchecked(&a_star).mul_unchecked(&b));

        let first = top
            .omega_split(1)?
            .join(&d.omega_split(1)?.act(&c).act(&top.star()));
        let second = bottom
            .omega_split(1)?
            .join(&a.omega_split(1)?.act(&b).act(&bottom.star()));
        Ok(PredicateVector(first.0.into_iter().chain(second.0).collect()))
    }

    /// `M^ω` with the fixed `1 | n-1` split.
    pub fn omega(&self) -> PredicateVector {
        self.omega_split(1).expect("split 1 is valid for n ≥ 2")
    }

    /// `M^{ω_k} = [(a ∨ bd*c)^ω, (a ∨ bd*c)^ω b d*]` for the leading `k × k`
    /// block `a`: infinite paths visiting the first `k` indices infinitely often.
    /// `ω_0` is all-`Never` and `ω_n` is `M^ω`.
    pub fn omega_k(&self, k: usize) -> Result<PredicateVector, MatrixError> {
        let n = self.rows;
        if k > n {
            return Err(MatrixError::Split { split: k, n });
        }
        if k == 0 {
            return Ok(PredicateVector(vec![ThresholdPredicate::Never; n]));
        }
        if k == n {
            return Ok(self.omega());
        }
        let (a, b, c, d) = self.split(k);
        let d_star = d.star();
        let top = a.join_unchecked(&b.mul_unchecked(&d_star).mul_unchecked(&c));
        let head = top.omega();
        let tail = head.act(&b.mul_unchecked(&d_star));
        Ok(PredicateVector(head.0.into_iter().chain(tail.0).collect()))
    }

    /// `M·I`: the join of the columns selected by `unit`.
    pub fn apply_to_unit(&self, unit: &UnitVector) -> Result<Vec<EnergyFunction>, MatrixError> {
        if unit.len() != self.cols {
            return Err(MatrixError::Dimension { left: (self.rows, self.cols), right: (unit.len(), 1) });
        }
        Ok((0..self.rows)
            .map(|i| unit.ones().fold(EnergyFunction::bottom(), |acc, j| acc.join(self.get(i, j))))
            .collect())
    }
}

/// `Fᵀ·v`: the join of the entries selected by `unit`.
pub fn contract(unit: &UnitVector, column: &[EnergyFunction]) -> Result<EnergyFunction, MatrixError> {
    if unit.len() != column.len() {
        return Err(MatrixError::Dimension { left: (1, unit.len()), right: (column.len(), 1) });
    }
    Ok(unit.ones().fold(EnergyFunction::bottom(), |acc, i| acc.join(&column[i])))
}

impl PredicateVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &ThresholdPredicate {
        &self.0[i]
    }

    /// `v·M` for a `len × cols` matrix.
    pub fn act(&self, m: &FunctionMatrix) -> PredicateVector {
        debug_assert_eq!(self.0.len(), m.rows);
        PredicateVector(
            (0..m.cols)
                .map(|j| {
                    self.0.iter().enumerate().fold(ThresholdPredicate::Never, |acc, (i, u)| {
                        acc.join(&u.act(m.get(i, j)))
                    })
                })
                .collect(),
        )
    }

    pub fn join(&self, other: &PredicateVector) -> PredicateVector {
        PredicateVector(self.0.iter().zip(&other.0).map(|(u, v)| u.join(v)).collect())
    }

    /// `v·I^s = v_s`.
    pub fn dot(&self, unit: &UnitVector) -> Result<ThresholdPredicate, MatrixError> {
        if unit.len() != self.0.len() {
            return Err(MatrixError::Dimension { left: (1, self.0.len()), right: (unit.len(), 1) });
        }
        Ok(unit.ones().fold(ThresholdPredicate::Never, |acc, i| acc.join(&self.0[i])))
    }
}
