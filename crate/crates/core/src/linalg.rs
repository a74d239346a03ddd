//! Exact row reduction over a [`Field`].
//!
//! Vectors are sparse `(index, value)` lists sorted by index. A [`Subspace`]
//! keeps its spanning rows in echelon form with unit pivots; every entry of a
//! row lies to the right of its pivot. Rows are not back-reduced on insert,
//! which keeps fill-in down on large sparse spans.

use std::collections::BTreeMap;

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    rows: Vec<SparseVec<F::Elem>>,
    // pivot column -> position in `rows`; rows are in insertion order
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Subspace<F> {
    pub fn new(field: F, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivot_row: vec![None; ambient_dim],
        }
    }

    /// The whole ambient space, spanned by the coordinate vectors.
    pub fn full(field: F, ambient_dim: usize) -> Self {
        let one = field.one();
        let rows = (0..ambient_dim).map(|i| vec![(i, one.clone())]).collect();
        Subspace {
            field,
            ambient_dim,
            rows,
            pivot_row: (0..ambient_dim).map(Some).collect(),
        }
    }

    pub fn spanned_by<'a, I>(field: F, ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<F::Elem>>,
        F::Elem: 'a,
    {
        let mut s = Subspace::new(field, ambient_dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    /// Echelon rows in insertion order.
    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    /// Pivot columns, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|&c| self.has_pivot(c)).collect()
    }

    /// The fully reduced echelon basis, ordered by pivot column.
    pub fn reduced_rows(&self) -> Vec<SparseVec<F::Elem>> {
        let mut done = Subspace::new(self.field.clone(), self.ambient_dim);
        let mut out = Vec::with_capacity(self.rows.len());
        // right to left: each row only meets pivots already fully reduced
        for c in self.pivots().into_iter().rev() {
            let row = &self.rows[self.pivot_row[c].expect("pivot")];
            let tail: SparseVec<F::Elem> = row[1..].to_vec();
            let mut reduced = vec![row[0].clone()];
            reduced.extend(done.residual(&tail));
            done.rows.push(reduced.clone());
            done.pivot_row[c] = Some(done.rows.len() - 1);
            out.push(reduced);
        }
        out.reverse();
        out
    }

    /// Residual of `v` after reduction by the rows; zero iff `v` is a member.
    pub fn residual(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (i, c) in v {
            assert!(*i < self.ambient_dim, "coordinate {i} out of range");
            accumulate(&self.field, &mut acc, *i, c.clone());
        }
        // rows only touch columns right of their pivot, so sweep left to right
        let mut from = 0;
        while let Some((col, factor, r)) = acc
            .range(from..)
            .find_map(|(i, c)| self.pivot_row[*i].map(|r| (*i, c.clone(), r)))
        {
            for (j, c) in &self.rows[r] {
                let t = self.field.neg(&self.field.mul(&factor, c));
                accumulate(&self.field, &mut acc, *j, t);
            }
            from = col + 1;
        }
        acc.into_iter().collect()
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.residual(v).is_empty()
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        if self.is_full() {
            return false;
        }
        let mut new_row = self.residual(v);
        if new_row.is_empty() {
            return false;
        }
        let pivot = new_row[0].0;
        let scale = self.field.inv(&new_row[0].1);
        for (_, c) in new_row.iter_mut() {
            *c = self.field.mul(c, &scale);
        }
        self.rows.push(new_row);
        self.pivot_row[pivot] = Some(self.rows.len() - 1);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.ambient_dim == other.ambient_dim && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn same_span(&self, other: &Subspace<F>) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivot_row.get(col).is_some_and(|p| p.is_some())
    }
}

/// Adds `c` at `i`, dropping the entry if it cancels.
pub(crate) fn accumulate<F: Field>(field: &F, acc: &mut BTreeMap<usize, F::Elem>, i: usize, c: F::Elem) {
    if field.is_zero(&c) {
        return;
    }
    match acc.entry(i) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            let sum = field.add(slot.get(), &c);
            if field.is_zero(&sum) {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

/// Null space of the linear map whose columns (images of the source
/// coordinate vectors) are given, as a subspace of the source.
pub fn kernel<F: Field>(
    field: &F,
    target_dim: usize,
    columns: &[SparseVec<F::Elem>],
) -> Subspace<F> {
    let source_dim = columns.len();
    // transpose: row r of the matrix as a sparse vector over source coordinates
    let mut matrix_rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); target_dim];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            matrix_rows[*i].push((j, c.clone()));
        }
    }
    let row_space = Subspace::spanned_by(field.clone(), source_dim, matrix_rows.iter());
    let reduced = row_space.reduced_rows();
    let mut ker = Subspace::new(field.clone(), source_dim);
    for free in (0..source_dim).filter(|c| !row_space.has_pivot(*c)) {
        let mut v: SparseVec<F::Elem> = vec![(free, field.one())];
        for row in &reduced {
            if let Ok(at) = row.binary_search_by_key(&free, |(j, _)| *j) {
                let c = &row[at].1;
                v.push((row[0].0, field.neg(c)));
            }
        }
        v.sort_by_key(|(j, _)| *j);
        ker.insert(&v);
    }
    ker
}

/// Applies a linear map, given by its columns, to a sparse vector.
pub fn apply<F: Field>(
    field: &F,
    target_dim: usize,
    columns: &[SparseVec<F::Elem>],
    v: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let mut acc = vec![field.zero(); target_dim];
    for (j, x) in v {
        for (i, c) in &columns[*j] {
            acc[*i] = field.add(&acc[*i], &field.mul(x, c));
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_bigint::BigInt;
    use crate::field::Rational;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn rref_membership() {
        let mut s = Subspace::new(Rationals, 3);
        assert!(s.insert(&[(0, q(2)), (1, q(4))]));
        assert!(s.insert(&[(1, q(1)), (2, q(1))]));
        assert!(!s.insert(&[(0, q(1)), (1, q(3)), (2, q(1))]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[(0, q(1)), (2, q(-2))]));
        assert!(!s.contains(&[(2, q(1))]));
        // reduced: pivots 0,1 and row 0 has no entry in column 1
        assert_eq!(s.pivots(), vec![0, 1]);
        assert!(s.reduced_rows()[0].iter().all(|(j, _)| *j != 1));
    }

    #[test]
    fn kernel_of_sum_map() {
        // (x, y) -> x + y
        let cols = vec![vec![(0, q(1))], vec![(0, q(1))]];
        let k = kernel(&Rationals, 1, &cols);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[(0, q(1)), (1, q(-1))]));
    }

    #[test]
    fn kernel_depends_on_characteristic() {
        // x -> 2x
        let f2 = PrimeField::new(2).unwrap();
        let cols = vec![vec![(0, f2.from_integer(&BigInt::from(2)))]];
        let cols: Vec<SparseVec<u64>> = cols
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, x)| *x != 0).collect())
            .collect();
        assert_eq!(kernel(&f2, 1, &cols).dim(), 1);
        let qcols = vec![vec![(0, q(2))]];
        assert_eq!(kernel(&Rationals, 1, &qcols).dim(), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(7).unwrap();
        let cols: Vec<SparseVec<u64>> = vec![
            vec![(0, 1), (1, 2)],
            vec![(0, 3)],
            vec![(1, 5)],
            vec![(0, 1), (1, 1)],
        ];
        let k = kernel(&f, 2, &cols);
        assert_eq!(k.dim(), 2);
        for r in k.rows() {
            assert!(apply(&f, 2, &cols, r).is_empty());
        }
    }
}
