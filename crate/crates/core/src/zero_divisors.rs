//! Exact searches for nonzero products of zero-divisors.
//!
//! Everything here works in coordinates: the weight-`t` piece of `H ⊗ H` has
//! basis the pairs `(a, b)` of admissible monomials with
//! `weight(a) + weight(b) = t`, and subspaces of it are row-reduced over a
//! [`Field`]. Weight counts generator factors; cohomological degree is
//! weight times `m - 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arnold::{AlgebraElement, AlgebraError, ArnoldAlgebra, Presentation};
use crate::field::Field;
use crate::linalg::{accumulate, kernel, SparseVec, Subspace};
use crate::tensor::{bar, TensorElement};

/// Size limits for the searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_n: u32,
    pub max_m: u32,
    /// Bound on the top degree `2(n-1)(m-1)` of `X × X`.
    pub max_degree: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_n: 5,
            max_m: 9,
            max_degree: 64,
        }
    }
}

impl Caps {
    pub fn check(&self, p: Presentation) -> Result<(), SearchError> {
        let top = 2 * p.top_degree();
        if p.n > self.max_n || p.m > self.max_m || top > self.max_degree {
            return Err(SearchError::CapExceeded {
                n: p.n,
                m: p.m,
                caps: *self,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("F(R^{m}, {n}) exceeds the resource caps {caps:?}; not computed")]
    CapExceeded { n: u32, m: u32, caps: Caps },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coordinate view of `H ⊗ H` over a field.
pub struct TensorSquare<'a, F: Field> {
    alg: &'a ArnoldAlgebra,
    field: F,
    // offsets[t][wa]: start of the block with left weight wa in weight t
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

/// Position of a basis pair in its graded piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pub left_weight: usize,
    pub left: usize,
    pub right_weight: usize,
    pub right: usize,
}

impl<'a, F: Field> TensorSquare<'a, F> {
    pub fn new(alg: &'a ArnoldAlgebra, field: F) -> Self {
        let top = alg.top_weight();
        let mut offsets = Vec::with_capacity(2 * top + 1);
        let mut dims = Vec::with_capacity(2 * top + 1);
        for t in 0..=2 * top {
            let mut row = Vec::with_capacity(top + 1);
            let mut total = 0;
            for wa in 0..=top {
                row.push(total);
                if t >= wa && t - wa <= top {
                    total += alg.dim(wa) * alg.dim(t - wa);
                }
            }
            offsets.push(row);
            dims.push(total);
        }
        TensorSquare {
            alg,
            field,
            offsets,
            dims,
        }
    }

    pub fn algebra(&self) -> &ArnoldAlgebra {
        self.alg
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Largest weight with a nonzero piece, `2(n-1)`.
    pub fn top_weight(&self) -> usize {
        2 * self.alg.top_weight()
    }

    pub fn dim(&self, t: usize) -> usize {
        self.dims.get(t).copied().unwrap_or(0)
    }

    pub fn index(&self, p: PairIndex) -> usize {
        let t = p.left_weight + p.right_weight;
        self.offsets[t][p.left_weight] + p.left * self.alg.dim(p.right_weight) + p.right
    }

    pub fn pair(&self, t: usize, idx: usize) -> PairIndex {
        let row = &self.offsets[t];
        // last block starting at or before idx; empty blocks never win
        let wa = row.partition_point(|&o| o <= idx) - 1;
        let wb = t - wa;
        let local = idx - row[wa];
        let db = self.alg.dim(wb);
        PairIndex {
            left_weight: wa,
            left: local / db,
            right_weight: wb,
            right: local % db,
        }
    }

    fn push_int(&self, acc: &mut BTreeMap<usize, F::Elem>, at: usize, c: &BigInt, scale: &F::Elem) {
        let v = self.field.mul(&self.field.from_integer(c), scale);
        accumulate(&self.field, acc, at, v);
    }

    /// Product of coordinate vectors of weights `tx` and `ty`.
    pub fn multiply(
        &self,
        tx: usize,
        x: &[(usize, F::Elem)],
        ty: usize,
        y: &[(usize, F::Elem)],
    ) -> SparseVec<F::Elem> {
        let t = tx + ty;
        if t > self.top_weight() {
            return Vec::new();
        }
        let parity = self.alg.presentation().parity();
        let mut acc = BTreeMap::new();
        for (px, cx) in x {
            let p = self.pair(tx, *px);
            for (qy, cy) in y {
                let q = self.pair(ty, *qy);
                let ac = self.alg.basis_product(p.left_weight, p.left, q.left_weight, q.left);
                if ac.is_empty() {
                    continue;
                }
                let bd = self.alg.basis_product(p.right_weight, p.right, q.right_weight, q.right);
                if bd.is_empty() {
                    continue;
                }
                let mut scale = self.field.mul(cx, cy);
                if parity.swap_is_negative(p.right_weight, q.left_weight) {
                    scale = self.field.neg(&scale);
                }
                let (lw, rw) = (p.left_weight + q.left_weight, p.right_weight + q.right_weight);
                for (k, u) in ac {
                    for (l, v) in bd {
                        let at = self.index(PairIndex {
                            left_weight: lw,
                            left: *k,
                            right_weight: rw,
                            right: *l,
                        });
                        self.push_int(&mut acc, at, &(u * v), &scale);
                    }
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Columns of the diagonal restriction on the weight-`t` piece.
    pub fn diagonal_columns(&self, t: usize) -> Vec<SparseVec<F::Elem>> {
        (0..self.dim(t))
            .map(|idx| {
                let p = self.pair(t, idx);
                self.alg
                    .basis_product(p.left_weight, p.left, p.right_weight, p.right)
                    .iter()
                    .map(|(k, c)| (*k, self.field.from_integer(c)))
                    .filter(|(_, c)| !self.field.is_zero(c))
                    .collect()
            })
            .collect()
    }

    /// Kernel of the diagonal restriction in weight `t`.
    pub fn zero_divisors_in_weight(&self, t: usize) -> Subspace<F> {
        if t > self.top_weight() {
            return Subspace::new(self.field.clone(), 0);
        }
        let target = if t <= self.alg.top_weight() { self.alg.dim(t) } else { 0 };
        kernel(&self.field, target, &self.diagonal_columns(t))
    }

    /// Coordinates of an integral tensor, split by weight.
    pub fn coords(&self, x: &TensorElement) -> Vec<SparseVec<F::Elem>> {
        let mut acc: Vec<BTreeMap<usize, F::Elem>> = vec![BTreeMap::new(); self.top_weight() + 1];
        let one = self.field.one();
        for ((a, b), c) in x.terms() {
            let (wa, ia) = self.alg.locate(a).expect("admissible");
            let (wb, ib) = self.alg.locate(b).expect("admissible");
            let at = self.index(PairIndex {
                left_weight: wa,
                left: ia,
                right_weight: wb,
                right: ib,
            });
            self.push_int(&mut acc[wa + wb], at, c, &one);
        }
        acc.into_iter().map(|v| v.into_iter().collect()).collect()
    }

    /// Weight-1 coordinates of the bar classes of all generators.
    pub fn generator_bars(&self) -> Vec<SparseVec<F::Elem>> {
        let p = self.alg.presentation();
        p.generators()
            .into_iter()
            .map(|e| {
                let g = AlgebraElement::generator(p, e.lower, e.upper).expect("generator in range");
                let b = bar(&g).expect("homogeneous");
                self.coords(&b).swap_remove(1)
            })
            .collect()
    }
}

/// Kernel of the diagonal restriction in cohomological degree `degree`.
pub fn zero_divisor_subspace<F: Field>(alg: &ArnoldAlgebra, field: F, degree: u32) -> Subspace<F> {
    let d = alg.presentation().generator_degree();
    let sq = TensorSquare::new(alg, field.clone());
    if !degree.is_multiple_of(d) {
        return Subspace::new(field, 0);
    }
    sq.zero_divisors_in_weight((degree / d) as usize)
}

/// How `Z^{k+1}` is obtained from `Z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerStrategy {
    /// Multiply `Z^k` by a computed minimal generating set of the ideal `Z`.
    IdealGenerators,
    /// Multiply `Z^k` by every basis vector of `Z`.
    FullProducts,
}

/// Graded pieces of one subspace of `H ⊗ H`, indexed by weight.
pub type GradedSubspace<F> = Vec<Subspace<F>>;

fn graded_zero<F: Field>(sq: &TensorSquare<'_, F>) -> GradedSubspace<F> {
    (0..=sq.top_weight())
        .map(|t| Subspace::new(sq.field().clone(), sq.dim(t)))
        .collect()
}

/// The zero-divisor ideal, one kernel per weight.
pub fn zero_divisor_ideal<F: Field>(sq: &TensorSquare<'_, F>) -> GradedSubspace<F> {
    (0..=sq.top_weight()).map(|t| sq.zero_divisors_in_weight(t)).collect()
}

/// Minimal homogeneous generators of `ideal` (assumed to be an ideal), as
/// `(weight, vector)` pairs.
pub fn ideal_generators<F: Field>(
    sq: &TensorSquare<'_, F>,
    ideal: &GradedSubspace<F>,
) -> Vec<(usize, SparseVec<F::Elem>)> {
    let field = sq.field();
    let mut gens: Vec<(usize, SparseVec<F::Elem>)> = Vec::new();
    for t in 1..=sq.top_weight() {
        let mut generated = Subspace::new(field.clone(), sq.dim(t));
        'fill: for (s, g) in &gens {
            let w = t - s;
            for idx in 0..sq.dim(w) {
                let unit = vec![(idx, field.one())];
                generated.insert(&sq.multiply(w, &unit, *s, g));
                if generated.dim() == ideal[t].dim() {
                    break 'fill;
                }
            }
        }
        for row in ideal[t].rows() {
            if generated.insert(row) {
                gens.push((t, row.clone()));
            }
        }
    }
    gens
}

/// Span of all products `x · y` with `x` from `left` and `y` from `right`,
/// weight by weight; each weight stops early once `bound` is reached.
fn product_span<F: Field>(
    sq: &TensorSquare<'_, F>,
    left: &GradedSubspace<F>,
    right: &[(usize, SparseVec<F::Elem>)],
    bound: &GradedSubspace<F>,
) -> GradedSubspace<F> {
    let mut out = graded_zero(sq);
    for (t, slot) in out.iter_mut().enumerate() {
        let cap = bound[t].dim();
        if cap == 0 {
            continue;
        }
        'fill: for (s, y) in right {
            if *s > t {
                continue;
            }
            for x in left[t - s].rows() {
                slot.insert(&sq.multiply(t - s, x, *s, y));
                if slot.dim() == cap {
                    break 'fill;
                }
            }
        }
    }
    out
}

fn is_zero_graded<F: Field>(g: &GradedSubspace<F>) -> bool {
    g.iter().all(Subspace::is_zero)
}

/// Dimensions per weight of `Z, Z^2, Z^3, ...` up to the last nonzero power.
pub fn zero_divisor_power_dims<F: Field>(
    alg: &ArnoldAlgebra,
    field: F,
    strategy: PowerStrategy,
) -> Vec<Vec<usize>> {
    let sq = TensorSquare::new(alg, field);
    let ideal = zero_divisor_ideal(&sq);
    let multipliers: Vec<(usize, SparseVec<F::Elem>)> = match strategy {
        PowerStrategy::IdealGenerators => ideal_generators(&sq, &ideal),
        PowerStrategy::FullProducts => ideal
            .iter()
            .enumerate()
            .flat_map(|(t, s)| s.rows().iter().map(move |r| (t, r.clone())))
            .collect(),
    };
    let mut dims = Vec::new();
    let mut power = ideal;
    while !is_zero_graded(&power) {
        dims.push(power.iter().map(Subspace::dim).collect());
        power = product_span(&sq, &power, &multipliers, &power);
    }
    dims
}

/// Largest `k` with `Z^k != 0`, where `Z` is the kernel of the diagonal
/// restriction.
pub fn zero_divisor_cuplength<F: Field>(alg: &ArnoldAlgebra, field: F, caps: &Caps) -> Result<usize, SearchError> {
    caps.check(alg.presentation())?;
    Ok(zero_divisor_power_dims(alg, field, PowerStrategy::IdealGenerators).len())
}

/// Dimensions of `V_1, V_2, ...` where `V_1` is spanned by the bar classes of
/// the generators and `V_{k+1} = V_k · V_1`; ends at the last nonzero term.
pub fn bar_span_dims<F: Field>(alg: &ArnoldAlgebra, field: F) -> Vec<usize> {
    let sq = TensorSquare::new(alg, field.clone());
    let bars = sq.generator_bars();
    let mut current = Subspace::spanned_by(field.clone(), sq.dim(1), bars.iter());
    let mut weight = 1;
    let mut dims = Vec::new();
    while !current.is_zero() {
        dims.push(current.dim());
        let next_weight = weight + 1;
        let mut next = Subspace::new(field.clone(), sq.dim(next_weight));
        if next_weight <= sq.top_weight() {
            'fill: for x in current.rows() {
                for b in &bars {
                    next.insert(&sq.multiply(weight, x, 1, b));
                    if next.is_full() {
                        break 'fill;
                    }
                }
            }
        }
        current = next;
        weight = next_weight;
    }
    dims
}

/// Largest `k` for which some product of `k` bar classes of degree `m - 1`
/// is nonzero.
pub fn bar_span_length<F: Field>(alg: &ArnoldAlgebra, field: F, caps: &Caps) -> Result<usize, SearchError> {
    caps.check(alg.presentation())?;
    Ok(bar_span_dims(alg, field).len())
}

/// A sequence of generators whose bar classes have a nonzero product of the
/// requested length, found by depth-first search.
pub fn bar_product_witness<F: Field>(
    alg: &ArnoldAlgebra,
    field: F,
    length: usize,
) -> Option<Vec<crate::arnold::Edge>> {
    let sq = TensorSquare::new(alg, field);
    let gens = alg.presentation().generators();
    let bars = sq.generator_bars();
    if length == 0 {
        return Some(Vec::new());
    }
    let mut chosen = Vec::new();
    fn search<F: Field>(
        sq: &TensorSquare<'_, F>,
        bars: &[SparseVec<F::Elem>],
        current: &SparseVec<F::Elem>,
        weight: usize,
        length: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if weight == length {
            return true;
        }
        for (g, b) in bars.iter().enumerate() {
            let next = sq.multiply(weight, current, 1, b);
            if next.is_empty() {
                continue;
            }
            chosen.push(g);
            if search(sq, bars, &next, weight + 1, length, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for (g, b) in bars.iter().enumerate() {
        if b.is_empty() {
            continue;
        }
        chosen.clear();
        chosen.push(g);
        if search(&sq, &bars, b, 1, length, &mut chosen) {
            return Some(chosen.iter().map(|&i| gens[i]).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arnold::build_presentation;
    use crate::field::{PrimeField, Rationals};
    use crate::tensor::{diagonal_restriction, tensor_multiply};

    fn algebra(n: i64, m: i64) -> ArnoldAlgebra {
        ArnoldAlgebra::new(build_presentation(n, m).unwrap())
    }

    #[test]
    fn pair_indexing_roundtrip() {
        let alg = algebra(4, 2);
        let sq = TensorSquare::new(&alg, Rationals);
        assert_eq!(
            (0..=6).map(|t| sq.dim(t)).collect::<Vec<_>>(),
            vec![1, 12, 58, 144, 193, 132, 36]
        );
        for t in 0..=6 {
            for idx in 0..sq.dim(t) {
                assert_eq!(sq.index(sq.pair(t, idx)), idx);
            }
        }
    }

    #[test]
    fn coordinate_product_matches_tensor_product() {
        let alg = algebra(3, 2);
        let p = alg.presentation();
        let sq = TensorSquare::new(&alg, Rationals);
        let x = TensorElement::cross(
            &AlgebraElement::generator(p, 1, 3).unwrap(),
            &AlgebraElement::generator(p, 2, 3).unwrap(),
        )
        .unwrap();
        let y = bar(&AlgebraElement::generator(p, 1, 2).unwrap()).unwrap();
        let xy = tensor_multiply(&alg, &x, &y).unwrap();
        let got = sq.multiply(2, &sq.coords(&x)[2], 1, &sq.coords(&y)[1]);
        assert_eq!(got, sq.coords(&xy)[3]);
    }

    #[test]
    fn zero_divisor_subspace_examples() {
        let alg = algebra(2, 3);
        let z2 = zero_divisor_subspace(&alg, Rationals, 2);
        assert_eq!(z2.dim(), 1);
        let sq = TensorSquare::new(&alg, Rationals);
        let e = AlgebraElement::generator(alg.presentation(), 1, 2).unwrap();
        assert!(z2.contains(&sq.coords(&bar(&e).unwrap())[1]));
        let z4 = zero_divisor_subspace(&alg, Rationals, 4);
        assert_eq!(z4.dim(), 1);
        assert!(z4.is_full());
        assert_eq!(zero_divisor_subspace(&alg, Rationals, 3).dim(), 0);
        for m in 2..8 {
            let alg = algebra(2, m);
            assert_eq!(zero_divisor_subspace(&alg, Rationals, (m - 1) as u32).dim(), 1);
        }
    }

    #[test]
    fn kernel_rows_restrict_to_zero() {
        let alg = algebra(3, 3);
        let sq = TensorSquare::new(&alg, Rationals);
        for t in 0..=4 {
            let cols = sq.diagonal_columns(t);
            let target = if t <= 2 { alg.dim(t) } else { 0 };
            for r in sq.zero_divisors_in_weight(t).rows() {
                assert!(crate::linalg::apply(&Rationals, target, &cols, r).is_empty());
            }
        }
        // and the integral route agrees on a sample
        let p = alg.presentation();
        let x = bar(&AlgebraElement::generator(p, 1, 3).unwrap()).unwrap();
        assert!(diagonal_restriction(&alg, &x).unwrap().is_zero());
    }

    #[test]
    fn ideal_is_generated_by_generator_bars() {
        for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            let alg = algebra(n, m);
            let sq = TensorSquare::new(&alg, Rationals);
            let ideal = zero_divisor_ideal(&sq);
            let gens = ideal_generators(&sq, &ideal);
            assert!(gens.iter().all(|(t, _)| *t == 1));
            assert_eq!(gens.len(), alg.presentation().generator_count());
            let bars = Subspace::spanned_by(Rationals, sq.dim(1), sq.generator_bars().iter());
            let g1 = Subspace::spanned_by(Rationals, sq.dim(1), gens.iter().map(|(_, v)| v));
            assert!(g1.same_span(&bars));
        }
    }

    #[test]
    fn cuplength_examples() {
        let caps = Caps::default();
        assert_eq!(zero_divisor_cuplength(&algebra(2, 3), Rationals, &caps), Ok(2));
        assert_eq!(zero_divisor_cuplength(&algebra(2, 4), Rationals, &caps), Ok(1));
        assert_eq!(zero_divisor_cuplength(&algebra(3, 2), Rationals, &caps), Ok(3));
        assert_eq!(zero_divisor_cuplength(&algebra(1, 3), Rationals, &caps), Ok(0));
    }

    #[test]
    fn power_strategies_agree() {
        for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let alg = algebra(n, m);
            assert_eq!(
                zero_divisor_power_dims(&alg, Rationals, PowerStrategy::IdealGenerators),
                zero_divisor_power_dims(&alg, Rationals, PowerStrategy::FullProducts),
                "n={n} m={m}"
            );
        }
    }

    #[test]
    fn characteristic_two_loses_the_square() {
        let f2 = PrimeField::new(2).unwrap();
        let caps = Caps::default();
        assert_eq!(zero_divisor_cuplength(&algebra(2, 3), f2, &caps), Ok(1));
        assert_eq!(zero_divisor_cuplength(&algebra(2, 3), PrimeField::new(3).unwrap(), &caps), Ok(2));
    }

    #[test]
    fn bar_span_examples() {
        let caps = Caps::default();
        assert_eq!(bar_span_length(&algebra(2, 3), Rationals, &caps), Ok(2));
        assert_eq!(bar_span_length(&algebra(3, 4), Rationals, &caps), Ok(3));
        assert_eq!(bar_span_length(&algebra(3, 3), Rationals, &caps), Ok(4));
        assert_eq!(bar_span_length(&algebra(1, 3), Rationals, &caps), Ok(0));
    }

    #[test]
    fn witnesses_have_nonzero_products() {
        let alg = algebra(3, 2);
        let w = bar_product_witness(&alg, Rationals, 3).unwrap();
        assert_eq!(w.len(), 3);
        let p = alg.presentation();
        let mut prod = TensorElement::one(p);
        for e in &w {
            let b = bar(&AlgebraElement::generator(p, e.lower, e.upper).unwrap()).unwrap();
            prod = tensor_multiply(&alg, &prod, &b).unwrap();
        }
        assert!(!prod.is_zero());
        assert!(bar_product_witness(&alg, Rationals, 4).is_none());
    }

    #[test]
    fn caps_are_enforced() {
        let caps = Caps {
            max_n: 3,
            ..Caps::default()
        };
        assert!(matches!(
            zero_divisor_cuplength(&algebra(4, 2), Rationals, &caps),
            Err(SearchError::CapExceeded { n: 4, .. })
        ));
        assert!(bar_span_length(&algebra(4, 2), Rationals, &caps).is_err());
    }
}
