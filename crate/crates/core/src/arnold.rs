//! The cohomology ring of the configuration space `F(R^m, n)`.
//!
//! It is the graded-commutative ring on generators `e_ij` (`1 <= i < j <= n`)
//! of degree `m - 1`, subject to
//!
//! ```text
//! e_ij^2 = 0,    e_ij e_ik = (e_ij - e_ik) e_jk    (i < j < k).
//! ```
//!
//! Elements are kept in normal form over the admissible monomials: products
//! whose factors have pairwise distinct, strictly increasing upper indices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("point count must be at least 1, got {0}")]
    InvalidPointCount(i64),
    #[error("ambient dimension must be at least 2, got {0}")]
    InvalidDimension(i64),
    #[error("malformed edge ({0}, {1}): need 1 <= i < j")]
    MalformedEdge(u32, u32),
    #[error("edge {edge} does not exist for n = {n}")]
    EdgeOutOfRange { edge: Edge, n: u32 },
    #[error("elements belong to different presentations ({0} vs {1})")]
    PresentationMismatch(Presentation, Presentation),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("stability comparison needs an even ambient dimension, got {0}")]
    OddDimension(u32),
    #[error("rank mismatch at factor count {k}: expansion {expansion}, enumeration {enumeration}")]
    RankMismatch {
        k: usize,
        expansion: u64,
        enumeration: u64,
    },
}

/// A generator `e_ij` with `lower = i < upper = j`.
///
/// Edges order by upper index first, which is the canonical factor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "(u32, u32)", try_from = "(u32, u32)")]
pub struct Edge {
    pub lower: u32,
    pub upper: u32,
}

impl Edge {
    pub fn new(lower: u32, upper: u32) -> Result<Edge, AlgebraError> {
        if lower == 0 || lower >= upper {
            return Err(AlgebraError::MalformedEdge(lower, upper));
        }
        Ok(Edge { lower, upper })
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.upper, self.lower).cmp(&(other.upper, other.lower))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Edge> for (u32, u32) {
    fn from(e: Edge) -> (u32, u32) {
        (e.lower, e.upper)
    }
}

impl TryFrom<(u32, u32)> for Edge {
    type Error = AlgebraError;
    fn try_from((i, j): (u32, u32)) -> Result<Edge, AlgebraError> {
        Edge::new(i, j)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}_{}", self.lower, self.upper)
    }
}

/// Whether generators commute or anticommute, i.e. the parity of `m - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Commuting,
    Anticommuting,
}

impl Parity {
    pub fn of_degree(d: u32) -> Parity {
        if d.is_multiple_of(2) {
            Parity::Commuting
        } else {
            Parity::Anticommuting
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Commuting => 0,
            Parity::Anticommuting => 1,
        }
    }

    /// Sign of moving a block of `a` generators past a block of `b` generators.
    pub fn swap_is_negative(self, a: usize, b: usize) -> bool {
        self == Parity::Anticommuting && (a * b) % 2 == 1
    }
}

/// An ordered product of generators. The empty product is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<Edge>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[Edge] {
        &self.0
    }

    /// Upper indices strictly increasing (hence pairwise distinct).
    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0].upper < w[1].upper)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse integer combination of monomials; no zero coefficients stored.
pub type Terms = BTreeMap<Monomial, BigInt>;

pub(crate) fn add_term(terms: &mut Terms, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Reduces an arbitrary generator word to its normal form.
///
/// Rules: a repeated edge kills the word; adjacent distinct edges are swapped
/// into (upper, lower) order with sign `(-1)^parity`; two factors sharing an
/// upper index, `e_ij e_kj` with `i < k`, become `e_ik e_kj - e_ik e_ij`.
pub fn straighten(word: &[Edge], parity: Parity) -> Result<Terms, AlgebraError> {
    for e in word {
        Edge::new(e.lower, e.upper)?;
    }
    let mut out = Terms::new();
    straighten_into(word.to_vec(), BigInt::one(), parity, &mut out);
    Ok(out)
}

fn straighten_into(word: Vec<Edge>, coeff: BigInt, parity: Parity, out: &mut Terms) {
    let mut pending = vec![(word, coeff)];
    while let Some((mut word, coeff)) = pending.pop() {
        let Some(swaps) = sort_counting_swaps(&mut word) else {
            continue;
        };
        let c = if parity.swap_is_negative(swaps, 1) {
            -coeff
        } else {
            coeff
        };
        match word.windows(2).position(|w| w[0].upper == w[1].upper) {
            None => add_term(out, Monomial(word), c),
            Some(p) => {
                let (left, right) = (word[p], word[p + 1]);
                let (first, second) = shared_upper_rewrite(&word, p, left, right);
                pending.push((first, c.clone()));
                pending.push((second, -c));
            }
        }
    }
}

/// `e_ij e_kj -> e_ik e_kj - e_ik e_ij` at position `p`, returned as the two
/// words (the second carries the minus sign).
pub(crate) fn shared_upper_rewrite(
    word: &[Edge],
    p: usize,
    left: Edge,
    right: Edge,
) -> (Vec<Edge>, Vec<Edge>) {
    debug_assert!(left.upper == right.upper && left.lower < right.lower);
    let bridge = Edge {
        lower: left.lower,
        upper: right.lower,
    };
    let mut first = word.to_vec();
    first[p] = bridge;
    first[p + 1] = right;
    let mut second = word.to_vec();
    second[p] = bridge;
    second[p + 1] = left;
    (first, second)
}

/// Sorts into canonical factor order; `None` if an edge repeats.
fn sort_counting_swaps(word: &mut [Edge]) -> Option<usize> {
    let mut swaps = 0usize;
    for a in 1..word.len() {
        let mut b = a;
        while b > 0 {
            match word[b - 1].cmp(&word[b]) {
                Ordering::Greater => {
                    word.swap(b - 1, b);
                    swaps += 1;
                    b -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    Some(swaps)
}

/// `H^*(F(R^m, n))` as a presented ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    pub n: u32,
    pub m: u32,
}

pub fn build_presentation(n: i64, m: i64) -> Result<Presentation, AlgebraError> {
    if m <= 1 {
        return Err(AlgebraError::InvalidDimension(m));
    }
    if n <= 0 {
        return Err(AlgebraError::InvalidPointCount(n));
    }
    let n = u32::try_from(n).map_err(|_| AlgebraError::InvalidPointCount(n))?;
    let m = u32::try_from(m).map_err(|_| AlgebraError::InvalidDimension(m))?;
    Ok(Presentation { n, m })
}

impl Presentation {
    /// Cohomological degree `m - 1` of each generator.
    pub fn generator_degree(&self) -> u32 {
        self.m - 1
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.generator_degree())
    }

    pub fn generators(&self) -> Vec<Edge> {
        (2..=self.n)
            .flat_map(|j| (1..j).map(move |i| Edge { lower: i, upper: j }))
            .collect()
    }

    pub fn generator_count(&self) -> usize {
        (self.n as usize) * (self.n as usize - 1) / 2
    }

    /// Largest factor count with a nonzero graded piece.
    pub fn top_weight(&self) -> usize {
        self.n as usize - 1
    }

    pub fn top_degree(&self) -> u32 {
        (self.n - 1) * self.generator_degree()
    }

    pub fn degree_of_weight(&self, k: usize) -> u32 {
        k as u32 * self.generator_degree()
    }

    pub fn check_edge(&self, e: Edge) -> Result<(), AlgebraError> {
        Edge::new(e.lower, e.upper)?;
        if e.upper > self.n {
            return Err(AlgebraError::EdgeOutOfRange { edge: e, n: self.n });
        }
        Ok(())
    }

    pub fn straighten(&self, word: &[Edge]) -> Result<AlgebraElement, AlgebraError> {
        for e in word {
            self.check_edge(*e)?;
        }
        Ok(AlgebraElement {
            presentation: *self,
            terms: straighten(word, self.parity())?,
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(R^{}, {})", self.m, self.n)
    }
}

/// Admissible monomials with `k` factors, in ascending order.
pub fn basis(presentation: &Presentation, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    extend_basis(presentation.n, 2, k, &mut current, &mut out);
    out
}

fn extend_basis(n: u32, next_upper: u32, remaining: usize, current: &mut Vec<Edge>, out: &mut Vec<Monomial>) {
    if remaining == 0 {
        out.push(Monomial(current.clone()));
        return;
    }
    for upper in next_upper..=n {
        // leave room for the remaining factors
        if (n - upper) as usize + 1 < remaining {
            break;
        }
        for lower in 1..upper {
            current.push(Edge { lower, upper });
            extend_basis(n, upper + 1, remaining - 1, current, out);
            current.pop();
        }
    }
}

/// Coefficients of `prod_{i=1}^{n-1} (1 + i t)`.
pub fn poincare_polynomial(n: u32) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for i in 1..n as u64 {
        let mut next = vec![0u64; coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] += c * i;
        }
        coeffs = next;
    }
    coeffs
}

/// Ranks per factor count, from the polynomial expansion, checked against
/// basis enumeration.
pub fn poincare_table(n: u32) -> Result<Vec<u64>, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::InvalidPointCount(0));
    }
    let expansion = poincare_polynomial(n);
    let p = Presentation { n, m: 2 };
    for (k, &e) in expansion.iter().enumerate() {
        let enumeration = basis(&p, k).len() as u64;
        if enumeration != e {
            return Err(AlgebraError::RankMismatch {
                k,
                expansion: e,
                enumeration,
            });
        }
    }
    Ok(expansion)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Zero,
    /// Common factor count of all terms.
    Homogeneous(usize),
    Mixed,
}

/// An element of the ring in normal form, with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    presentation: Presentation,
    terms: Terms,
}

impl AlgebraElement {
    pub fn zero(presentation: Presentation) -> Self {
        AlgebraElement {
            presentation,
            terms: Terms::new(),
        }
    }

    pub fn one(presentation: Presentation) -> Self {
        AlgebraElement::monomial(presentation, Monomial::unit(), BigInt::one())
    }

    pub fn generator(presentation: Presentation, lower: u32, upper: u32) -> Result<Self, AlgebraError> {
        let e = Edge::new(lower, upper)?;
        presentation.check_edge(e)?;
        Ok(AlgebraElement::monomial(presentation, Monomial(vec![e]), BigInt::one()))
    }

    fn monomial(presentation: Presentation, m: Monomial, c: BigInt) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        AlgebraElement { presentation, terms }
    }

    /// Builds an element from arbitrary (possibly inadmissible) words.
    pub fn from_words<I>(presentation: Presentation, words: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<Edge>, BigInt)>,
    {
        let mut acc = AlgebraElement::zero(presentation);
        for (w, c) in words {
            let s = presentation.straighten(&w)?;
            acc = acc.add(&s.scale(&c))?;
        }
        Ok(acc)
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn grading(&self) -> Grading {
        let mut weights = self.terms.keys().map(Monomial::weight);
        match weights.next() {
            None => Grading::Zero,
            Some(w) if weights.all(|x| x == w) => Grading::Homogeneous(w),
            Some(_) => Grading::Mixed,
        }
    }

    /// Cohomological degree, when homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        match self.grading() {
            Grading::Homogeneous(w) => Some(self.presentation.degree_of_weight(w)),
            _ => None,
        }
    }

    fn same(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if self.presentation != other.presentation {
            return Err(AlgebraError::PresentationMismatch(self.presentation, other.presentation));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(AlgebraElement {
            presentation: self.presentation,
            terms,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> AlgebraElement {
        let mut terms = Terms::new();
        for (m, x) in &self.terms {
            add_term(&mut terms, m.clone(), x * c);
        }
        AlgebraElement {
            presentation: self.presentation,
            terms,
        }
    }

    /// Product by concatenating words and straightening.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.same(other)?;
        let parity = self.presentation.parity();
        let mut terms = Terms::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut word = a.0.clone();
                word.extend_from_slice(&b.0);
                straighten_into(word, x * y, parity, &mut terms);
            }
        }
        Ok(AlgebraElement {
            presentation: self.presentation,
            terms,
        })
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{m}")?;
            } else if m.weight() == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Sparse coordinates `(basis index, coefficient)` within one graded piece.
pub type IntCoords = Vec<(usize, BigInt)>;

type ProductBlock = Vec<IntCoords>;

/// A presentation together with its admissible basis and lazily computed
/// structure constants. Safe to share between threads.
#[derive(Debug)]
pub struct ArnoldAlgebra {
    presentation: Presentation,
    basis: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    index: HashMap<Monomial, (usize, usize)>,
    blocks: Vec<OnceLock<ProductBlock>>,
}

impl ArnoldAlgebra {
    pub fn new(presentation: Presentation) -> Self {
        let top = presentation.top_weight();
        let basis: Vec<Vec<Monomial>> = (0..=top).map(|k| self::basis(&presentation, k)).collect();
        let mut offsets = Vec::with_capacity(top + 2);
        let mut index = HashMap::new();
        let mut total = 0;
        for (w, piece) in basis.iter().enumerate() {
            offsets.push(total);
            for (i, m) in piece.iter().enumerate() {
                index.insert(m.clone(), (w, i));
            }
            total += piece.len();
        }
        offsets.push(total);
        let blocks = (0..(top + 1) * (top + 1)).map(|_| OnceLock::new()).collect();
        ArnoldAlgebra {
            presentation,
            basis,
            offsets,
            index,
            blocks,
        }
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn top_weight(&self) -> usize {
        self.presentation.top_weight()
    }

    pub fn basis(&self, weight: usize) -> &[Monomial] {
        self.basis.get(weight).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, weight: usize) -> usize {
        self.basis(weight).len()
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Position of `(weight, local index)` in the flattened basis.
    pub fn global_index(&self, weight: usize, i: usize) -> usize {
        self.offsets[weight] + i
    }

    pub fn from_global(&self, g: usize) -> (usize, usize) {
        let w = self.offsets.partition_point(|&o| o <= g) - 1;
        (w, g - self.offsets[w])
    }

    pub fn locate(&self, m: &Monomial) -> Option<(usize, usize)> {
        self.index.get(m).copied()
    }

    fn block_slot(&self, wa: usize, wb: usize) -> &OnceLock<ProductBlock> {
        &self.blocks[wa * (self.top_weight() + 1) + wb]
    }

    fn compute_block(&self, wa: usize, wb: usize) -> ProductBlock {
        let parity = self.presentation.parity();
        let mut block = Vec::with_capacity(self.dim(wa) * self.dim(wb));
        for a in self.basis(wa) {
            for b in self.basis(wb) {
                let mut word = a.0.clone();
                word.extend_from_slice(&b.0);
                let mut terms = Terms::new();
                straighten_into(word, BigInt::one(), parity, &mut terms);
                let coords = terms
                    .into_iter()
                    .map(|(m, c)| (self.index[&m].1, c))
                    .collect();
                block.push(coords);
            }
        }
        block
    }

    /// Structure constants for the product of basis monomials `(wa, i)` and
    /// `(wb, j)`, as coordinates in weight `wa + wb`.
    pub fn basis_product(&self, wa: usize, i: usize, wb: usize, j: usize) -> &[(usize, BigInt)] {
        if wa + wb > self.top_weight() {
            return &[];
        }
        let block = self
            .block_slot(wa, wb)
            .get_or_init(|| self.compute_block(wa, wb));
        &block[i * self.dim(wb) + j]
    }

    /// Computes every structure-constant block.
    pub fn freeze(&self) {
        let top = self.top_weight();
        for wa in 0..=top {
            for wb in 0..=top - wa {
                self.basis_product(wa, 0, wb, 0);
            }
        }
    }

    /// Installs a precomputed block, e.g. from a cache file. Returns `false`
    /// if the block was already present.
    pub(crate) fn install_block(&self, wa: usize, wb: usize, block: Vec<IntCoords>) -> bool {
        self.block_slot(wa, wb).set(block).is_ok()
    }

    /// Splits an element into per-weight coordinate vectors.
    pub fn coords(&self, x: &AlgebraElement) -> Vec<IntCoords> {
        let mut out = vec![Vec::new(); self.top_weight() + 1];
        for (m, c) in x.terms() {
            let (w, i) = self.index[m];
            out[w].push((i, c.clone()));
        }
        for v in out.iter_mut() {
            v.sort_by_key(|(i, _)| *i);
        }
        out
    }

    pub fn element(&self, weight: usize, coords: &[(usize, BigInt)]) -> AlgebraElement {
        let mut terms = Terms::new();
        for (i, c) in coords {
            add_term(&mut terms, self.basis[weight][*i].clone(), c.clone());
        }
        AlgebraElement {
            presentation: self.presentation,
            terms,
        }
    }

    /// Product through the structure-constant table.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        for x in [a, b] {
            if x.presentation != self.presentation {
                return Err(AlgebraError::PresentationMismatch(self.presentation, x.presentation));
            }
        }
        let mut terms = Terms::new();
        for (ma, x) in a.terms() {
            let (wa, i) = self.index[ma];
            for (mb, y) in b.terms() {
                let (wb, j) = self.index[mb];
                let xy = x * y;
                for (k, c) in self.basis_product(wa, i, wb, j) {
                    add_term(&mut terms, self.basis[wa + wb][*k].clone(), c * &xy);
                }
            }
        }
        Ok(AlgebraElement {
            presentation: self.presentation,
            terms,
        })
    }

    /// All nonzero products of basis monomials as `(i, j, coords)` over the
    /// flattened basis, ordered by `(i, j)`.
    pub fn structure_table(&self) -> Vec<(usize, usize, IntCoords)> {
        let top = self.top_weight();
        let mut out = Vec::new();
        for wa in 0..=top {
            for i in 0..self.dim(wa) {
                for wb in 0..=top - wa {
                    for j in 0..self.dim(wb) {
                        let prod = self.basis_product(wa, i, wb, j);
                        if prod.is_empty() {
                            continue;
                        }
                        let coords = prod
                            .iter()
                            .map(|(k, c)| (self.global_index(wa + wb, *k), c.clone()))
                            .collect();
                        out.push((self.global_index(wa, i), self.global_index(wb, j), coords));
                    }
                }
            }
        }
        out
    }
}

/// Compares the `(n, m_even)` ring with the `(n, 2)` ring: same admissible
/// basis, degrees scaled by `m_even - 1`, identical structure constants.
pub fn stability_check(n: u32, m_even: u32) -> Result<bool, AlgebraError> {
    if m_even % 2 == 1 {
        return Err(AlgebraError::OddDimension(m_even));
    }
    let high = ArnoldAlgebra::new(build_presentation(n.into(), m_even.into())?);
    let plane = ArnoldAlgebra::new(build_presentation(n.into(), 2)?);
    if high.presentation.parity() != plane.presentation.parity() {
        return Ok(false);
    }
    let scale = m_even - 1;
    for w in 0..=plane.top_weight() {
        if high.basis(w) != plane.basis(w) {
            return Ok(false);
        }
        if high.presentation.degree_of_weight(w) != scale * plane.presentation.degree_of_weight(w) {
            return Ok(false);
        }
    }
    Ok(high.structure_table() == plane.structure_table())
}
