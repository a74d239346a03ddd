//! The tensor square `H ⊗ H`, modelling the cohomology of `X × X`.
//!
//! Products follow the Koszul rule
//! `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} (ac) ⊗ (bd)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arnold::{AlgebraElement, AlgebraError, ArnoldAlgebra, Grading, Monomial, Presentation};

pub type TensorTerms = BTreeMap<(Monomial, Monomial), BigInt>;

fn add_pair(terms: &mut TensorTerms, key: (Monomial, Monomial), c: BigInt) {
    if c.is_zero() {
        return;
    }
    let slot = terms.entry(key.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&key);
    }
}

/// An integral element of `H ⊗ H` over admissible monomial pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    presentation: Presentation,
    terms: TensorTerms,
}

impl TensorElement {
    pub fn zero(presentation: Presentation) -> Self {
        TensorElement {
            presentation,
            terms: TensorTerms::new(),
        }
    }

    pub fn one(presentation: Presentation) -> Self {
        let mut terms = TensorTerms::new();
        terms.insert((Monomial::unit(), Monomial::unit()), BigInt::one());
        TensorElement { presentation, terms }
    }

    /// The cross product `a × b = a ⊗ b`.
    pub fn cross(a: &AlgebraElement, b: &AlgebraElement) -> Result<Self, AlgebraError> {
        if a.presentation() != b.presentation() {
            return Err(AlgebraError::PresentationMismatch(a.presentation(), b.presentation()));
        }
        let mut terms = TensorTerms::new();
        for (ma, x) in a.terms() {
            for (mb, y) in b.terms() {
                add_pair(&mut terms, (ma.clone(), mb.clone()), x * y);
            }
        }
        Ok(TensorElement {
            presentation: a.presentation(),
            terms,
        })
    }

    /// `v × 1`
    pub fn left(v: &AlgebraElement) -> Self {
        Self::cross(v, &AlgebraElement::one(v.presentation())).expect("same presentation")
    }

    /// `1 × v`
    pub fn right(v: &AlgebraElement) -> Self {
        Self::cross(&AlgebraElement::one(v.presentation()), v).expect("same presentation")
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn terms(&self) -> &TensorTerms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &Monomial, b: &Monomial) -> BigInt {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_default()
    }

    /// Grading by total factor count.
    pub fn grading(&self) -> Grading {
        let mut weights = self.terms.keys().map(|(a, b)| a.weight() + b.weight());
        match weights.next() {
            None => Grading::Zero,
            Some(w) if weights.all(|x| x == w) => Grading::Homogeneous(w),
            Some(_) => Grading::Mixed,
        }
    }

    fn same(&self, other: &TensorElement) -> Result<(), AlgebraError> {
        if self.presentation != other.presentation {
            return Err(AlgebraError::PresentationMismatch(self.presentation, other.presentation));
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.same(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_pair(&mut terms, k.clone(), c.clone());
        }
        Ok(TensorElement {
            presentation: self.presentation,
            terms,
        })
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> TensorElement {
        let mut terms = TensorTerms::new();
        for (k, x) in &self.terms {
            add_pair(&mut terms, k.clone(), x * c);
        }
        TensorElement {
            presentation: self.presentation,
            terms,
        }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("{c}*({a} x {b})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check(alg: &ArnoldAlgebra, p: Presentation) -> Result<(), AlgebraError> {
    if alg.presentation() != p {
        return Err(AlgebraError::PresentationMismatch(alg.presentation(), p));
    }
    Ok(())
}

/// Graded product in `H ⊗ H`.
pub fn tensor_multiply(
    alg: &ArnoldAlgebra,
    x: &TensorElement,
    y: &TensorElement,
) -> Result<TensorElement, AlgebraError> {
    x.same(y)?;
    check(alg, x.presentation)?;
    let parity = alg.presentation().parity();
    let mut terms = TensorTerms::new();
    for ((a, b), cx) in &x.terms {
        let (wa, ia) = alg.locate(a).expect("admissible");
        let (wb, ib) = alg.locate(b).expect("admissible");
        for ((c, d), cy) in &y.terms {
            let (wc, ic) = alg.locate(c).expect("admissible");
            let (wd, id) = alg.locate(d).expect("admissible");
            let mut coeff = cx * cy;
            if parity.swap_is_negative(wb, wc) {
                coeff = -coeff;
            }
            let ac = alg.basis_product(wa, ia, wc, ic);
            if ac.is_empty() {
                continue;
            }
            let bd = alg.basis_product(wb, ib, wd, id);
            for (k, u) in ac {
                for (l, v) in bd {
                    let key = (
                        alg.basis(wa + wc)[*k].clone(),
                        alg.basis(wb + wd)[*l].clone(),
                    );
                    add_pair(&mut terms, key, u * v * &coeff);
                }
            }
        }
    }
    Ok(TensorElement {
        presentation: x.presentation,
        terms,
    })
}

/// Restriction to the diagonal: `a ⊗ b ↦ ab`.
pub fn diagonal_restriction(alg: &ArnoldAlgebra, x: &TensorElement) -> Result<AlgebraElement, AlgebraError> {
    check(alg, x.presentation)?;
    let mut acc = AlgebraElement::zero(x.presentation);
    for ((a, b), c) in &x.terms {
        let (wa, ia) = alg.locate(a).expect("admissible");
        let (wb, ib) = alg.locate(b).expect("admissible");
        let prod = alg.basis_product(wa, ia, wb, ib);
        let scaled: Vec<(usize, BigInt)> = prod.iter().map(|(k, u)| (*k, u * c)).collect();
        acc = acc.add(&alg.element(wa + wb, &scaled))?;
    }
    Ok(acc)
}

/// The zero-divisor `v ⊗ 1 - 1 ⊗ v` attached to a homogeneous class.
pub fn bar(v: &AlgebraElement) -> Result<TensorElement, AlgebraError> {
    if v.grading() == Grading::Mixed {
        return Err(AlgebraError::NotHomogeneous);
    }
    TensorElement::left(v).sub(&TensorElement::right(v))
}

/// The graded swap `a ⊗ b ↦ (-1)^{|a||b|} b ⊗ a`.
pub fn koszul_swap(x: &TensorElement) -> TensorElement {
    let parity = x.presentation.parity();
    let mut terms = TensorTerms::new();
    for ((a, b), c) in &x.terms {
        let c = if parity.swap_is_negative(a.weight(), b.weight()) {
            -c
        } else {
            c.clone()
        };
        add_pair(&mut terms, (b.clone(), a.clone()), c);
    }
    TensorElement {
        presentation: x.presentation,
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arnold::build_presentation;

    fn gen(p: Presentation, i: u32, j: u32) -> AlgebraElement {
        AlgebraElement::generator(p, i, j).unwrap()
    }

    #[test]
    fn koszul_sign_instances() {
        for (m, sign) in [(2, -1), (3, 1)] {
            let p = build_presentation(2, m).unwrap();
            let alg = ArnoldAlgebra::new(p);
            let e = gen(p, 1, 2);
            let prod = tensor_multiply(&alg, &TensorElement::right(&e), &TensorElement::left(&e)).unwrap();
            let ee = TensorElement::cross(&e, &e).unwrap();
            assert_eq!(prod, ee.scale(&BigInt::from(sign)));
        }
    }

    #[test]
    fn bar_square_parity_dichotomy() {
        // odd degree generator: vanishes
        for m in [2, 4, 6] {
            let p = build_presentation(2, m).unwrap();
            let alg = ArnoldAlgebra::new(p);
            let b = bar(&gen(p, 1, 2)).unwrap();
            assert!(tensor_multiply(&alg, &b, &b).unwrap().is_zero());
        }
        // even degree generator: -2 e ⊗ e
        for m in [3, 5] {
            let p = build_presentation(2, m).unwrap();
            let alg = ArnoldAlgebra::new(p);
            let e = gen(p, 1, 2);
            let b = bar(&e).unwrap();
            let sq = tensor_multiply(&alg, &b, &b).unwrap();
            assert_eq!(sq, TensorElement::cross(&e, &e).unwrap().scale(&BigInt::from(-2)));
        }
    }

    #[test]
    fn diagonal_examples() {
        let p = build_presentation(2, 3).unwrap();
        let alg = ArnoldAlgebra::new(p);
        let e = gen(p, 1, 2);
        assert!(diagonal_restriction(&alg, &bar(&e).unwrap()).unwrap().is_zero());
        assert!(diagonal_restriction(&alg, &TensorElement::cross(&e, &e).unwrap())
            .unwrap()
            .is_zero());

        let p = build_presentation(3, 2).unwrap();
        let alg = ArnoldAlgebra::new(p);
        let x = TensorElement::cross(&gen(p, 1, 2), &gen(p, 1, 3)).unwrap();
        let expected = p
            .straighten(&[crate::arnold::Edge::new(1, 2).unwrap(), crate::arnold::Edge::new(1, 3).unwrap()])
            .unwrap();
        assert_eq!(diagonal_restriction(&alg, &x).unwrap(), expected);
    }

    #[test]
    fn bar_edge_cases() {
        let p = build_presentation(3, 3).unwrap();
        assert!(bar(&AlgebraElement::zero(p)).unwrap().is_zero());
        let mixed = gen(p, 1, 2).add(&AlgebraElement::one(p)).unwrap();
        assert_eq!(bar(&mixed), Err(AlgebraError::NotHomogeneous));
    }

    #[test]
    fn mismatched_presentations() {
        let p = build_presentation(3, 3).unwrap();
        let q = build_presentation(3, 5).unwrap();
        let alg = ArnoldAlgebra::new(p);
        let x = TensorElement::one(p);
        let y = TensorElement::one(q);
        assert!(tensor_multiply(&alg, &x, &y).is_err());
        assert!(diagonal_restriction(&alg, &y).is_err());
    }
}
