//! Straightening with a caller-chosen rule schedule.
//!
//! [`crate::arnold::straighten`] applies its rules in a fixed order. The
//! engine here picks, at every step, a random pending word and a random
//! applicable rule site, which is how confluence of the rewrite system is
//! exercised.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::arnold::{add_term, shared_upper_rewrite, AlgebraError, Edge, Monomial, Parity, Terms};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Drop a word containing the same edge at two positions.
    Repeat { first: usize, second: usize },
    /// Swap an adjacent out-of-order pair of distinct edges.
    Swap { at: usize },
    /// `e_ij e_kj -> e_ik e_kj - e_ik e_ij` on an adjacent pair.
    SharedUpper { at: usize },
}

/// Every rule site that applies to `word`.
pub fn applicable_rules(word: &[Edge]) -> Vec<Rule> {
    let mut rules = Vec::new();
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            if word[a] == word[b] {
                rules.push(Rule::Repeat { first: a, second: b });
            }
        }
    }
    for at in 0..word.len().saturating_sub(1) {
        let (l, r) = (word[at], word[at + 1]);
        if l > r {
            rules.push(Rule::Swap { at });
        } else if l.upper == r.upper && l.lower < r.lower {
            rules.push(Rule::SharedUpper { at });
        }
    }
    rules
}

/// Applies one rule, returning the resulting words with coefficients.
pub fn apply_rule(word: &[Edge], coeff: &BigInt, rule: Rule, parity: Parity) -> Vec<(Vec<Edge>, BigInt)> {
    match rule {
        Rule::Repeat { .. } => Vec::new(),
        Rule::Swap { at } => {
            let mut w = word.to_vec();
            w.swap(at, at + 1);
            let c = if parity == Parity::Anticommuting {
                -coeff
            } else {
                coeff.clone()
            };
            vec![(w, c)]
        }
        Rule::SharedUpper { at } => {
            let (first, second) = shared_upper_rewrite(word, at, word[at], word[at + 1]);
            vec![(first, coeff.clone()), (second, -coeff)]
        }
    }
}

/// Straightens `word`, choosing the next word and rule site uniformly at
/// random at every step.
pub fn straighten_randomized<R: Rng + ?Sized>(
    word: &[Edge],
    parity: Parity,
    rng: &mut R,
) -> Result<Terms, AlgebraError> {
    for e in word {
        Edge::new(e.lower, e.upper)?;
    }
    let mut pending: Vec<(Vec<Edge>, BigInt)> = vec![(word.to_vec(), BigInt::one())];
    let mut out = Terms::new();
    while !pending.is_empty() {
        let pick = rng.gen_range(0..pending.len());
        let (w, c) = pending.swap_remove(pick);
        let rules = applicable_rules(&w);
        if rules.is_empty() {
            debug_assert!(Monomial(w.clone()).is_admissible());
            add_term(&mut out, Monomial(w), c);
            continue;
        }
        let rule = rules[rng.gen_range(0..rules.len())];
        pending.extend(apply_rule(&w, &c, rule, parity));
    }
    Ok(out)
}
