//! Versioned JSON export of structure constants, and verified reload.
//!
//! Document layout:
//!
//! ```json
//! {"schema_version":1,"n":3,"m":2,
//!  "basis":[[],[[1,2]],...],
//!  "products":[[i,j,[[k,"coeff"],...]],...],
//!  "checksum":"<sha256 hex>"}
//! ```
//!
//! Indices refer to the flattened basis (weight-major). Only nonzero products
//! are listed. Coefficients are decimal strings. The checksum covers every
//! other field.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arnold::{straighten, AlgebraError, ArnoldAlgebra, IntCoords, Monomial, Presentation};

pub const ALGEBRA_SCHEMA_VERSION: u32 = 1;

/// Products re-derived from scratch on every load.
pub const LOAD_SAMPLE_SIZE: usize = 100;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("cache is for F(R^{found_m}, {found_n}) but F(R^{m}, {n}) was requested")]
    KeyMismatch { n: u32, m: u32, found_n: u32, found_m: u32 },
    #[error("checksum mismatch: stored {stored}, computed {computed}")]
    Checksum { stored: String, computed: String },
    #[error("basis in cache differs from the admissible basis")]
    Basis,
    #[error("malformed product entry: {0}")]
    Malformed(String),
    #[error("structure constant for basis pair ({i}, {j}) does not match re-derivation")]
    Mismatch { i: usize, j: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type ProductEntry = (usize, usize, Vec<(usize, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub schema_version: u32,
    pub n: u32,
    pub m: u32,
    pub basis: Vec<Monomial>,
    pub products: Vec<ProductEntry>,
    pub checksum: String,
}

#[derive(Serialize)]
struct Unsigned<'a> {
    schema_version: u32,
    n: u32,
    m: u32,
    basis: &'a [Monomial],
    products: &'a [ProductEntry],
}

impl AlgebraDocument {
    pub fn compute_checksum(&self) -> String {
        let body = Unsigned {
            schema_version: self.schema_version,
            n: self.n,
            m: self.m,
            basis: &self.basis,
            products: &self.products,
        };
        let bytes = serde_json::to_vec(&body).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CacheError> {
        Ok(serde_json::from_str(text)?)
    }

    fn parsed_products(&self) -> Result<BTreeMap<(usize, usize), IntCoords>, CacheError> {
        let total = self.basis.len();
        let mut out = BTreeMap::new();
        for (i, j, coords) in &self.products {
            if *i >= total || *j >= total {
                return Err(CacheError::Malformed(format!("index out of range in ({i}, {j})")));
            }
            let mut parsed = Vec::with_capacity(coords.len());
            for (k, c) in coords {
                let c: BigInt = c
                    .parse()
                    .map_err(|_| CacheError::Malformed(format!("coefficient `{c}`")))?;
                if *k >= total {
                    return Err(CacheError::Malformed(format!("index {k} out of range")));
                }
                parsed.push((*k, c));
            }
            out.insert((*i, *j), parsed);
        }
        Ok(out)
    }
}

/// Serializes the full structure-constant table of `alg`.
pub fn export_algebra(alg: &ArnoldAlgebra) -> AlgebraDocument {
    let p = alg.presentation();
    let basis: Vec<Monomial> = (0..=alg.top_weight())
        .flat_map(|w| alg.basis(w).iter().cloned())
        .collect();
    let products = alg
        .structure_table()
        .into_iter()
        .map(|(i, j, coords)| (i, j, coords.into_iter().map(|(k, c)| (k, c.to_string())).collect()))
        .collect();
    let mut doc = AlgebraDocument {
        schema_version: ALGEBRA_SCHEMA_VERSION,
        n: p.n,
        m: p.m,
        basis,
        products,
        checksum: String::new(),
    };
    doc.checksum = doc.compute_checksum();
    doc
}

fn fresh_product(p: Presentation, a: &Monomial, b: &Monomial, alg: &ArnoldAlgebra) -> Result<IntCoords, CacheError> {
    let mut word = a.0.clone();
    word.extend_from_slice(&b.0);
    let terms = straighten(&word, p.parity())?;
    let mut coords: IntCoords = terms
        .into_iter()
        .map(|(m, c)| {
            let (w, i) = alg.locate(&m).expect("normal form is admissible");
            (alg.global_index(w, i), c)
        })
        .collect();
    coords.sort_by_key(|(k, _)| *k);
    Ok(coords)
}

/// Structural checks shared by load and full verification: schema, key,
/// checksum and basis.
pub fn check_header(doc: &AlgebraDocument, expected: Presentation) -> Result<(), CacheError> {
    if doc.schema_version != ALGEBRA_SCHEMA_VERSION {
        return Err(CacheError::SchemaVersion {
            found: doc.schema_version,
            expected: ALGEBRA_SCHEMA_VERSION,
        });
    }
    if doc.n != expected.n || doc.m != expected.m {
        return Err(CacheError::KeyMismatch {
            n: expected.n,
            m: expected.m,
            found_n: doc.n,
            found_m: doc.m,
        });
    }
    let computed = doc.compute_checksum();
    if computed != doc.checksum {
        return Err(CacheError::Checksum {
            stored: doc.checksum.clone(),
            computed,
        });
    }
    Ok(())
}

fn check_basis(doc: &AlgebraDocument, alg: &ArnoldAlgebra) -> Result<(), CacheError> {
    let fresh: Vec<&Monomial> = (0..=alg.top_weight()).flat_map(|w| alg.basis(w).iter()).collect();
    if fresh.len() != doc.basis.len() || fresh.iter().zip(&doc.basis).any(|(a, b)| *a != b) {
        return Err(CacheError::Basis);
    }
    Ok(())
}

/// Loads a document for `expected`, re-deriving [`LOAD_SAMPLE_SIZE`] randomly
/// chosen products, and returns an algebra whose table is taken from the
/// document.
pub fn load_algebra<R: Rng + ?Sized>(
    doc: &AlgebraDocument,
    expected: Presentation,
    rng: &mut R,
) -> Result<ArnoldAlgebra, CacheError> {
    check_header(doc, expected)?;
    let alg = ArnoldAlgebra::new(expected);
    check_basis(doc, &alg)?;
    let table = doc.parsed_products()?;
    let pairs = admissible_pairs(&alg);
    for _ in 0..LOAD_SAMPLE_SIZE.min(pairs.len()) {
        let (i, j) = pairs[rng.gen_range(0..pairs.len())];
        let stored = table.get(&(i, j)).cloned().unwrap_or_default();
        if stored != fresh_product(expected, &doc.basis[i], &doc.basis[j], &alg)? {
            return Err(CacheError::Mismatch { i, j });
        }
    }
    install(&alg, &table)?;
    Ok(alg)
}

/// Every basis pair whose product can be nonzero.
fn admissible_pairs(alg: &ArnoldAlgebra) -> Vec<(usize, usize)> {
    let top = alg.top_weight();
    let mut pairs = Vec::new();
    for wa in 0..=top {
        for wb in 0..=top - wa {
            for i in 0..alg.dim(wa) {
                for j in 0..alg.dim(wb) {
                    pairs.push((alg.global_index(wa, i), alg.global_index(wb, j)));
                }
            }
        }
    }
    pairs
}

fn install(alg: &ArnoldAlgebra, table: &BTreeMap<(usize, usize), IntCoords>) -> Result<(), CacheError> {
    let top = alg.top_weight();
    for wa in 0..=top {
        for wb in 0..=top - wa {
            let mut block = Vec::with_capacity(alg.dim(wa) * alg.dim(wb));
            for i in 0..alg.dim(wa) {
                for j in 0..alg.dim(wb) {
                    let key = (alg.global_index(wa, i), alg.global_index(wb, j));
                    let mut local = Vec::new();
                    for (k, c) in table.get(&key).cloned().unwrap_or_default() {
                        let (w, idx) = alg.from_global(k);
                        if w != wa + wb {
                            return Err(CacheError::Malformed(format!(
                                "product ({}, {}) lands in weight {w}, expected {}",
                                key.0,
                                key.1,
                                wa + wb
                            )));
                        }
                        local.push((idx, c));
                    }
                    block.push(local);
                }
            }
            alg.install_block(wa, wb, block);
        }
    }
    Ok(())
}

/// Re-derives every product in the document; returns the mismatching pairs.
/// Schema and key are checked, the checksum is not, so that a tampered table
/// is reported entry by entry.
pub fn verify_all(doc: &AlgebraDocument) -> Result<Vec<(usize, usize)>, CacheError> {
    if doc.schema_version != ALGEBRA_SCHEMA_VERSION {
        return Err(CacheError::SchemaVersion {
            found: doc.schema_version,
            expected: ALGEBRA_SCHEMA_VERSION,
        });
    }
    let p = crate::arnold::build_presentation(doc.n.into(), doc.m.into())?;
    let alg = ArnoldAlgebra::new(p);
    check_basis(doc, &alg)?;
    let table = doc.parsed_products()?;
    let mut bad = Vec::new();
    for (i, j) in admissible_pairs(&alg) {
        let stored = table.get(&(i, j)).cloned().unwrap_or_default();
        if stored != fresh_product(p, &doc.basis[i], &doc.basis[j], &alg)? {
            bad.push((i, j));
        }
    }
    // entries for pairs above the top weight must not exist
    for &(i, j) in table.keys() {
        let (wa, _) = alg.from_global(i);
        let (wb, _) = alg.from_global(j);
        if wa + wb > alg.top_weight() {
            bad.push((i, j));
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arnold::build_presentation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn doc(n: i64, m: i64) -> AlgebraDocument {
        export_algebra(&ArnoldAlgebra::new(build_presentation(n, m).unwrap()))
    }

    #[test]
    fn reexport_is_byte_identical() {
        let d = doc(3, 2);
        let text = d.to_json();
        let parsed = AlgebraDocument::from_json(&text).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let alg = load_algebra(&parsed, build_presentation(3, 2).unwrap(), &mut rng).unwrap();
        assert_eq!(export_algebra(&alg).to_json(), text);
    }

    #[test]
    fn key_mismatch_rejected() {
        let d = doc(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = load_algebra(&d, build_presentation(3, 4).unwrap(), &mut rng).unwrap_err();
        assert!(matches!(err, CacheError::KeyMismatch { .. }));
    }

    #[test]
    fn four_point_basis_has_24_monomials() {
        assert_eq!(doc(4, 2).basis.len(), 24);
    }

    #[test]
    fn schema_version_checked() {
        let mut d = doc(2, 3);
        d.schema_version = 99;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            load_algebra(&d, build_presentation(2, 3).unwrap(), &mut rng),
            Err(CacheError::SchemaVersion { found: 99, .. })
        ));
    }

    #[test]
    fn tampering_detected() {
        let mut d = doc(3, 3);
        d.products[5].2[0].1 = "17".into();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            load_algebra(&d, build_presentation(3, 3).unwrap(), &mut rng),
            Err(CacheError::Checksum { .. })
        ));
        let (i, j, _) = d.products[5].clone();
        assert_eq!(verify_all(&d).unwrap(), vec![(i, j)]);

        // a consistent checksum does not save a wrong table
        d.checksum = d.compute_checksum();
        let all: Vec<_> = (0..50u64)
            .map(|s| load_algebra(&d, build_presentation(3, 3).unwrap(), &mut ChaCha8Rng::seed_from_u64(s)))
            .collect();
        assert!(all.iter().any(|r| matches!(r, Err(CacheError::Mismatch { .. }))));
    }

    #[test]
    fn clean_document_verifies() {
        assert!(verify_all(&doc(4, 4)).unwrap().is_empty());
    }
}
