//! Lower and upper bounds for `TC(F(R^m, n))` and the certificate that
//! collects them.
//!
//! `TC` is unreduced throughout: `TC(point) = 1`, `TC(S^1) = 2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arnold::{build_presentation, AlgebraError, ArnoldAlgebra};
use crate::field::{FieldError, FieldSpec, PrimeField, Rationals};
use crate::zero_divisors::{bar_product_witness, bar_span_dims, zero_divisor_power_dims, Caps, PowerStrategy, SearchError};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("ambient dimension must be at least 2, got {0}")]
    InvalidDimension(u32),
    #[error("point count must be at least 1, got {0}")]
    InvalidPointCount(u32),
    #[error("connectivity parameter s = {0} is below 2; the bound does not apply")]
    ConnectivityTooLow(u32),
    #[error("complex dimension must be at least 1 for this bound")]
    DimensionTooLow,
    #[error("s = {s} does not divide 2 * dim = {twice_dim}")]
    NotDivisible { s: u32, twice_dim: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `2n - 1` for odd `m`, `2n - 2` for even `m`; `1` for a single point.
pub fn closed_form_tc(m: u32, n: u32) -> Result<u32, BoundsError> {
    if m < 2 {
        return Err(BoundsError::InvalidDimension(m));
    }
    match n {
        0 => Err(BoundsError::InvalidPointCount(0)),
        1 => Ok(1),
        _ if m % 2 == 1 => Ok(2 * n - 1),
        _ => Ok(2 * n - 2),
    }
}

/// Upper bound `2 dim + 1` for any cell complex.
pub fn dimension_upper(dim: u32) -> u32 {
    2 * dim + 1
}

/// Upper bound for an `(s-1)`-connected complex: the largest integer strictly
/// below `(2 dim + 1)/s + 1`, which equals `r + 1` when `2 dim = r s`.
pub fn connectivity_upper(dim: u32, s: u32) -> Result<u32, BoundsError> {
    if s < 2 {
        return Err(BoundsError::ConnectivityTooLow(s));
    }
    if dim < 1 {
        return Err(BoundsError::DimensionTooLow);
    }
    // k < (2dim + 1 + s)/s  <=>  k s <= 2dim + s  <=>  k <= floor(2dim/s) + 1
    Ok(2 * dim / s + 1)
}

/// Sharp form of the connectivity bound for torsion-free `H_s`: with
/// `r = 2 dim / s`, `TC = r + 1` exactly when some product of `r` bar classes
/// of degree `s` is nonzero; otherwise `TC <= r`.
pub fn sharpness_upper(dim: u32, s: u32, bar_len: usize) -> Result<u32, BoundsError> {
    if s < 2 {
        return Err(BoundsError::ConnectivityTooLow(s));
    }
    if dim < 1 {
        return Err(BoundsError::DimensionTooLow);
    }
    if !(2 * dim).is_multiple_of(s) {
        return Err(BoundsError::NotDivisible { s, twice_dim: 2 * dim });
    }
    let r = 2 * dim / s;
    Ok(if bar_len >= r as usize { r + 1 } else { r })
}

/// `F(C, n) ≃ Y × S^1` with `dim Y <= n - 2`, so
/// `TC <= (2(n-2) + 1) + TC(S^1) - 1 = 2n - 2`.
pub fn product_upper_m2(n: u32) -> Result<u32, BoundsError> {
    if n < 2 {
        return Err(BoundsError::InvalidPointCount(n));
    }
    let tc_circle = 2;
    Ok(dimension_upper(n - 2) + tc_circle - 1)
}

/// A nonzero product of `zcl` zero-divisors forces `TC > zcl`.
pub fn lower_from_zcl(zcl: usize) -> u32 {
    zcl as u32 + 1
}

/// Which argument produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    ZeroDivisorCuplength,
    Dimension,
    Connectivity,
    BarSharpness,
    ProductInequality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Pinched,
    Unpinched,
    Contradiction,
    CapExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperCandidate {
    pub source: BoundSource,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub tag: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub schema_version: u32,
    pub m: u32,
    pub n: u32,
    pub lower: Option<u32>,
    pub lower_source: Option<BoundSource>,
    pub upper: Option<u32>,
    pub upper_source: Option<BoundSource>,
    pub closed_form: u32,
    pub pinched: bool,
    pub status: ReportStatus,
    pub field_used: FieldSpec,
    pub upper_candidates: Vec<UpperCandidate>,
    pub diagnostics: Vec<Diagnostic>,
    pub warnings: Vec<String>,
}

impl BoundsReport {
    fn diag(&mut self, tag: &str, value: impl ToString) {
        self.diagnostics.push(Diagnostic {
            tag: tag.to_string(),
            value: value.to_string(),
        });
    }

    pub fn diagnostic(&self, tag: &str) -> Option<&str> {
        self.diagnostics
            .iter()
            .find(|d| d.tag == tag)
            .map(|d| d.value.as_str())
    }

    /// One stable line for scripting.
    pub fn summary_line(&self) -> String {
        let show = |x: Option<u32>| x.map_or("unknown".to_string(), |v| v.to_string());
        format!(
            "m={} n={} field={} lower={} upper={} closed_form={} pinched={} status={}",
            self.m,
            self.n,
            self.field_used,
            show(self.lower),
            show(self.upper),
            self.closed_form,
            self.pinched,
            serde_json::to_value(self.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        )
    }
}

/// Homotopy dimension used for the upper bounds: `(m-1)(n-1)` for `m >= 3`,
/// `n - 1` for the plane. Taken as given, not computed.
pub fn homotopy_dimension(m: u32, n: u32) -> u32 {
    if m == 2 {
        n - 1
    } else {
        (m - 1) * (n - 1)
    }
}

/// Computes every applicable bound for `TC(F(R^m, n))`.
///
/// The lower bound uses zero-divisor cup-length over the requested field. The
/// sharpness bound always uses rational bar spans: the cohomology is
/// torsion-free, so rational and integral nonvanishing agree, whereas a
/// product that vanishes mod `p` may still be integrally nonzero.
pub fn assemble_report(m: u32, n: u32, field: FieldSpec, caps: &Caps) -> Result<BoundsReport, BoundsError> {
    let closed_form = closed_form_tc(m, n)?;
    let presentation = build_presentation(n.into(), m.into())?;
    if let FieldSpec::Prime(p) = field {
        PrimeField::new(p)?;
    }
    let mut report = BoundsReport {
        schema_version: REPORT_SCHEMA_VERSION,
        m,
        n,
        lower: None,
        lower_source: None,
        upper: None,
        upper_source: None,
        closed_form,
        pinched: false,
        status: ReportStatus::Unpinched,
        field_used: field,
        upper_candidates: Vec::new(),
        diagnostics: Vec::new(),
        warnings: Vec::new(),
    };
    if field.characteristic() == 2 {
        report.warnings.push(
            "characteristic 2 kills bar(e)^2 = -2 e(x)e, so lower bounds for odd m are weaker than over q"
                .to_string(),
        );
    }

    let dim = homotopy_dimension(m, n);
    report.diag("homotopy_dimension (assumed)", dim);
    let mut candidates = vec![UpperCandidate {
        source: BoundSource::Dimension,
        value: dimension_upper(dim),
    }];
    if m >= 3 && dim >= 1 {
        let s = m - 1;
        report.diag("connectivity_s", s);
        candidates.push(UpperCandidate {
            source: BoundSource::Connectivity,
            value: connectivity_upper(dim, s)?,
        });
    }
    if m == 2 && n >= 2 {
        candidates.push(UpperCandidate {
            source: BoundSource::ProductInequality,
            value: product_upper_m2(n)?,
        });
    }

    let within_caps = match caps.check(presentation) {
        Ok(()) => true,
        Err(SearchError::CapExceeded { .. }) => {
            report.status = ReportStatus::CapExceeded;
            report.diag("zero_divisor_cuplength", "not computed (cap exceeded)");
            report.warnings.push(format!("F(R^{m}, {n}) exceeds caps {caps:?}; cohomological bounds not computed"));
            false
        }
        Err(SearchError::Algebra(e)) => return Err(e.into()),
    };

    if within_caps {
        let alg = ArnoldAlgebra::new(presentation);
        alg.freeze();
        let powers = match field {
            FieldSpec::Rational => zero_divisor_power_dims(&alg, Rationals, PowerStrategy::IdealGenerators),
            FieldSpec::Prime(p) => zero_divisor_power_dims(&alg, PrimeField::new(p)?, PowerStrategy::IdealGenerators),
        };
        let zcl = powers.len();
        report.diag("zero_divisor_cuplength", zcl);
        report.diag(
            "zero_divisor_power_dims",
            format!("{:?}", powers.iter().map(|d| d.iter().sum::<usize>()).collect::<Vec<_>>()),
        );
        report.lower = Some(lower_from_zcl(zcl));
        report.lower_source = Some(BoundSource::ZeroDivisorCuplength);

        if m >= 3 && dim >= 1 {
            let s = m - 1;
            let bar_dims = bar_span_dims(&alg, Rationals);
            let bar_len = bar_dims.len();
            report.diag("bar_span_length (over q)", bar_len);
            report.diag("bar_span_dims (over q)", format!("{bar_dims:?}"));
            if let Some(w) = bar_product_witness(&alg, Rationals, bar_len) {
                let names: Vec<String> = w.iter().map(ToString::to_string).collect();
                report.diag("bar_product_witness", names.join(" "));
            }
            candidates.push(UpperCandidate {
                source: BoundSource::BarSharpness,
                value: sharpness_upper(dim, s, bar_len)?,
            });
        }
    }

    // ties go to the most specific argument
    let preference = [
        BoundSource::BarSharpness,
        BoundSource::ProductInequality,
        BoundSource::Connectivity,
        BoundSource::Dimension,
    ];
    let best = preference
        .iter()
        .filter_map(|src| candidates.iter().find(|c| c.source == *src))
        .min_by_key(|c| c.value)
        .cloned()
        .expect("dimension bound always applies");
    report.upper = Some(best.value);
    report.upper_source = Some(best.source);
    report.upper_candidates = candidates;

    if report.status != ReportStatus::CapExceeded {
        let (lower, upper) = (report.lower.unwrap(), best.value);
        report.pinched = lower == upper;
        report.status = if lower > upper || lower > closed_form || upper < closed_form {
            ReportStatus::Contradiction
        } else if report.pinched {
            ReportStatus::Pinched
        } else {
            ReportStatus::Unpinched
        };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_tc(3, 2), Ok(3));
        assert_eq!(closed_form_tc(4, 3), Ok(4));
        assert_eq!(closed_form_tc(2, 4), Ok(6));
        assert_eq!(closed_form_tc(7, 1), Ok(1));
        assert_eq!(closed_form_tc(1, 3), Err(BoundsError::InvalidDimension(1)));
        for m in 2..10 {
            for n in 1..8 {
                assert!(closed_form_tc(m, n).unwrap() <= closed_form_tc(m, n + 1).unwrap());
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension_upper(0), 1);
        assert_eq!(dimension_upper(2 * 2), 9);
        assert_eq!(dimension_upper(1), 3);
    }

    /// Largest integer strictly below `(2 dim + 1)/s + 1`, by exact rationals.
    fn strict_floor_oracle(dim: u32, s: u32) -> u32 {
        let bound = Ratio::new(2 * dim as i64 + 1, s as i64) + Ratio::from_integer(1);
        let ceil = bound.ceil().to_integer();
        (ceil - 1) as u32
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(connectivity_upper(3 * 2, 3), Ok(5));
        assert_eq!(connectivity_upper(2, 2), Ok(3));
        assert_eq!(connectivity_upper(3, 2), Ok(4));
        assert_eq!(connectivity_upper(3, 1), Err(BoundsError::ConnectivityTooLow(1)));
        for dim in 1..40 {
            for s in 2..12 {
                assert_eq!(connectivity_upper(dim, s).unwrap(), strict_floor_oracle(dim, s), "dim={dim} s={s}");
            }
        }
    }

    #[test]
    fn sharpness_examples() {
        assert_eq!(sharpness_upper(6, 3, 3), Ok(4));
        assert_eq!(sharpness_upper(4, 2, 4), Ok(5));
        assert_eq!(sharpness_upper(5, 5, 1), Ok(2));
        assert_eq!(
            sharpness_upper(3, 4, 9),
            Err(BoundsError::NotDivisible { s: 4, twice_dim: 6 })
        );
        for dim in 1..20 {
            for s in (2..10).filter(|s| (2 * dim) % s == 0) {
                for len in 0..12 {
                    assert!(sharpness_upper(dim, s, len).unwrap() <= connectivity_upper(dim, s).unwrap());
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_upper_m2(2), Ok(2));
        assert_eq!(product_upper_m2(3), Ok(4));
        assert_eq!(product_upper_m2(4), Ok(6));
        assert!(product_upper_m2(1).is_err());
        for n in 2..20 {
            assert!(product_upper_m2(n).unwrap() < dimension_upper(n - 1));
        }
    }

    #[test]
    fn lower_examples() {
        assert_eq!(lower_from_zcl(0), 1);
        assert_eq!(lower_from_zcl(2), 3);
        assert_eq!(lower_from_zcl(3), 4);
    }

    #[test]
    fn report_examples() {
        let caps = Caps::default();
        let r = assemble_report(4, 3, FieldSpec::Rational, &caps).unwrap();
        assert_eq!((r.lower, r.upper, r.closed_form, r.pinched), (Some(4), Some(4), 4, true));
        assert_eq!(r.upper_source, Some(BoundSource::BarSharpness));

        let r = assemble_report(5, 2, FieldSpec::Rational, &caps).unwrap();
        assert_eq!((r.lower, r.upper, r.pinched), (Some(3), Some(3), true));

        let r = assemble_report(2, 3, FieldSpec::Rational, &caps).unwrap();
        assert_eq!((r.lower, r.upper, r.pinched), (Some(4), Some(4), true));
        assert_eq!(r.upper_source, Some(BoundSource::ProductInequality));
        assert_eq!(r.status, ReportStatus::Pinched);
    }

    #[test]
    fn single_point_report() {
        let r = assemble_report(3, 1, FieldSpec::Rational, &Caps::default()).unwrap();
        assert_eq!((r.lower, r.upper, r.closed_form), (Some(1), Some(1), 1));
        assert_eq!(r.status, ReportStatus::Pinched);
    }

    #[test]
    fn cap_exceeded_report_has_unknown_lower() {
        let caps = Caps {
            max_n: 2,
            ..Caps::default()
        };
        let r = assemble_report(3, 3, FieldSpec::Rational, &caps).unwrap();
        assert_eq!(r.status, ReportStatus::CapExceeded);
        assert_eq!(r.lower, None);
        assert!(!r.pinched);
    }

    #[test]
    fn characteristic_two_report() {
        let r = assemble_report(3, 2, FieldSpec::Prime(2), &Caps::default()).unwrap();
        assert_eq!(r.lower, Some(2));
        assert_eq!(r.upper, Some(3));
        assert_eq!(r.status, ReportStatus::Unpinched);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn report_json_roundtrip() {
        let r = assemble_report(3, 3, FieldSpec::Rational, &Caps::default()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: BoundsReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
