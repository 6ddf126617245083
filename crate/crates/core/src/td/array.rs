use serde_json::{json, Value};

use super::check_distinct;
use crate::drinfeld::SplitSequence;
use crate::error::{ConditionClause, Error, Result};
use crate::poly::eta_at;
use crate::scalar::Field;

/// Eigenvalue sequence, dual eigenvalue sequence and split sequence of a TD system,
/// optionally with the `q` to use when it cannot be recovered from the sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterArray<F: Field> {
    pub thetas: Vec<F>,
    pub theta_stars: Vec<F>,
    pub zetas: SplitSequence<F>,
    pub q: Option<F>,
}

impl<F: Field> ParameterArray<F> {
    /// Checks equal lengths, mutual distinctness of both sequences and `ζ_0 = 1`.
    pub fn new(thetas: Vec<F>, theta_stars: Vec<F>, zetas: Vec<F>, q: Option<F>) -> Result<Self> {
        if thetas.is_empty() || thetas.len() != theta_stars.len() || thetas.len() != zetas.len() {
            return Err(Error::DimensionMismatch(format!(
                "parameter array lengths {}, {}, {}",
                thetas.len(),
                theta_stars.len(),
                zetas.len()
            )));
        }
        check_distinct(&thetas)?;
        check_distinct(&theta_stars)?;
        Ok(ParameterArray { thetas, theta_stars, zetas: SplitSequence::new(zetas)?, q })
    }

    pub fn d(&self) -> usize {
        self.thetas.len() - 1
    }

    /// Equality of the three sequences; `q` is ignored.
    pub fn same_array(&self, other: &Self) -> bool {
        let eq = |xs: &[F], ys: &[F]| {
            xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| x.approx_eq(y, x.magnitude().max(y.magnitude()).max(1.0)))
        };
        eq(&self.thetas, &other.thetas)
            && eq(&self.theta_stars, &other.theta_stars)
            && eq(self.zetas.zetas(), other.zetas.zetas())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Result<ParameterArray<G>> {
        ParameterArray::new(
            self.thetas.iter().map(&f).collect(),
            self.theta_stars.iter().map(&f).collect(),
            self.zetas.zetas().iter().map(&f).collect(),
            self.q.as_ref().map(&f),
        )
    }
}

/// Outcome of the existence criterion with the computed values.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionIICertificate<F: Field> {
    pub holds: bool,
    /// First failing clause.
    pub failed: Option<ConditionClause>,
    pub zeta0: F,
    pub zeta_d: F,
    /// `Σ η_{d-i}(θ_0) η*_{d-i}(θ*_0) ζ_i`
    pub sum: F,
    /// `|sum|` relative to the largest term.
    pub relative_sum: f64,
    /// Set on inexact backends when the sum is treated as zero only up to tolerance.
    pub warning: Option<String>,
}

impl<F: Field> ConditionIICertificate<F> {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "holds": self.holds,
            "zeta0": self.zeta0.to_string(),
            "zeta_d": self.zeta_d.to_string(),
            "sum": self.sum.to_string(),
            "relative_sum": self.relative_sum,
        });
        if let Some(c) = self.failed {
            v["reason"] = json!(c.reason_code());
        }
        if let Some(w) = &self.warning {
            v["warning"] = json!(w);
        }
        v
    }

    /// The certificate as a refusal when a clause fails.
    pub fn into_result(self) -> Result<Self> {
        match self.failed {
            None => Ok(self),
            Some(clause) => Err(Error::ConditionII { clause, certificate: self.to_json().to_string() }),
        }
    }
}

/// `ζ_0 = 1`, `ζ_d ≠ 0` and `Σ_{i=0}^d η_{d-i}(θ_0) η*_{d-i}(θ*_0) ζ_i ≠ 0`.
pub fn condition_ii<F: Field>(pa: &ParameterArray<F>) -> ConditionIICertificate<F> {
    let d = pa.d();
    let zs = pa.zetas.zetas();
    let th0 = &pa.thetas[0];
    let ts0 = &pa.theta_stars[0];
    let terms: Vec<F> =
        (0..=d).map(|i| eta_at(&pa.thetas, d - i, th0).mul(&eta_at(&pa.theta_stars, d - i, ts0)).mul(&zs[i])).collect();
    let sum = terms.iter().fold(th0.zero_like(), |acc, t| acc.add(t));
    let scale = terms.iter().map(|t| t.magnitude()).fold(1.0, f64::max);
    let zscale = zs.iter().map(|z| z.magnitude()).fold(1.0, f64::max);
    let zeta0 = zs[0].clone();
    let zeta_d = zs[d].clone();
    let mut warning = None;
    let failed = if !zeta0.approx_eq(&zeta0.one_like(), 1.0) {
        Some(ConditionClause::ZetaZero)
    } else if zeta_d.is_negligible(zscale) {
        Some(ConditionClause::ZetaDZero)
    } else if sum.is_negligible(scale) {
        if !F::EXACT {
            warning = Some(format!(
                "sum magnitude {:e} is below tolerance relative to term scale {:e}; treated as zero",
                sum.magnitude(),
                scale
            ));
        }
        Some(ConditionClause::SumZero)
    } else {
        None
    };
    ConditionIICertificate {
        holds: failed.is_none(),
        failed,
        zeta0,
        zeta_d,
        relative_sum: sum.magnitude() / scale,
        sum,
        warning,
    }
}
