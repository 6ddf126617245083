use std::fmt;

use dashu_ratio::RBig;

use super::{BigComplex, Field, PrecisionConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(i64),
}

/// A scalar tagged with its backend, for callers that choose the backend at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldScalar {
    Exact(RBig),
    Complex(BigComplex),
}

impl FieldScalar {
    pub fn backend(&self) -> Backend {
        match self {
            FieldScalar::Exact(_) => Backend::Exact,
            FieldScalar::Complex(_) => Backend::Complex,
        }
    }

    pub fn parse(s: &str, backend: Backend, cfg: &PrecisionConfig) -> Result<Self> {
        Ok(match backend {
            Backend::Exact => FieldScalar::Exact(RBig::parse(s, &())?),
            Backend::Complex => FieldScalar::Complex(BigComplex::parse(s, cfg)?),
        })
    }

    /// Applies `op`; unary operations ignore `y`.
    pub fn field_arith(&self, y: Option<&FieldScalar>, op: ArithOp) -> Result<FieldScalar> {
        use FieldScalar::*;
        match op {
            ArithOp::Neg => return self.map(|a| Ok(a.neg()), |a| Ok(a.neg())),
            ArithOp::Inv => return self.map(|a| a.inv(), |a| a.inv()),
            ArithOp::Pow(n) => return self.map(|a| a.powi(n), |a| a.powi(n)),
            _ => {}
        }
        let y = y.ok_or_else(|| Error::InvalidParameters("binary operation needs two operands".into()))?;
        match (self, y) {
            (Exact(a), Exact(b)) => Ok(Exact(binary(a, b, op)?)),
            (Complex(a), Complex(b)) => Ok(Complex(binary(a, b, op)?)),
            _ => Err(Error::BackendMismatch),
        }
    }

    pub fn is_zero(&self, scale: f64) -> bool {
        match self {
            FieldScalar::Exact(a) => a.is_negligible(scale),
            FieldScalar::Complex(a) => a.is_negligible(scale),
        }
    }

    fn map(
        &self,
        fe: impl FnOnce(&RBig) -> Result<RBig>,
        fc: impl FnOnce(&BigComplex) -> Result<BigComplex>,
    ) -> Result<FieldScalar> {
        Ok(match self {
            FieldScalar::Exact(a) => FieldScalar::Exact(fe(a)?),
            FieldScalar::Complex(a) => FieldScalar::Complex(fc(a)?),
        })
    }
}

fn binary<F: Field>(a: &F, b: &F, op: ArithOp) -> Result<F> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
        _ => unreachable!("unary op handled by caller"),
    })
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Exact(a) => a.fmt(f),
            FieldScalar::Complex(a) => a.fmt(f),
        }
    }
}
