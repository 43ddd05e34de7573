use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::DomainFault;

use super::jet::Jet3;

/// Numbers an expression tree can be evaluated over: plain `f64` for the
/// finite-difference path and [`Jet3`] for exact derivatives.
pub trait ChartScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn real(&self) -> f64;
    fn try_div(self, den: Self) -> Result<Self, DomainFault>;
    fn try_sqrt(self) -> Result<Self, DomainFault>;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
}

impl ChartScalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn real(&self) -> f64 {
        *self
    }
    fn try_div(self, den: Self) -> Result<Self, DomainFault> {
        if den.abs() <= 1e-12 {
            Err(DomainFault::DivisionByZero(den))
        } else {
            Ok(self / den)
        }
    }
    fn try_sqrt(self) -> Result<Self, DomainFault> {
        if self > 0.0 {
            Ok(libm::sqrt(self))
        } else {
            Err(DomainFault::SqrtNonPositive(self))
        }
    }
    fn sin(self) -> Self {
        libm::sin(self)
    }
    fn cos(self) -> Self {
        libm::cos(self)
    }
    fn sinh(self) -> Self {
        libm::sinh(self)
    }
    fn cosh(self) -> Self {
        libm::cosh(self)
    }
}

impl ChartScalar for Jet3 {
    fn constant(c: f64) -> Self {
        Jet3::constant(c)
    }
    fn real(&self) -> f64 {
        self.value()
    }
    fn try_div(self, den: Self) -> Result<Self, DomainFault> {
        Jet3::try_div(&self, &den)
    }
    fn try_sqrt(self) -> Result<Self, DomainFault> {
        Jet3::try_sqrt(&self)
    }
    fn sin(self) -> Self {
        Jet3::sin(&self)
    }
    fn cos(self) -> Self {
        Jet3::cos(&self)
    }
    fn sinh(self) -> Self {
        Jet3::sinh(&self)
    }
    fn cosh(self) -> Self {
        Jet3::cosh(&self)
    }
}

/// Expression tree over chart variables `u_0, u_1, ...`.
///
/// Trees are immutable and share subtrees through `Arc`, so cloning is cheap.
/// Nothing is simplified: what is built is what gets evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Sqrt(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
    Sinh(Arc<Expr>),
    Cosh(Arc<Expr>),
}

impl Expr {
    pub fn c(value: f64) -> Self {
        Expr::Const(value)
    }

    pub fn var(index: usize) -> Self {
        Expr::Var(index)
    }

    pub fn sqrt(self) -> Self {
        Expr::Sqrt(Arc::new(self))
    }

    pub fn sin(self) -> Self {
        Expr::Sin(Arc::new(self))
    }

    pub fn cos(self) -> Self {
        Expr::Cos(Arc::new(self))
    }

    pub fn sinh(self) -> Self {
        Expr::Sinh(Arc::new(self))
    }

    pub fn cosh(self) -> Self {
        Expr::Cosh(Arc::new(self))
    }

    pub fn square(self) -> Self {
        self.clone() * self
    }

    /// Left-folded sum; the empty sum is `Const(0)`.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Self {
        let mut iter = terms.into_iter();
        match iter.next() {
            None => Expr::Const(0.0),
            Some(first) => iter.fold(first, |acc, t| acc + t),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Sqrt(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Sinh(a) | Expr::Cosh(a) => a.max_var(),
        }
    }

    pub fn eval<S: ChartScalar>(&self, inputs: &[S]) -> Result<S, DomainFault> {
        Ok(match self {
            Expr::Const(c) => S::constant(*c),
            Expr::Var(i) => *inputs
                .get(*i)
                .ok_or(DomainFault::UnboundVariable { index: *i, available: inputs.len() })?,
            Expr::Add(a, b) => a.eval(inputs)? + b.eval(inputs)?,
            Expr::Sub(a, b) => a.eval(inputs)? - b.eval(inputs)?,
            Expr::Mul(a, b) => a.eval(inputs)? * b.eval(inputs)?,
            Expr::Div(a, b) => a.eval(inputs)?.try_div(b.eval(inputs)?)?,
            Expr::Sqrt(a) => a.eval(inputs)?.try_sqrt()?,
            Expr::Sin(a) => a.eval(inputs)?.sin(),
            Expr::Cos(a) => a.eval(inputs)?.cos(),
            Expr::Sinh(a) => a.eval(inputs)?.sinh(),
            Expr::Cosh(a) => a.eval(inputs)?.cosh(),
        })
    }

    /// Replace every `Var(i)` with `args[i]`, producing the literal composed tree.
    pub fn substitute(&self, args: &[Expr]) -> Result<Expr, DomainFault> {
        let sub = |e: &Arc<Expr>| e.substitute(args).map(Arc::new);
        Ok(match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => args
                .get(*i)
                .cloned()
                .ok_or(DomainFault::UnboundVariable { index: *i, available: args.len() })?,
            Expr::Add(a, b) => Expr::Add(sub(a)?, sub(b)?),
            Expr::Sub(a, b) => Expr::Sub(sub(a)?, sub(b)?),
            Expr::Mul(a, b) => Expr::Mul(sub(a)?, sub(b)?),
            Expr::Div(a, b) => Expr::Div(sub(a)?, sub(b)?),
            Expr::Sqrt(a) => Expr::Sqrt(sub(a)?),
            Expr::Sin(a) => Expr::Sin(sub(a)?),
            Expr::Cos(a) => Expr::Cos(sub(a)?),
            Expr::Sinh(a) => Expr::Sinh(sub(a)?),
            Expr::Cosh(a) => Expr::Cosh(sub(a)?),
        })
    }
}

/// `<u, u>` over the given variables, with the first `neg` of them negative.
pub fn quadratic(vars: &[usize], neg: usize) -> Expr {
    Expr::sum(vars.iter().enumerate().map(|(k, &v)| {
        let sq = Expr::var(v).square();
        if k < neg {
            -sq
        } else {
            sq
        }
    }))
}

pub fn vars(range: core::ops::Range<usize>) -> Vec<Expr> {
    range.map(Expr::var).collect()
}

macro_rules! binary {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Arc::new(self), Arc::new(rhs))
            }
        }
        impl $trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Arc::new(self), Arc::new(Expr::Const(rhs)))
            }
        }
        impl $trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Arc::new(Expr::Const(self)), Arc::new(rhs))
            }
        }
    };
}

binary!(Add, add, Add);
binary!(Sub, sub, Sub);
binary!(Mul, mul, Mul);
binary!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Const(-1.0) * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::JetOrder;

    #[test]
    fn evaluates_over_both_scalars() {
        let e = (Expr::var(0) * Expr::var(1) + 1.0).sqrt();
        assert_eq!(e.eval(&[3.0, 1.0]).unwrap(), 2.0);
        let jets = [
            Jet3::variable(3.0, 0, 2, JetOrder::Three),
            Jet3::variable(1.0, 1, 2, JetOrder::Three),
        ];
        let j = e.eval(&jets).unwrap();
        assert_eq!(j.value(), 2.0);
        assert!((j.grad(0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn domain_faults_surface() {
        let e = (1.0 - Expr::var(0).square()).sqrt();
        assert!(matches!(e.eval(&[1.5]), Err(DomainFault::SqrtNonPositive(_))));
        assert!(matches!(
            Expr::var(2).eval(&[0.0]),
            Err(DomainFault::UnboundVariable { index: 2, available: 1 })
        ));
        assert!(matches!((1.0 / Expr::var(0)).eval(&[0.0]), Err(DomainFault::DivisionByZero(_))));
    }

    #[test]
    fn substitution_composes() {
        let outer = Expr::var(0) * Expr::var(1);
        let inner = [Expr::var(0).sin(), Expr::var(0).cos()];
        let composed = outer.substitute(&inner).unwrap();
        let t = 0.3_f64;
        assert!((composed.eval(&[t]).unwrap() - t.sin() * t.cos()).abs() < 1e-15);
        assert_eq!(composed.max_var(), Some(0));
    }

    #[test]
    fn quadratic_form_signs() {
        let q = quadratic(&[0, 1, 2], 1);
        assert_eq!(q.eval(&[1.0, 2.0, 3.0]).unwrap(), 12.0);
        assert_eq!(Expr::sum([]).eval::<f64>(&[]).unwrap(), 0.0);
    }
}
