use core::ops::{Add, Mul, Neg, Sub};

use crate::error::DomainFault;

/// Largest number of chart variables a jet can carry.
pub const MAX_VARS: usize = 6;

const HESS_LEN: usize = MAX_VARS * (MAX_VARS + 1) / 2;
const THIRD_LEN: usize = MAX_VARS * (MAX_VARS + 1) * (MAX_VARS + 2) / 6;

// Every permutation of an index tuple maps to the same packed slot, which is
// what makes the stored tensors exactly symmetric.
const IDX2: [[u8; MAX_VARS]; MAX_VARS] = {
    let mut t = [[0u8; MAX_VARS]; MAX_VARS];
    let mut n = 0u8;
    let mut i = 0;
    while i < MAX_VARS {
        let mut j = i;
        while j < MAX_VARS {
            t[i][j] = n;
            t[j][i] = n;
            n += 1;
            j += 1;
        }
        i += 1;
    }
    t
};

const IDX3: [[[u8; MAX_VARS]; MAX_VARS]; MAX_VARS] = {
    let mut t = [[[0u8; MAX_VARS]; MAX_VARS]; MAX_VARS];
    let mut n = 0u8;
    let mut i = 0;
    while i < MAX_VARS {
        let mut j = i;
        while j < MAX_VARS {
            let mut k = j;
            while k < MAX_VARS {
                t[i][j][k] = n;
                t[i][k][j] = n;
                t[j][i][k] = n;
                t[j][k][i] = n;
                t[k][i][j] = n;
                t[k][j][i] = n;
                n += 1;
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    t
};

#[inline]
fn h2(i: usize, j: usize) -> usize {
    IDX2[i][j] as usize
}

#[inline]
fn h3(i: usize, j: usize, k: usize) -> usize {
    IDX3[i][j][k] as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JetOrder {
    Two,
    Three,
}

impl JetOrder {
    pub fn from_int(order: u8) -> Option<Self> {
        match order {
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            _ => None,
        }
    }

    pub fn as_int(self) -> u8 {
        match self {
            Self::Two => 2,
            Self::Three => 3,
        }
    }
}

/// Truncated Taylor expansion to order three in up to [`MAX_VARS`] variables.
///
/// Constants carry zero variables; binary operations widen to the larger
/// operand. An order-2 jet never touches its third-derivative table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    value: f64,
    vars: usize,
    third_order: bool,
    grad: [f64; MAX_VARS],
    hess: [f64; HESS_LEN],
    third: [f64; THIRD_LEN],
}

impl Jet3 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            vars: 0,
            third_order: true,
            grad: [0.0; MAX_VARS],
            hess: [0.0; HESS_LEN],
            third: [0.0; THIRD_LEN],
        }
    }

    /// The coordinate function `u_index` at `value`, in a space of `vars` variables.
    pub fn variable(value: f64, index: usize, vars: usize, order: JetOrder) -> Self {
        assert!(index < vars && vars <= MAX_VARS, "variable index out of range");
        let mut jet = Self::constant(value);
        jet.vars = vars;
        jet.third_order = order == JetOrder::Three;
        jet.grad[index] = 1.0;
        jet
    }

    /// Assemble a jet from raw derivative data. `third` is `None` for an order-2 jet.
    pub fn from_parts(
        value: f64,
        grad: &[f64],
        hess: impl Fn(usize, usize) -> f64,
        third: Option<&dyn Fn(usize, usize, usize) -> f64>,
    ) -> Self {
        let vars = grad.len();
        assert!(vars <= MAX_VARS, "too many variables");
        let mut jet = Self::constant(value);
        jet.vars = vars;
        jet.third_order = third.is_some();
        jet.grad[..vars].copy_from_slice(grad);
        for i in 0..vars {
            for j in i..vars {
                jet.hess[h2(i, j)] = hess(i, j);
                if let Some(t) = third {
                    for k in j..vars {
                        jet.third[h3(i, j, k)] = t(i, j, k);
                    }
                }
            }
        }
        jet
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> JetOrder {
        if self.third_order {
            JetOrder::Three
        } else {
            JetOrder::Two
        }
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[h2(i, j)]
    }

    /// Third partial derivative; `None` for order-2 jets.
    pub fn third(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        self.third_order.then(|| self.third[h3(i, j, k)])
    }

    fn blank(a: &Self, b: &Self, value: f64) -> Self {
        let mut out = Self::constant(value);
        out.vars = a.vars.max(b.vars);
        out.third_order = a.third_order && b.third_order;
        out
    }

    /// Apply a scalar function given its value and first three derivatives at `self.value`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64, f3: f64) -> Self {
        let m = self.vars;
        let g = &self.grad;
        let mut out = Self::constant(f0);
        out.vars = m;
        out.third_order = self.third_order;
        for (o, gi) in out.grad.iter_mut().zip(g) {
            *o = f1 * gi;
        }
        for i in 0..m {
            for j in i..m {
                let s = h2(i, j);
                out.hess[s] = f1 * self.hess[s] + f2 * g[i] * g[j];
            }
        }
        if self.third_order {
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        let s = h3(i, j, k);
                        let mixed = self.hess[h2(i, j)] * g[k]
                            + self.hess[h2(i, k)] * g[j]
                            + self.hess[h2(j, k)] * g[i];
                        out.third[s] = f1 * self.third[s] + f2 * mixed + f3 * g[i] * g[j] * g[k];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        self.chain(c * self.value, c, 0.0, 0.0)
    }

    pub fn recip(&self) -> Result<Self, DomainFault> {
        let b = self.value;
        if b.abs() <= 1e-12 {
            return Err(DomainFault::DivisionByZero(b));
        }
        let r = 1.0 / b;
        Ok(self.chain(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r))
    }

    pub fn try_div(&self, den: &Self) -> Result<Self, DomainFault> {
        Ok(*self * den.recip()?)
    }

    pub fn try_sqrt(&self) -> Result<Self, DomainFault> {
        let x = self.value;
        if x.is_nan() || x <= 0.0 {
            return Err(DomainFault::SqrtNonPositive(x));
        }
        let s = libm::sqrt(x);
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(s, c, -s, -c)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(c, -s, -c, s)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (libm::sinh(self.value), libm::cosh(self.value));
        self.chain(s, c, s, c)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (libm::sinh(self.value), libm::cosh(self.value));
        self.chain(c, s, c, s)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut out = Jet3::blank(&self, &rhs, self.value + rhs.value);
        for i in 0..out.vars {
            out.grad[i] = self.grad[i] + rhs.grad[i];
        }
        for s in 0..HESS_LEN {
            out.hess[s] = self.hess[s] + rhs.hess[s];
        }
        if out.third_order {
            for s in 0..THIRD_LEN {
                out.third[s] = self.third[s] + rhs.third[s];
            }
        }
        out
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        self + (-rhs)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        let mut out = self;
        out.value = -out.value;
        out.grad.iter_mut().for_each(|x| *x = -*x);
        out.hess.iter_mut().for_each(|x| *x = -*x);
        out.third.iter_mut().for_each(|x| *x = -*x);
        out
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let (a, b) = (&self, &rhs);
        let mut out = Jet3::blank(a, b, a.value * b.value);
        let m = out.vars;
        let (ga, gb) = (&a.grad, &b.grad);
        for i in 0..m {
            out.grad[i] = ga[i] * b.value + a.value * gb[i];
        }
        for i in 0..m {
            for j in i..m {
                let s = h2(i, j);
                out.hess[s] = a.hess[s] * b.value
                    + ga[i] * gb[j]
                    + ga[j] * gb[i]
                    + a.value * b.hess[s];
            }
        }
        if out.third_order {
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        let s = h3(i, j, k);
                        let (ij, ik, jk) = (h2(i, j), h2(i, k), h2(j, k));
                        out.third[s] = a.third[s] * b.value
                            + a.hess[ij] * gb[k]
                            + a.hess[ik] * gb[j]
                            + a.hess[jk] * gb[i]
                            + ga[i] * b.hess[jk]
                            + ga[j] * b.hess[ik]
                            + ga[k] * b.hess[ij]
                            + a.value * b.third[s];
                    }
                }
            }
        }
        out
    }
}
