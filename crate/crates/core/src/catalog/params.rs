use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use rand::Rng;

use crate::error::{Error, Result};

/// Parameter values by name. Integer parameters are stored as whole `f64`s.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Unbounded,
    Open(f64),
    Closed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Integer,
    Real,
}

/// Declared range of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: f64,
    pub lo: Bound,
    pub hi: Bound,
    /// Upper limit relative to an earlier parameter: `value <= other + offset`.
    pub at_most: Option<(&'static str, i32)>,
    /// Range random draws come from (inclusive for integers), clipped to the domain.
    pub draw: [f64; 2],
}

impl ParamSpec {
    pub const fn int(name: &'static str, default: i32, min: i32, max: i32, draw_max: i32) -> Self {
        Self {
            name,
            kind: ParamKind::Integer,
            default: default as f64,
            lo: Bound::Closed(min as f64),
            hi: Bound::Closed(max as f64),
            at_most: None,
            draw: [min as f64, draw_max as f64],
        }
    }

    pub const fn real(name: &'static str, default: f64, lo: Bound, hi: Bound, draw: [f64; 2]) -> Self {
        Self { name, kind: ParamKind::Real, default, lo, hi, at_most: None, draw }
    }

    pub const fn capped_by(mut self, other: &'static str, offset: i32) -> Self {
        self.at_most = Some((other, offset));
        self
    }

    fn upper(&self, params: &Params) -> Bound {
        match self.at_most {
            None => self.hi,
            Some((other, offset)) => {
                let cap = params.get(other).copied().unwrap_or(f64::INFINITY) + f64::from(offset);
                match self.hi {
                    Bound::Closed(h) if h < cap => self.hi,
                    _ => Bound::Closed(cap),
                }
            }
        }
    }

    pub fn domain(&self) -> String {
        let lo = match self.lo {
            Bound::Unbounded => "(-inf".to_string(),
            Bound::Open(x) => format!("({x}"),
            Bound::Closed(x) => format!("[{x}"),
        };
        let hi = match (self.at_most, self.hi) {
            (Some((other, 0)), _) => format!("{other}]"),
            (Some((other, k)), _) if k < 0 => format!("{other}-{}]", -k),
            (Some((other, k)), _) => format!("{other}+{k}]"),
            (None, Bound::Unbounded) => "inf)".to_string(),
            (None, Bound::Open(x)) => format!("{x})"),
            (None, Bound::Closed(x)) => format!("{x}]"),
        };
        let kind = if self.kind == ParamKind::Integer { "integer " } else { "" };
        format!("{kind}{lo}, {hi}")
    }

    /// Whether `value` lies within the fixed bounds, ignoring any cap by another parameter.
    pub fn admits(&self, value: f64) -> bool {
        self.check(value, &Params::new()).is_ok()
    }

    fn check(&self, value: f64, params: &Params) -> Result<()> {
        let out = || Error::ParamOutOfRange { name: self.name.to_string(), value, domain: self.domain() };
        if !value.is_finite() || (self.kind == ParamKind::Integer && libm::trunc(value) != value) {
            return Err(out());
        }
        let lo_ok = match self.lo {
            Bound::Unbounded => true,
            Bound::Open(x) => value > x,
            Bound::Closed(x) => value >= x,
        };
        let hi_ok = match self.upper(params) {
            Bound::Unbounded => true,
            Bound::Open(x) => value < x,
            Bound::Closed(x) => value <= x,
        };
        if lo_ok && hi_ok {
            Ok(())
        } else {
            Err(out())
        }
    }
}

/// Fill in defaults and validate. Parameters are checked in declaration order,
/// so caps refer to already-validated values.
pub fn resolve(family: &str, specs: &[ParamSpec], given: &Params) -> Result<Params> {
    if let Some(name) = given.keys().find(|k| !specs.iter().any(|s| s.name == k.as_str())) {
        return Err(Error::UnknownParameter { family: family.to_string(), name: name.clone() });
    }
    let mut out = Params::new();
    for spec in specs {
        let value = given.get(spec.name).copied().unwrap_or(spec.default);
        spec.check(value, &out)?;
        out.insert(spec.name.to_string(), value);
    }
    Ok(out)
}

/// A random point of the parameter domain, drawn from each declared draw range.
pub fn draw<R: Rng + ?Sized>(specs: &[ParamSpec], rng: &mut R) -> Params {
    let mut out = Params::new();
    for spec in specs {
        let [lo, hi] = spec.draw;
        let value = match spec.kind {
            ParamKind::Integer => {
                let cap = match spec.upper(&out) {
                    Bound::Closed(x) => x,
                    _ => hi,
                };
                let top = hi.min(cap).max(lo);
                rng.random_range(lo as i64..=top as i64) as f64
            }
            ParamKind::Real => rng.random_range(lo..=hi),
        };
        out.insert(spec.name.to_string(), value);
    }
    out
}

pub(crate) fn get(params: &Params, name: &str) -> f64 {
    params.get(name).copied().unwrap_or(f64::NAN)
}

pub(crate) fn get_usize(params: &Params, name: &str) -> usize {
    get(params, name) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    const SPECS: [ParamSpec; 3] = [
        ParamSpec::int("m", 2, 1, 5, 3),
        ParamSpec::int("s", 0, 0, 5, 5).capped_by("m", 0),
        ParamSpec::real("r", 0.5, Bound::Open(0.0), Bound::Open(1.0), [0.2, 0.9]),
    ];

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn defaults_and_overrides() {
        let p = resolve("f", &SPECS, &params(&[("r", 0.25)])).unwrap();
        assert_eq!(p, params(&[("m", 2.0), ("s", 0.0), ("r", 0.25)]));
    }

    #[test]
    fn domain_violations() {
        assert!(matches!(resolve("f", &SPECS, &params(&[("r", 1.0)])), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(resolve("f", &SPECS, &params(&[("s", 3.0)])), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(resolve("f", &SPECS, &params(&[("m", 1.5)])), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(resolve("f", &SPECS, &params(&[("q", 1.0)])), Err(Error::UnknownParameter { .. })));
        assert_eq!(SPECS[1].domain(), "integer [0, m]");
        assert_eq!(SPECS[2].domain(), "(0, 1)");
    }

    #[test]
    fn draws_respect_domains() {
        let mut rng = sampling::rng(3);
        for _ in 0..50 {
            let p = draw(&SPECS, &mut rng);
            resolve("f", &SPECS, &p).unwrap();
        }
    }
}
