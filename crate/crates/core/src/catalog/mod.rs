//! Registry of immersion families with their claimed properties.
//!
//! Every entry is an explicit chart map into the flat coordinate space of its
//! target space form, written with the negative coordinates first. Spheres
//! `S^k_s(r^2)` use the graph chart `(u, sqrt(r^2 - <u,u>_s))`, pseudo-hyperbolic
//! spaces `H^k_s(-r^2)` use `(sqrt(r^2 + <u,u>_s), u)` with a negative first
//! coordinate, and the lightcone `Lambda^k_s` uses `(sqrt(<u,u>_s), u)` inside
//! `E^{k+1}_{s+1}`. A degenerate factor `E^{0,0,1}` adds a plain variable `t`,
//! always the last chart variable.

mod builder;
mod expected;
mod params;

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::ambient::AmbientSpace;
use crate::analysis::TranslationClass;
use crate::error::{Error, Result};
use crate::jets::{quadratic, Expr, ImmersionChart};

use builder::{Builder, Piece};
pub use expected::{Expected, HNormClaim, HNormRange, ReductionClaim};
pub use params::{draw, resolve, Bound, ParamKind, ParamSpec, Params};
use params::{get, get_usize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Full totally umbilical immersions into pseudo-spheres.
    Pseudosphere,
    /// Full totally umbilical immersions into pseudo-hyperbolic spaces.
    Pseudohyperbolic,
    /// Totally umbilical immersions into pseudo-Euclidean space.
    Flat,
    /// Totally umbilical lightlike submanifolds of pseudo-spheres.
    LightlikeSphere,
    /// Totally umbilical lightlike submanifolds of pseudo-hyperbolic spaces.
    LightlikeHyperbolic,
    /// Further constructions: codimension-two families, lightcones, planes, parallel surfaces.
    Example,
    /// Non-umbilical surfaces used as negative controls.
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Main1(u8),
    Main2(u8),
    Akk(u8),
    Light1(u8),
    Light2(u8),
    PsiA,
    SExample,
    STheta,
    UFlat,
    Lightcone,
    Plane,
    CvParallel,
    Clifford,
    CubicGraph,
}

#[derive(Debug, Clone, Copy)]
pub struct FamilySpec {
    pub id: &'static str,
    pub aliases: &'static [&'static str],
    pub group: Group,
    /// One-line description of the map.
    pub display: &'static str,
    pub params: &'static [ParamSpec],
    kind: Kind,
}

const fn m_spec(default: i32, min: i32, max: i32, draw_max: i32) -> ParamSpec {
    ParamSpec::int("m", default, min, max, draw_max)
}

const fn s_spec(offset: i32) -> ParamSpec {
    ParamSpec::int("s", 0, 0, 6, 6).capped_by("m", offset)
}

const R_UNIT: ParamSpec = ParamSpec::real("r", 0.5, Bound::Open(0.0), Bound::Open(1.0), [0.2, 0.9]);
const R_BIG: ParamSpec = ParamSpec::real("r", 2.0, Bound::Open(1.0), Bound::Unbounded, [1.2, 3.0]);
const R_POS: ParamSpec = ParamSpec::real("r", 1.0, Bound::Open(0.0), Bound::Unbounded, [0.3, 3.0]);

const MS: &[ParamSpec] = &[m_spec(2, 1, 5, 3), s_spec(0)];
const MS_UNIT: &[ParamSpec] = &[m_spec(2, 1, 5, 3), s_spec(0), R_UNIT];
const MS_BIG: &[ParamSpec] = &[m_spec(2, 1, 5, 3), s_spec(0), R_BIG];
const MS_POS: &[ParamSpec] = &[m_spec(2, 1, 5, 3), s_spec(0), R_POS];
const LIGHT: &[ParamSpec] = &[m_spec(2, 2, 6, 4), s_spec(-1)];
const LIGHT_UNIT: &[ParamSpec] = &[m_spec(2, 2, 6, 4), s_spec(-1), R_UNIT];
const LIGHT_BIG: &[ParamSpec] = &[m_spec(2, 2, 6, 4), s_spec(-1), R_BIG];
const LIGHT_POS: &[ParamSpec] = &[m_spec(2, 2, 6, 4), s_spec(-1), R_POS];
const LIGHT_CONE2: &[ParamSpec] = &[m_spec(2, 2, 6, 4), s_spec(-2)];
const CONE: &[ParamSpec] = &[m_spec(2, 1, 6, 3), s_spec(-1)];
const PSI: &[ParamSpec] = &[
    m_spec(2, 1, 4, 3),
    s_spec(0),
    ParamSpec::real("a", 1.0, Bound::Unbounded, Bound::Unbounded, [-2.0, 2.0]),
    ParamSpec::int("eps", 1, -1, 1, 1),
];
const S_EX: &[ParamSpec] = &[m_spec(2, 1, 5, 3), s_spec(0)];
const S_THETA: &[ParamSpec] = &[
    m_spec(2, 1, 5, 3),
    ParamSpec::real("theta", 0.0, Bound::Unbounded, Bound::Unbounded, [-PI, PI]),
];
const PLANE: &[ParamSpec] = &[
    ParamSpec::int("s", 0, 0, 6, 2),
    ParamSpec { draw: [1.0, 2.0], ..ParamSpec::int("t", 1, 0, 6, 2) },
    ParamSpec::int("r", 1, 0, 6, 2),
];
const CV: &[ParamSpec] = &[ParamSpec::real("a", 1.0, Bound::Open(0.0), Bound::Unbounded, [0.6, 2.0])];

macro_rules! family {
    ($id:literal, $group:ident, $kind:expr, $params:expr, $display:literal) => {
        family!($id, [], $group, $kind, $params, $display)
    };
    ($id:literal, [$($alias:literal),*], $group:ident, $kind:expr, $params:expr, $display:literal) => {
        FamilySpec { id: $id, aliases: &[$($alias),*], group: Group::$group, display: $display, params: $params, kind: $kind }
    };
}

static FAMILIES: [FamilySpec; 41] = [
    family!("main1-1", Pseudosphere, Kind::Main1(1), MS, "S^m_s(1) -> S^{m+1}_s(1); x -> (x, 0)"),
    family!("main1-2", Pseudosphere, Kind::Main1(2), MS, "S^m_s(1) -> S^{m+1}_{s+1}(1); x -> (0, x)"),
    family!("main1-3", Pseudosphere, Kind::Main1(3), MS_UNIT, "S^m_s(r^2) -> S^{m+1}_s(1); x -> (x, sqrt(1-r^2)), 0<r<1"),
    family!("main1-4", Pseudosphere, Kind::Main1(4), MS_BIG, "S^m_s(r^2) -> S^{m+1}_{s+1}(1); x -> (sqrt(r^2-1), x), r>1"),
    family!("main1-5", Pseudosphere, Kind::Main1(5), MS, "S^m_s(1) -> S^{m+2}_{s+1}(1); x -> (1, x, 1)"),
    family!("main1-6", Pseudosphere, Kind::Main1(6), MS_POS, "H^m_s(-r^2) -> S^{m+1}_{s+1}(1); x -> (x, sqrt(1+r^2)), r>0"),
    family!("main1-7", Pseudosphere, Kind::Main1(7), MS, "E^m_s -> S^{m+1}_{s+1}(1); x -> (<x,x>-3/4, x, <x,x>-5/4)"),
    family!("main2-1", Pseudohyperbolic, Kind::Main2(1), MS, "H^m_s(-1) -> H^{m+1}_s(-1); x -> (x, 0)"),
    family!("main2-2", Pseudohyperbolic, Kind::Main2(2), MS, "H^m_s(-1) -> H^{m+1}_{s+1}(-1); x -> (0, x)"),
    family!("main2-3", Pseudohyperbolic, Kind::Main2(3), MS_UNIT, "H^m_s(-r^2) -> H^{m+1}_{s+1}(-1); x -> (sqrt(1-r^2), x), 0<r<1"),
    family!("main2-4", Pseudohyperbolic, Kind::Main2(4), MS_BIG, "H^m_s(-r^2) -> H^{m+1}_s(-1); x -> (x, sqrt(r^2-1)), r>1"),
    family!("main2-5", Pseudohyperbolic, Kind::Main2(5), MS, "H^m_s(-1) -> H^{m+2}_{s+1}(-1); x -> (1, x, 1)"),
    family!("main2-6", Pseudohyperbolic, Kind::Main2(6), MS_POS, "S^m_s(r^2) -> H^{m+1}_s(-1); x -> (sqrt(1+r^2), x), r>0"),
    family!("main2-7", Pseudohyperbolic, Kind::Main2(7), MS, "E^m_s -> H^{m+1}_s(-1); x -> (<x,x>+5/4, x, <x,x>+3/4)"),
    family!("akk-1", Flat, Kind::Akk(1), MS, "E^m_s -> E^{m+1}_s; x -> (x, 0)"),
    family!("akk-2", Flat, Kind::Akk(2), MS_POS, "S^m_s(r^2) -> E^{m+1}_s, r>0"),
    family!("akk-3", Flat, Kind::Akk(3), MS_POS, "H^m_s(-r^2) -> E^{m+1}_{s+1}, r>0"),
    family!("akk-4", Flat, Kind::Akk(4), MS, "E^m_s -> E^{m+2}_{s+1}; x -> (<x,x>+1/4, x, <x,x>-1/4)"),
    family!("light1-1", LightlikeSphere, Kind::Light1(1), LIGHT, "S^{m-1}_s(1) x E^{0,0,1} -> S^{m+1}_{s+1}(1); (x,t) -> (t, x, t)"),
    family!("light1-2", LightlikeSphere, Kind::Light1(2), LIGHT_UNIT, "S^{m-1}_s(r^2) x E^{0,0,1} -> S^{m+2}_{s+1}(1); (x,t) -> (t, x, sqrt(1-r^2), t), 0<r<1"),
    family!("light1-3", LightlikeSphere, Kind::Light1(3), LIGHT_BIG, "S^{m-1}_s(r^2) x E^{0,0,1} -> S^{m+2}_{s+2}(1); (x,t) -> (t, sqrt(r^2-1), x, t), r>1"),
    family!("light1-4", LightlikeSphere, Kind::Light1(4), LIGHT_POS, "H^{m-1}_s(-r^2) x E^{0,0,1} -> S^{m+2}_{s+2}(1); (x,t) -> (t, x, sqrt(1+r^2), t), r>0"),
    family!("light1-5", LightlikeSphere, Kind::Light1(5), LIGHT, "Lambda^m_s -> S^{m+1}_{s+1}(1); x -> (x, 1)"),
    family!("light1-6", LightlikeSphere, Kind::Light1(6), LIGHT_CONE2, "Lambda^{m-1}_s x E^{0,0,1} -> S^{m+2}_{s+2}(1); (x,t) -> (t, x, 1, t)"),
    family!("light1-7", LightlikeSphere, Kind::Light1(7), LIGHT, "S^{m-1}_s(1) x E^{0,0,1} -> S^{m+3}_{s+2}(1); (x,t) -> (t, 1, x, 1, t)"),
    family!("light2-1", LightlikeHyperbolic, Kind::Light2(1), LIGHT, "H^{m-1}_s(-1) x E^{0,0,1} -> H^{m+1}_{s+1}(-1); (x,t) -> (t, x, t)"),
    family!("light2-2", LightlikeHyperbolic, Kind::Light2(2), LIGHT_UNIT, "H^{m-1}_s(-r^2) x E^{0,0,1} -> H^{m+2}_{s+2}(-1); (x,t) -> (t, sqrt(1-r^2), x, t), 0<r<1"),
    family!("light2-3", LightlikeHyperbolic, Kind::Light2(3), LIGHT_BIG, "H^{m-1}_s(-r^2) x E^{0,0,1} -> H^{m+2}_{s+1}(-1); (x,t) -> (t, x, sqrt(r^2-1), t), r>1"),
    family!("light2-4", LightlikeHyperbolic, Kind::Light2(4), LIGHT_POS, "S^{m-1}_s(r^2) x E^{0,0,1} -> H^{m+2}_{s+1}(-1); (x,t) -> (t, sqrt(1+r^2), x, t), r>0"),
    family!("light2-5", LightlikeHyperbolic, Kind::Light2(5), LIGHT, "Lambda^m_s -> H^{m+1}_{s+1}(-1); x -> (1, x)"),
    family!("light2-6", LightlikeHyperbolic, Kind::Light2(6), LIGHT_CONE2, "Lambda^{m-1}_s x E^{0,0,1} -> H^{m+2}_{s+2}(-1); (x,t) -> (t, 1, x, t)"),
    family!("light2-7", LightlikeHyperbolic, Kind::Light2(7), LIGHT, "H^{m-1}_s(-1) x E^{0,0,1} -> H^{m+3}_{s+2}(-1); (x,t) -> (t, 1, x, 1, t)"),
    family!("psi-a", Example, Kind::PsiA, PSI, "M^m_s(eps) -> M^{m+2}_{s+1}(eps); x -> (a, x, a), or (a<x,x>, x, a<x,x>) when eps=0"),
    family!("S-example", Example, Kind::SExample, S_EX, "Pi^{m+1}_{s,m-s,1} -> S^{m+3}_{s+2}(1); x -> (-<x,x>/2, x, 1-<x,x>/2)"),
    family!("S-theta", Example, Kind::STheta, S_THETA, "E^{0,m,1} -> S^{m+3}_2(1); rotation by theta of the S-example with s=0"),
    family!("U-flat", Example, Kind::UFlat, MS, "E^m_s -> Lambda^{m+1}_s in E^{m+2}_{s+1}; x -> (<x,x>+1/4, x, <x,x>-1/4)"),
    family!("lightcone", ["lightcone-Λ", "lightcone-Lambda"], Example, Kind::Lightcone, CONE, "Lambda^m_s -> E^{m+1}_{s+1}; u -> (sqrt(<u,u>_s), u)"),
    family!("plane", ["plane-Π", "plane-Pi"], Example, Kind::Plane, PLANE, "Pi^{s+t+r}_{s,t,r} -> E^{s+t+2r}_{s+r}; (x,y,z) -> (z, x, y, z)"),
    family!("cv-parallel", Example, Kind::CvParallel, CV, "E^2 -> S^4_1(1); (u,v) -> (v^2+a^2-3/4, a cos u, a sin u, v, v^2+a^2-5/4), a>0"),
    family!("clifford-control", Control, Kind::Clifford, &[], "E^2 -> S^3(1); (u,v) -> (cos u, sin u, cos v, sin v)/sqrt(2)"),
    family!("cubic-graph-control", Control, Kind::CubicGraph, &[], "E^2 -> E^3; (u,v) -> (u, v, u^3)"),
];

pub fn families() -> &'static [FamilySpec] {
    &FAMILIES
}

pub fn find(id: &str) -> Result<&'static FamilySpec> {
    FAMILIES
        .iter()
        .find(|f| f.id == id || f.aliases.contains(&id))
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

pub fn instantiate(id: &str, params: &Params) -> Result<ImmersionChart> {
    find(id)?.instantiate(params)
}

pub fn expected_report(id: &str, params: &Params) -> Result<Expected> {
    find(id)?.expected(params)
}

impl FamilySpec {
    pub fn resolve(&self, given: &Params) -> Result<Params> {
        resolve(self.id, self.params, given)
    }

    pub fn defaults(&self) -> Params {
        self.resolve(&Params::new()).expect("defaults lie in the domain")
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Params {
        draw(self.params, rng)
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    pub fn instantiate(&self, given: &Params) -> Result<ImmersionChart> {
        let p = self.resolve(given)?;
        build(self.kind, &p)
    }

    pub fn expected(&self, given: &Params) -> Result<Expected> {
        let p = self.resolve(given)?;
        Ok(expect(self.kind, &p))
    }

    /// Entries the round-trip classifier applies to: non-degenerate, totally
    /// umbilical, and listed in one of the three classifications.
    pub fn is_classifiable(&self) -> bool {
        matches!(self.kind, Kind::Main1(_) | Kind::Main2(_) | Kind::Akk(_))
    }
}

fn build(kind: Kind, p: &Params) -> Result<ImmersionChart> {
    let m = get_usize(p, "m");
    let s = get_usize(p, "s");
    let r = get(p, "r");
    let r2 = r * r;
    let mut b = Builder::new();
    let eps = match kind {
        Kind::Main1(k) => {
            match k {
                1 => {
                    sphere(&mut b, m, s, 1.0);
                    b.push(Expr::c(0.0), 1);
                }
                2 => {
                    b.push(Expr::c(0.0), -1);
                    sphere(&mut b, m, s, 1.0);
                }
                3 => {
                    sphere(&mut b, m, s, r2);
                    b.push(Expr::c(libm::sqrt(1.0 - r2)), 1);
                }
                4 => {
                    b.push(Expr::c(libm::sqrt(r2 - 1.0)), -1);
                    sphere(&mut b, m, s, r2);
                }
                5 => {
                    b.push(Expr::c(1.0), -1);
                    sphere(&mut b, m, s, 1.0);
                    b.push(Expr::c(1.0), 1);
                }
                6 => {
                    hyperbolic(&mut b, m, s, r2);
                    b.push(Expr::c(libm::sqrt(1.0 + r2)), 1);
                }
                _ => paraboloid(&mut b, m, s, -0.75, -1.25),
            }
            1
        }
        Kind::Main2(k) => {
            match k {
                1 => {
                    hyperbolic(&mut b, m, s, 1.0);
                    b.push(Expr::c(0.0), 1);
                }
                2 => {
                    b.push(Expr::c(0.0), -1);
                    hyperbolic(&mut b, m, s, 1.0);
                }
                3 => {
                    b.push(Expr::c(libm::sqrt(1.0 - r2)), -1);
                    hyperbolic(&mut b, m, s, r2);
                }
                4 => {
                    hyperbolic(&mut b, m, s, r2);
                    b.push(Expr::c(libm::sqrt(r2 - 1.0)), 1);
                }
                5 => {
                    b.push(Expr::c(1.0), -1);
                    hyperbolic(&mut b, m, s, 1.0);
                    b.push(Expr::c(1.0), 1);
                }
                6 => {
                    b.push(Expr::c(libm::sqrt(1.0 + r2)), -1);
                    sphere(&mut b, m, s, r2);
                }
                _ => paraboloid(&mut b, m, s, 1.25, 0.75),
            }
            -1
        }
        Kind::Akk(k) => {
            match k {
                1 => {
                    let (_, x) = b.flat(m, s);
                    b.extend(x);
                    b.push(Expr::c(0.0), 1);
                }
                2 => sphere(&mut b, m, s, r2),
                3 => hyperbolic(&mut b, m, s, r2),
                _ => paraboloid(&mut b, m, s, 0.25, -0.25),
            }
            0
        }
        Kind::UFlat => {
            paraboloid(&mut b, m, s, 0.25, -0.25);
            0
        }
        Kind::Light1(k) => {
            let body: Piece = match k {
                5 => {
                    cone(&mut b, m, s);
                    b.push(Expr::c(1.0), 1);
                    return b.finish(1);
                }
                1 | 7 => b.sphere(m - 1, s, 1.0),
                2 | 3 => b.sphere(m - 1, s, r2),
                4 => b.hyperbolic(m - 1, s, r2),
                _ => b.cone(m - 1, s),
            };
            let t = b.var(-0.5, 0.5);
            b.push(t.clone(), -1);
            match k {
                1 => b.extend(body),
                2 => {
                    b.extend(body);
                    b.push(Expr::c(libm::sqrt(1.0 - r2)), 1);
                }
                3 => {
                    b.push(Expr::c(libm::sqrt(r2 - 1.0)), -1);
                    b.extend(body);
                }
                4 => {
                    b.extend(body);
                    b.push(Expr::c(libm::sqrt(1.0 + r2)), 1);
                }
                6 => {
                    b.extend(body);
                    b.push(Expr::c(1.0), 1);
                }
                _ => {
                    b.push(Expr::c(1.0), -1);
                    b.extend(body);
                    b.push(Expr::c(1.0), 1);
                }
            }
            b.push(t, 1);
            1
        }
        Kind::Light2(k) => {
            let body: Piece = match k {
                5 => {
                    b.push(Expr::c(1.0), -1);
                    cone(&mut b, m, s);
                    return b.finish(-1);
                }
                1 | 7 => b.hyperbolic(m - 1, s, 1.0),
                2 | 3 => b.hyperbolic(m - 1, s, r2),
                4 => b.sphere(m - 1, s, r2),
                _ => b.cone(m - 1, s),
            };
            let t = b.var(-0.5, 0.5);
            b.push(t.clone(), -1);
            match k {
                1 => b.extend(body),
                2 => {
                    b.push(Expr::c(libm::sqrt(1.0 - r2)), -1);
                    b.extend(body);
                }
                3 => {
                    b.extend(body);
                    b.push(Expr::c(libm::sqrt(r2 - 1.0)), 1);
                }
                4 => {
                    b.push(Expr::c(libm::sqrt(1.0 + r2)), -1);
                    b.extend(body);
                }
                6 => {
                    b.push(Expr::c(1.0), -1);
                    b.extend(body);
                }
                _ => {
                    b.push(Expr::c(1.0), -1);
                    b.extend(body);
                    b.push(Expr::c(1.0), 1);
                }
            }
            b.push(t, 1);
            -1
        }
        Kind::PsiA => {
            let a = get(p, "a");
            let eps = get(p, "eps") as i8;
            match eps {
                1 => {
                    let x = b.sphere(m, s, 1.0);
                    b.push(Expr::c(a), -1);
                    b.extend(x);
                    b.push(Expr::c(a), 1);
                }
                -1 => {
                    let x = b.hyperbolic(m, s, 1.0);
                    b.push(Expr::c(a), -1);
                    b.extend(x);
                    b.push(Expr::c(a), 1);
                }
                _ => {
                    let (vs, x) = b.flat(m, s);
                    let q = quadratic(&vs, s);
                    b.push(a * q.clone(), -1);
                    b.extend(x);
                    b.push(a * q, 1);
                }
            }
            eps
        }
        Kind::SExample => {
            let (vs, _) = b.flat(m, s);
            let t = b.var(-0.5, 0.5);
            let q = quadratic(&vs, s);
            b.push(-0.5 * q.clone(), -1);
            b.push(t.clone(), -1);
            for (i, &v) in vs.iter().enumerate() {
                b.push(Expr::var(v), if i < s { -1 } else { 1 });
            }
            b.push(t, 1);
            b.push(1.0 - 0.5 * q, 1);
            1
        }
        Kind::STheta => {
            let theta = get(p, "theta");
            let (c, sn) = (libm::cos(theta), libm::sin(theta));
            let (vs, x) = b.flat(m, 0);
            let w = b.var(-0.5, 0.5) - theta;
            let q = quadratic(&vs, 0);
            let half = 0.5 * q.clone();
            let rest = 1.0 - 0.5 * q;
            b.push(-c * half.clone() - sn * w.clone(), -1);
            b.push(-sn * half + c * w.clone(), -1);
            b.extend(x);
            b.push(sn * rest.clone() + c * w.clone(), 1);
            b.push(c * rest - sn * w, 1);
            1
        }
        Kind::Lightcone => {
            cone(&mut b, m, s);
            0
        }
        Kind::Plane => {
            let (s, t, r) = (get_usize(p, "s"), get_usize(p, "t"), get_usize(p, "r"));
            let dim = s + t + r;
            if dim == 0 || dim > crate::jets::MAX_VARS {
                return Err(Error::ParamOutOfRange {
                    name: "s+t+r".to_string(),
                    value: dim as f64,
                    domain: format!("[1, {}]", crate::jets::MAX_VARS),
                });
            }
            let xs = b.vars(s, -0.5, 0.5);
            let ys = b.vars(t, -0.5, 0.5);
            let zs = b.vars(r, -0.5, 0.5);
            for &z in &zs {
                b.push(Expr::var(z), -1);
            }
            for &x in &xs {
                b.push(Expr::var(x), -1);
            }
            for &y in ys.iter().chain(&zs) {
                b.push(Expr::var(y), 1);
            }
            0
        }
        Kind::CvParallel => {
            let a = get(p, "a");
            let u = b.var(-0.5, 0.5);
            let v = b.var(-0.5, 0.5);
            let vv = v.clone().square() + a * a;
            b.push(vv.clone() - 0.75, -1);
            b.push(a * u.clone().cos(), 1);
            b.push(a * u.sin(), 1);
            b.push(v, 1);
            b.push(vv - 1.25, 1);
            1
        }
        Kind::Clifford => {
            let u = b.var(-0.5, 0.5);
            let v = b.var(-0.5, 0.5);
            let k = core::f64::consts::FRAC_1_SQRT_2;
            for e in [u.clone().cos(), u.sin(), v.clone().cos(), v.sin()] {
                b.push(k * e, 1);
            }
            1
        }
        Kind::CubicGraph => {
            let u = b.var(0.3, 0.9);
            let v = b.var(-0.5, 0.5);
            b.push(u.clone(), 1);
            b.push(v, 1);
            b.push(u.clone() * u.clone() * u, 1);
            0
        }
    };
    b.finish(eps)
}

fn sphere(b: &mut Builder, k: usize, s: usize, r2: f64) {
    let piece = b.sphere(k, s, r2);
    b.extend(piece);
}

fn hyperbolic(b: &mut Builder, k: usize, s: usize, r2: f64) {
    let piece = b.hyperbolic(k, s, r2);
    b.extend(piece);
}

fn cone(b: &mut Builder, k: usize, s: usize) {
    let piece = b.cone(k, s);
    b.extend(piece);
}

/// `(<x,x>_s + first, x, <x,x>_s + last)` with the first coordinate negative.
fn paraboloid(b: &mut Builder, m: usize, s: usize, first: f64, last: f64) {
    let (vs, x) = b.flat(m, s);
    let q = quadratic(&vs, s);
    b.push(q.clone() + first, -1);
    b.extend(x);
    b.push(q + last, 1);
}

fn expect(kind: Kind, p: &Params) -> Expected {
    use HNormRange::{Equal, Open};
    use TranslationClass as T;
    const INF: f64 = f64::INFINITY;
    let m = get_usize(p, "m");
    let r = get(p, "r");
    let inv = 1.0 / (r * r);
    match kind {
        Kind::Main1(k) => {
            let (src, value, range, geodesic, class) = match k {
                1 => ("pseudo-sphere classification (1): totally geodesic, H = 0", 0.0, Equal(0.0), true, T::Linear),
                2 => ("pseudo-sphere classification (2): totally geodesic, H = 0", 0.0, Equal(0.0), true, T::Linear),
                3 => ("pseudo-sphere classification (3): 0 < r < 1, <H,H> > 0", inv - 1.0, Open(0.0, INF), false, T::Spacelike),
                4 => ("pseudo-sphere classification (4): r > 1, -1 < <H,H> < 0", inv - 1.0, Open(-1.0, 0.0), false, T::Timelike),
                5 => ("pseudo-sphere classification (5): H != 0, <H,H> = 0", 0.0, Equal(0.0), false, T::Lightlike),
                6 => ("pseudo-sphere classification (6): r > 0, <H,H> < -1", -1.0 - inv, Open(-INF, -1.0), false, T::Spacelike),
                _ => ("pseudo-sphere classification (7): <H,H> = -1", -1.0, Equal(-1.0), false, T::Transversal),
            };
            Expected::umbilical(src, value, range, geodesic).with_reduction(m + 1, class)
        }
        Kind::Main2(k) => {
            let (src, value, range, geodesic, class) = match k {
                1 => ("pseudo-hyperbolic classification (1): totally geodesic, H = 0", 0.0, Equal(0.0), true, T::Linear),
                2 => ("pseudo-hyperbolic classification (2): totally geodesic, H = 0", 0.0, Equal(0.0), true, T::Linear),
                3 => ("pseudo-hyperbolic classification (3): 0 < r < 1, <H,H> < 0", 1.0 - inv, Open(-INF, 0.0), false, T::Timelike),
                4 => ("pseudo-hyperbolic classification (4): r > 1, 0 < <H,H> < 1", 1.0 - inv, Open(0.0, 1.0), false, T::Spacelike),
                5 => ("pseudo-hyperbolic classification (5): H != 0, <H,H> = 0", 0.0, Equal(0.0), false, T::Lightlike),
                6 => ("pseudo-hyperbolic classification (6): r > 0, <H,H> > 1", 1.0 + inv, Open(1.0, INF), false, T::Timelike),
                _ => ("pseudo-hyperbolic classification (7): <H,H> = 1", 1.0, Equal(1.0), false, T::Transversal),
            };
            Expected::umbilical(src, value, range, geodesic).with_reduction(m + 1, class)
        }
        Kind::Akk(k) => match k {
            1 => Expected::umbilical("pseudo-Euclidean classification (1): totally geodesic, H = 0", 0.0, Equal(0.0), true),
            2 => Expected::umbilical("pseudo-Euclidean classification (2): pseudo-sphere, <H,H> > 0", inv, Open(0.0, INF), false),
            3 => Expected::umbilical("pseudo-Euclidean classification (3): pseudo-hyperbolic space, <H,H> < 0", -inv, Open(-INF, 0.0), false),
            _ => Expected::umbilical("pseudo-Euclidean classification (4): flat, H != 0, <H,H> = 0", 0.0, Equal(0.0), false),
        },
        Kind::UFlat => Expected::umbilical(
            "flat marginally trapped submanifold, also a hypersurface of the lightcone: H != 0, <H,H> = 0",
            0.0,
            Equal(0.0),
            false,
        ),
        Kind::Light1(k) => Expected::lightlike(
            match k {
                1 => "lightlike submanifolds of pseudo-spheres (1): totally geodesic, 1-lightlike",
                6 => "lightlike submanifolds of pseudo-spheres (6): totally umbilical, 2-lightlike",
                _ => "lightlike submanifolds of pseudo-spheres: full, totally umbilical, 1-lightlike",
            },
            if k == 6 { 2 } else { 1 },
            // a one-dimensional lightcone is a null line, so (6) with m = 2 is flat
            k == 1 || (k == 6 && m == 2),
        )
        .with_full(Some(true))
        .with_trailing_radical(usize::from(k != 5)),
        Kind::Light2(k) => Expected::lightlike(
            match k {
                1 => "lightlike submanifolds of pseudo-hyperbolic spaces (1): totally geodesic, 1-lightlike",
                6 => "lightlike submanifolds of pseudo-hyperbolic spaces (6): totally umbilical, 2-lightlike",
                _ => "lightlike submanifolds of pseudo-hyperbolic spaces: full, totally umbilical, 1-lightlike",
            },
            if k == 6 { 2 } else { 1 },
            // a one-dimensional lightcone is a null line, so (6) with m = 2 is flat
            k == 1 || (k == 6 && m == 2),
        )
        .with_full(Some(true))
        .with_trailing_radical(usize::from(k != 5)),
        Kind::PsiA => {
            let a = get(p, "a");
            let eps = get(p, "eps");
            let geodesic = a == 0.0;
            let src = if geodesic {
                "codimension-two family at a = 0: totally geodesic"
            } else {
                "codimension-two family x -> (a, x, a), a != 0: congruent to x -> (1, x, 1), H != 0, <H,H> = 0"
            };
            let e = Expected::umbilical(src, 0.0, Equal(0.0), geodesic);
            if eps == 0.0 {
                e
            } else {
                e.with_reduction(m + 1, if geodesic { T::Linear } else { T::Lightlike })
            }
        }
        Kind::SExample => Expected::lightlike(
            "intersection of a pseudo-sphere with a degenerate affine subspace: flat, totally umbilical, 2-lightlike",
            2,
            false,
        )
        .tolerating(
            &[1],
            "stated as 2-lightlike; the induced metric (-|u|^2 + |v|^2 on the x-block, 0 on t) has a rank-1 radical",
        )
        .with_trailing_radical(1),
        Kind::STheta => Expected::lightlike(
            "one-parameter family of flat totally umbilical lightlike submanifolds; radical rank computed (not stated)",
            1,
            false,
        )
        .with_trailing_radical(1),
        Kind::Lightcone => Expected::lightlike("the lightcone is a totally umbilical 1-lightlike hypersurface", 1, false),
        Kind::Plane => {
            let r = get_usize(p, "r");
            let mut e = Expected::lightlike("canonical r-lightlike plane: totally geodesic, r-lightlike", r, true)
                .with_trailing_radical(r);
            if r == 0 {
                e.marginally_trapped = Some(false);
                e.h_norm = Some(HNormClaim { value: Some(0.0), range: Equal(0.0) });
                e.parallel = Some(true);
                e.first_normal_dim = Some(0);
            }
            e
        }
        Kind::CvParallel => {
            let a = get(p, "a");
            let value = 1.0 / (4.0 * a * a) - 1.0;
            let mut e = Expected::control(
                "flat complete parallel surface, full but not substantial; <H,H> = 1/(4a^2) - 1 computed",
                false,
                HNormClaim { value: Some(value), range: Open(-1.0, INF) },
                true,
            );
            e.marginally_trapped = Some(value == 0.0);
            e
        }
        Kind::Clifford => Expected::control(
            "product of two circles of radius 1/sqrt(2): minimal, parallel, not umbilical",
            true,
            HNormClaim { value: Some(0.0), range: Equal(0.0) },
            true,
        ),
        Kind::CubicGraph => Expected::control(
            "graph z = u^3: neither umbilical nor parallel",
            false,
            HNormClaim { value: None, range: Open(0.0, INF) },
            false,
        ),
    }
}

/// The lightcone factorization `(1, x, 1) = chi(rho(x))` of the codimension-two
/// embedding of `M^m_s(eps)`, `eps = 1` or `-1`. Returns `(base, rho, chi)`:
/// the graph chart of `M^m_s(eps)`, `rho` from its flat coordinates into the
/// lightcone `Lambda^{m+1}_s` inside `E^{m+2}_{s+1}`, and `chi` from there into
/// `M^{m+2}_{s+1}(eps)`.
pub fn lightcone_factorization(eps: i8, m: usize, s: usize) -> Result<(ImmersionChart, ImmersionChart, ImmersionChart)> {
    if eps == 0 || s > m {
        return Err(Error::Unsupported("lightcone factorization needs eps = +-1 and s <= m"));
    }
    let mut b = Builder::new();
    if eps > 0 {
        sphere(&mut b, m, s, 1.0);
    } else {
        hyperbolic(&mut b, m, s, 1.0);
    }
    let base = b.finish(eps)?;
    let n = m + 1;
    let mut rho = vars_of(n);
    let mut chi = vars_of(n + 1);
    if eps > 0 {
        rho.insert(0, Expr::c(1.0));
        chi.push(Expr::c(1.0));
    } else {
        rho.push(Expr::c(1.0));
        chi.insert(0, Expr::c(1.0));
    }
    let unit = |k: usize| vec![[-1.0, 1.0]; k];
    let rho = ImmersionChart::new(rho, n, AmbientSpace::flat(m + 2, s + 1), unit(n))?;
    let target = if eps > 0 { AmbientSpace::sphere(m + 2, s + 1) } else { AmbientSpace::hyperbolic(m + 2, s + 1) };
    let chi = ImmersionChart::new(chi, n + 1, target, unit(n + 1))?;
    Ok((base, rho, chi))
}

/// Factors of the parallel surface: `phi: E^3 -> S^4_1(1)`,
/// `x -> (|x|^2 - 3/4, x, |x|^2 - 5/4)` and `psi: (u, v) -> (a cos u, a sin u, v)`.
pub fn parallel_surface_factors(a: f64) -> Result<(ImmersionChart, ImmersionChart)> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::ParamOutOfRange { name: "a".to_string(), value: a, domain: "(0, inf)".to_string() });
    }
    let q = quadratic(&[0, 1, 2], 0);
    let mut phi = vec![q.clone() - 0.75];
    phi.extend(vars_of(3));
    phi.push(q - 1.25);
    let phi = ImmersionChart::new(phi, 3, AmbientSpace::sphere(4, 1), vec![[-1.0, 1.0]; 3])?;
    let (u, v) = (Expr::var(0), Expr::var(1));
    let psi = ImmersionChart::new(
        vec![a * u.clone().cos(), a * u.sin(), v],
        2,
        AmbientSpace::flat(3, 0),
        vec![[-0.5, 0.5]; 2],
    )?;
    Ok((phi, psi))
}

fn vars_of(n: usize) -> Vec<Expr> {
    (0..n).map(Expr::var).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{compose, JetOrder};
    use crate::sampling;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn ids_are_unique_and_resolvable() {
        let mut ids: Vec<&str> = families().iter().map(|f| f.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 41);
        assert_eq!(find("plane-Π").unwrap().id, "plane");
        assert_eq!(find("lightcone-Λ").unwrap().id, "lightcone");
        assert!(matches!(find("main1-8"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn main1_5_chart() {
        let chart = instantiate("main1-5", &params(&[("m", 2.0), ("s", 0.0)])).unwrap();
        assert_eq!(chart.ambient(), AmbientSpace::sphere(4, 1));
        let u = [0.1, -0.2];
        let z = libm::sqrt(1.0 - 0.01 - 0.04);
        let expect = [1.0, 0.1, -0.2, z, 1.0];
        let got = chart.values(&u).unwrap();
        for i in 0..5 {
            assert!((got[i] - expect[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn main1_1_chart() {
        let chart = instantiate("main1-1", &Params::new()).unwrap();
        let got = chart.values(&[0.3, 0.1]).unwrap();
        assert_eq!(got.as_slice(), &[0.3, 0.1, libm::sqrt(0.9), 0.0]);
    }

    #[test]
    fn s_example_chart() {
        let chart = instantiate("S-example", &params(&[("m", 1.0), ("s", 0.0)])).unwrap();
        assert_eq!(chart.ambient(), AmbientSpace::sphere(4, 2));
        // Chart variables are (v, t).
        let (v, t) = (0.3, -0.2);
        let got = chart.values(&[v, t]).unwrap();
        assert_eq!(got.as_slice(), &[-v * v / 2.0, t, v, t, 1.0 - v * v / 2.0]);
    }

    #[test]
    fn s_theta_reduces_to_s_example() {
        let theta0 = instantiate("S-theta", &params(&[("m", 2.0), ("theta", 0.0)])).unwrap();
        let s = instantiate("S-example", &params(&[("m", 2.0), ("s", 0.0)])).unwrap();
        for p in [[0.0, 0.0, 0.0], [0.2, -0.1, 0.3]] {
            assert_eq!(theta0.values(&p).unwrap(), s.values(&p).unwrap());
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        for (id, r) in [("main1-3", 1.0), ("main1-4", 1.0), ("main1-6", 0.0), ("main2-3", 1.5)] {
            assert!(matches!(instantiate(id, &params(&[("r", r)])), Err(Error::ParamOutOfRange { .. })), "{id}");
        }
        assert!(matches!(
            instantiate("plane", &params(&[("s", 0.0), ("t", 0.0), ("r", 0.0)])),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn every_entry_lies_on_its_quadric() {
        let mut rng = sampling::rng(11);
        for family in families() {
            let mut sets = vec![family.defaults()];
            for _ in 0..3 {
                sets.push(family.draw(&mut rng));
            }
            for p in sets {
                let chart = family.instantiate(&p).unwrap_or_else(|e| panic!("{} {p:?}: {e}", family.id));
                for u in sampling::sample_points(&chart, 16, &mut rng) {
                    let y = chart.values(&u).unwrap();
                    let res = chart.ambient().constraint_residual(&y);
                    assert!(res <= 1e-12, "{} {p:?} at {u:?}: {res:e}", family.id);
                }
                let e = family.expected(&p).unwrap();
                assert!(!e.totally_geodesic || e.totally_umbilical);
            }
        }
    }

    #[test]
    fn lightcone_image_is_null() {
        for id in ["lightcone", "U-flat"] {
            let chart = instantiate(id, &Params::new()).unwrap();
            let sig = chart.ambient().embedding();
            for u in sampling::sample_points(&chart, 8, &mut sampling::rng(1)) {
                let y = chart.values(&u).unwrap();
                assert!(sig.dot(&y, &y).abs() < 1e-12, "{id}");
            }
        }
    }

    #[test]
    fn continuous_in_parameters() {
        let u = [0.1, 0.05];
        let f = |r: f64| instantiate("main1-3", &params(&[("r", r)])).unwrap().values(&u).unwrap();
        for d in [1e-3, 1e-5] {
            assert!((f(0.5 + d) - f(0.5)).norm() <= 10.0 * d);
        }
    }

    #[test]
    fn lightcone_factorization_gives_codimension_two_embedding() {
        for (eps, id) in [(1, "main1-5"), (-1, "main2-5")] {
            let (base, rho, chi) = lightcone_factorization(eps, 2, 1).unwrap();
            let psi = compose(&chi, &compose(&rho, &base).unwrap()).unwrap();
            let direct = instantiate(id, &params(&[("m", 2.0), ("s", 1.0)])).unwrap();
            for u in sampling::sample_points(&direct, 8, &mut sampling::rng(2)) {
                assert!((psi.values(&u).unwrap() - direct.values(&u).unwrap()).amax() <= 1e-12);
            }
        }
    }

    #[test]
    fn parallel_surface_factors_compose() {
        let (phi, psi) = parallel_surface_factors(1.0).unwrap();
        let f = compose(&phi, &psi).unwrap();
        let direct = instantiate("cv-parallel", &Params::new()).unwrap();
        for u in sampling::sample_points(&direct, 8, &mut sampling::rng(3)) {
            assert!((f.values(&u).unwrap() - direct.values(&u).unwrap()).amax() <= 1e-12);
            let a = f.jets(&u, JetOrder::Two).unwrap();
            let b = direct.jets(&u, JetOrder::Two).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x.hess(0, 0) - y.hess(0, 0)).abs() < 1e-12);
            }
        }
    }
}
