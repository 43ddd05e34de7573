//! Assembles chart maps coordinate by coordinate, tracking each coordinate's
//! sign so the ambient signature falls out of the construction.

use alloc::vec::Vec;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::jets::{quadratic, Expr, ImmersionChart};

/// A run of ambient coordinates with their metric signs (`-1` or `+1`).
pub(crate) type Piece = Vec<(Expr, i8)>;

#[derive(Default)]
pub(crate) struct Builder {
    coords: Piece,
    boxes: Vec<[f64; 2]>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocate `k` chart variables, all sampled from `[lo, hi]`.
    pub fn vars(&mut self, k: usize, lo: f64, hi: f64) -> Vec<usize> {
        let start = self.boxes.len();
        self.boxes.extend(core::iter::repeat_n([lo, hi], k));
        (start..start + k).collect()
    }

    pub fn var(&mut self, lo: f64, hi: f64) -> Expr {
        Expr::var(self.vars(1, lo, hi)[0])
    }

    pub fn push(&mut self, e: Expr, sign: i8) {
        self.coords.push((e, sign));
    }

    pub fn extend(&mut self, piece: Piece) {
        self.coords.extend(piece);
    }

    /// `E^k_s`: plain coordinates on `[-0.5, 0.5]`, the first `s` negative.
    pub fn flat(&mut self, k: usize, s: usize) -> (Vec<usize>, Piece) {
        let vs = self.vars(k, -0.5, 0.5);
        let piece = signed(&vs, s);
        (vs, piece)
    }

    /// `S^k_s(r2)` in `E^{k+1}_s` as the graph `(u, sqrt(r2 - <u,u>_s))`.
    pub fn sphere(&mut self, k: usize, s: usize, r2: f64) -> Piece {
        let h = half_width(k, r2);
        let vs = self.vars(k, -h, h);
        let mut piece = signed(&vs, s);
        piece.push(((r2 - quadratic(&vs, s)).sqrt(), 1));
        piece
    }

    /// `H^k_s(-r2)` in `E^{k+1}_{s+1}` as the graph `(sqrt(r2 + <u,u>_s), u)`.
    pub fn hyperbolic(&mut self, k: usize, s: usize, r2: f64) -> Piece {
        let h = half_width(k, r2);
        let vs = self.vars(k, -h, h);
        let mut piece = alloc::vec![((r2 + quadratic(&vs, s)).sqrt(), -1)];
        piece.extend(signed(&vs, s));
        piece
    }

    /// The lightcone `Lambda^k_s` in `E^{k+1}_{s+1}` as `(sqrt(<u,u>_s), u)`,
    /// sampled around `u = e_k` where `<u,u>_s > 0`. Needs `s < k`.
    pub fn cone(&mut self, k: usize, s: usize) -> Piece {
        let w = 0.2 / libm::sqrt(k as f64);
        let mut vs = self.vars(k - 1, -w, w);
        vs.extend(self.vars(1, 0.8, 1.2));
        let mut piece = alloc::vec![(quadratic(&vs, s).sqrt(), -1)];
        piece.extend(signed(&vs, s));
        piece
    }

    pub fn finish(self, epsilon: i8) -> Result<ImmersionChart> {
        let signs: Vec<i8> = self.coords.iter().map(|c| c.1).collect();
        let neg = signs.iter().take_while(|&&s| s < 0).count();
        if signs[neg..].iter().any(|&s| s < 0) {
            return Err(Error::Unsupported("coordinates are not in negative-first order"));
        }
        let n = signs.len();
        let ambient = match epsilon {
            0 => AmbientSpace::flat(n, neg),
            1 => AmbientSpace::sphere(n - 1, neg),
            _ => AmbientSpace::hyperbolic(n - 1, neg - 1),
        };
        let vars = self.boxes.len();
        ImmersionChart::new(self.coords.into_iter().map(|c| c.0).collect(), vars, ambient, self.boxes)
    }
}

/// Half-width of a cube whose points satisfy `|u|^2 <= r2 / 4`.
fn half_width(k: usize, r2: f64) -> f64 {
    0.5 * libm::sqrt(r2) / libm::sqrt(k.max(1) as f64)
}

fn signed(vs: &[usize], neg: usize) -> Piece {
    vs.iter().enumerate().map(|(i, &v)| (Expr::var(v), if i < neg { -1 } else { 1 })).collect()
}
