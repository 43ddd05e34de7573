use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Vector;

use super::chart::ImmersionChart;
use super::jet::{Jet3, JetOrder};

/// Central finite-difference jets of every coordinate of `chart`, truncation
/// error `O(step^2)` for all three derivative orders. The stencil reaches `2 * step`
/// from `point` along each axis.
#[allow(clippy::needless_range_loop)]
pub fn fd_oracle(chart: &ImmersionChart, point: &[f64], step: f64) -> Result<Vec<Jet3>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadTolerance(step));
    }
    let m = chart.vars();
    if point.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: point.len() });
    }
    if m > super::MAX_VARS {
        return Err(Error::TooManyVariables(m));
    }
    let n = chart.coords();
    let f = |offset: &[(usize, f64)]| -> Result<Vector> {
        let mut x = point.to_vec();
        for &(i, d) in offset {
            x[i] += d * step;
        }
        chart.values(&x)
    };
    let hess_at = |shift: &[(usize, f64)], i: usize, j: usize| -> Result<Vector> {
        let at = |extra: &[(usize, f64)]| {
            let mut o = shift.to_vec();
            o.extend_from_slice(extra);
            f(&o)
        };
        if i == j {
            Ok((at(&[(i, 1.0)])? - at(&[])? * 2.0 + at(&[(i, -1.0)])?) / (step * step))
        } else {
            Ok((at(&[(i, 1.0), (j, 1.0)])? - at(&[(i, 1.0), (j, -1.0)])? - at(&[(i, -1.0), (j, 1.0)])?
                + at(&[(i, -1.0), (j, -1.0)])?)
                / (4.0 * step * step))
        }
    };

    let center = f(&[])?;
    let mut grad = vec![Vector::zeros(n); m];
    for (i, g) in grad.iter_mut().enumerate() {
        *g = (f(&[(i, 1.0)])? - f(&[(i, -1.0)])?) / (2.0 * step);
    }
    let mut hess = vec![vec![Vector::zeros(n); m]; m];
    let mut third = vec![vec![vec![Vector::zeros(n); m]; m]; m];
    for i in 0..m {
        for j in i..m {
            let h = hess_at(&[], i, j)?;
            hess[i][j] = h.clone();
            hess[j][i] = h;
            for k in j..m {
                let t = (hess_at(&[(k, 1.0)], i, j)? - hess_at(&[(k, -1.0)], i, j)?) / (2.0 * step);
                for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    third[a][b][c] = t.clone();
                }
            }
        }
    }

    Ok((0..n)
        .map(|c| {
            let g: Vec<f64> = grad.iter().map(|v| v[c]).collect();
            let t = |i: usize, j: usize, k: usize| third[i][j][k][c];
            Jet3::from_parts(center[c], &g, |i, j| hess[i][j][c], Some(&t))
        })
        .collect())
}

/// Largest jet-vs-FD gap per derivative order (first, second, third) at one step.
fn gaps(exact: &[Jet3], approx: &[Jet3]) -> [f64; 3] {
    let mut out = [0.0_f64; 3];
    for (e, a) in exact.iter().zip(approx) {
        let m = e.vars().max(a.vars());
        for i in 0..m {
            out[0] = out[0].max((e.grad(i) - a.grad(i)).abs());
            for j in 0..m {
                out[1] = out[1].max((e.hess(i, j) - a.hess(i, j)).abs());
                for k in 0..m {
                    if let (Some(x), Some(y)) = (e.third(i, j, k), a.third(i, j, k)) {
                        out[2] = out[2].max((x - y).abs());
                    }
                }
            }
        }
    }
    out
}

/// Outcome of comparing exact jets with finite differences at `h`, `h/2`, `h/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonCheck {
    pub step: f64,
    /// Gaps `[first, second, third]` at each of the three steps.
    pub gaps: [[f64; 3]; 3],
    /// `gap(h)/gap(h/2)` and `gap(h/2)/gap(h/4)` for first and second derivatives.
    pub ratios: [[f64; 2]; 2],
    /// Differences vanish to rounding (polynomials of degree ≤ 2 per direction),
    /// so no convergence order can be measured.
    pub exact: [bool; 2],
}

/// Below this a finite-difference gap is rounding noise, not truncation error.
pub const FD_NOISE_FLOOR: f64 = 1e-9;

impl RichardsonCheck {
    /// Each derivative order either converges at the second-order rate or is
    /// already exact.
    pub fn ratios_ok(&self) -> bool {
        (0..2).all(|d| self.exact[d] || self.ratios[d].iter().all(|r| (3.5..=4.5).contains(r)))
    }

    /// Worst first/second-derivative gap at the finest step.
    pub fn finest_gap(&self) -> f64 {
        self.gaps[2][0].max(self.gaps[2][1])
    }
}

pub fn richardson_check(chart: &ImmersionChart, point: &[f64], step: f64) -> Result<RichardsonCheck> {
    let exact = chart.jets(point, JetOrder::Three)?;
    let mut gaps_out = [[0.0; 3]; 3];
    for (k, g) in gaps_out.iter_mut().enumerate() {
        let h = step / f64::from(1u32 << k);
        *g = gaps(&exact, &fd_oracle(chart, point, h)?);
    }
    let mut ratios = [[0.0; 2]; 2];
    let mut is_exact = [false; 2];
    for d in 0..2 {
        ratios[d] = [gaps_out[0][d] / gaps_out[1][d], gaps_out[1][d] / gaps_out[2][d]];
        is_exact[d] = gaps_out[2][d] < FD_NOISE_FLOOR;
    }
    Ok(RichardsonCheck { step, gaps: gaps_out, ratios, exact: is_exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpace;
    use crate::jets::expr::{quadratic, Expr};
    use crate::linalg::Matrix;

    fn unit_sphere() -> ImmersionChart {
        let z = (1.0 - quadratic(&[0, 1], 0)).sqrt();
        ImmersionChart::new(
            vec![Expr::var(0), Expr::var(1), z],
            2,
            AmbientSpace::sphere(2, 0),
            vec![[-0.35, 0.35]; 2],
        )
        .unwrap()
    }

    #[test]
    fn sphere_chart_agrees_with_jets() {
        let chart = unit_sphere();
        let p = [0.1, 0.2];
        let g = gaps(&chart.jets(&p, JetOrder::Three).unwrap(), &fd_oracle(&chart, &p, 1e-4).unwrap());
        assert!(g[0] <= 1e-6 && g[1] <= 1e-6, "{g:?}");
    }

    #[test]
    fn linear_map_gradient_is_exact() {
        let l = Matrix::from_row_slice(2, 2, &[2.0, -1.0, 0.5, 3.0]);
        let chart = ImmersionChart::linear(&l, AmbientSpace::flat(2, 1)).unwrap();
        for step in [1e-1, 1e-3] {
            let fd = fd_oracle(&chart, &[0.3, -0.7], step).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    assert!((fd[r].grad(c) - l[(r, c)]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn second_order_convergence() {
        let check = richardson_check(&unit_sphere(), &[0.1, 0.2], 0.035).unwrap();
        assert!(check.ratios_ok(), "{check:?}");
        assert!(!check.exact[0]);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(matches!(fd_oracle(&unit_sphere(), &[0.0, 0.0], 0.0), Err(Error::BadTolerance(_))));
    }
}
