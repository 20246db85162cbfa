//! Coarse peak picking, parabolic refinement and angle conversion.

use crate::gcc::DelayGrid;
use crate::{Error, Result};

/// Largest accepted `|y- - 2 y0 + y+|` before a triple is treated as flat.
pub const FLAT_TOLERANCE: f64 = 1e-12;

/// Per-frame delay estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdoaEstimate {
    /// Grid delay with the largest correlation, in samples.
    pub tau_star: f64,
    /// Refined delay, in samples.
    pub tau_hat: f64,
    /// Direction of arrival, radians in `[0, pi]`.
    pub theta_hat: f64,
    /// Correlation at `tau_star`.
    pub peak: f64,
    /// Set when refinement was skipped: maximum on a grid edge or a flat triple.
    pub boundary: bool,
}

/// Coarse maximum of a correlation vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Argmax {
    pub tau_star: f64,
    pub index: usize,
    pub peak: f64,
}

/// Ties resolve to the lowest index, i.e. the most negative delay.
pub fn argmax_delay(y: &[f64], grid: &DelayGrid) -> Result<Argmax> {
    if y.is_empty() {
        return Err(Error::Empty);
    }
    if y.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            actual: y.len(),
        });
    }
    let mut index = 0;
    for (i, &v) in y.iter().enumerate().skip(1) {
        if v > y[index] {
            index = i;
        }
    }
    Ok(Argmax {
        tau_star: grid.tau(index),
        index,
        peak: y[index],
    })
}

/// `(tau_hat, flagged)`: parabola through `y[index - 1..=index + 1]`.
pub fn refine_quadratic(y: &[f64], index: usize, grid: &DelayGrid) -> (f64, bool) {
    let tau_star = grid.tau(index);
    if index == 0 || index + 1 >= y.len() {
        return (tau_star, true);
    }
    let (lo, mid, hi) = (y[index - 1], y[index], y[index + 1]);
    let den = lo - 2.0 * mid + hi;
    if den.abs() < FLAT_TOLERANCE {
        return (tau_star, true);
    }
    (tau_star + 0.5 * grid.delta() * (lo - hi) / den, false)
}

/// `arccos(tau c / (d fs))`, the argument clamped to `[-1, 1]`.
pub fn delay_to_angle(tau: f64, d: f64, c: f64, fs: f64) -> f64 {
    libm::acos((tau * c / (d * fs)).clamp(-1.0, 1.0))
}

/// Mean absolute angle error in degrees.
pub fn mae(theta_true: &[f64], theta_est: &[f64]) -> Result<f64> {
    if theta_true.len() != theta_est.len() {
        return Err(Error::LengthMismatch {
            expected: theta_true.len(),
            actual: theta_est.len(),
        });
    }
    if theta_true.is_empty() {
        return Err(Error::Empty);
    }
    let sum: f64 = theta_true
        .iter()
        .zip(theta_est)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok((sum / theta_true.len() as f64).to_degrees())
}

/// Argmax, refinement and angle for one correlation vector.
pub fn estimate(y: &[f64], grid: &DelayGrid, d: f64, c: f64) -> Result<TdoaEstimate> {
    let top = argmax_delay(y, grid)?;
    let (tau_hat, boundary) = refine_quadratic(y, top.index, grid);
    Ok(TdoaEstimate {
        tau_star: top.tau_star,
        tau_hat,
        theta_hat: delay_to_angle(tau_hat, d, c, grid.sample_rate()),
        peak: top.peak,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn grid(tmax: u32, sub: u32) -> DelayGrid {
        DelayGrid::new(tmax, sub, 16000.0).unwrap()
    }

    #[test]
    fn argmax_examples() {
        let g = DelayGrid::new(0, 1, 16000.0).unwrap();
        assert_eq!(argmax_delay(&[3.0], &g).unwrap().tau_star, 0.0);
        let g = grid(1, 2);
        let y = [0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(argmax_delay(&y, &g).unwrap().tau_star, 0.0);
        assert_eq!(argmax_delay(&[2.0; 5], &g).unwrap().tau_star, -1.0);
        let scaled: alloc::vec::Vec<f64> = [0.1, 0.7, 0.3, 0.7, 0.2].iter().map(|v| v * 42.0).collect();
        let a = argmax_delay(&scaled, &g).unwrap();
        assert_eq!((a.index, a.tau_star), (1, -0.5));
        assert!(matches!(argmax_delay(&[], &g), Err(Error::Empty)));
        assert!(argmax_delay(&[1.0; 4], &g).is_err());
    }

    #[test]
    fn refinement_examples() {
        let g = grid(1, 2);
        assert_eq!(refine_quadratic(&[0.0, 0.5, 1.0, 0.5, 0.0], 2, &g), (0.0, false));
        // parabola with vertex at +0.1
        let p = |t: f64| 3.0 - 2.0 * (t - 0.1) * (t - 0.1);
        let y: alloc::vec::Vec<f64> = g.taus().map(p).collect();
        let (t, flag) = refine_quadratic(&y, 2, &g);
        assert!(!flag);
        assert!((t - 0.1).abs() < 1e-12);
        assert_eq!(refine_quadratic(&y, 0, &g), (-1.0, true));
        assert_eq!(refine_quadratic(&y, 4, &g), (1.0, true));
        assert_eq!(refine_quadratic(&[1.0; 5], 2, &g), (0.0, true));
    }

    #[test]
    fn angle_examples() {
        assert!((delay_to_angle(0.0, 0.1, 343.0, 16000.0) - PI / 2.0).abs() < 1e-15);
        let endfire: f64 = 0.05 * 16000.0 / 343.0;
        assert!((2.3324 - endfire).abs() < 1e-4);
        assert!(delay_to_angle(2.3324, 0.05, 343.0, 16000.0) < 0.01);
        assert_eq!(delay_to_angle(10.0, 0.05, 343.0, 16000.0), 0.0);
        assert_eq!(delay_to_angle(-10.0, 0.05, 343.0, 16000.0), PI);
    }

    #[test]
    fn mae_examples() {
        assert_eq!(mae(&[0.3, 1.0], &[0.3, 1.0]).unwrap(), 0.0);
        let one = PI / 180.0;
        assert!((mae(&[PI / 2.0], &[PI / 2.0 - one]).unwrap() - 1.0).abs() < 1e-12);
        assert!((mae(&[0.0, PI], &[one, PI - one]).unwrap() - 1.0).abs() < 1e-12);
        assert!(mae(&[], &[]).is_err());
        assert!(mae(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn estimate_combines_steps() {
        let g = grid(8, 2);
        let y: alloc::vec::Vec<f64> = g.taus().map(|t| -(t - 2.3) * (t - 2.3)).collect();
        let e = estimate(&y, &g, 0.1, 343.0).unwrap();
        assert_eq!(e.tau_star, 2.5);
        assert!((e.tau_hat - 2.3).abs() < 1e-12);
        assert!(!e.boundary);
        assert!((e.theta_hat - delay_to_angle(2.3, 0.1, 343.0, 16000.0)).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn recovers_parabola_vertex(
                sub in prop::sample::select(alloc::vec![1u32, 2, 4]),
                offset in -0.49f64..0.49,
                curvature in 0.01f64..100.0,
                height in -10.0f64..10.0,
            ) {
                let g = grid(4, sub);
                let center = g.len() / 2;
                let vertex = g.tau(center) + offset * g.delta();
                let y: alloc::vec::Vec<f64> = g.taus().map(|t| height - curvature * (t - vertex) * (t - vertex)).collect();
                let (t, flag) = refine_quadratic(&y, center, &g);
                prop_assert!(!flag);
                prop_assert!((t - vertex).abs() <= 1e-12);
            }

            #[test]
            fn refinement_stays_within_half_step(
                y0 in -5.0f64..5.0, dl in 1e-6f64..5.0, dh in 1e-6f64..5.0,
                sub in prop::sample::select(alloc::vec![1u32, 2, 4]),
            ) {
                let g = grid(1, sub);
                let center = g.len() / 2;
                let mut y = alloc::vec![f64::NEG_INFINITY; g.len()];
                y[center - 1] = y0 - dl;
                y[center] = y0;
                y[center + 1] = y0 - dh;
                let (t, flag) = refine_quadratic(&y, center, &g);
                prop_assert!(!flag);
                prop_assert!((t - g.tau(center)).abs() <= g.delta() / 2.0 + 1e-15);
            }

            #[test]
            fn scale_invariant(
                v in proptest::collection::vec(-1.0f64..1.0, 9), s in 1e-3f64..1e3,
            ) {
                let g = grid(2, 2);
                let e = estimate(&v, &g, 0.1, 343.0).unwrap();
                let w: alloc::vec::Vec<f64> = v.iter().map(|x| x * s).collect();
                let f = estimate(&w, &g, 0.1, 343.0).unwrap();
                prop_assert_eq!(e.tau_star, f.tau_star);
                prop_assert!((e.tau_hat - f.tau_hat).abs() <= 1e-9);
            }
        }
    }
}
