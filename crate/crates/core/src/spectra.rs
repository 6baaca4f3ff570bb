//! Closed-form spectra of the all-Dirichlet operators and bounds of the
//! preconditioned spectrum.
//!
//! With `s_r = sin(r pi h / 2)` the second difference `D = h^2 delta^2` has
//! eigenvalues `-4 s_r^2`, so both `A6` and `A2` are functions of the three
//! per-axis values `s_m^2, s_n^2, s_s^2`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::domain::C64;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Sixth-order operator.
    A,
    /// Second-order preconditioner.
    Ap,
}

fn check_index(j: usize, n: usize) {
    assert!((1..=n).contains(&j), "mode index {j} outside 1..={n}");
}

/// Eigenvalue of the 1D operator for mode `sin(j l pi h)`, `h = 1/(n+1)`.
pub fn eig_1d(j: usize, n: usize, k: C64, h: f64, which: Which) -> C64 {
    check_index(j, n);
    let theta = j as f64 * PI * h;
    let kh2 = k * k * h * h;
    let lp = -4.0 * (0.5 * theta).sin().powi(2) + kh2;
    match which {
        Which::Ap => lp,
        Which::A => lp - kh2 * kh2 * (14.0 + theta.cos()) / 180.0,
    }
}

/// `(A, A_p)` eigenvalues from the squared sines of the three mode indices.
#[inline]
fn eig_3d_from_sines(s: [f64; 3], kh2: C64) -> (C64, C64) {
    let [a, b, c] = s;
    let lp = -4.0 * (a + b + c) + kh2;
    let lam = -4.0 * (a + b + c)
        + (8.0 / 3.0) * (1.0 + kh2 / 30.0) * (a * b + a * c + b * c)
        - (32.0 / 15.0) * a * b * c
        + kh2 * (1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0);
    (lam, lp)
}

/// Eigenvalue of the 3D all-Dirichlet operators for mode `(m, n, s)`,
/// `h = 1/(N+1)`.
pub fn eig_3d(m: usize, n: usize, s: usize, big_n: usize, k: C64, h: f64, which: Which) -> C64 {
    for j in [m, n, s] {
        check_index(j, big_n);
    }
    let sq = |r: usize| (r as f64 * PI * h / 2.0).sin().powi(2);
    let (lam, lp) = eig_3d_from_sines([sq(m), sq(n), sq(s)], k * k * h * h);
    match which {
        Which::A => lam,
        Which::Ap => lp,
    }
}

/// Extremes of `d = lambda / lambda_p - 1` over all modes and the distance
/// of the preconditioner spectrum from zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSummary {
    pub d_min: f64,
    pub d_max: f64,
    /// `min |lambda_p| / h^2` over all modes.
    pub delta0: f64,
    /// Mode attaining `delta0`.
    pub mode_at_min: [usize; 3],
}

impl SpectrumSummary {
    /// Bounds `(m, M)` of `1 - lambda / lambda_p`, the quantity tabulated in
    /// the reference eigenvalue-bound table.
    pub fn table_bounds(&self) -> (f64, f64) {
        (-self.d_max, -self.d_min)
    }

    /// Interval `[1 + d_min, 1 + d_max]` containing the spectrum of
    /// `A A_p^{-1}`.
    pub fn preconditioned_interval(&self) -> (f64, f64) {
        (1.0 + self.d_min, 1.0 + self.d_max)
    }

    fn merge(self, other: Self) -> Self {
        let (delta0, mode_at_min) = if other.delta0 < self.delta0 {
            (other.delta0, other.mode_at_min)
        } else {
            (self.delta0, self.mode_at_min)
        };
        SpectrumSummary {
            d_min: self.d_min.min(other.d_min),
            d_max: self.d_max.max(other.d_max),
            delta0,
            mode_at_min,
        }
    }

    fn empty() -> Self {
        SpectrumSummary {
            d_min: f64::INFINITY,
            d_max: f64::NEG_INFINITY,
            delta0: f64::INFINITY,
            mode_at_min: [0; 3],
        }
    }

    fn visit(&mut self, s: [f64; 3], kh2: f64, h2: f64, mode: [usize; 3]) {
        let (lam, lp) = eig_3d_from_sines(s, C64::new(kh2, 0.0));
        let d = lam.re / lp.re - 1.0;
        self.d_min = self.d_min.min(d);
        self.d_max = self.d_max.max(d);
        let dist = lp.re.abs() / h2;
        if dist < self.delta0 {
            self.delta0 = dist;
            self.mode_at_min = mode;
        }
    }
}

/// Exhaustive scan over all mode triples of the `n^3` all-Dirichlet grid
/// with step `h` and real wavenumber `k`. Uses the symmetry of the
/// eigenvalues under index permutation, so only `m <= n <= s` is visited.
pub fn spectrum_summary(n: usize, k: f64, h: f64) -> SpectrumSummary {
    let sq: Vec<f64> = (1..=n).map(|r| (r as f64 * PI * h / 2.0).sin().powi(2)).collect();
    let kh2 = k * k * h * h;
    let h2 = h * h;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = SpectrumSummary::empty();
            for j in i..n {
                for l in j..n {
                    acc.visit([sq[i], sq[j], sq[l]], kh2, h2, [i + 1, j + 1, l + 1]);
                }
            }
            acc
        })
        .reduce(SpectrumSummary::empty, SpectrumSummary::merge)
}

/// Plain triple loop without the symmetry reduction; an oracle for
/// [`spectrum_summary`].
pub fn spectrum_summary_bruteforce(n: usize, k: f64, h: f64) -> SpectrumSummary {
    let mut acc = SpectrumSummary::empty();
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                let lam = eig_3d(i, j, l, n, C64::new(k, 0.0), h, Which::A).re;
                let lp = eig_3d(i, j, l, n, C64::new(k, 0.0), h, Which::Ap).re;
                let d = lam / lp - 1.0;
                acc.d_min = acc.d_min.min(d);
                acc.d_max = acc.d_max.max(d);
                let dist = lp.abs() / (h * h);
                if dist < acc.delta0 {
                    acc.delta0 = dist;
                    acc.mode_at_min = [i, j, l];
                }
            }
        }
    }
    acc
}

/// 1D analogue of `delta0`: `min_j |4 sin^2(j pi h/2)/h^2 - k^2|`.
pub fn delta0_1d_scan(n: usize, k: f64, h: f64) -> f64 {
    (1..=n)
        .map(|j| (4.0 * (j as f64 * PI * h / 2.0).sin().powi(2) / (h * h) - k * k).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Analytic lower bound for `delta0` valid on the grid `h1` and all finer
/// grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Delta0Estimate {
    pub value: f64,
    pub j0: usize,
    pub j1: usize,
    /// `k^2 - j0^2 pi^2`
    pub lower: f64,
    /// `j1^2 pi^2 - k^2 - (j1 pi)^4 h1^2 / 12`
    pub upper: f64,
}

/// Brackets the discrete spectrum around `k^2` by the two modes `j0`, `j1`
/// nearest to it. For `k^2 < 9` the fixed value `1/3` is returned.
pub fn estimate_delta0(k: f64, h1: f64) -> Result<Delta0Estimate> {
    if !(k * h1 < 2.0 * PI / 10.0) {
        return Err(Error::PointsPerWavelength {
            kh: k * h1,
            limit: 2.0 * PI / 10.0,
        });
    }
    let alpha0 = (k * h1 / 2.0).asin();
    let j0 = (2.0 * alpha0 / (PI * h1)).floor() as usize;
    let j1 = j0 + 1;
    let lower = if j0 >= 1 {
        k * k - (j0 as f64 * PI).powi(2)
    } else {
        f64::INFINITY
    };
    let upper = (j1 as f64 * PI).powi(2) - k * k - (j1 as f64 * PI).powi(4) * h1 * h1 / 12.0;
    if k * k < 9.0 {
        return Ok(Delta0Estimate {
            value: 1.0 / 3.0,
            j0,
            j1,
            lower,
            upper,
        });
    }
    let value = lower.min(upper);
    if !(value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "nonpositive delta0 bracket ({lower:.4}, {upper:.4}) for k={k}, h={h1}: k^2 is too close to the discrete spectrum"
        )));
    }
    Ok(Delta0Estimate {
        value,
        j0,
        j1,
        lower,
        upper,
    })
}

/// Wavenumbers and grids of the eigenvalue-bound table.
pub const TABLE_KS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
pub const TABLE_INTERVALS: [usize; 4] = [64, 128, 256, 512];
/// Coarsest grid (as interval count) used for the `delta0` row, per `k`.
pub const TABLE_H1_INTERVALS: [usize; 5] = [64, 128, 256, 256, 512];

/// One cell of the bound table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCell {
    pub k: f64,
    pub intervals: usize,
    pub summary: SpectrumSummary,
}

/// Summaries for every `(k, h)` pair of the bound table; `h = 1/intervals`
/// and `N = intervals - 1` unknowns per axis.
pub fn bound_table(ks: &[f64], intervals: &[usize]) -> Vec<BoundCell> {
    let mut out = Vec::with_capacity(ks.len() * intervals.len());
    for &m in intervals {
        for &k in ks {
            out.push(BoundCell {
                k,
                intervals: m,
                summary: spectrum_summary(m - 1, k, 1.0 / m as f64),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_d_ratio_formula() {
        let (k, n) = (C64::new(20.0, 0.0), 63);
        let h = 1.0 / 64.0;
        for j in [1, 5, 40, 63] {
            let lam = eig_1d(j, n, k, h, Which::A);
            let lp = eig_1d(j, n, k, h, Which::Ap);
            let theta = j as f64 * PI * h;
            let expected = (k * h).powi(4) * (14.0 + theta.cos()) / 180.0
                / (4.0 * (theta / 2.0).sin().powi(2) - (k * h).powi(2));
            assert!(((lam / lp - 1.0) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn symmetric_scan_equals_brute_force() {
        for k in [3.0, 10.0, 20.0] {
            let a = spectrum_summary(15, k, 1.0 / 16.0);
            let b = spectrum_summary_bruteforce(15, k, 1.0 / 16.0);
            assert!((a.d_min - b.d_min).abs() < 1e-14);
            assert!((a.d_max - b.d_max).abs() < 1e-14);
            assert!((a.delta0 - b.delta0).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvalues_are_permutation_symmetric() {
        let k = C64::new(12.0, 0.5);
        let a = eig_3d(2, 5, 7, 9, k, 0.1, Which::A);
        for (m, n, s) in [(5, 2, 7), (7, 5, 2), (2, 7, 5)] {
            assert!((eig_3d(m, n, s, 9, k, 0.1, Which::A) - a).norm() < 1e-14);
        }
    }

    #[test]
    fn delta0_example_values() {
        let e = estimate_delta0(20.0, 1.0 / 32.0).unwrap();
        assert_eq!((e.j0, e.j1), (6, 7));
        assert_eq!(e.value.floor(), 44.0);
        assert!(e.upper > 63.0);
        assert_eq!(estimate_delta0(2.5, 0.1).unwrap().value, 1.0 / 3.0);
    }

    #[test]
    fn delta0_estimate_is_a_lower_bound_of_the_scan() {
        for (k, m) in [(20.0, 32), (20.0, 64), (10.0, 64), (30.0, 128)] {
            let h = 1.0 / m as f64;
            if let Ok(e) = estimate_delta0(k, h) {
                assert!(delta0_1d_scan(m - 1, k, h) >= e.value, "k={k} h=1/{m}");
            }
        }
    }
}
