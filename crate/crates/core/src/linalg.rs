//! Small vector kernels used by the iterative solvers.

use rayon::prelude::*;

use crate::domain::C64;

const PAR_MIN: usize = 1 << 15;

pub fn norm2(x: &[C64]) -> f64 {
    if x.len() >= PAR_MIN {
        x.par_chunks(PAR_MIN)
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    } else {
        x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `sum conj(x_i) y_i`
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    if x.len() >= PAR_MIN {
        x.par_chunks(PAR_MIN)
            .zip(y.par_chunks(PAR_MIN))
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u.conj() * v).sum::<C64>())
            .sum()
    } else {
        x.iter().zip(y).map(|(u, v)| u.conj() * v).sum()
    }
}

/// `y += a x`
pub fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    debug_assert_eq!(x.len(), y.len());
    if x.len() >= PAR_MIN {
        y.par_chunks_mut(PAR_MIN)
            .zip(x.par_chunks(PAR_MIN))
            .for_each(|(yc, xc)| yc.iter_mut().zip(xc).for_each(|(v, u)| *v += a * u));
    } else {
        y.iter_mut().zip(x).for_each(|(v, u)| *v += a * u);
    }
}

pub fn scale(a: C64, x: &mut [C64]) {
    if x.len() >= PAR_MIN {
        x.par_iter_mut().for_each(|v| *v *= a);
    } else {
        x.iter_mut().for_each(|v| *v *= a);
    }
}

/// `out = a - b`
pub fn sub(a: &[C64], b: &[C64], out: &mut [C64]) {
    if a.len() >= PAR_MIN {
        out.par_iter_mut()
            .zip(a.par_iter().zip(b.par_iter()))
            .for_each(|(o, (x, y))| *o = x - y);
    } else {
        for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
            *o = x - y;
        }
    }
}

pub fn max_abs(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_is_conjugate_linear_in_first_argument() {
        let x = [C64::new(1.0, 2.0), C64::new(0.0, -1.0)];
        let y = [C64::new(3.0, 0.0), C64::new(1.0, 1.0)];
        let d = dot(&x, &y);
        let expected = C64::new(1.0, -2.0) * 3.0 + C64::new(0.0, 1.0) * C64::new(1.0, 1.0);
        assert!((d - expected).norm() < 1e-15);
        assert!((dot(&x, &x).re - norm2(&x).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn parallel_paths_agree_with_serial() {
        let n = PAR_MIN * 2 + 7;
        let x: Vec<C64> = (0..n).map(|i| C64::new((i as f64).sin(), (i as f64).cos())).collect();
        let serial: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm2(&x) - serial).abs() < 1e-10 * serial);
    }
}
