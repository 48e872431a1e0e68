use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;

/// Damped Gauss-Newton with a forward-difference Jacobian and a
/// pseudo-inverse step, so square, under- and rank-deficient systems are
/// all handled the same way.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Newton {
    pub max_iter: usize,
    pub fd_step: f64,
    pub target_norm: f64,
}

impl Default for Newton {
    fn default() -> Self {
        Self {
            max_iter: 80,
            fd_step: 1e-7,
            target_norm: 1e-14,
        }
    }
}

pub(crate) fn norm(r: &[f64]) -> f64 {
    libm::sqrt(r.iter().map(|x| x * x).sum())
}

impl Newton {
    /// Returns the final point and its residual norm. Errors from the
    /// residual function abort the run.
    pub fn run<F>(&self, f: F, x0: &[f64]) -> Result<(Vec<f64>, f64)>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>>,
    {
        let n = x0.len();
        let mut x = x0.to_vec();
        let mut r = f(&x)?;
        let mut rn = norm(&r);
        for _ in 0..self.max_iter {
            if rn < self.target_norm {
                break;
            }
            let m = r.len();
            let mut jac = DMatrix::<f64>::zeros(m, n);
            let mut xp = x.clone();
            for j in 0..n {
                xp[j] = x[j] + self.fd_step;
                let rp = f(&xp)?;
                for i in 0..m {
                    jac[(i, j)] = (rp[i] - r[i]) / self.fd_step;
                }
                xp[j] = x[j];
            }
            let svd = jac.svd(true, true);
            let smax = svd.singular_values.max();
            if smax == 0.0 {
                break;
            }
            let cutoff = 1e-10 * smax;
            let rhs = DVector::from_column_slice(&r);
            let step = match svd.solve(&rhs, cutoff) {
                Ok(s) => s,
                Err(_) => break,
            };
            let mut alpha = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - alpha * si).collect();
                let rt = f(&trial)?;
                let tn = norm(&rt);
                if tn < rn {
                    x = trial;
                    r = rt;
                    rn = tn;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Ok((x, rn))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_square_trig_system() {
        // sin(x) = 0.5, x + y = 1
        let f = |v: &[f64]| Ok(vec![libm::sin(v[0]) - 0.5, v[0] + v[1] - 1.0]);
        let (x, rn) = Newton::default().run(f, &[0.3, 0.0]).unwrap();
        assert!(rn < 1e-12);
        assert!((x[0] - core::f64::consts::FRAC_PI_6).abs() < 1e-10);
    }

    #[test]
    fn tolerates_identically_zero_rows() {
        let f = |v: &[f64]| Ok(vec![v[0] * v[0] - 2.0, 0.0, v[1] - v[0]]);
        let (x, rn) = Newton::default().run(f, &[1.0, 0.0]).unwrap();
        assert!(rn < 1e-12);
        assert!((x[1] - core::f64::consts::SQRT_2).abs() < 1e-10);
    }
}
