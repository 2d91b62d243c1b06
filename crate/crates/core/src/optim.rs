//! Box-constrained quasi-Newton minimizer (projected BFGS with Armijo backtracking).

/// Stopping rules for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConfig {
    /// Stop once an accepted step lowers the objective by less than `tol·max(1, |f|)`.
    pub tolerance: f64,
    /// Objective evaluations allowed, gradient evaluations included when they
    /// are finite differences (see [`Objective::grad_cost`]).
    pub max_evals: usize,
    /// Stop when the projected gradient norm falls below this.
    pub gtol: f64,
}

impl Default for LocalConfig {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_evals: 200, gtol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

pub trait Objective {
    fn value(&mut self, x: &[f64]) -> f64;
    fn gradient(&mut self, x: &[f64], g: &mut [f64]);
    /// Evaluations charged per gradient call in a `dim`-dimensional problem.
    fn grad_cost(&self, dim: usize) -> usize;
}

/// Wraps a plain function with central-difference gradients.
pub struct FiniteDifference<F> {
    pub f: F,
    pub step: f64,
}

impl<F: FnMut(&[f64]) -> f64> Objective for FiniteDifference<F> {
    fn value(&mut self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&mut self, x: &[f64], g: &mut [f64]) {
        let mut probe = x.to_vec();
        for i in 0..x.len() {
            probe[i] = x[i] + self.step;
            let up = (self.f)(&probe);
            probe[i] = x[i] - self.step;
            let down = (self.f)(&probe);
            probe[i] = x[i];
            g[i] = (up - down) / (2.0 * self.step);
        }
    }

    fn grad_cost(&self, dim: usize) -> usize {
        2 * dim
    }
}

/// Objective with an analytic gradient.
pub struct Analytic<F, G> {
    pub f: F,
    pub g: G,
}

impl<F: FnMut(&[f64]) -> f64, G: FnMut(&[f64], &mut [f64])> Objective for Analytic<F, G> {
    fn value(&mut self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&mut self, x: &[f64], g: &mut [f64]) {
        (self.g)(x, g)
    }

    fn grad_cost(&self, _dim: usize) -> usize {
        1
    }
}

fn project(x: &mut [f64], bounds: Option<&[(f64, f64)]>) {
    if let Some(b) = bounds {
        for (xi, &(lo, hi)) in x.iter_mut().zip(b) {
            *xi = xi.clamp(lo, hi);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Counts evaluations made through an [`Objective`].
struct Counted<'a, O> {
    inner: &'a mut O,
    evals: usize,
    dim: usize,
}

impl<O: Objective> Counted<'_, O> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        self.inner.value(x)
    }

    fn gradient(&mut self, x: &[f64], g: &mut [f64]) {
        self.evals += self.inner.grad_cost(self.dim);
        self.inner.gradient(x, g)
    }
}

/// Projected BFGS from `x0`. Non-finite objective values are reported as
/// `value = NaN` with `converged = false`; callers decide how to surface them.
pub fn minimize<O: Objective>(
    obj: &mut O,
    x0: &[f64],
    bounds: Option<&[(f64, f64)]>,
    cfg: &LocalConfig,
) -> Minimum {
    let n = x0.len();
    let mut ev = Counted { inner: obj, evals: 0, dim: n };
    let mut x = x0.to_vec();
    project(&mut x, bounds);
    let mut fx = ev.value(&x);
    if !fx.is_finite() {
        return Minimum { x, value: f64::NAN, evals: ev.evals, converged: false };
    }
    let mut g = vec![0.0; n];
    ev.gradient(&x, &mut g);
    let mut hinv = identity(n);
    let mut converged = false;

    let active = |x: &[f64], g: &[f64], i: usize| -> bool {
        bounds.is_some_and(|b| {
            let (lo, hi) = b[i];
            (x[i] <= lo && g[i] > 0.0) || (x[i] >= hi && g[i] < 0.0)
        })
    };

    while ev.evals < cfg.max_evals {
        let free: Vec<bool> = (0..n).map(|i| !active(&x, &g, i)).collect();
        let pg_norm = (0..n).filter(|&i| free[i]).map(|i| g[i] * g[i]).sum::<f64>().sqrt();
        if pg_norm < cfg.gtol {
            converged = true;
            break;
        }
        let mut d: Vec<f64> = (0..n)
            .map(|i| if free[i] { -(0..n).filter(|&j| free[j]).map(|j| hinv[i][j] * g[j]).sum::<f64>() } else { 0.0 })
            .collect();
        if dot(&d, &g) >= 0.0 {
            hinv = identity(n);
            d = (0..n).map(|i| if free[i] { -g[i] } else { 0.0 }).collect();
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            if ev.evals >= cfg.max_evals {
                break;
            }
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            project(&mut trial, bounds);
            let step: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
            let decrease = dot(&g, &step);
            if decrease >= 0.0 && step.iter().all(|s| s.abs() < 1e-15) {
                break;
            }
            let ft = ev.value(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * decrease.min(0.0) {
                accepted = Some((trial, ft, step));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, s)) = accepted else {
            // No further descent at working precision.
            converged = ev.evals < cfg.max_evals;
            break;
        };
        let mut gn = vec![0.0; n];
        ev.gradient(&xn, &mut gn);
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            bfgs_update(&mut hinv, &s, &y, sy);
        }
        let improvement = fx - fnew;
        x = xn;
        g = gn;
        fx = fnew;
        if improvement <= cfg.tolerance * fx.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    Minimum { x, value: fx, evals: ev.evals, converged }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
