use num_complex::Complex;

use super::kernels::overlap_at;
use super::state::{superpose, Assembled};
use super::{Kernels, LagSequence, TimeGrid};
use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalOperator;
use crate::linalg::Stencil;
use crate::scalar::Real;
use crate::simulator::StateVector;

/// A linear combination `Σ_k w_k exp(-i t_k (H - shift))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterWeights {
    pub times: Vec<f64>,
    pub weights: Vec<Complex<f64>>,
    pub shift: f64,
}

fn binomials(k: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..k {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn check_filter(k: usize, t: f64) -> Result<()> {
    if k == 0 || !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("filter needs K >= 1 and finite t > 0, got K = {k}, t = {t}")));
    }
    Ok(())
}

/// `((U(t) + U(-t))/2)^K` expanded: weight `C(K,j)/2^K` at time `(K - 2j)t`.
///
/// On an eigenvalue `x` of `H - shift` this acts as `cos(xt)^K ≈ exp(-K t² x² / 2)`.
pub fn gaussian_filter_weights(k: usize, t: f64, shift: f64) -> Result<FilterWeights> {
    check_filter(k, t)?;
    let scale = 0.5f64.powi(k as i32);
    let weights = binomials(k).into_iter().map(|c| Complex::new(c * scale, 0.0)).collect();
    let times = (0..=k).map(|j| (k as f64 - 2.0 * j as f64) * t).collect();
    Ok(FilterWeights { times, weights, shift })
}

/// `(a U(t) + b U(-t))^K` with `a = (1-i)/2`, `b = (1+i)/2`: weight
/// `C(K,j) a^{K-j} b^j` at time `(K - 2j)t`.
///
/// On an eigenvalue `x` of `H - shift` one factor acts as `cos(xt) - sin(xt) = 1 - xt + O(t²)`.
pub fn ite_weights(k: usize, t: f64, shift: f64) -> Result<FilterWeights> {
    check_filter(k, t)?;
    let a = Complex::new(0.5, -0.5);
    let b = Complex::new(0.5, 0.5);
    let weights = binomials(k)
        .into_iter()
        .enumerate()
        .map(|(j, c)| a.powu((k - j) as u32) * b.powu(j as u32) * c)
        .collect();
    let times = (0..=k).map(|j| (k as f64 - 2.0 * j as f64) * t).collect();
    Ok(FilterWeights { times, weights, shift })
}

pub fn apply_filter<T: Real>(phi0: &StateVector<T>, d: &DiagonalOperator, fw: &FilterWeights) -> Result<Assembled<T>> {
    let w: Vec<Complex<T>> = fw.weights.iter().map(|z| Complex::new(T::lit(z.re), T::lit(z.im))).collect();
    superpose(phi0, d, &fw.times, &w, fw.shift)
}

/// Success probability of the Gaussian filter and two closed-form estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterProbability {
    /// `‖Σ w_k U(t_k)|Φ0>‖² / (Σ|w_k|)²` from the statevector.
    pub exact: f64,
    /// `<Φ0|exp(-K t² (H - shift)²)|Φ0>`, the width matching `cos^{2K}`.
    pub gaussian: f64,
    /// `<Φ0|exp(-2K t² (H - shift)²)|Φ0>`, a twice-narrower filter.
    pub gaussian_narrow: f64,
}

pub fn filter_success_probability<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    k: usize,
    t: f64,
    shift: f64,
) -> Result<FilterProbability> {
    let fw = gaussian_filter_weights(k, t, shift)?;
    let l1: f64 = fw.weights.iter().map(|z| z.norm()).sum();
    let a = apply_filter(phi0, d, &fw)?;
    let exact = a.norm_sqr.as_f64() / (l1 * l1);
    let kt2 = k as f64 * t * t;
    let (mut gaussian, mut gaussian_narrow) = (0.0, 0.0);
    for (amp, &e) in phi0.amplitudes().iter().zip(d.values()) {
        let p = amp.norm_sqr().as_f64();
        let x2 = (e as f64 - shift).powi(2);
        gaussian += p * (-kt2 * x2).exp();
        gaussian_narrow += p * (-2.0 * kt2 * x2).exp();
    }
    Ok(FilterProbability { exact, gaussian, gaussian_narrow })
}

/// Overlap and Hamiltonian element recovered from real-time samples
/// `v_j = <a|exp(-i s_j h H)|b>` at stencil offsets `s_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RteEstimate<T: Real = f64> {
    pub overlap: Complex<T>,
    pub hamiltonian: Complex<T>,
}

/// `H ≈ (i/h) Σ_j c_j v_j` with first-derivative weights `c_j`, and the
/// overlap by interpolating the samples to zero time.
pub fn rte_extract<T: Real>(values: &[Complex<T>], stencil: &Stencil, step: f64) -> Result<RteEstimate<T>> {
    if values.len() != stencil.offsets.len() {
        return Err(Error::Dimension { expected: stencil.offsets.len(), got: values.len() });
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let c: Vec<T> = stencil.coefficients();
    let w: Vec<T> = stencil.interpolation_weights();
    let deriv = values.iter().zip(&c).fold(Complex::new(T::zero(), T::zero()), |acc, (v, &cj)| acc + v * cj);
    let overlap = values.iter().zip(&w).fold(Complex::new(T::zero(), T::zero()), |acc, (v, &wj)| acc + v * wj);
    let i_over_h = Complex::new(T::zero(), T::one() / T::lit(step));
    Ok(RteEstimate { overlap, hamiltonian: deriv * i_over_h })
}

/// Kernels on `grid` with every lag extracted by [`rte_extract`] from
/// exact real-time overlaps at `τ_m + s_j·step`.
pub fn rte_extract_kernels<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    grid: &TimeGrid,
    stencil: &Stencil,
    step: f64,
) -> Result<Kernels<T>> {
    let k = grid.k() as i64;
    let mut overlap = Vec::with_capacity(2 * grid.k() - 1);
    let mut hamiltonian = Vec::with_capacity(2 * grid.k() - 1);
    for m in -(k - 1)..k {
        let tau = grid.lag_time(m);
        let samples = stencil
            .offsets
            .iter()
            .map(|&s| overlap_at(phi0, d, tau + s as f64 * step))
            .collect::<Result<Vec<_>>>()?;
        let est = rte_extract(&samples, stencil, step)?;
        overlap.push(est.overlap);
        hamiltonian.push(est.hamiltonian);
    }
    Kernels::from_lags(LagSequence { overlap, hamiltonian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::hamiltonian::{cost_diagonal, DiagonalOperator};
    use crate::linalg::stencil_coefficients;
    use crate::qse::{build_kernels, generator_times};
    use crate::simulator::ShotModel;

    #[test]
    fn gaussian_weight_examples() {
        let w1 = gaussian_filter_weights(1, 0.3, 0.0).unwrap();
        assert_eq!(w1.times, vec![0.3, -0.3]);
        assert_eq!(w1.weights, vec![Complex::new(0.5, 0.0); 2]);
        let w2 = gaussian_filter_weights(2, 0.3, 0.0).unwrap();
        assert_eq!(w2.times, vec![0.6, 0.0, -0.6]);
        assert_eq!(w2.weights.iter().map(|z| z.re).collect::<Vec<_>>(), vec![0.25, 0.5, 0.25]);
        for k in 1..12 {
            let s: Complex<f64> = gaussian_filter_weights(k, 0.1, 0.0).unwrap().weights.iter().sum();
            assert!((s - Complex::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(gaussian_filter_weights(0, 0.1, 0.0).is_err());
        assert!(gaussian_filter_weights(2, 0.0, 0.0).is_err());
    }

    #[test]
    fn ite_weight_examples() {
        let w2 = ite_weights(2, 0.1, 0.0).unwrap();
        let want = [Complex::new(0.0, -0.5), Complex::new(1.0, 0.0), Complex::new(0.0, 0.5)];
        for (a, b) in w2.weights.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        for k in 1..10 {
            let s: Complex<f64> = ite_weights(k, 0.1, 0.0).unwrap().weights.iter().sum();
            assert!((s - Complex::new(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn ite_first_order_damping() {
        // Basis state |01> of the single edge has energy -1; shift 0 gives x = -1.
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let phi = StateVector::<f64>::basis(2, 1).unwrap();
        for t in [1e-2, 1e-3] {
            let a = apply_filter(&phi, &d, &ite_weights(1, t, 0.0).unwrap()).unwrap();
            let factor = a.norm_sqr.sqrt();
            assert!((factor - (1.0 + t)).abs() < 2.0 * t * t, "{factor}");
        }
    }

    #[test]
    fn eigenstate_passes_filter_unchanged() {
        let d = cost_diagonal(&Graph::cube()).unwrap();
        let phi = StateVector::<f64>::basis(8, 0b1010_0101).unwrap();
        let p = filter_success_probability(&phi, &d, 4, 0.3, -4.0).unwrap();
        assert!((p.exact - 1.0).abs() < 1e-14 && (p.gaussian - 1.0).abs() < 1e-14);
        let plus = StateVector::<f64>::plus(8);
        let small = filter_success_probability(&plus, &d, 1, 1e-6, 0.0).unwrap();
        assert!((small.exact - 1.0).abs() < 1e-9);
    }

    #[test]
    fn success_probability_gaussian_error_is_fourth_order() {
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let phi = StateVector::<f64>::plus(2);
        let err = |t: f64| {
            let p = filter_success_probability(&phi, &d, 4, t, -1.0).unwrap();
            (p.exact - p.gaussian).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }

    #[test]
    fn filter_matches_explicit_sum() {
        let d = cost_diagonal(&Graph::cube()).unwrap();
        let mut phi = StateVector::<f64>::plus(8);
        phi.apply_mixer(0.4);
        let fw = gaussian_filter_weights(3, 0.2, -4.0).unwrap();
        let a = apply_filter(&phi, &d, &fw).unwrap();
        let mut acc = vec![Complex::new(0.0, 0.0); 256];
        for (&t, w) in fw.times.iter().zip(&fw.weights) {
            for (x, (o, amp)) in acc.iter_mut().zip(phi.amplitudes()).enumerate() {
                let e = d.values()[x] as f64 + 4.0;
                *o += w * amp * Complex::new(0.0, -t * e).exp();
            }
        }
        let norm = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (x, y) in a.state.amplitudes().iter().zip(&acc) {
            assert!((x - y / norm).norm() < 1e-12);
        }
    }

    #[test]
    fn rte_two_point_is_exact_for_matched_single_frequency() {
        // One occupied level: v(s) = e^{-iεs}; the 2-point stencil gives sin(εh)/h.
        let d = DiagonalOperator::from_values(1, vec![0, -3]).unwrap();
        let phi = StateVector::<f64>::basis(1, 1).unwrap();
        let st = stencil_coefficients(2).unwrap();
        let h = 1e-4;
        let v: Vec<Complex<f64>> = st.offsets.iter().map(|&s| Complex::new(0.0, 3.0 * s as f64 * h).exp()).collect();
        let est = rte_extract(&v, &st, h).unwrap();
        assert!((est.hamiltonian.re - (-(3.0 * h).sin() / h)).abs() < 1e-12);
        assert!((est.overlap.re - (3.0 * h).cos()).abs() < 1e-12);
        let k = rte_extract_kernels(&phi, &d, &generator_times(1).unwrap(), &st, h).unwrap();
        assert!((k.h[(0, 0)].re + 3.0).abs() < 1e-7);
        assert!(rte_extract(&v[..1], &st, h).is_err());
    }

    #[test]
    fn rte_second_order_on_single_edge() {
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let phi = StateVector::<f64>::plus(2);
        let grid = generator_times(2).unwrap();
        let exact = build_kernels(&phi, &d, &grid, &ShotModel::exact()).unwrap();
        let st = stencil_coefficients(2).unwrap();
        let err = |h: f64| rte_extract_kernels(&phi, &d, &grid, &st, h).unwrap().h.sub(&exact.h).max_abs();
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }
}
