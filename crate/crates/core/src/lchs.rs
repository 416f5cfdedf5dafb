//! Kernel evaluation, parameter selection and quadrature plans for the inner
//! Hamiltonian-simulation sum and the outer source-term quadrature.

use crate::error::{Error, Result};
use crate::math::erfc;
use num_complex::Complex64;

/// Kernel f̂(r; γ, δ) = √(2/π) exp(δ - (1+r²)/(4γ²) - irδ) / (1+r²).
pub fn kernel(r: f64, gamma: f64, delta: f64) -> Complex64 {
    assert!(gamma > 0.0);
    let amp = (2.0 / std::f64::consts::PI).sqrt()
        * (delta - (1.0 + r * r) / (4.0 * gamma * gamma)).exp()
        / (1.0 + r * r);
    Complex64::new(amp, 0.0) * Complex64::new(0.0, -r * delta).exp()
}

/// γ = (1/δ)√(δ + log((1 + 1/2π)/ε)) and R = 2δγ².
pub fn select_params(eps_lchs: f64, delta: f64) -> Result<(f64, f64)> {
    if !(eps_lchs > 0.0 && eps_lchs <= 0.9027) {
        return Err(Error::EpsilonRange(eps_lchs));
    }
    let gamma = (delta + ((1.0 + 0.5 / std::f64::consts::PI) / eps_lchs).ln()).sqrt() / delta;
    let radius = 2.0 * delta * gamma * gamma;
    Ok((gamma, radius))
}

/// Inner quadrature plan: midpoint-offset nodes r_j = -R̃ + jΔr on [-R, R]
/// with Δr = 2R/M, R̃ = R - Δr/2, and coefficients c_j = Δr f̂(r_j)/√(2π).
#[derive(Clone, Debug)]
pub struct LchsPlan {
    pub eps_lchs: f64,
    pub delta: f64,
    pub gamma: f64,
    pub radius: f64,
    pub ancillas: usize,
    pub dr: f64,
    pub r_tilde: f64,
    pub nodes: Vec<f64>,
    pub coeffs: Vec<Complex64>,
    pub c_l1: f64,
}

impl LchsPlan {
    /// `radius_override` replaces the analytic R = 2δγ² (the experiments
    /// always override).
    pub fn new(eps_lchs: f64, delta: f64, ancillas: usize, radius_override: Option<f64>) -> Result<Self> {
        let (gamma, analytic_radius) = select_params(eps_lchs, delta)?;
        let radius = match radius_override {
            Some(r) if r > 0.0 => r,
            Some(r) => return Err(Error::OutOfRange(format!("radius {r}"), "(0, ∞)".into())),
            None => analytic_radius,
        };
        let m = 1usize << ancillas;
        let dr = 2.0 * radius / m as f64;
        let r_tilde = radius - dr / 2.0;
        // r_j = -R̃ + jΔr, built in the centered form so that the node set is
        // symmetric about zero exactly
        let nodes: Vec<f64> = (0..m)
            .map(|j| (j as f64 - (m - 1) as f64 / 2.0) * dr)
            .collect();
        let coeffs: Vec<Complex64> = nodes
            .iter()
            .map(|&r| kernel(r, gamma, delta) * dr / (2.0 * std::f64::consts::PI).sqrt())
            .collect();
        let c_l1 = coeffs.iter().map(|c| c.norm()).sum();
        Ok(LchsPlan {
            eps_lchs,
            delta,
            gamma,
            radius,
            ancillas,
            dr,
            r_tilde,
            nodes,
            coeffs,
            c_l1,
        })
    }

    /// Degenerate plan with a single node r = 0 and unit coefficient, used
    /// when the evolution is already unitary (no ancilla register).
    pub fn trivial() -> Self {
        LchsPlan {
            eps_lchs: 0.0,
            delta: 0.0,
            gamma: 1.0,
            radius: 0.0,
            ancillas: 0,
            dr: 0.0,
            r_tilde: 0.0,
            nodes: vec![0.0],
            coeffs: vec![Complex64::new(1.0, 0.0)],
            c_l1: 1.0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// α_{f̂,∞} = e^δ erfc(1/(2γ)).
    pub fn alpha_infinity(&self) -> f64 {
        self.delta.exp() * erfc(1.0 / (2.0 * self.gamma))
    }
}

/// Outer quadrature plan over [0, T]: T_k = T - Δt/2 - kΔt,
/// d_k = Δt‖f(T_k)‖₂, v_k = f(T_k)/‖f(T_k)‖₂.
#[derive(Clone, Debug)]
pub struct OuterPlan {
    pub ancillas: usize,
    pub dt: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub d_l1: f64,
}

impl OuterPlan {
    pub fn new(total_time: f64, ancillas: usize, sample: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        assert!(total_time > 0.0);
        let m_o = 1usize << ancillas;
        let dt = total_time / m_o as f64;
        let nodes: Vec<f64> = (0..m_o)
            .map(|k| total_time - dt / 2.0 - k as f64 * dt)
            .collect();
        let mut weights = Vec::with_capacity(m_o);
        let mut states = Vec::with_capacity(m_o);
        let mut nonzero = false;
        for &t in &nodes {
            let f = sample(t);
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                nonzero = true;
                weights.push(dt * norm);
                states.push(f.iter().map(|v| v / norm).collect());
            } else {
                // zero weight; the state is never reached but must be unit
                weights.push(0.0);
                let mut e0 = vec![0.0; f.len()];
                e0[0] = 1.0;
                states.push(e0);
            }
        }
        if !nonzero {
            return Err(Error::DegenerateSource);
        }
        let d_l1 = weights.iter().sum();
        Ok(OuterPlan {
            ancillas,
            dt,
            nodes,
            weights,
            states,
            d_l1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA_REF: f64 = 6.826165890015928; // (1/0.4)√(0.4 + ln((1+1/2π)/0.001))
    const R_REF: f64 = 37.27723260641355;

    #[test]
    fn select_params_reproduces_reference_values() {
        let (g, r) = select_params(0.001, 0.4).unwrap();
        assert!((g - GAMMA_REF).abs() < 1e-12);
        assert!((r - R_REF).abs() < 1e-11);
        assert!(select_params(0.95, 0.4).is_err());
        assert!(select_params(0.0, 0.4).is_err());
    }

    #[test]
    fn select_params_monotone_in_delta() {
        // beyond the log term, γ decreases as δ grows
        let mut last = f64::INFINITY;
        for d in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let (g, _) = select_params(0.001, d).unwrap();
            assert!(g < last);
            last = g;
        }
    }

    #[test]
    fn kernel_reference_values() {
        // r = 0: √(2/π) e^{δ - 1/(4γ²)}
        let v0 = kernel(0.0, GAMMA_REF, 0.4);
        let want = (2.0 / std::f64::consts::PI).sqrt()
            * (0.4 - 1.0 / (4.0 * GAMMA_REF * GAMMA_REF)).exp();
        assert!((v0.re - want).abs() < 1e-15);
        assert!((v0.re - 1.1839347702085252).abs() < 1e-13);
        assert!(v0.im.abs() < 1e-15);
        // r = 1 at the reference parameters, frozen from an independent
        // 40-digit evaluation
        let v1 = kernel(1.0, GAMMA_REF, 0.4);
        assert!((v1.re - 0.5423205874949716).abs() < 1e-14);
        assert!((v1.im + 0.2292894667749699).abs() < 1e-14);
        // modulus is even in r
        for r in [0.3, 1.7, 9.2] {
            assert!((kernel(r, GAMMA_REF, 0.4).norm() - kernel(-r, GAMMA_REF, 0.4).norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn plan_two_nodes() {
        let plan = LchsPlan::new(0.001, 0.4, 1, Some(1.0)).unwrap();
        assert_eq!(plan.nodes.len(), 2);
        assert!((plan.nodes[0] + 0.5).abs() < 1e-15);
        assert!((plan.nodes[1] - 0.5).abs() < 1e-15);
        for (c, &r) in plan.coeffs.iter().zip(&plan.nodes) {
            let want = kernel(r, plan.gamma, 0.4) / (2.0 * std::f64::consts::PI).sqrt();
            assert!((c - want).norm() < 1e-15);
        }
    }

    #[test]
    fn plan_nodes_symmetric_and_coeffs_conjugate() {
        let plan = LchsPlan::new(0.001, 0.4, 4, Some(14.3)).unwrap();
        let m = plan.nodes.len();
        for j in 0..m {
            assert_eq!(plan.nodes[j] + plan.nodes[m - 1 - j], 0.0);
            let diff = (plan.coeffs[j].conj() - plan.coeffs[m - 1 - j]).norm();
            assert!(diff < 1e-15);
        }
        assert!(plan.c_l1.is_finite());
        // ‖c‖₁ ≤ e^δ + slack
        assert!(plan.c_l1 <= (0.4f64).exp() + 1e-6);
        // frozen reference for the experiment-scale plan
        assert!((plan.c_l1 - 1.2775705048750134).abs() < 1e-12);
    }

    #[test]
    fn coefficient_mass_tracks_alpha_infinity() {
        // with the analytic R and a fine grid, ‖c‖₁ → e^δ erfc(1/2γ)
        let plan = LchsPlan::new(0.001, 0.4, 9, None).unwrap();
        assert!((plan.c_l1 - plan.alpha_infinity()).abs() < 1e-2);
    }

    #[test]
    fn scalar_lchs_identity() {
        // Σ c_j e^{-i r_j a T} ≈ e^{-aT} for scalar a > 0
        for (a, t) in [(0.5, 0.01), (1.0, 0.1), (2.0, 0.1)] {
            let plan = LchsPlan::new(0.001, 0.4, 8, None).unwrap();
            let mut sum = Complex64::default();
            for (c, &r) in plan.coeffs.iter().zip(&plan.nodes) {
                sum += c * Complex64::new(0.0, -r * a * t).exp();
            }
            let want = (-a * t).exp();
            let err = (sum - want).norm();
            // ε_lchs plus quadrature slack
            assert!(err < 2e-3, "a={a} t={t} err={err}");
        }
    }

    #[test]
    fn outer_plan_nodes_and_weights() {
        // m_o = 1, T = 1 -> nodes {0.75, 0.25}
        let plan = OuterPlan::new(1.0, 1, |_| vec![2.0, 0.0]).unwrap();
        assert_eq!(plan.nodes, vec![0.75, 0.25]);
        // constant f: all weights equal, d_l1 = T·‖f‖
        for w in &plan.weights {
            assert!((w - 0.5 * 2.0).abs() < 1e-15);
        }
        assert!((plan.d_l1 - 2.0).abs() < 1e-15);
        for v in &plan.states {
            assert!((v[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn outer_plan_zero_source_rejected() {
        assert!(matches!(
            OuterPlan::new(1.0, 2, |_| vec![0.0, 0.0]),
            Err(Error::DegenerateSource)
        ));
    }

    #[test]
    fn outer_plan_zero_node_handled() {
        // f vanishes at one node only: weight zero, unit placeholder state
        let plan = OuterPlan::new(1.0, 1, |t| vec![if t > 0.5 { 1.0 } else { 0.0 }]).unwrap();
        assert!(plan.weights[1] == 0.0);
        assert!((plan.states[1][0] - 1.0).abs() < 1e-15);
    }
}
