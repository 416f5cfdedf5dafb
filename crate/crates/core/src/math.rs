//! Small numerical utilities shared across modules: complementary error
//! function, Gauss-Legendre nodes and adaptive quadrature.

/// Complementary error function, double precision.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Error function, double precision.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over [a, b] with composite Gauss-Legendre panels, doubling
/// the panel count until two successive results agree to `tol` (relative).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(16);
    let eval = |panels: usize| -> f64 {
        let mut total = 0.0;
        let w = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * w;
            let mid = lo + 0.5 * w;
            let half = 0.5 * w;
            let mut acc = 0.0;
            for (x, wt) in nodes.iter().zip(&weights) {
                acc += wt * f(mid + half * x);
            }
            total += acc * half;
        }
        total
    };
    let mut panels = 1;
    let mut prev = eval(panels);
    for _ in 0..14 {
        panels *= 2;
        let next = eval(panels);
        let scale = next.abs().max(1e-300);
        if (next - prev).abs() / scale < tol {
            return next;
        }
        prev = next;
    }
    prev
}
