//! Small numeric helpers shared across modules.

/// ln(n!) by cumulative summation.
///
/// Exact to ~1e-13 relative for the ranges used here (n up to a few hundred);
/// all normalizations involving factorials go through log space so that
/// n ≳ 150 does not overflow.
pub fn ln_factorial_table(max_n: usize) -> Vec<f64> {
    let mut t = vec![0.0; max_n + 1];
    for n in 1..=max_n {
        t[n] = t[n - 1] + (n as f64).ln();
    }
    t
}

/// Nodes and weights of the 32-point Gauss-Legendre rule on [-1, 1].
///
/// Computed by Newton iteration on P_32; deterministic and accurate to
/// machine precision, so repeated calls are bit-identical.
pub fn gauss_legendre_32() -> (Vec<f64>, Vec<f64>) {
    gauss_legendre(32)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Ascending node order.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    (
        idx.iter().map(|&i| nodes[i]).collect(),
        idx.iter().map(|&i| weights[i]).collect(),
    )
}

/// Composite Gauss-Legendre rule over [lo, hi] split into panels of width
/// at most `panel_width`. Returns an empty rule when lo >= hi.
pub fn panel_rule(lo: f64, hi: f64, panel_width: f64) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre_32();
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    if hi - lo <= 1e-12 {
        return (xs, ws);
    }
    let n_panels = ((hi - lo) / panel_width).ceil() as usize;
    let w = (hi - lo) / n_panels as f64;
    for p in 0..n_panels {
        let a = lo + p as f64 * w;
        let b = a + w;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, wt) in gx.iter().zip(&gw) {
            xs.push(mid + half * x);
            ws.push(half * wt);
        }
    }
    (xs, ws)
}
