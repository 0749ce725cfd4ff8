//! Internal quadrature and interpolation helpers: Gauss-Legendre rules,
//! stack-based adaptive integration, compensated summation, and a
//! shape-preserving cubic interpolant.

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1], by Newton
/// iteration on the Legendre recurrence. Exact for polynomials of degree
/// 2n - 1.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_pd(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_pd(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

// (P_n(x), P_n'(x)) by the three-term recurrence
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-rule integral of f over [a, b] with precomputed reference nodes.
pub(crate) fn gl_integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = NeumaierSum::new();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add(w * f(mid + half * x));
    }
    half * acc.value()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Adaptive bisection with an embedded 12-point Gauss-Legendre rule; the
/// whole-vs-halves defect drives refinement and the reported error bound.
pub(crate) fn adaptive_quad<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> QuadOutcome {
    const MAX_DEPTH: u32 = 48;
    let (nodes, weights) = gauss_legendre(12);
    let rule = |f: &mut F, lo: f64, hi: f64| gl_integrate(|x| f(x), lo, hi, &nodes, &weights);

    struct Item {
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let whole = rule(&mut f, a, b);
    let mut stack = vec![Item {
        a,
        b,
        whole,
        tol: abs_tol,
        depth: 0,
    }];
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    let mut converged = true;
    while let Some(it) = stack.pop() {
        let mid = 0.5 * (it.a + it.b);
        let left = rule(&mut f, it.a, mid);
        let right = rule(&mut f, mid, it.b);
        let defect = (left + right - it.whole).abs();
        if defect <= it.tol || it.depth >= MAX_DEPTH {
            if it.depth >= MAX_DEPTH && defect > it.tol {
                converged = false;
            }
            value.add(left);
            value.add(right);
            error += defect;
        } else {
            stack.push(Item {
                a: it.a,
                b: mid,
                whole: left,
                tol: 0.5 * it.tol,
                depth: it.depth + 1,
            });
            stack.push(Item {
                a: mid,
                b: it.b,
                whole: right,
                tol: 0.5 * it.tol,
                depth: it.depth + 1,
            });
        }
    }
    QuadOutcome {
        value: value.value(),
        error,
        converged,
    }
}

/// Compensated (Neumaier) accumulator; exact to one rounding of the final
/// result for sums whose terms cancel heavily.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        NeumaierSum { s: 0.0, c: 0.0 }
    }

    pub fn add(&mut self, t: f64) {
        let sum = self.s + t;
        self.c += if self.s.abs() >= t.abs() {
            (self.s - sum) + t
        } else {
            (t - sum) + self.s
        };
        self.s = sum;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Shape-preserving piecewise-cubic interpolant (Fritsch-Carlson slopes).
/// Produces no overshoot between data points; evaluation outside the node
/// range continues the boundary cubic.
#[derive(Debug, Clone)]
pub(crate) struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        assert!(
            xs.windows(2).all(|w| w[0] < w[1]),
            "abscissas must be strictly increasing"
        );
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = ys
            .windows(2)
            .zip(&h)
            .map(|(w, hi)| (w[1] - w[0]) / hi)
            .collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = delta[0];
            ds[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            ds[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            ds[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Pchip { xs, ys, ds }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = self
            .xs
            .partition_point(|&v| v <= x)
            .clamp(1, n - 1)
            - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }
}

// One-sided three-point end slope, clamped so the boundary piece cannot
// introduce a spurious extremum.
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
