//! Composite Gauss–Legendre rules and compensated summation.

/// Points per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 8;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule on [a, b] with `n` total nodes in panels of [`PANEL_ORDER`].
///
/// `n` must be a positive multiple of the panel order. Nodes are strictly
/// interior, so neither endpoint is ever evaluated.
pub fn composite_gauss_legendre(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0 && n.is_multiple_of(PANEL_ORDER));
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let panels = n / PANEL_ORDER;
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let half = 0.5 * width;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(lo + half * (xi + 1.0));
            weights.push(half * wi);
        }
    }
    (nodes, weights)
}

/// Neumaier-compensated accumulator. Deterministic for a fixed input order.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}
