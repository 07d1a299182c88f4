//! Radial quadrature over `|k|` on logarithmically uniform grids.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Apparatus length scale (in `r0`) setting the default infrared cutoff.
pub const DEFAULT_BOX_LENGTH: f64 = 1e6;
pub const DEFAULT_NODE_COUNT: usize = 2048;
pub const DEFAULT_POINTS_PER_PANEL: usize = 4;

/// Infrared and ultraviolet wavenumber cutoffs in `1/r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPair<T> {
    k_min: T,
    k_max: T,
}

impl<T: Real> CutoffPair<T> {
    pub fn new(k_min: T, k_max: T) -> Result<Self> {
        if !(k_min.is_finite() && k_max.is_finite() && k_min > T::zero() && k_min < k_max) {
            return Err(Error::config(format!("cutoffs need 0 < k_min < k_max, got k_min = {k_min}, k_max = {k_max}")));
        }
        Ok(Self { k_min, k_max })
    }

    /// `k_max = 1/r0`, `k_min = 1/L` with `L` = [`DEFAULT_BOX_LENGTH`].
    pub fn standard() -> Self {
        Self::new(T::lit(1.0 / DEFAULT_BOX_LENGTH), T::one()).expect("default cutoffs are ordered")
    }

    pub fn k_min(&self) -> T {
        self.k_min
    }

    pub fn k_max(&self) -> T {
        self.k_max
    }

    /// `ln(k_max / k_min)`.
    pub fn log_span(&self) -> T {
        (self.k_max / self.k_min).ln()
    }
}

impl<T: Real> Default for CutoffPair<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// Composite rule applied in `u = ln k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Gauss-Legendre on equal-width panels in `ln k`.
    GaussLegendre { points_per_panel: usize },
    /// Composite Simpson on equally spaced `ln k` nodes; needs an odd node count.
    Simpson,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme::GaussLegendre { points_per_panel: DEFAULT_POINTS_PER_PANEL }
    }
}

/// Quadrature node in `k` with the weight for `dk` (Jacobian included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNode<T> {
    pub k: T,
    pub weight: T,
}

/// Discretization of `[k_min, k_max]` for integrals `∫ f(k) dk`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialModeGrid<T> {
    cutoffs: CutoffPair<T>,
    scheme: QuadratureScheme,
    nodes: Vec<RadialNode<T>>,
}

impl<T: Real> RadialModeGrid<T> {
    pub fn log_uniform(cutoffs: CutoffPair<T>, node_count: usize, scheme: QuadratureScheme) -> Result<Self> {
        let a = cutoffs.k_min.ln();
        let b = cutoffs.k_max.ln();
        let nodes = match scheme {
            QuadratureScheme::GaussLegendre { points_per_panel } => {
                if points_per_panel == 0 || node_count == 0 || !node_count.is_multiple_of(points_per_panel) {
                    return Err(Error::config(format!(
                        "Gauss-Legendre grid needs a node count divisible by {points_per_panel}, got {node_count}"
                    )));
                }
                let panels = node_count / points_per_panel;
                let rule = gauss_legendre::<T>(points_per_panel);
                let h = (b - a) / T::from_count(panels);
                let half = h / T::lit(2.0);
                let mut nodes = Vec::with_capacity(node_count);
                for p in 0..panels {
                    let mid = a + h * (T::from_count(p) + T::lit(0.5));
                    for &(x, w) in &rule {
                        let k = (mid + half * x).exp();
                        nodes.push(RadialNode { k, weight: half * w * k });
                    }
                }
                nodes
            }
            QuadratureScheme::Simpson => {
                if node_count < 3 || node_count.is_multiple_of(2) {
                    return Err(Error::config(format!("Simpson grid needs an odd node count >= 3, got {node_count}")));
                }
                let intervals = node_count - 1;
                let h = (b - a) / T::from_count(intervals);
                let third = h / T::lit(3.0);
                (0..node_count)
                    .map(|i| {
                        let k = match i {
                            0 => cutoffs.k_min,
                            _ if i == intervals => cutoffs.k_max,
                            _ => (a + h * T::from_count(i)).exp(),
                        };
                        let factor = if i == 0 || i == intervals {
                            T::one()
                        } else if i % 2 == 1 {
                            T::lit(4.0)
                        } else {
                            T::lit(2.0)
                        };
                        RadialNode { k, weight: third * factor * k }
                    })
                    .collect()
            }
        };
        Ok(Self { cutoffs, scheme, nodes })
    }

    /// Default scheme and node count over `cutoffs`.
    pub fn standard(cutoffs: CutoffPair<T>) -> Self {
        Self::log_uniform(cutoffs, DEFAULT_NODE_COUNT, QuadratureScheme::default()).expect("default grid is valid")
    }

    pub fn cutoffs(&self) -> CutoffPair<T> {
        self.cutoffs
    }

    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    pub fn nodes(&self) -> &[RadialNode<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same scheme with `factor` times as many nodes.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let count = match self.scheme {
            QuadratureScheme::Simpson => (self.len() - 1) * factor + 1,
            QuadratureScheme::GaussLegendre { .. } => self.len() * factor,
        };
        Self::log_uniform(self.cutoffs, count, self.scheme)
    }

    /// Whether this grid was built for `cutoffs` (to a relative 1e-12).
    pub fn covers(&self, cutoffs: &CutoffPair<T>) -> bool {
        let tol = T::lit(1e-12);
        let close = |x: T, y: T| (x - y).abs() <= tol * y.abs();
        close(self.cutoffs.k_min, cutoffs.k_min) && close(self.cutoffs.k_max, cutoffs.k_max)
    }

    pub(crate) fn ensure_covers(&self, cutoffs: &CutoffPair<T>) -> Result<()> {
        if self.covers(cutoffs) {
            Ok(())
        } else {
            Err(Error::config(format!(
                "grid spans [{}, {}] but cutoffs are [{}, {}]",
                self.cutoffs.k_min, self.cutoffs.k_max, cutoffs.k_min, cutoffs.k_max
            )))
        }
    }

    /// `∫ f(k) dk` over the grid.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes.iter().fold(T::zero(), |acc, n| acc + n.weight * f(n.k))
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending in `x`.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut out = vec![(T::zero(), T::zero()); n];
    let nf = T::from_count(n);
    let eps = T::epsilon() * T::lit(4.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root from the top
        let mut x = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= eps {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = T::zero();
    }
    out
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for j in 2..=n {
        let jf = T::from_count(j);
        let p2 = ((T::lit(2.0) * jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_count(n);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}
