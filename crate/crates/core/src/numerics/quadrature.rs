//! Composite Gauss–Legendre grids with spectral cumulative integration.
//!
//! Nodes near `z = 1` are stored through `w = 1 - z`, which is exact, so
//! integrands can be evaluated at `-w` by periodicity without losing the
//! digits that `1 - z` would cancel.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

/// A Gauss–Legendre rule on `[-1, 1]` with its integration matrix
/// `S[i][j]`, so that `∫_{-1}^{t_i} g ≈ Σ_j S[i][j] g(t_j)`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub integ: Vec<Vec<f64>>,
}

/// `P_0(x), ..., P_n(x)`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 1..n {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let order = order.max(2);
        let gl = GaussLegendre::new(NonZeroUsize::new(order).expect("order is positive"));
        let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        // g = Σ a_n P_n with a_n = (2n+1)/2 Σ_j w_j g(t_j) P_n(t_j), and
        // ∫_{-1}^x P_n = (P_{n+1} - P_{n-1}) / (2n+1) for n >= 1
        let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&t| legendre_all(order, t)).collect();
        let integ = (0..order)
            .map(|i| {
                let pi = &at_nodes[i];
                (0..order)
                    .map(|j| {
                        let pj = &at_nodes[j];
                        let mut s = 0.5 * (nodes[i] + 1.0);
                        for n in 1..order {
                            s += 0.5 * pj[n] * (pi[n + 1] - pi[n - 1]);
                        }
                        weights[j] * s
                    })
                    .collect()
            })
            .collect();
        Rule {
            nodes,
            weights,
            integ,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// One quadrature node: its position `z` and the point at which integrands
/// are evaluated (`z` itself, or `-(1 - z)` near the right end).
#[derive(Clone, Copy, Debug)]
pub struct Point {
    pub z: f64,
    pub eval_at: f64,
}

#[derive(Clone, Debug)]
pub struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub half: f64,
    pub points: Vec<Point>,
}

/// Panels covering an interval in increasing order.
#[derive(Clone, Debug)]
pub struct Grid {
    pub rule: Rule,
    pub panels: Vec<Panel>,
}

impl Grid {
    fn left_panel(rule: &Rule, lo: f64, hi: f64) -> Panel {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let points = rule
            .nodes
            .iter()
            .map(|&t| {
                let z = mid + half * t;
                Point { z, eval_at: z }
            })
            .collect();
        Panel {
            lo,
            hi,
            half,
            points,
        }
    }

    /// Panel `[1 - w_hi, 1 - w_lo]` built from exact `w` endpoints.
    fn right_panel(rule: &Rule, w_lo: f64, w_hi: f64) -> Panel {
        let mid = 0.5 * (w_lo + w_hi);
        let half = 0.5 * (w_hi - w_lo);
        let points = rule
            .nodes
            .iter()
            .map(|&t| {
                let w = mid - half * t;
                Point { z: 1.0 - w, eval_at: -w }
            })
            .collect();
        Panel {
            lo: 1.0 - w_hi,
            hi: 1.0 - w_lo,
            half,
            points,
        }
    }

    /// Panels between consecutive `breaks` (ending at `1/2`), mirrored onto
    /// the right half.
    fn graded(order: usize, breaks: Vec<f64>) -> Self {
        let rule = Rule::new(order);
        let mut panels = Vec::new();
        for w in breaks.windows(2) {
            panels.push(Self::left_panel(&rule, w[0], w[1]));
        }
        for w in breaks.windows(2).rev() {
            panels.push(Self::right_panel(&rule, w[0], w[1]));
        }
        Grid { rule, panels }
    }

    /// `[0, 1]`, geometrically graded toward both ends down to `2^{-levels-1}`.
    pub fn unit(order: usize, levels: usize) -> Self {
        let mut breaks = vec![0.0];
        for j in (1..=levels + 1).rev() {
            breaks.push(0.5f64.powi(j as i32));
        }
        Self::graded(order, breaks)
    }

    /// `[eps, 1 - eps]`, graded geometrically away from both ends.
    pub fn truncated(order: usize, eps: f64) -> Self {
        let mut breaks = vec![eps];
        let mut x = eps;
        while 2.0 * x < 0.25 {
            x *= 2.0;
            breaks.push(x);
        }
        breaks.push(0.5);
        Self::graded(order, breaks)
    }

    /// `[a, b]` split into `n` equal panels.
    pub fn uniform(order: usize, a: f64, b: f64, n: usize) -> Self {
        let rule = Rule::new(order);
        let n = n.max(1);
        let h = (b - a) / n as f64;
        let panels = (0..n)
            .map(|i| {
                let lo = a + h * i as f64;
                let hi = if i + 1 == n { b } else { lo + h };
                Self::left_panel(&rule, lo, hi)
            })
            .collect();
        Grid { rule, panels }
    }

    pub fn len(&self) -> usize {
        self.panels.len() * self.rule.order()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.panels.iter().flat_map(|p| p.points.iter())
    }

    /// `G(z_i) = ∫_{start}^{z_i} g` at every node, plus the integral over the
    /// whole grid. `values` lists `g` at the nodes in grid order.
    pub fn cumulative(&self, values: &[Complex64]) -> (Vec<Complex64>, Complex64) {
        let p = self.rule.order();
        assert_eq!(values.len(), self.len());
        let mut out = Vec::with_capacity(values.len());
        let mut carry = Complex64::new(0.0, 0.0);
        for (k, panel) in self.panels.iter().enumerate() {
            let v = &values[k * p..(k + 1) * p];
            for row in &self.rule.integ {
                let mut s = Complex64::new(0.0, 0.0);
                for (sij, vj) in row.iter().zip(v) {
                    s += vj * *sij;
                }
                out.push(carry + s * panel.half);
            }
            let mut total = Complex64::new(0.0, 0.0);
            for (wj, vj) in self.rule.weights.iter().zip(v) {
                total += vj * *wj;
            }
            carry += total * panel.half;
        }
        (out, carry)
    }

    /// `∫ g` over the grid.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        let p = self.rule.order();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, panel) in self.panels.iter().enumerate() {
            let mut total = Complex64::new(0.0, 0.0);
            for (wj, vj) in self.rule.weights.iter().zip(&values[k * p..(k + 1) * p]) {
                total += vj * *wj;
            }
            acc += total * panel.half;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn integration_matrix_is_exact_on_polynomials() {
        let r = Rule::new(12);
        for (i, &x) in r.nodes.iter().enumerate() {
            // ∫_{-1}^x t^5 dt
            let want = (x.powi(6) - 1.0) / 6.0;
            let got: f64 = r.integ[i].iter().zip(&r.nodes).map(|(s, t)| s * t.powi(5)).sum();
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn graded_grid_handles_endpoint_logs() {
        let g = Grid::unit(20, 48);
        // ∫_0^1 log(z) log(1-z) dz = 2 - π²/6
        let vals: Vec<Complex64> = g
            .points()
            .map(|p| {
                let w = if p.eval_at < 0.0 { -p.eval_at } else { 1.0 - p.z };
                c(p.z.ln() * w.ln())
            })
            .collect();
        let got = g.integrate(&vals);
        let want = 2.0 - std::f64::consts::PI.powi(2) / 6.0;
        assert!((got.re - want).abs() < 1e-13, "{got}");
    }

    #[test]
    fn cumulative_matches_primitive() {
        let g = Grid::uniform(16, 0.2, 0.8, 3);
        let vals: Vec<Complex64> = g.points().map(|p| c(p.z.cos())).collect();
        let (cum, total) = g.cumulative(&vals);
        for (p, v) in g.points().zip(&cum) {
            assert!((v.re - (p.z.sin() - 0.2f64.sin())).abs() < 1e-14);
        }
        assert!((total.re - (0.8f64.sin() - 0.2f64.sin())).abs() < 1e-14);
    }

    #[test]
    fn truncated_grid_spans_interval() {
        let g = Grid::truncated(10, 1e-3);
        assert_eq!(g.panels.first().unwrap().lo, 1e-3);
        assert!((g.panels.last().unwrap().hi - (1.0 - 1e-3)).abs() < 1e-15);
        let ones = vec![c(1.0); g.len()];
        assert!((g.integrate(&ones).re - (1.0 - 2e-3)).abs() < 1e-14);
    }
}
