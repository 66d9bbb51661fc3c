//! Quadrature rules on the unit interval and the reference triangle.

use std::sync::OnceLock;

/// A 1D rule on `[0, 1]`; weights sum to one.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        self.iter().map(|(x, w)| w * f(a + len * x)).sum::<f64>() * len
    }
}

pub const MAX_GAUSS: usize = 64;

fn legendre_rule(n: usize) -> Rule1d {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    Rule1d { nodes, weights }
}

/// Gauss–Legendre rule with `n` points on `[0, 1]` (1 ≤ n ≤ 64), cached.
pub fn gauss(n: usize) -> &'static Rule1d {
    static TABLE: OnceLock<Vec<Rule1d>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (1..=MAX_GAUSS).map(legendre_rule).collect());
    &table[n.clamp(1, MAX_GAUSS) - 1]
}

/// Composite rule on `[0, 1]` geometrically graded towards 0.
///
/// Breakpoints are `0, ratio^levels, ..., ratio, 1`. The subinterval at
/// level `l` (counted from 1 downwards) gets `max(3, n - l / drop)` Gauss
/// points, so the tiny intervals near 0 stay cheap.
pub fn graded(levels: usize, ratio: f64, n: usize, drop: usize) -> Rule1d {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut hi = 1.0;
    for lvl in 0..=levels {
        let lo = if lvl == levels { 0.0 } else { hi * ratio };
        let g = gauss(n.saturating_sub(lvl / drop.max(1)).max(3));
        for (x, w) in g.iter() {
            nodes.push(lo + (hi - lo) * x);
            weights.push((hi - lo) * w);
        }
        hi = lo;
    }
    Rule1d { nodes, weights }
}

/// Cached graded rule used for log-singular panel integrals.
pub fn graded_default() -> &'static Rule1d {
    static RULE: OnceLock<Rule1d> = OnceLock::new();
    RULE.get_or_init(|| graded(29, 0.3, 12, 3))
}

/// Rule on the reference triangle `{(x, y): x, y ≥ 0, x + y ≤ 1}`.
/// Weights sum to the reference area 1/2.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Edge-midpoint rule, exact for degree 2.
    pub fn midpoint3() -> &'static TriangleRule {
        static RULE: OnceLock<TriangleRule> = OnceLock::new();
        RULE.get_or_init(|| TriangleRule {
            points: vec![[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]],
            weights: vec![1.0 / 6.0; 3],
        })
    }

    /// Radon's 7-point rule, exact for degree 5.
    pub fn radon7() -> &'static TriangleRule {
        static RULE: OnceLock<TriangleRule> = OnceLock::new();
        RULE.get_or_init(|| {
            let r = 15f64.sqrt();
            let (a1, b1) = ((6.0 - r) / 21.0, (9.0 + 2.0 * r) / 21.0);
            let (a2, b2) = ((6.0 + r) / 21.0, (9.0 - 2.0 * r) / 21.0);
            let (w1, w2) = ((155.0 - r) / 1200.0, (155.0 + r) / 1200.0);
            TriangleRule {
                points: vec![[1.0 / 3.0, 1.0 / 3.0], [a1, a1], [b1, a1], [a1, b1], [a2, a2], [b2, a2], [a2, b2]],
                weights: [9.0 / 40.0, w1, w1, w1, w2, w2, w2].iter().map(|w| 0.5 * w).collect(),
            }
        })
    }

    /// `base` applied on the `4^depth` congruent subtriangles of a uniform
    /// midpoint subdivision. Used for error norms of non-polynomial fields.
    pub fn subdivided(base: &TriangleRule, depth: usize) -> TriangleRule {
        let mut tris: Vec<[[f64; 2]; 3]> = vec![[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(tris.len() * 4);
            for t in &tris {
                let m = |a: [f64; 2], b: [f64; 2]| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let (m01, m12, m20) = (m(t[0], t[1]), m(t[1], t[2]), m(t[2], t[0]));
                next.push([t[0], m01, m20]);
                next.push([m01, t[1], m12]);
                next.push([m20, m12, t[2]]);
                next.push([m12, m20, m01]);
            }
            tris = next;
        }
        let scale = 1.0 / tris.len() as f64;
        let mut points = Vec::with_capacity(tris.len() * base.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for t in &tris {
            for (p, w) in base.points.iter().zip(&base.weights) {
                let (l1, l2) = (p[0], p[1]);
                let l0 = 1.0 - l1 - l2;
                points.push([l0 * t[0][0] + l1 * t[1][0] + l2 * t[2][0], l0 * t[0][1] + l1 * t[1][1] + l2 * t[2][1]]);
                weights.push(w * scale);
            }
        }
        TriangleRule { points, weights }
    }
}
