#![allow(dead_code)]

use std::f64::consts::PI;

use qgwalk::coins::{Lambda, QuantumGraphParams, TransitionMatrix};
use qgwalk::graph::{ArcSpace, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected graph on `n` vertices: a random spanning tree plus each
/// remaining pair with probability `extra`.
pub fn random_graph<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    for u in 1..=n {
        for v in u + 1..=n {
            if !edges.contains(&(u, v)) && rng.random_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    random_graph(n, 0.0, rng)
}

/// A small zoo of named graphs used across suites.
pub fn zoo() -> Vec<(&'static str, Graph)> {
    vec![
        ("K2", Graph::path(2).unwrap()),
        ("P3", Graph::path(3).unwrap()),
        ("S3", Graph::star(3).unwrap()),
        ("C3", Graph::cycle(3).unwrap()),
        ("C4", Graph::cycle(4).unwrap()),
        ("K4", Graph::complete(4).unwrap()),
        ("paw", Graph::new(4, &[(1, 2), (2, 3), (3, 1), (3, 4)]).unwrap()),
    ]
}

pub fn random_lambda<R: Rng>(rng: &mut R) -> Lambda {
    match rng.random_range(0..4) {
        0 => Lambda::NEUMANN,
        1 => Lambda::Dirichlet,
        _ => Lambda::Finite(rng.random_range(0.0..5.0)),
    }
}

pub fn random_params<R: Rng>(g: &Graph, rng: &mut R) -> QuantumGraphParams {
    QuantumGraphParams::new(
        g,
        (0..g.edge_count()).map(|_| rng.random_range(0.2..2.0)).collect(),
        (0..g.vertex_count()).map(|_| random_lambda(rng)).collect(),
        (0..g.edge_count()).map(|_| rng.random_range(-2.0..2.0)).collect(),
    )
    .unwrap()
}

/// Row-stochastic but not necessarily reversible.
pub fn random_transition<R: Rng>(space: &ArcSpace, rng: &mut R) -> TransitionMatrix {
    let g = space.graph();
    let mut probs = vec![0.0; space.len()];
    for u in g.vertices() {
        let block = space.block(u);
        let w: Vec<f64> = block.clone().map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        for (slot, x) in block.zip(w) {
            probs[slot] = x / total;
        }
    }
    TransitionMatrix::new(space, probs).unwrap()
}

/// `(u(L), u'(L))` for `u'' = −k² u`, `u(0) = 1`, `u'(0) = 0`, by classical RK4.
pub fn shoot(k: f64, length: f64, steps: usize) -> (f64, f64) {
    let h = length / steps as f64;
    let f = |y: [f64; 2]| [y[1], -k * k * y[0]];
    let mut y = [1.0, 0.0];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (y[0], y[1])
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Eigenvalues `k` of the equilateral Neumann star with `d` edges of length
/// `length`, found by shooting from a leaf.
///
/// Modes with equal profiles on every edge need `u'(L) = 0` at the center
/// (simple); modes whose edge amplitudes sum to zero need `u(L) = 0`
/// (multiplicity `d − 1`).
pub fn star_oracle(d: usize, length: f64, k_min: f64, k_max: f64) -> Vec<(f64, usize)> {
    let steps = 4000;
    let grid = 4000;
    let mut roots = Vec::new();
    for (component, mult) in [(0usize, d - 1), (1usize, 1)] {
        let g = |k: f64| {
            let (u, du) = shoot(k, length, steps);
            if component == 0 {
                u
            } else {
                du / k
            }
        };
        let ks: Vec<f64> = (0..=grid).map(|i| k_min + (k_max - k_min) * i as f64 / grid as f64).collect();
        for w in ks.windows(2) {
            if (g(w[0]) < 0.0) != (g(w[1]) < 0.0) {
                roots.push((bisect(g, w[0], w[1]), mult));
            }
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots
}

pub fn closed_form_interval_roots(k_max: f64) -> Vec<f64> {
    (1..).map(|n| n as f64 * PI).take_while(|&k| k < k_max).collect()
}
