//! Finite-difference weights on arbitrary nodes (Fornberg's algorithm).

/// Weights for the `k`-th derivative at `x0` from samples at `nodes`.
///
/// `nodes` must be pairwise distinct; the returned vector has one weight per
/// node. Classic recurrence from Fornberg, "Generation of finite difference
/// formulas on arbitrarily spaced grids".
pub fn fd_weights(x0: f64, nodes: &[f64], k: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > k, "stencil too small for derivative order");
    // c[j][i]: weight of node i for derivative order j, built incrementally.
    let mut c = vec![vec![0.0f64; n]; k + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for v in (1..=mn).rev() {
                    c[v][i] = c1 * ((v as f64) * c[v - 1][i - 1] - c5 * c[v][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for v in (1..=mn).rev() {
                c[v][j] = (c4 * c[v][j] - (v as f64) * c[v - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c[k].clone()
}

/// Derivative of sampled values at every node, using a sliding stencil of
/// `width` nearest nodes (one-sided near the ends).
pub fn derivative_on_grid(nodes: &[f64], values: &[f64], order: usize, width: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(width <= n && values.len() == n);
    let mut out = vec![0.0; n];
    for i in 0..n {
        let lo = i.saturating_sub(width / 2).min(n - width);
        let w = fd_weights(nodes[i], &nodes[lo..lo + width], order);
        out[i] = w
            .iter()
            .zip(&values[lo..lo + width])
            .map(|(wi, vi)| wi * vi)
            .sum();
    }
    out
}
