use std::collections::VecDeque;

use crate::symbol::Coefficient;

/// Lattice estimate of the modulus of continuity
/// `omega_a(delta) = sup_{|x-y| <= delta} |a(x) - a(y)|` on [0, 1].
///
/// Uses probes `i / probe_count`, `i = 0..=probe_count`, and pairs at most
/// `floor(delta * probe_count)` steps apart. This is a lower estimate of the
/// true modulus, exact when the extremal pair lies on the lattice.
pub fn modulus_of_continuity(a: &Coefficient, delta: f64, probe_count: usize) -> f64 {
    if !(delta > 0.0) {
        return 0.0;
    }
    let n = probe_count.max(1);
    let vals: Vec<f64> = (0..=n).map(|i| a.eval(i as f64 / n as f64)).collect();
    let k = ((delta * n as f64) * (1.0 + 1e-12)).floor() as usize;
    let k = k.min(n);
    if k == 0 {
        return 0.0;
    }
    // sliding-window max and min over windows of k + 1 consecutive probes
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best: f64 = 0.0;
    for i in 0..vals.len() {
        if !vals[i].is_finite() {
            continue;
        }
        while maxq.back().is_some_and(|&j| vals[j] <= vals[i]) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| vals[j] >= vals[i]) {
            minq.pop_back();
        }
        minq.push_back(i);
        while maxq.front().is_some_and(|&j| j + k < i) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&j| j + k < i) {
            minq.pop_front();
        }
        best = best.max(vals[maxq[0]] - vals[minq[0]]);
    }
    best
}

/// Upper bound for `omega_a(delta)` usable in certificates: the exact
/// modulus when the coefficient carries one, otherwise the lattice estimate
/// times a safety factor of 1.05.
pub fn modulus_upper_bound(a: &Coefficient, delta: f64) -> f64 {
    a.exact_modulus(delta)
        .unwrap_or_else(|| 1.05 * modulus_of_continuity(a, delta, 20_000))
}

/// Estimate of `omega^int_f(delta) = sup_{|E| <= delta} int_E |f|`.
///
/// Samples `|f|` at the midpoints of `sample_count` equal cells, sorts them
/// descending and integrates the top `delta` fraction (the supremum is
/// attained on a superlevel set of `|f|`). Non-finite samples count as 0.
pub fn modulus_of_integral_continuity(f: &Coefficient, delta: f64, sample_count: usize) -> f64 {
    let n = sample_count.max(1);
    let h = 1.0 / n as f64;
    let mut vals: Vec<f64> = (0..n)
        .map(|i| f.eval((i as f64 + 0.5) * h).abs())
        .map(|v| if v.is_finite() { v } else { 0.0 })
        .collect();
    vals.sort_unstable_by(|a, b| b.total_cmp(a));
    let cells = delta.clamp(0.0, 1.0) * n as f64;
    let whole = (cells.floor() as usize).min(n);
    let mut total: f64 = vals[..whole].iter().sum();
    if whole < n {
        total += (cells - whole as f64) * vals[whole];
    }
    total * h
}
