//! First-order Marcum Q function.
//!
//! `Q1(a, b) = P(X > b^2)` for `X` noncentral chi-square with 2 degrees of
//! freedom and noncentrality `a^2`. Evaluated through the Poisson mixture
//!
//! ```text
//! Q1(a, b) = sum_j Pois(j; a^2/2) * P(Gamma(j+1, 1) > b^2/2)
//!          = sum_j Pois(j; mu) * exp(-y) * sum_{i<=j} y^i / i!
//! ```
//!
//! with both series carried in log space.

pub fn marcum_q1(a: f64, b: f64) -> f64 {
    assert!(a >= 0.0 && b >= 0.0, "Marcum Q arguments must be non-negative");
    let mu = a * a / 2.0;
    let y = b * b / 2.0;
    if y == 0.0 {
        return 1.0;
    }
    if mu == 0.0 {
        return (-y).exp();
    }
    let ln_mu = mu.ln();
    let ln_y = y.ln();
    let j_max = (mu + 12.0 * mu.sqrt() + 60.0).ceil() as usize;
    let i_max = (y + 12.0 * y.sqrt() + 60.0).ceil() as usize;
    let ln_pois = |k: usize, ln_rate: f64, rate: f64, ln_fact: f64| (-rate + k as f64 * ln_rate - ln_fact).exp();

    let mut ln_facts = Vec::with_capacity(j_max.max(i_max) + 2);
    ln_facts.push(0.0);
    for k in 1..=j_max.max(i_max) + 1 {
        ln_facts.push(ln_facts[k - 1] + (k as f64).ln());
    }

    // Sum whichever tail is smaller so the result keeps full relative accuracy.
    if mu + 1.0 > y {
        // 1 - Q1 = sum_j Pois(j; mu) P(Pois(y) > j)
        let p: Vec<f64> = (0..=i_max).map(|i| ln_pois(i, ln_y, y, ln_facts[i])).collect();
        let mut upper = vec![0.0; i_max + 2];
        for i in (0..=i_max).rev() {
            upper[i] = upper[i + 1] + p[i];
        }
        let cdf: f64 = (0..=j_max.min(i_max))
            .map(|j| ln_pois(j, ln_mu, mu, ln_facts[j]) * upper[j + 1])
            .sum();
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        // Q1 = sum_j Pois(j; mu) P(Pois(y) <= j)
        let mut lower = 0.0;
        let mut q = 0.0;
        for j in 0..=j_max {
            lower += ln_pois(j, ln_y, y, ln_facts[j]);
            q += ln_pois(j, ln_mu, mu, ln_facts[j]) * lower.min(1.0);
        }
        q.clamp(0.0, 1.0)
    }
}
