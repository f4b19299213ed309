//! Wald detector calibration: empirical false-alarm rate against the
//! chi-square threshold, and empirical detection probability against the
//! Marcum-Q prediction.

use cogradar::detection::{pd_oracle, sample_alpha_hat, threshold_for, wald_statistic};
use cogradar::rng::stream;
use cogradar::Complex64;

fn main() -> cogradar::Result<()> {
    let trials = 200_000;
    let sigma = 0.7;
    let mut rng = stream(2024, 0);

    println!("{:>8} {:>10} {:>10}", "P_FA", "lambda", "empirical");
    for p_fa in [1e-1, 1e-2, 1e-3] {
        let lambda = threshold_for(p_fa)?;
        let hits = (0..trials)
            .filter(|_| wald_statistic(sample_alpha_hat(Complex64::new(0.0, 0.0), sigma, &mut rng), sigma) >= lambda)
            .count();
        println!("{p_fa:>8.0e} {lambda:>10.4} {:>10.2e}", hits as f64 / trials as f64);
    }

    let lambda = threshold_for(1e-4)?;
    println!("\nP_FA = 1e-4, lambda = {lambda:.4}");
    println!("{:>8} {:>10} {:>10}", "snr_out", "Marcum", "empirical");
    for snr in [1.0, 5.0, 10.0, 20.0, 50.0] {
        // snr_out = |alpha|^2 / sigma^2
        let alpha = Complex64::from_polar(sigma * f64::sqrt(snr), 0.3);
        let hits = (0..trials)
            .filter(|_| wald_statistic(sample_alpha_hat(alpha, sigma, &mut rng), sigma) >= lambda)
            .count();
        println!("{snr:>8} {:>10.4} {:>10.4}", pd_oracle(snr, lambda), hits as f64 / trials as f64);
    }
    Ok(())
}
