//! Amplitude-estimate spread under white and AR(1) disturbance, and the
//! analytic versus synthesized-signal measurement paths.

use cogradar::array::{norm_sqr, virtual_vector};
use cogradar::detection::{estimate_alpha, sample_alpha_hat, sigma_hat, Disturbance};
use cogradar::rng::stream;
use cogradar::waveform::orthogonal_waveform;
use cogradar::Complex64;

fn main() -> cogradar::Result<()> {
    let (n_t, n_r) = (8, 8);
    let w = orthogonal_waveform(n_t, 1.0)?;
    let v = virtual_vector(&w.w, 20.0, n_r);
    println!("N = {}, |v|^2 = {:.4}", v.len(), norm_sqr(&v));

    let alpha = Complex64::from_polar(0.4, 1.1);
    let trials = 20_000;
    let mut rng = stream(77, 0);
    println!("{:>6} {:>10} {:>12} {:>12}", "rho", "sigma_hat", "analytic sd", "signal sd");
    for rho in [0.0, 0.3, 0.6, 0.9] {
        let dist = if rho == 0.0 { Disturbance::white(1.0)? } else { Disturbance::ar1(1.0, rho)? };
        let sigma = sigma_hat(&v, &dist)?;
        let mut analytic = 0.0;
        let mut signal = 0.0;
        for _ in 0..trials {
            analytic += (sample_alpha_hat(alpha, sigma, &mut rng) - alpha).norm_sqr();
            let c = dist.sample(v.len(), &mut rng);
            let y: Vec<Complex64> = v.iter().zip(&c).map(|(vi, ci)| alpha * vi + ci).collect();
            signal += (estimate_alpha(&v, &y)? - alpha).norm_sqr();
        }
        println!(
            "{rho:>6.1} {sigma:>10.4} {:>12.4} {:>12.4}",
            (analytic / trials as f64).sqrt(),
            (signal / trials as f64).sqrt()
        );
    }
    Ok(())
}
