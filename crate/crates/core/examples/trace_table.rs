//! Regenerates the trace-statistic quantile table used by the Johansen test
//! (restricted constant). Simulates the statistic for an m-dimensional random
//! walk and prints the quantiles as Rust source.
//!
//! `cargo run --release --example trace_table -- [reps] [T]`

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use varflow::diagnostics::TRACE_PROBABILITIES;
use varflow::stats::quantile_sorted;

const MAX_DIM: usize = 6;

fn trace_stat(m: usize, t: usize, seed: u64, rep: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    let mut level = vec![0.0; m];
    let mut s00 = DMatrix::<f64>::zeros(m, m);
    let mut s01 = DMatrix::<f64>::zeros(m, m + 1);
    let mut s11 = DMatrix::<f64>::zeros(m + 1, m + 1);
    let mut z0 = vec![0.0; m];
    let mut z1 = vec![1.0; m + 1];
    for _ in 0..t {
        for j in 0..m {
            z1[j] = level[j];
            z0[j] = StandardNormal.sample(&mut rng);
            level[j] += z0[j];
        }
        for a in 0..m {
            for b in 0..m {
                s00[(a, b)] += z0[a] * z0[b];
            }
            for b in 0..=m {
                s01[(a, b)] += z0[a] * z1[b];
            }
        }
        for a in 0..=m {
            for b in 0..=m {
                s11[(a, b)] += z1[a] * z1[b];
            }
        }
    }
    let l = s11.cholesky().expect("S11 positive definite").l();
    let l_inv = l.try_inverse().expect("invertible factor");
    let s00_inv = s00.try_inverse().expect("S00 invertible");
    let c = &l_inv * s01.transpose() * s00_inv * &s01 * l_inv.transpose();
    let mut eig: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    -(t as f64) * eig[..m].iter().map(|l| (1.0 - l).ln()).sum::<f64>()
}

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let reps = args.first().copied().unwrap_or(100_000);
    let t = args.get(1).copied().unwrap_or(1000);
    println!("// {reps} replicates, T = {t}");
    println!("pub(crate) const TRACE_QUANTILES: [[f64; {}]; {MAX_DIM}] = [", TRACE_PROBABILITIES.len());
    for m in 1..=MAX_DIM {
        let mut stats: Vec<f64> = (0..reps as u64)
            .into_par_iter()
            .map(|rep| trace_stat(m, t, 1000 + m as u64, rep))
            .collect();
        stats.sort_by(f64::total_cmp);
        let q: Vec<String> = TRACE_PROBABILITIES
            .iter()
            .map(|&p| format!("{:.3}", quantile_sorted(&stats, p)))
            .collect();
        println!("    [{}],", q.join(", "));
        eprintln!("m = {m} done");
    }
    println!("];");
}
