use fusion2::scalar::FieldSpec;
use fusion2::solver::{brute_force_search, BruteForceOptions};
use fusion2::FusionRule;
use std::time::Instant;

fn main() {
    let f2 = FieldSpec::prime(2).unwrap();
    let rule = FusionRule::new(0, 2).unwrap();
    let mut opts = BruteForceOptions::default();
    opts.include_singular = true;
    let t0 = Instant::now();
    let report = brute_force_search(rule, &f2, &opts).unwrap();
    println!("enumerated: {}", report.enumerated);
    println!("invertible: {}", report.invertible_count);
    println!("solutions (invertible): {}", report.solutions.len());
    println!("singular passes: {}", report.singular_solution_count);
    println!("elapsed: {:?}", t0.elapsed());
    for (i, s) in report.solutions.iter().enumerate() {
        println!("--- solution {}", i + 1);
        print!("{}", s.lambda2());
    }
}
