use fusion2::scalar::FieldSpec;
use fusion2::solver::random_absence_search;
use fusion2::FusionRule;
use std::time::Instant;

fn main() {
    let f2 = FieldSpec::prime(2).unwrap();
    let rule = FusionRule::new(2, 2).unwrap();
    let t0 = Instant::now();
    let report = random_absence_search(rule, &f2, 10_000_000, 20_260_810).unwrap();
    println!(
        "samples={} raw_passes={} solutions={} elapsed={:?}",
        report.samples,
        report.raw_passes,
        report.solutions_found,
        t0.elapsed()
    );
}
