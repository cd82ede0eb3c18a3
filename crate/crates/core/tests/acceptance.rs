use prg_core::fixtures::Fixtures;
use prg_core::verify::run_all;

fn main() {
    let results = run_all(&Fixtures::from_env());
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {} | {}", r.id, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
