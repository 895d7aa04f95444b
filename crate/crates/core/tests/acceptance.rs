//! Runs every reference criterion and prints one pass/fail line per criterion.

use imw_core::cache::Cache;
use imw_core::reproduce::{run_all, Context};

#[test]
fn acceptance() {
    let ctx = Context::new(Cache::from_env(), 0x5eed);
    let reports = run_all(&ctx, true);
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "{} of {} criteria passed",
        reports.len() - failed.len(),
        reports.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
