//! The committed instance and plan fixtures stay loadable and reproducible.

use std::path::{Path, PathBuf};

use substream::harness::baseline::{brute_force_opt, BRUTE_FORCE_CAP};
use substream::harness::bench::{execute_plan, write_csv, Plan};
use substream::harness::instance::Instance;
use substream::Matroid;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn coverage_fixture_has_the_pinned_optimum() {
    let inst = Instance::load(&fixtures().join("coverage-1.json")).unwrap();
    assert_eq!(inst.ground_size(), 10);
    assert_eq!(inst.matroid.rank_total(), 4);
    let (set, value) = brute_force_opt(&inst.matroid, inst.f(), BRUTE_FORCE_CAP).unwrap();
    assert!(inst.matroid.independent(&set));
    assert!((value - 15.33218219064674).abs() < 1e-9, "optimum moved to {value}");
}

#[test]
fn every_instance_fixture_loads() {
    for name in ["coverage-1.json", "cut-2.json", "hardness-p2-n2.json"] {
        let inst = Instance::load(&fixtures().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(inst.ground_size() > 0);
    }
}

#[test]
fn smoke_plan_runs_cleanly_and_reproducibly() {
    let dir = fixtures().join("plans");
    let plan = Plan::load(&dir.join("smoke.json")).unwrap();
    let csv = || {
        let rows = execute_plan(&plan, &dir, false);
        for r in &rows {
            if let Err(e) = &r.outcome {
                panic!("run {} seed {} failed: {e}", r.run, r.seed);
            }
        }
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let first = csv();
    assert_eq!(first.lines().count(), 10);
    assert_eq!(first, csv());
}
