use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_granular-hermite"));
    c.env("GRANULAR_HERMITE_THREADS", "2");
    c
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

#[test]
fn precompute_then_inspect_maxwell() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("a.ibct");
    let out = bin()
        .args(["precompute", "--m", "6", "--varpi", "1", "--e", "0.5", "--const", "0.0795775", "--out"])
        .arg(&cache)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", text(&out));

    let t = granular_hermite::io::cache_read(&cache).unwrap();
    let sum: f64 = (0..3)
        .map(|k| {
            let a = granular_hermite::MultiIndex::unit(k) + granular_hermite::MultiIndex::unit(k);
            t.get(a, granular_hermite::MultiIndex::ZERO, granular_hermite::MultiIndex::ZERO)
        })
        .sum();
    // C is given to six digits, so the identity holds to that precision.
    assert!((sum + 0.28125).abs() < 1e-6, "{sum}");

    let out = bin().args(["inspect", "--cache"]).arg(&cache).output().unwrap();
    let s = text(&out);
    assert!(out.status.success(), "{s}");
    assert!(s.contains("maxwell sparsity: consistent"), "{s}");
    assert!(s.contains("order m         6"), "{s}");
}

#[test]
fn heating_run_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/heating.cfg");
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out-dir").arg(dir.path()).output().unwrap();
    let s = text(&out);
    assert!(out.status.success(), "{s}");
    let line = s.lines().find(|l| l.contains("max relative deviation")).expect("deviation line");
    let dev: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(dev < 2e-3, "{line}");
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert!(csv.starts_with("t,rho,u1,u2,u3,theta,"));
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn two_dimensional_run_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.cfg");
    std::fs::write(
        &cfg,
        "problem = inhomogeneous\nkernel.type = hard_sphere\nkernel.e = 0.9\nmodel.m0 = 2\nmodel.m = 4\n\
         grid.dims = 2\ngrid.nx = 4\ngrid.ny = 4\ngrid.lx = 1\ntime.t_end = 0.02\n\
         initial.rho = 1\ninitial.rho_amplitude = 0.5\ncache.path = t.ibct\n",
    )
    .unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out-dir").arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", text(&out));
    let last = std::fs::read_to_string(dir.path().join("snapshot_00001.csv")).unwrap();
    assert_eq!(last.lines().count(), 17);
    assert!(dir.path().join("t.ibct").exists());
    let again = bin().args(["run", "--config"]).arg(&cfg).arg("--out-dir").arg(dir.path()).output().unwrap();
    assert!(text(&again).contains("loaded tensor"), "{}", text(&again));
}

#[test]
fn mismatched_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("hs.ibct");
    let st = bin()
        .args(["precompute", "--m", "2", "--varpi", "0.5", "--e", "0.9", "--const", "0.05626976", "--out"])
        .arg(&cache)
        .output()
        .unwrap();
    assert!(st.status.success());
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "problem = haff\nkernel.varpi = 0.5\nkernel.c = 0.05626976\nkernel.e = 0.95\nmodel.m = 2\ntime.dt = 0.01\ntime.t_end = 0.1\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--cache").arg(&cache).arg("--out-dir").arg(dir.path()).output().unwrap();
    assert!(!out.status.success());
    assert!(text(&out).contains("incompatible cache"), "{}", text(&out));
}

#[test]
fn usage_and_config_errors_exit_nonzero() {
    let out = bin().args(["precompute", "--m", "3"]).output().unwrap();
    assert!(!out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "problem = heating\nkernel.typo = 1\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    assert!(text(&out).contains("kernel.typo"), "{}", text(&out));
}

#[test]
fn validate_reports_every_check() {
    let out = bin().arg("validate").output().unwrap();
    let s = text(&out);
    assert!(out.status.success(), "{s}");
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 10, "{s}");
}
