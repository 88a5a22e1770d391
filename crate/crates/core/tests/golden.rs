//! Canonical renderings compared against files in `tests/golden/`.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use mmtr_core::airy::AiryData;
use mmtr_core::eo::{EoEngine, SpectralCurve};
use mmtr_core::npoint::NPointBuilder;

fn golden(name: &str, got: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, got).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name} differs from the golden file");
}

#[test]
fn npoint_functions() {
    let b = NPointBuilder::new();
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)] {
        let gf = b.build_g(g, n).unwrap();
        golden(
            &format!("npoint_{g}_{n}.txt"),
            &format!("{}\n", gf.render()),
        );
    }
}

#[test]
fn even_curve_differentials() {
    let e = EoEngine::new(SpectralCurve::even_coupling()).unwrap();
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2)] {
        let w = e.eo_omega(g, n).unwrap();
        golden(
            &format!("omega_even_{g}_{n}.txt"),
            &format!("{}\n", w.render()),
        );
    }
}

#[test]
fn airy_curve_differentials() {
    let e = EoEngine::new(SpectralCurve::airy()).unwrap();
    for (g, n) in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)] {
        let w = e.eo_omega(g, n).unwrap();
        golden(
            &format!("omega_airy_{g}_{n}.txt"),
            &format!("{}\n", w.render()),
        );
    }
}

#[test]
fn ladders() {
    let d = AiryData::new(3).unwrap();
    let js = serde_json::to_string_pretty(&d.to_json()).unwrap();
    golden("ladders.json", &format!("{js}\n"));
}
