use chm6_core::families::{dita_d6, family_h, fourier_f6, ParamPoint};
use chm6_core::search::{SearchOutcome, SeedSpec};
use chm6_core::{are_equivalent, classify, project_search, Decision, FamilyLabel, SearchConfig, DEFAULT_TOL};

fn equivalent_to_fit(h: &chm6_core::UnitMatrix, label: FamilyLabel, params: &[f64]) -> bool {
    let m = label.construct(params).expect("constructible fit");
    are_equivalent(&m, h, 1e-8).unwrap().decision == Decision::Equivalent
}

#[test]
fn recovers_h_member() {
    let h = family_h(ParamPoint::new(0.37, 0.21)).unwrap();
    let c = classify(&h, 17).unwrap();
    assert_eq!(c.label, FamilyLabel::HFamily);
    assert!(c.verified);
    let close = |a: f64, b: f64| (a.abs() - b).abs() < 1e-3;
    let direct = close(c.params[0], 0.37) && close(c.params[1], 0.21);
    let swapped = close(c.params[0], 0.21) && close(c.params[1], 0.37);
    assert!(direct || swapped, "{:?}", c.params);
    assert!(equivalent_to_fit(&h, c.label, &c.params));
}

#[test]
fn recovers_dita_member() {
    let d = dita_d6(0.2).unwrap();
    let c = classify(&d, 17).unwrap();
    assert_eq!(c.label, FamilyLabel::D6);
    assert!(c.verified);
    assert!((c.params[0].abs() - 0.2).abs() < 1e-3);
}

#[test]
fn recovers_fourier_member() {
    let f = fourier_f6(0.4, 0.9);
    let c = classify(&f, 17).unwrap();
    assert_eq!(c.label, FamilyLabel::F6Slice);
    assert!(c.distance <= 1e-4 * 225.0);
    if c.verified {
        assert!(equivalent_to_fit(&f, c.label, &c.params));
    }
}

#[test]
fn classifies_search_output() {
    let seed = fourier_f6(0.3, 0.3);
    let cfg = SearchConfig { max_iter: 2000, tol: 1e-10, seed: SeedSpec::Explicit(seed), rng_seed: 0 };
    let SearchOutcome { matrix, .. } = project_search(&cfg).unwrap();
    assert!(matrix.is_hadamard(DEFAULT_TOL));
    let c = classify(&matrix, 17).unwrap();
    assert_ne!(c.label, FamilyLabel::Unknown);
}
