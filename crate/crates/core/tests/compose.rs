use chm6_core::compose::compose_blocks;
use chm6_core::families::fourier_f6;
use chm6_core::{compose12, ComposeSpec, FamilySelector, DEFAULT_PRECISION};
use core::f64::consts::PI;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn selector(rng: &mut ChaCha8Rng) -> FamilySelector {
    let (u, v) = (rng.gen_range(-1.4..1.4), rng.gen_range(-1.4..1.4));
    match rng.gen_range(0..3) {
        0 => FamilySelector::F6 { a: u, b: v },
        1 => FamilySelector::F6T { a: u, b: v },
        _ => FamilySelector::H { x1: u, x2: v },
    }
}

#[test]
fn random_specs_are_hadamard() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let spec = ComposeSpec {
            h1: selector(&mut rng),
            h2: selector(&mut rng),
            deltas: core::array::from_fn(|_| rng.gen_range(-PI..PI)),
        };
        let m = compose12(&spec).unwrap();
        assert_eq!(m.order(), 12);
        assert!(m.is_hadamard(1e-10), "{spec:?}");
    }
}

#[test]
fn dephased_inputs_give_dephased_output() {
    let spec = ComposeSpec {
        h1: FamilySelector::H { x1: 0.3, x2: 0.2 },
        h2: FamilySelector::F6T { a: 0.1, b: 0.7 },
        deltas: [0.1, 0.2, 0.3, 0.4, 0.5],
    };
    let m = compose12(&spec).unwrap();
    let one = Complex64::new(1.0, 0.0);
    for k in 0..12 {
        assert!((m[(0, k)] - one).norm() < 1e-15);
        assert!((m[(k, 0)] - one).norm() < 1e-15);
    }
}

#[test]
fn plain_doubling() {
    let f = fourier_f6(0.0, 0.0);
    let m = compose_blocks(&f, &f, &[0.0; 5]).unwrap();
    let sign = [[1.0, 1.0], [1.0, -1.0]];
    for i in 0..12 {
        for j in 0..12 {
            let expect = f[(i % 6, j % 6)] * sign[i / 6][j / 6];
            assert!((m[(i, j)] - expect).norm() < 1e-15);
        }
    }
    assert!(m.unitarity_defect() <= 1e-12);

    let (d, _) = m.dephase().unwrap();
    let a = m.fingerprint(DEFAULT_PRECISION).unwrap();
    let b = d.fingerprint(DEFAULT_PRECISION).unwrap();
    assert!(a.matches(&b));
}
