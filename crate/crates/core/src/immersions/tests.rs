use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn catalog() -> Vec<HypersurfaceImmersion> {
    vec![
        HypersurfaceImmersion::umbilic_hyperbolic(2, -0.5).unwrap(),
        HypersurfaceImmersion::umbilic_hyperbolic(3, -0.8).unwrap(),
        HypersurfaceImmersion::umbilic_hyperbolic(4, -1.0).unwrap(),
        HypersurfaceImmersion::umbilic_hyperbolic(5, -4.0 / 7.0).unwrap(),
        HypersurfaceImmersion::flat_hyperplane(3).unwrap(),
        HypersurfaceImmersion::clifford_torus(),
    ]
}

fn sample(imm: &HypersurfaceImmersion, rng: &mut impl Rng) -> Vec<f64> {
    let m = imm.m();
    let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.5..1.5)).collect();
    if matches!(imm.kind(), ImmersionKind::UmbilicHyperbolic { .. }) {
        x[m - 1] = rng.gen_range(0.3..2.0);
    }
    x
}

#[test]
fn umbilic_constants() {
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(3, -0.8).unwrap();
    let x = [0.1, 0.2, 1.0];
    assert!((imm.mean_curvature(&x).unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
    assert!((imm.mean_curvature(&x).unwrap() - 0.447_213_595_5).abs() < 1e-10);
    let geodesic = HypersurfaceImmersion::umbilic_hyperbolic(3, -1.0).unwrap();
    assert_eq!(geodesic.mean_curvature(&x).unwrap(), 0.0);
    assert_eq!(geodesic.shape_operator(&x).unwrap(), DMatrix::zeros(3, 3));
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(HypersurfaceImmersion::umbilic_hyperbolic(3, 0.0).is_err());
    assert!(HypersurfaceImmersion::umbilic_hyperbolic(3, -1.5).is_err());
    assert!(HypersurfaceImmersion::umbilic_hyperbolic(1, -0.5).is_err());
    assert!(HypersurfaceImmersion::flat_hyperplane(1).is_err());
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(3, -0.8).unwrap();
    assert!(matches!(imm.map(&[0.0, 0.0, -1.0]), Err(Error::OutOfDomain { .. })));
}

#[test]
fn clifford_torus_principal_curvatures() {
    let imm = HypersurfaceImmersion::clifford_torus();
    let x = [0.4, -2.0];
    assert_eq!(imm.principal_curvatures(&x).unwrap(), vec![1.0, -1.0]);
    assert_eq!(imm.mean_curvature(&x).unwrap(), 0.0);
    assert_eq!(imm.spaceform().c, 1.0);
    let p = imm.map(&x).unwrap();
    assert!((p.norm() - 1.0).abs() < 1e-15);
    // the map is periodic with the chart periods
    let q = imm.map(&[0.4 + CLIFFORD_TORUS_PERIOD, -2.0 - CLIFFORD_TORUS_PERIOD]).unwrap();
    assert!((p - q).norm() < 1e-12);
}

#[test]
fn adapted_frame_is_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for imm in catalog() {
        for _ in 0..10 {
            let x = sample(&imm, &mut rng);
            let p = imm.map(&x).unwrap();
            let frame = imm.adapted_frame(&x).unwrap();
            for (a, ea) in frame.iter().enumerate() {
                for (b, eb) in frame.iter().enumerate() {
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((imm.ambient().inner(&p, ea, eb) - expect).abs() < 1e-12);
                }
            }
            let v = DVector::from_fn(imm.m() + 1, |i, _| i as f64 - 0.5);
            let back = imm.to_adapted(&x, &imm.from_adapted(&x, &v).unwrap()).unwrap();
            assert!((back - v).norm() < 1e-12);
        }
    }
}

#[test]
fn pushforward_is_differential_of_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fd = FdScheme::default();
    for imm in catalog() {
        let x = sample(&imm, &mut rng);
        let f = imm.intrinsic_chart().conformal_factor(&x).unwrap();
        let push = imm.pushforward(&x).unwrap();
        for (j, pj) in push.iter().enumerate() {
            let d: DVector<f64> = fd.partial(&x, j, |y| Ok(imm.map_unchecked(y))).unwrap();
            assert!((d / f - pj).norm() < 1e-8);
        }
        // ν stays on the tangent space of the embedded sphere
        if let AmbientModel::EmbeddedSphere { .. } = imm.ambient() {
            assert!(imm.normal(&x).unwrap().dot(&imm.map(&x).unwrap()).abs() < 1e-15);
        }
    }
}

#[test]
fn weingarten_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fd = FdScheme::default();
    for imm in catalog() {
        for _ in 0..5 {
            let x = sample(&imm, &mut rng);
            let w = imm.shape_operator(&x).unwrap();
            let push = imm.pushforward(&x).unwrap();
            for i in 0..imm.m() {
                let dn = imm.normal_derivative_fd(&x, i, fd).unwrap();
                let expect = (0..imm.m()).fold(DVector::zeros(dn.len()), |acc, j| acc - &push[j] * w[(i, j)]);
                let p = imm.map(&x).unwrap();
                let diff = &dn - expect;
                assert!(imm.ambient().inner(&p, &diff, &diff).sqrt() < 1e-5, "{:?}", imm.kind());
            }
            assert!((imm.shape_operator_fd(&x, fd).unwrap() - &w).abs().max() < 1e-6);
            assert!((&w - w.transpose()).abs().max() == 0.0);
        }
    }
}

#[test]
fn umbilicity_and_constant_mean_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fd = FdScheme::default();
    for imm in catalog() {
        let mut hs = Vec::new();
        for _ in 0..8 {
            let x = sample(&imm, &mut rng);
            let w = imm.shape_operator_fd(&x, fd).unwrap();
            hs.push(w.trace() / imm.m() as f64);
            if let ImmersionKind::UmbilicHyperbolic { .. } = imm.kind() {
                let h = imm.mean_curvature(&x).unwrap();
                assert!((imm.shape_operator(&x).unwrap() - DMatrix::identity(imm.m(), imm.m()) * h).abs().max() <= 1e-8);
            }
        }
        let spread = hs.iter().cloned().fold(f64::MIN, f64::max) - hs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-6, "{:?}: {spread}", imm.kind());
    }
}

#[test]
fn gauss_equation_matches_intrinsic_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for imm in catalog() {
        let m = imm.m() as f64;
        let c = imm.spaceform().c;
        for _ in 0..5 {
            let x = sample(&imm, &mut rng);
            let w = imm.shape_operator(&x).unwrap();
            let h = imm.mean_curvature(&x).unwrap();
            let gauss = m * (m - 1.0) * c + m * m * h * h - w.norm_squared();
            let intrinsic = imm.intrinsic_chart().scalar_curvature(&x).unwrap();
            assert!((gauss - intrinsic).abs() <= 1e-6, "{:?}", imm.kind());
        }
    }
}

#[test]
fn second_fundamental_trace_matches_fd() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fd = FdScheme::default();
    for imm in catalog() {
        for _ in 0..5 {
            let x = sample(&imm, &mut rng);
            let exact = imm.second_fundamental_trace(&x).unwrap();
            let num = imm.second_fundamental_trace_fd(&x, fd).unwrap();
            let p = imm.map(&x).unwrap();
            let d = &exact - &num;
            assert!(imm.ambient().inner(&p, &d, &d).sqrt() <= 1e-5, "{:?}", imm.kind());
        }
    }
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(3, -0.8).unwrap();
    let x = [0.0, 0.0, 1.0];
    let t = imm.to_adapted(&x, &imm.second_fundamental_trace(&x).unwrap()).unwrap();
    assert!((t[3] - 3.0 * 0.2f64.sqrt()).abs() < 1e-14);
    let flat = HypersurfaceImmersion::flat_hyperplane(2).unwrap();
    assert_eq!(flat.second_fundamental_trace(&[1.0, 2.0]).unwrap(), DVector::zeros(3));
}

#[test]
fn descriptor_round_trip() {
    for imm in catalog() {
        let json = serde_json::to_string(&imm).unwrap();
        let back: HypersurfaceImmersion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, imm);
    }
    let parsed: HypersurfaceImmersion = serde_json::from_str(r#"{"kind":"clifford_torus"}"#).unwrap();
    assert_eq!(parsed, HypersurfaceImmersion::clifford_torus());
    assert!(serde_json::from_str::<HypersurfaceImmersion>(r#"{"kind":"umbilic_hyperbolic","m":3}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn umbilic_normal_is_unit_and_orthogonal(m in 2usize..6, kappa in -1.0f64..-0.05, h in 0.1f64..3.0, t in -2.0f64..2.0) {
        let imm = HypersurfaceImmersion::umbilic_hyperbolic(m, kappa).unwrap();
        let mut x = vec![t; m];
        x[m - 1] = h;
        let p = imm.map(&x).unwrap();
        let n = imm.normal(&x).unwrap();
        prop_assert!((imm.ambient().inner(&p, &n, &n) - 1.0).abs() < 1e-12);
        for e in imm.pushforward(&x).unwrap() {
            prop_assert!(imm.ambient().inner(&p, &n, &e).abs() < 1e-12);
        }
        let hm = imm.mean_curvature(&x).unwrap();
        prop_assert!((hm * hm - (kappa + 1.0)).abs() < 1e-12);
    }
}
