use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::clifford::{inner, norm, GammaRep, Spinor};
use crate::fd::FdScheme;
use crate::geometry::Chart;

fn random_spinor(rng: &mut impl Rng, d: usize) -> Spinor {
    Spinor::from_iterator(d, (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

fn random_exp_field(rng: &mut impl Rng, chart: &Chart, rep: &Arc<GammaRep>, terms: usize) -> SpinorField {
    let m = chart.m();
    let terms = (0..terms)
        .map(|_| ExpTerm {
            wave: (0..m)
                .map(|_| Complex64::new(rng.gen_range(-0.8..0.8), rng.gen_range(-1.5..1.5)))
                .collect(),
            spinor: random_spinor(rng, rep.dim_spinor()),
        })
        .collect();
    SpinorField::exponential_sum(chart.clone(), rep.clone(), terms).unwrap()
}


fn umbilic_solution_chart(m: usize) -> Chart {
    Chart::hyperbolic_halfspace(m, -4.0 / (m as f64 + 2.0)).unwrap()
}

#[test]
fn constant_spinor_is_parallel_on_flat_space() {
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let psi = SpinorField::constant(Chart::euclidean(3).unwrap(), rep.clone(), rep.basis_spinor(1)).unwrap();
    for d in psi.covariant_derivatives(&[0.2, 0.3, -1.0]).unwrap() {
        assert_eq!(norm(&d), 0.0);
    }
    let torus = Chart::flat_torus(vec![1.0, 2.0, 3.0]).unwrap();
    let psi = SpinorField::constant(torus, rep.clone(), rep.basis_spinor(0)).unwrap();
    assert_eq!(norm(&psi.dirac(&[0.5, 0.5, 0.5]).unwrap()), 0.0);
    assert_eq!(psi.penrose_norm(&[0.5, 0.5, 0.5]).unwrap(), 0.0);
}

#[test]
fn analytic_and_fd_derivatives_agree_on_flat_space() {
    // polynomial field with hand-derived Dirac operator:
    // ψ = x_1 s + x_2² t  ⇒  D ψ = γ_1 s + 2 x_2 γ_2 t
    let rep = Arc::new(GammaRep::new(2).unwrap());
    let chart = Chart::euclidean(2).unwrap();
    let s = Spinor::from_vec(vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.0)]);
    let t = Spinor::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0)]);
    let (s1, t1) = (s.clone(), t.clone());
    let psi = SpinorField::from_fn(chart, rep.clone(), move |x| &s1 * Complex64::from(x[0]) + &t1 * Complex64::from(x[1] * x[1]))
        .unwrap();
    let x = [0.7, -1.3];
    let expected = rep.gamma(0) * &s + rep.gamma(1) * &t * Complex64::from(2.0 * x[1]);
    assert!(norm(&(psi.dirac(&x).unwrap() - expected)) < 1e-8);
}

#[test]
fn fd_dirac_converges_quadratically() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let chart = Chart::hyperbolic_halfspace(3, -1.0).unwrap();
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let psi = random_exp_field(&mut rng, &chart, &rep, 2);
    let x = [0.1, -0.2, 0.8];
    let exact = psi.dirac(&x).unwrap();
    let err = |scheme: FdScheme| {
        let d = psi.clone().with_mode(DerivativeMode::FiniteDifference(scheme)).dirac(&x).unwrap();
        norm(&(d - &exact))
    };
    let (e1, e2) = (err(FdScheme::new(1e-2)), err(FdScheme::new(5e-3)));
    let order = (e1 / e2).log2();
    assert!((1.9..2.1).contains(&order), "plain order {order}");
    let (r1, r2) = (err(FdScheme::richardson(4e-2)), err(FdScheme::richardson(2e-2)));
    let order = (r1 / r2).log2();
    assert!(order > 3.7, "richardson order {order}");
}

#[test]
fn metric_compatibility_of_spinor_connection() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let chart = Chart::sphere_stereographic(3, 1.0).unwrap();
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let psi = random_exp_field(&mut rng, &chart, &rep, 2);
    let phi = random_exp_field(&mut rng, &chart, &rep, 1);
    let fd = FdScheme::default();
    for _ in 0..10 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
        let f = chart.conformal_factor(&x).unwrap();
        for i in 0..3 {
            let lhs = fd
                .partial(&x, i, |y| {
                    let v = inner(&psi.value(y)?, &phi.value(y)?)?;
                    Ok(nalgebra::DVector::from_vec(vec![v.re, v.im]))
                })
                .unwrap()
                / f;
            let rhs = inner(&psi.covariant_derivative(&x, i).unwrap(), &phi.value(&x).unwrap()).unwrap()
                + inner(&psi.value(&x).unwrap(), &phi.covariant_derivative(&x, i).unwrap()).unwrap();
            assert!((lhs[0] - rhs.re).abs() < 1e-6 && (lhs[1] - rhs.im).abs() < 1e-6);
        }
    }
}

#[test]
fn leibniz_rule_for_coordinate_fields() {
    // V = ∂_a = F e_a; V·ψ = F γ_a ψ; ∇_{e_i} V = Σ_l Γ^l_{ia} e_l
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let chart = Chart::hyperbolic_halfspace(3, -0.5).unwrap();
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let psi = random_exp_field(&mut rng, &chart, &rep, 2);
    let x = [0.3, 0.1, 1.4];
    let gam = chart.christoffel(&x).unwrap();
    for a in 0..3 {
        let (c, r, p) = (chart.clone(), rep.clone(), psi.clone());
        let v_psi = SpinorField::from_fn(chart.clone(), rep.clone(), move |y| {
            r.gamma(a) * p.value(y).unwrap() * Complex64::from(c.conformal_factor(y).unwrap())
        })
        .unwrap();
        for i in 0..3 {
            let lhs = v_psi.covariant_derivative(&x, i).unwrap();
            let nabla_v: Vec<f64> = (0..3).map(|l| gam.get(l, i, a)).collect();
            let f = chart.conformal_factor(&x).unwrap();
            let mut v = vec![0.0; 3];
            v[a] = f;
            let rhs = rep.clifford_mul(&nabla_v, &psi.value(&x).unwrap()).unwrap()
                + rep.clifford_mul(&v, &psi.covariant_derivative(&x, i).unwrap()).unwrap();
            assert!(norm(&(lhs - rhs)) < 1e-6);
        }
    }
}

#[test]
fn clifford_trace_of_penrose_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let chart = Chart::hyperbolic_halfspace(4, -1.0).unwrap();
    let rep = Arc::new(GammaRep::new(4).unwrap());
    let psi = random_exp_field(&mut rng, &chart, &rep, 3);
    let p = psi.penrose_all(&[0.0, 0.1, 0.2, 1.0]).unwrap();
    assert!(norm(&clifford_trace(&rep, &p)) < 1e-12);
}

#[test]
fn zero_lambda_transport_is_constant_on_euclidean_space() {
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let seed = rep.basis_spinor(1);
    let psi = killing_transport(Chart::euclidean(3).unwrap(), rep, Complex64::from(0.0), &[0.0; 3], seed.clone()).unwrap();
    assert!(norm(&(psi.value(&[1.0, -2.0, 0.5]).unwrap() - seed)) < 1e-15);
}

#[test]
fn incompatible_killing_constant_is_rejected() {
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let chart = umbilic_solution_chart(3);
    let err = killing_transport(chart, rep.clone(), Complex64::new(0.5, 0.0), &[0.0, 0.0, 1.0], rep.basis_spinor(0));
    assert!(matches!(err, Err(Error::InvalidParameter(_))));
}

#[test]
fn transport_outside_domain_fails() {
    let rep = Arc::new(GammaRep::new(3).unwrap());
    let lambda = Complex64::new(0.0, 1.0 / 5f64.sqrt());
    let psi = killing_transport(umbilic_solution_chart(3), rep.clone(), lambda, &[0.0, 0.0, 1.0], rep.basis_spinor(0)).unwrap();
    assert!(psi.value(&[0.0, 0.0, -1.0]).is_err());
    let src = KillingTransport::new(umbilic_solution_chart(3), rep.clone(), lambda, &[0.0, 0.0, 1.0], rep.basis_spinor(0)).unwrap();
    assert!(matches!(src.transport(&[0.0, 0.0, -0.5]), Err(Error::PathExitsDomain { .. })));
    assert!(src.with_axis_order(vec![0, 0, 1]).is_err());
}

#[test]
fn killing_spinors_satisfy_their_equation_and_eigen_identities() {
    for m in [3usize, 4] {
        let chart = umbilic_solution_chart(m);
        let rep = Arc::new(GammaRep::new(m).unwrap());
        let mut x0 = vec![0.0; m];
        x0[m - 1] = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for sign in [1.0, -1.0] {
            let lambda = Complex64::new(0.0, sign / (m as f64 + 2.0).sqrt());
            let psi = killing_transport(chart.clone(), rep.clone(), lambda, &x0, random_spinor(&mut rng, rep.dim_spinor())).unwrap();
            let mut x = x0.clone();
            x[0] = 0.2;
            x[m - 1] = 1.3;
            let v = psi.value(&x).unwrap();
            for (i, d) in psi.covariant_derivatives(&x).unwrap().iter().enumerate() {
                assert!(norm(&(d - rep.mul_basis(i, &v) * lambda)) < 1e-6);
            }
            let mla = Complex64::from(m as f64) * lambda;
            assert!(norm(&(psi.dirac(&x).unwrap() + &v * mla)) < 1e-6);
            assert!(psi.penrose_norm(&x).unwrap() < 1e-6);
            let d2 = psi.dirac_field().dirac(&x).unwrap();
            assert!(norm(&(d2 - &v * (mla * mla))) < 1e-5);
        }
    }
}

#[test]
fn killing_transport_is_path_independent() {
    let m = 3;
    let chart = umbilic_solution_chart(m);
    let rep = Arc::new(GammaRep::new(m).unwrap());
    let lambda = Complex64::new(0.0, -1.0 / 5f64.sqrt());
    let seed = Spinor::from_vec(vec![Complex64::new(0.3, -0.2), Complex64::new(1.0, 0.4)]);
    let forward = KillingTransport::new(chart.clone(), rep.clone(), lambda, &[0.0, 0.0, 1.0], seed.clone()).unwrap();
    let reverse = KillingTransport::new(chart, rep, lambda, &[0.0, 0.0, 1.0], seed)
        .unwrap()
        .with_axis_order(vec![2, 1, 0])
        .unwrap();
    for x in [[0.4, -0.3, 1.5], [-0.7, 0.2, 0.6], [0.1, 0.1, 0.9]] {
        let a = forward.transport(&x).unwrap();
        let b = reverse.transport(&x).unwrap();
        assert!(norm(&(a - b)) < 1e-8);
    }
}

#[test]
fn transported_basis_stays_independent() {
    let m = 4;
    let chart = umbilic_solution_chart(m);
    let rep = Arc::new(GammaRep::new(m).unwrap());
    let lambda = Complex64::new(0.0, 1.0 / 6f64.sqrt());
    let d = rep.dim_spinor();
    let fields: Vec<_> = (0..d)
        .map(|k| killing_transport(chart.clone(), rep.clone(), lambda, &[0.0, 0.0, 0.0, 1.0], rep.basis_spinor(k)).unwrap())
        .collect();
    let x = [0.5, -0.4, 0.3, 1.6];
    let vals: Vec<_> = fields.iter().map(|f| f.value(&x).unwrap()).collect();
    let gram = nalgebra::DMatrix::from_fn(d, d, |a, b| inner(&vals[a], &vals[b]).unwrap());
    assert!(gram.determinant().norm() > 1e-3);
}

#[test]
fn sphere_killing_sum_is_twistor() {
    let chart = Chart::sphere_stereographic(2, 1.0).unwrap();
    let rep = Arc::new(GammaRep::new(2).unwrap());
    let plus = killing_transport(chart.clone(), rep.clone(), Complex64::from(0.5), &[0.0, 0.0], rep.basis_spinor(0)).unwrap();
    let minus = killing_transport(chart, rep.clone(), Complex64::from(-0.5), &[0.0, 0.0], rep.basis_spinor(1)).unwrap();
    let psi = plus.add(&minus).unwrap();
    for x in [[0.3, 0.2], [-0.5, 0.4], [0.1, -0.9]] {
        assert!(psi.penrose_norm(&x).unwrap() < 1e-6);
        assert!(psi.covariant_norm(&x).unwrap() > 0.1);
    }
}

#[test]
fn holomorphic_twistor_spinors() {
    let cases: Vec<(ComplexFn, ComplexFn, f64)> = vec![
        (Arc::new(|_| Complex64::from(1.0)), Arc::new(|_| Complex64::from(0.0)), 0.0),
        (Arc::new(|z| z), Arc::new(|_| Complex64::from(0.0)), 1e-8),
        (Arc::new(|z| z * z), Arc::new(|z: Complex64| z.conj()), 1e-8),
    ];
    for (hol, antihol, tol) in cases {
        let psi = twistor_from_holomorphic(hol, antihol).unwrap();
        for x in [[0.3, -0.5], [1.2, 0.7], [-2.0, 0.1]] {
            let r = psi.penrose_norm(&x).unwrap();
            assert!(r <= tol, "{r}");
        }
    }
    // swapping the slots breaks the equation
    let wrong = twistor_from_holomorphic(Arc::new(|z: Complex64| z.conj()), Arc::new(|_| Complex64::from(0.0))).unwrap();
    assert!(wrong.penrose_norm(&[0.1, 0.2]).unwrap() > 0.5);
}

#[test]
fn fourier_modes_are_not_twistor() {
    let torus = Chart::flat_torus(vec![std::f64::consts::PI * 2f64.sqrt(); 2]).unwrap();
    let rep = Arc::new(GammaRep::new(2).unwrap());
    let psi = SpinorField::fourier_mode(torus, rep.clone(), &[1, 0], rep.basis_spinor(0)).unwrap();
    assert!(psi.penrose_norm(&[0.3, 0.4]).unwrap() > 0.1);
}

#[test]
fn analytic_mode_requires_closed_form() {
    let rep = Arc::new(GammaRep::new(2).unwrap());
    let psi = SpinorField::from_fn(Chart::euclidean(2).unwrap(), rep.clone(), |_| Spinor::zeros(2))
        .unwrap()
        .with_mode(DerivativeMode::Analytic);
    assert_eq!(psi.dirac(&[0.0, 0.0]).unwrap_err(), Error::NoAnalyticDerivative);
}
