//! Randomized checks of the library invariants.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;

use causalab::boundary::{
    boundary_term, momentum_symmetry_defect, solve_spectrum, BoundarySpec, SpectralDecomposition, WaveFunction,
};
use causalab::fock::{FieldOperators, ModeBasis, TruncatedFock, Weighting};
use causalab::lieb_liniger::solve_ll;
use causalab::numerics::{find_roots, integrate_1d, matrix_exponential, CMatrix, Interval, QuadratureSpec, RootScan};
use causalab::relcompare::{delta_c, verify_lemma2, DispersionParams, TestFunction};
use causalab::spreading::{
    bump_state, evolve_bounded, free_line_grid, gaussian_state, localization_probability, p_a_series, Evolution,
    FreeLine, LocalizationOperator, Region,
};
use causalab::Complex64;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn quadrature_is_linear(
        a in -3.0..3.0f64, b in -3.0..3.0f64,
        s1 in 0.3..3.0f64, s2 in 0.3..3.0f64,
        m1 in -2.0..2.0f64, m2 in -2.0..2.0f64,
    ) {
        let spec = QuadratureSpec::default();
        let f = move |x: f64| c((-(x - m1).powi(2) / s1).exp(), 0.0);
        let g = move |x: f64| c((-(x - m2).powi(2) / s2).exp(), 0.0);
        let lhs = integrate_1d(|x| a * f(x) + b * g(x), Interval::Real, &spec).unwrap();
        let fi = integrate_1d(f, Interval::Real, &spec).unwrap();
        let gi = integrate_1d(g, Interval::Real, &spec).unwrap();
        let rhs = a * fi.value + b * gi.value;
        let tol = lhs.error + a.abs() * fi.error + b.abs() * gi.error + 1e-12 * (1.0 + rhs.norm());
        prop_assert!((lhs.value - rhs).norm() <= tol, "{} vs {}", lhs.value, rhs);
        // Closed form as an independent check of each term.
        prop_assert!((fi.value.re - (PI * s1).sqrt()).abs() < 1e-10 * (PI * s1).sqrt());
    }

    #[test]
    fn roots_have_small_residuals(omega in 0.5..20.0f64, phase in 0.0..6.0f64, shift in -0.9..0.9f64) {
        let f = move |x: f64| (omega * x + phase).sin() - shift;
        let roots = find_roots(f, 0.0, 5.0, &RootScan::default()).unwrap();
        prop_assert!(!roots.is_empty());
        let slope = omega;
        for r in &roots {
            prop_assert!(f(*r).abs() < 1e-10 * slope, "f({r}) = {}", f(*r));
        }
        // Every sign change of the sampled function has a root next to it.
        let n = 20000;
        let changes = (0..n)
            .filter(|i| {
                let x0 = 5.0 * *i as f64 / n as f64;
                let x1 = 5.0 * (*i + 1) as f64 / n as f64;
                f(x0).signum() != f(x1).signum()
            })
            .count();
        prop_assert_eq!(roots.len(), changes);
    }

    #[test]
    fn exponential_of_skew_hermitian_is_unitary(dim in 1usize..=64, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw = CMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = (&raw - raw.adjoint()) * c(0.5, 0.0);
        let product = matrix_exponential(&m).unwrap() * matrix_exponential(&(-m)).unwrap();
        let defect = max_abs(&(product - CMatrix::identity(dim, dim)));
        prop_assert!(defect < 1e-9, "{defect:e}");
    }

    #[test]
    fn robin_modes_are_orthonormal_with_sturm_nodes(s0 in -2.0..20.0f64, sl in -2.0..20.0f64, l in 0.5..4.0f64) {
        let bc = BoundarySpec::robin(s0, sl, l).unwrap();
        let grid = bc.grid(1601).unwrap();
        let modes = solve_spectrum(&bc, &grid, 8).unwrap();
        for (i, a) in modes.iter().enumerate() {
            prop_assert_eq!(a.node_count, Some(i));
            prop_assert!((a.wave.norm() - 1.0).abs() < 1e-10);
            for b in &modes[i + 1..] {
                prop_assert!(a.wave.inner(&b.wave).unwrap().norm() < 1e-8);
                prop_assert!(a.energy < b.energy);
            }
        }
    }

    #[test]
    fn defect_equals_boundary_term(
        s0 in -1.0..5.0f64, sl in -1.0..5.0f64,
        coefficients in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16),
    ) {
        let bc = BoundarySpec::robin(s0, sl, 2.0).unwrap();
        let grid = bc.grid(2001).unwrap();
        let modes = solve_spectrum(&bc, &grid, 8).unwrap();
        let build = |cs: &[(f64, f64)]| {
            let terms: Vec<(Complex64, &WaveFunction)> = cs
                .iter()
                .zip(&modes)
                .enumerate()
                .map(|(j, ((re, im), m))| (c(*re, *im) / (1.0 + j as f64).powi(2), &m.wave))
                .collect();
            WaveFunction::combine(&terms).unwrap()
        };
        let phi = build(&coefficients[..8]);
        let psi = build(&coefficients[8..]);
        let d = momentum_symmetry_defect(&phi, &psi).unwrap();
        let b = boundary_term(&phi, &psi).unwrap();
        prop_assert!((d - b).norm() < 1e-8, "{d} vs {b}");
    }

    // Restarting from the evolved state needs its spread to fit the box too.
    #[test]
    fn free_evolution_is_unitary_and_reversible(t in -1.0..1.0f64, sigma in 0.6..1.0f64, mass in 1.0..3.0f64) {
        let grid = free_line_grid(256.0, 16384).unwrap();
        let psi0 = gaussian_state(grid, 0.0, sigma).unwrap();
        let line = FreeLine::new(&psi0, mass).unwrap();
        let psi = line.evolve(t).unwrap();
        prop_assert!((psi.norm() - psi0.norm()).abs() < 1e-10);
        let back = FreeLine::new(&psi, mass).unwrap().evolve(-t).unwrap();
        let err = back.values().iter().zip(psi0.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9, "{err:e}");
    }

    #[test]
    fn bounded_evolution_is_unitary_and_reversible(
        t in -2.0..2.0f64,
        coefficients in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 10),
    ) {
        let bc = BoundarySpec::robin(0.5, 2.0, 1.5).unwrap();
        let grid = bc.grid(3201).unwrap();
        let modes = solve_spectrum(&bc, &grid, 10).unwrap();
        let cs: Vec<Complex64> = coefficients.iter().map(|(a, b)| c(*a, *b)).collect();
        let forward = SpectralDecomposition::from_coefficients(modes.clone(), cs).unwrap();
        let psi0 = evolve_bounded(&forward, 0.0).unwrap();
        let psi = evolve_bounded(&forward, t).unwrap();
        prop_assert!((psi.norm() - psi0.norm()).abs() < 1e-10 * psi0.norm());
        let back = evolve_bounded(&SpectralDecomposition::project(&psi, modes).unwrap(), -t).unwrap();
        let err = back.values().iter().zip(psi0.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9, "{err:e}");
    }

    #[test]
    fn localization_is_a_probability(a in -6.0..5.0f64, width in 0.01..8.0f64, center in -3.0..3.0f64, rank_one in any::<bool>()) {
        let grid = free_line_grid(64.0, 4096).unwrap();
        let psi = gaussian_state(grid, center, 0.8).unwrap();
        let region = Region::new(a, a + width).unwrap();
        let op = if rank_one {
            LocalizationOperator::rank_one(region, true).unwrap()
        } else {
            LocalizationOperator::projector(region)
        };
        let p = localization_probability(&psi, &op).unwrap();
        let q = localization_probability(&psi, &op.complement()).unwrap();
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        prop_assert!((p + q - 1.0).abs() < 1e-12);
        prop_assert_eq!(LocalizationOperator::rank_one(region, false).is_err(), width > 1.0);
    }

    #[test]
    fn p_a_samples_stay_in_range(radius in 0.3..1.5f64, a in -2.0..-0.1f64, b in 0.1..2.0f64, t_max in 0.1..5.0f64) {
        let grid = free_line_grid(32.0, 4096).unwrap();
        let psi0 = bump_state(grid, 0.0, radius).unwrap();
        let base = LocalizationOperator::projector(Region::new(a, b).unwrap());
        let times: Vec<f64> = (0..16).map(|i| t_max * i as f64 / 15.0).collect();
        let record = p_a_series(&psi0, &Evolution::FreeLine { mass: 1.0 }, &base.complement(), &times).unwrap();
        prop_assert!(record.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn correlator_difference_is_symmetric(w1 in 0.5..2.0f64, w2 in 0.5..2.0f64, c_light in 2.0..50.0f64, tau in -0.1..0.1f64) {
        let quad = QuadratureSpec::default();
        let p = DispersionParams::new(1.0, c_light).unwrap();
        let f1 = TestFunction::gaussian(w1, 3).unwrap();
        let f2 = TestFunction::gaussian(w2, 3).unwrap();
        let a = delta_c(&f1, &f2, tau, &p, &quad).unwrap();
        let b = delta_c(&f2, &f1, tau, &p, &quad).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn bound_report_is_consistent(delta in 0.05..1.5f64, c_light in 2.0..60.0f64, tau in -0.05..0.05f64) {
        let quad = QuadratureSpec::default();
        let p = DispersionParams::new(1.0, c_light).unwrap();
        let f1 = TestFunction::gaussian(1.0, 3).unwrap();
        let f2 = TestFunction::bump(1.0, 3).unwrap();
        let r = verify_lemma2(&f1, &f2, tau, delta, &p, &quad).unwrap();
        prop_assert_eq!(r.pass, r.lhs <= r.rhs);
        prop_assert!(r.epsilon >= 0.0 && r.delta_c >= 0.0 && r.lhs >= 0.0 && r.rhs >= 0.0);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn field_operators_are_hermitian(d in 1usize..6, amplitude in -2.0..2.0f64, relativistic in any::<bool>()) {
        let functions = vec![TestFunction::gaussian(1.0, 3).unwrap(), TestFunction::gaussian(1.6, 3).unwrap()];
        let basis = ModeBasis::new(functions, 1.0, Some(5.0), QuadratureSpec::default()).unwrap();
        let weighting = if relativistic { Weighting::Relativistic } else { Weighting::Nonrelativistic };
        let fields = FieldOperators::new(&basis, weighting, d).unwrap();
        let f = [amplitude, 0.5];
        for m in [fields.phi_matrix(&f).unwrap(), fields.pi_matrix(&f).unwrap()] {
            prop_assert!(max_abs(&(&m - m.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn number_operator_commutes_with_quadratic_hamiltonians(n_modes in 1usize..4, d in 1usize..4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let fock = TruncatedFock::new(n_modes, d).unwrap();
        let raw = DMatrix::from_fn(n_modes, n_modes, |_, _| rng.gen_range(-1.0..1.0));
        let h = fock.quadratic(&(&raw + raw.transpose())).unwrap();
        let number = fock.number_operator();
        let n = number.matrix();
        prop_assert!(max_abs(&(&n * &h - &h * &n)) < 1e-12);
        let mut spectrum = number.spectrum();
        spectrum.sort_by(f64::total_cmp);
        spectrum.dedup();
        let expected: Vec<f64> = (0..=n_modes * d).map(|k| k as f64).collect();
        prop_assert_eq!(spectrum, expected);
    }

    #[test]
    fn lieb_liniger_density_is_even_and_bounded_below(log_gamma in -3.0..3.0f64) {
        let gamma = 10f64.powf(log_gamma);
        let s = solve_ll(gamma, 128).unwrap();
        let peak = s.g.iter().copied().fold(0.0, f64::max);
        let n = s.g.len();
        for i in 0..n {
            prop_assert!((s.g[i] - s.g[n - 1 - i]).abs() <= 1e-12 * peak);
            prop_assert!(s.g[i] >= 1.0 / (2.0 * PI) - 1e-12);
        }
        prop_assert!(s.f_gamma > 0.0 && s.f_gamma < PI * PI / 3.0);
    }
}

#[test]
fn lieb_liniger_resolution_convergence() {
    for gamma in [0.1, 1.0, 10.0, 100.0, 1000.0] {
        let f: Vec<f64> = [64, 128, 256, 512]
            .iter()
            .map(|n| solve_ll(gamma, *n).unwrap().f_gamma)
            .collect();
        let gaps: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(gaps[2] < 1e-8, "gamma {gamma}: {gaps:?}");
        assert!(gaps[0] >= gaps[1] || gaps[0] < 1e-12, "gamma {gamma}: {gaps:?}");
    }
}

#[test]
fn tonks_limit_from_below() {
    let tonks = PI * PI / 3.0;
    let values: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|g| solve_ll(*g, 256).unwrap().f_gamma)
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values[2] < tonks && values[2] > 0.98 * tonks);
}
