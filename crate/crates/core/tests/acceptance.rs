//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.
//!
//! Run alone with `cargo test -p causalab --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use causalab::boundary::{
    boundary_term, current_profile, dirichlet_ground_twisted_moments, flux_report, momentum_spectrum_twisted,
    momentum_symmetry_defect, solve_spectrum, BoundarySpec, EigenMode, FluxClass, SpectralDecomposition,
    WaveFunction,
};
use causalab::cli::{load_config, run, Command, RunOptions};
use causalab::fock::{
    build_ladder, two_point_vacuum, vacuum_annihilation_check, weyl_relation_residual, FieldOperators, ModeBasis,
    Weighting, WeylPhase,
};
use causalab::lieb_liniger::{scaling_residual, solve_ll};
use causalab::numerics::QuadratureSpec;
use causalab::relcompare::{
    convergence_scan, kernel_mismatch_certificate, pointwise_inequalities, verify_lemma2, DispersionParams,
    TestFunction,
};
use causalab::spreading::{
    bump_state, classify_dichotomy, evolve_bounded, free_line_grid, gaussian_state, p_a_series, tail_probability,
    Branch, Evolution, FreeLine, LocalizationOperator, Region, NOISE_FLOOR,
};
use causalab::{Complex64, Error};

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn modes(bc: &BoundarySpec, points: usize, count: usize) -> Result<Vec<EigenMode>, String> {
    let grid = bc.grid(points).map_err(fail)?;
    solve_spectrum(bc, &grid, count).map_err(fail)
}

fn energies(bc: &BoundarySpec, points: usize, count: usize) -> Result<Vec<f64>, String> {
    Ok(modes(bc, points, count)?.iter().map(|m| m.energy).collect())
}

fn boundary_spectra() -> Verdict {
    let dirichlet = energies(&BoundarySpec::dirichlet(PI).map_err(fail)?, 801, 5)?;
    let d_err = dirichlet
        .iter()
        .enumerate()
        .map(|(n, e)| (e - ((n + 1) * (n + 1)) as f64).abs())
        .fold(0.0, f64::max);

    let neumann = energies(&BoundarySpec::neumann(1.0).map_err(fail)?, 801, 5)?;
    let n_err = neumann
        .iter()
        .enumerate()
        .map(|(n, e)| (e - (n as f64 * PI).powi(2)).abs())
        .fold(0.0, f64::max);

    let robin = energies(&BoundarySpec::robin(1.0, 1.0, 1.0).map_err(fail)?, 801, 5)?;
    let oracle = common::robin_fd_energies(1.0, 1.0, 1.0, 4000, 5);
    let r_err = robin
        .iter()
        .zip(&oracle)
        .map(|(e, o)| ((e - o) / o).abs())
        .fold(0.0, f64::max);

    let stiff = energies(&BoundarySpec::robin(1e4, 1e4, 1.0).map_err(fail)?, 801, 3)?;
    let mut stiff_ok = true;
    let mut stiff_err: f64 = 0.0;
    for (n, e) in stiff.iter().enumerate() {
        let target = ((n + 1) as f64 * PI).powi(2);
        stiff_err = stiff_err.max((target - e) / target);
        stiff_ok &= *e < target && (target - e) / target < 1e-3;
    }
    check(
        d_err < 1e-10 && n_err < 1e-10 && r_err < 1e-6 && stiff_ok,
        format!(
            "dirichlet {d_err:.1e}, neumann {n_err:.1e}, robin(1,1) vs FD {r_err:.1e} rel, robin(1e4) below dirichlet by {stiff_err:.1e} rel"
        ),
    )
}

fn attractive_boundaries() -> Verdict {
    let e = energies(&BoundarySpec::robin(-1.0, -1.0, 10.0).map_err(fail)?, 4001, 8)?;
    let negative: Vec<f64> = e.iter().copied().filter(|e| *e < 0.0).collect();
    let worst = negative.iter().map(|e| (e + 1.0).abs()).fold(0.0, f64::max);
    check(
        negative.len() == 2 && worst < 0.01,
        format!("{} negative eigenvalues {negative:?}, max deviation from -1 {worst:.1e}", negative.len()),
    )
}

fn random_state(rng: &mut ChaCha8Rng, modes: &[EigenMode]) -> Result<WaveFunction, String> {
    let terms: Vec<(Complex64, &WaveFunction)> = modes
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let scale = 1.0 / (1.0 + j as f64).powi(2);
            (Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale, &m.wave)
        })
        .collect();
    WaveFunction::combine(&terms).map_err(fail)
}

fn momentum_witnesses() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dirichlet = modes(&BoundarySpec::dirichlet(2.0).map_err(fail)?, 4001, 12)?;
    let mut d_worst: f64 = 0.0;
    for _ in 0..50 {
        let phi = random_state(&mut rng, &dirichlet)?;
        let psi = random_state(&mut rng, &dirichlet)?;
        d_worst = d_worst.max(momentum_symmetry_defect(&phi, &psi).map_err(fail)?.norm());
    }

    let robin = modes(&BoundarySpec::robin(0.7, 1.9, 2.0).map_err(fail)?, 2001, 12)?;
    let (mut r_worst, mut r_largest): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let phi = random_state(&mut rng, &robin)?;
        let psi = random_state(&mut rng, &robin)?;
        let d = momentum_symmetry_defect(&phi, &psi).map_err(fail)?;
        let b = boundary_term(&phi, &psi).map_err(fail)?;
        r_worst = r_worst.max((d - b).norm());
        r_largest = r_largest.max(d.norm());
    }

    let (theta, length) = (1.0, 2.0);
    let twisted = energies(&BoundarySpec::twisted(theta, length).map_err(fail)?, 1025, 9)?;
    let ks = momentum_spectrum_twisted(theta, length, 9).map_err(fail)?;
    let t_err = twisted
        .iter()
        .zip(&ks)
        .map(|(e, k)| (e - k * k).abs())
        .fold(0.0, f64::max);

    let counts = [8, 16, 32, 64, 128];
    let sums = dirichlet_ground_twisted_moments(theta, length, 2, &counts).map_err(fail)?;
    let ratios: Vec<f64> = sums.windows(2).map(|w| w[1] / w[0]).collect();
    let grows = ratios.iter().all(|r| *r >= 1.5);
    check(
        d_worst < 1e-10 && r_worst < 1e-8 && r_largest > 1e-3 && t_err < 1e-10 && grows,
        format!(
            "dirichlet defect {d_worst:.1e}, robin defect vs boundary term {r_worst:.1e} (defects up to {r_largest:.2}), twisted E - k^2 {t_err:.1e}, partial k^2|c_n|^2 doubling ratios {}",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn currents() -> Verdict {
    let mut real_worst: f64 = 0.0;
    let specs = [
        BoundarySpec::dirichlet(PI).map_err(fail)?,
        BoundarySpec::neumann(1.0).map_err(fail)?,
        BoundarySpec::robin(1.0, 1.0, 1.0).map_err(fail)?,
        BoundarySpec::robin(-1.0, 2.0, 3.0).map_err(fail)?,
    ];
    for bc in &specs {
        for m in modes(bc, 1601, 6)? {
            let j = current_profile(&m.wave).map_err(fail)?;
            real_worst = real_worst.max(j.iter().fold(0.0, |a: f64, v| a.max(v.abs())));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut wall_worst: f64 = 0.0;
    let mut interior_max: f64 = 0.0;
    for bc in &specs[..3] {
        let eigen = modes(bc, 1601, 10)?;
        let coefficients: Vec<Complex64> = (0..eigen.len())
            .map(|j| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / (1.0 + j as f64))
            .collect();
        let decomposition = SpectralDecomposition::from_coefficients(eigen, coefficients).map_err(fail)?;
        for t in [0.05, 0.3, 1.0] {
            let psi = evolve_bounded(&decomposition, t).map_err(fail)?;
            let report = flux_report(bc, &psi).map_err(fail)?;
            wall_worst = wall_worst.max(report.j0.abs()).max(report.jl.abs());
            let j = current_profile(&psi).map_err(fail)?;
            interior_max = interior_max.max(j.iter().fold(0.0, |a: f64, v| a.max(v.abs())));
        }
    }

    let mut through_worst: f64 = 0.0;
    let mut through_min = f64::INFINITY;
    let mut classified = true;
    for (theta, length) in [(1.0, 2.0), (0.3, 1.0), (2.5, PI)] {
        let bc = BoundarySpec::twisted(theta, length).map_err(fail)?;
        for m in modes(&bc, 1024, 5)? {
            let report = flux_report(&bc, &m.wave).map_err(fail)?;
            through_worst = through_worst.max((report.j0 - report.jl).abs());
            through_min = through_min.min(report.j0.abs());
            classified &= report.classification == FluxClass::Throughflow;
        }
    }
    check(
        real_worst < 1e-10 && wall_worst < 1e-6 && interior_max > 1e-3 && through_worst < 1e-10 && through_min > 1e-6 && classified,
        format!(
            "real eigenstates |j| <= {real_worst:.1e}; evolved states |j(0)|,|j(L)| <= {wall_worst:.1e} (interior up to {interior_max:.2}); twisted |j(0)-j(L)| <= {through_worst:.1e}, |j| >= {through_min:.2}"
        ),
    )
}

fn instantaneous_spreading() -> Verdict {
    let grid = free_line_grid(16.0, 1 << 20).map_err(fail)?;
    let line = FreeLine::new(&bump_state(grid, 0.0, 1.0).map_err(fail)?, 1.0).map_err(fail)?;
    let at_zero = tail_probability(&line, 0.0, 2.0).map_err(fail)?;
    let mut values = Vec::new();
    let mut resolved = true;
    for t in [1e-4, 1e-3, 1e-2] {
        match tail_probability(&line, t, 2.0) {
            Ok(v) => values.push((t, v)),
            Err(Error::ResolutionInsufficient { value, .. }) => {
                resolved = false;
                values.push((t, value));
            }
            Err(e) => return Err(fail(e)),
        }
    }
    let above = values.iter().all(|(_, v)| *v > 10.0 * NOISE_FLOOR);
    let monotone = values.windows(2).all(|w| w[0].1 < w[1].1);
    check(
        at_zero == 0.0 && resolved && above && monotone,
        format!(
            "tail(0) = {at_zero}; {} (threshold {:.0e}); monotone {monotone}",
            values
                .iter()
                .map(|(t, v)| format!("tail({t:.0e}) = {v:.2e}"))
                .collect::<Vec<_>>()
                .join(", "),
            10.0 * NOISE_FLOOR
        ),
    )
}

enum Initial {
    Bump { center: f64, radius: f64 },
    Gaussian { center: f64, sigma: f64 },
}

struct DichotomyCase {
    evolution: Evolution,
    initial: Initial,
    box_length: f64,
    points: usize,
    region: (f64, f64),
    rank_one: bool,
    t_max: f64,
    /// Whether V is the whole bounded domain.
    whole_domain: bool,
}

fn bounded(bc: BoundarySpec, center: f64, radius: f64, region: (f64, f64), rank_one: bool, t_max: f64) -> DichotomyCase {
    let whole = !rank_one && region == (0.0, bc.length);
    DichotomyCase {
        evolution: Evolution::Bounded { boundary: bc, modes: 150 },
        initial: Initial::Bump { center, radius },
        box_length: 0.0,
        points: 2401,
        region,
        rank_one,
        t_max,
        whole_domain: whole,
    }
}

fn free(initial: Initial, mass: f64, box_length: f64, points: usize, region: (f64, f64), rank_one: bool, t_max: f64) -> DichotomyCase {
    DichotomyCase {
        evolution: Evolution::FreeLine { mass },
        initial,
        box_length,
        points,
        region,
        rank_one,
        t_max,
        whole_domain: false,
    }
}

fn dichotomy_corpus() -> Result<Vec<DichotomyCase>, Error> {
    let d_pi = BoundarySpec::dirichlet(PI)?;
    let n2 = BoundarySpec::neumann(2.0)?;
    let r11 = BoundarySpec::robin(1.0, 1.0, 1.0)?;
    let tw = BoundarySpec::twisted(1.0, 2.0)?;
    Ok(vec![
        bounded(d_pi.clone(), PI / 2.0, 1.2, (0.0, PI), false, 1.0),
        bounded(d_pi.clone(), 1.2, 0.9, (0.0, PI), false, 5.0),
        bounded(n2.clone(), 1.0, 0.7, (0.0, 2.0), false, 1.0),
        bounded(BoundarySpec::neumann(PI)?, 2.0, 1.0, (0.0, PI), false, 3.0),
        bounded(r11.clone(), 0.5, 0.4, (0.0, 1.0), false, 0.5),
        bounded(BoundarySpec::robin(2.0, 0.5, 3.0)?, 1.5, 1.0, (0.0, 3.0), false, 2.0),
        bounded(BoundarySpec::robin(-1.0, -1.0, 10.0)?, 5.0, 3.0, (0.0, 10.0), false, 10.0),
        bounded(tw.clone(), 1.0, 0.8, (0.0, 2.0), false, 1.0),
        bounded(BoundarySpec::twisted(0.0, 2.0 * PI)?, 3.0, 1.5, (0.0, 2.0 * PI), false, 4.0),
        bounded(BoundarySpec::neumann(1.0)?, 0.3, 0.25, (0.0, 1.0), false, 0.2),
        free(Initial::Bump { center: 0.0, radius: 1.0 }, 1.0, 16.0, 4096, (-0.5, 0.5), false, 1.0),
        free(Initial::Gaussian { center: 0.0, sigma: 0.5 }, 1.0, 128.0, 8192, (-1.0, 1.0), false, 2.0),
        free(Initial::Bump { center: 0.0, radius: 1.0 }, 1.0, 16.0, 4096, (-1.2, 1.2), false, 5.0),
        free(Initial::Bump { center: 0.0, radius: 0.5 }, 1.0, 16.0, 4096, (-3.0, 3.0), false, 20.0),
        free(Initial::Bump { center: 0.0, radius: 1.0 }, 1.0, 16.0, 4096, (-1.0, 1.0), true, 1.0),
        free(Initial::Bump { center: 1.0, radius: 0.8 }, 2.0, 16.0, 4096, (0.0, 2.5), false, 10.0),
        bounded(d_pi, PI / 2.0, 1.2, (0.0, PI / 2.0), false, 1.0),
        bounded(n2, 1.0, 0.5, (0.4, 1.6), false, 2.0),
        bounded(r11, 0.5, 0.4, (0.0, 1.0), true, 0.5),
        bounded(tw, 1.0, 0.8, (0.0, 1.0), false, 1.0),
    ])
}

fn run_case(case: &DichotomyCase) -> Result<(Branch, Vec<f64>, Vec<f64>), Error> {
    let grid = match &case.evolution {
        Evolution::FreeLine { .. } => free_line_grid(case.box_length, case.points)?,
        Evolution::Bounded { boundary, .. } => boundary.grid(case.points)?,
    };
    let psi0 = match case.initial {
        Initial::Bump { center, radius } => bump_state(grid, center, radius)?,
        Initial::Gaussian { center, sigma } => gaussian_state(grid, center, sigma)?,
    };
    let region = Region::new(case.region.0, case.region.1)?;
    let base = if case.rank_one {
        LocalizationOperator::rank_one(region, true)?
    } else {
        LocalizationOperator::projector(region)
    };
    let times: Vec<f64> = (0..64).map(|i| case.t_max * i as f64 / 63.0).collect();
    let record = p_a_series(&psi0, &case.evolution, &base.complement(), &times)?;
    let verdict = classify_dichotomy(&record, 1e-10)?;
    Ok((verdict.branch, record.times, record.values))
}

fn dichotomy_suite() -> Verdict {
    let corpus = dichotomy_corpus().map_err(fail)?;
    let mut errors = Vec::new();
    let mut confined = 0;
    for (i, case) in corpus.iter().enumerate() {
        let (branch, times, values) = run_case(case).map_err(|e| format!("case {i}: {e}"))?;
        let ok = if case.whole_domain {
            confined += 1;
            branch == Branch::Confined && values.iter().all(|v| *v < 1e-10)
        } else {
            branch == Branch::Spreading && times.iter().zip(&values).all(|(t, v)| *t == 0.0 || *v > 1e-10)
        };
        if !ok {
            let smallest = times
                .iter()
                .zip(&values)
                .filter(|(t, _)| **t > 0.0)
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min);
            errors.push(format!("case {i} ({branch:?}, smallest t>0 value {smallest:.1e})"));
        }
    }
    check(
        errors.is_empty(),
        format!(
            "{} configurations ({confined} whole-domain), {} misclassified{}",
            corpus.len(),
            errors.len(),
            if errors.is_empty() { String::new() } else { format!(": {}", errors.join(", ")) }
        ),
    )
}

fn lemma2_sweep() -> Verdict {
    let quad = QuadratureSpec::default();
    let f1 = TestFunction::gaussian(1.0, 3).map_err(fail)?;
    let f2 = TestFunction::gaussian(1.5, 3).map_err(fail)?;
    let (mut cells, mut passed, mut violations) = (0, 0, 0);
    let mut min_margin = f64::INFINITY;
    for tau in [0.0, 0.01] {
        for c in [5.0, 10.0, 50.0] {
            let p = DispersionParams::new(1.0, c).map_err(fail)?;
            for i in 1..=10 {
                let delta = i as f64 / 10.0;
                let r = verify_lemma2(&f1, &f2, tau, delta, &p, &quad).map_err(fail)?;
                let q = pointwise_inequalities(&p, delta, tau, 1000).map_err(fail)?;
                cells += 1;
                passed += usize::from(r.pass);
                min_margin = min_margin.min(r.margin);
                violations += q.kernel_gap_violations + q.phase_violations + q.ordering_violations;
            }
        }
    }
    check(
        cells == 60 && passed == 60 && violations == 0,
        format!("{passed}/{cells} cells satisfy the bound (smallest margin {min_margin:.2e}), {violations} pointwise violations"),
    )
}

fn nonrelativistic_convergence() -> Verdict {
    let quad = QuadratureSpec::default();
    let f1 = TestFunction::gaussian(1.0, 3).map_err(fail)?;
    let f2 = TestFunction::gaussian(1.5, 3).map_err(fail)?;
    let scan = convergence_scan(&f1, &f2, 0.0, &[10.0, 1e2, 1e3, 1e4], 1.0, &quad).map_err(fail)?;
    let corpus = [f1, f2, TestFunction::bump(1.0, 3).map_err(fail)?];
    let mut smallest = f64::INFINITY;
    let mut positive = true;
    for c in [5.0, 10.0, 50.0, 1e2, 1e3, 1e4] {
        let p = DispersionParams::new(1.0, c).map_err(fail)?;
        for f in &corpus {
            let cert = kernel_mismatch_certificate(&p, f, &quad).map_err(fail)?;
            positive &= cert.value > 0.0 && cert.value > cert.error && !cert.degenerate;
            smallest = smallest.min(cert.value);
        }
    }
    check(
        (scan.slope + 2.0).abs() <= 0.1 && positive,
        format!("slope {:.4}; smallest mismatch certificate {smallest:.2e}", scan.slope),
    )
}

fn gaussian_basis(widths: &[f64], c: Option<f64>) -> Result<ModeBasis, String> {
    let functions = widths
        .iter()
        .map(|w| TestFunction::gaussian(*w, 3))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    ModeBasis::new(functions, 1.0, c, QuadratureSpec::default()).map_err(fail)
}

fn fock_weyl() -> Verdict {
    // [a, a*] against the identity below the cutoff, in ulps of the
    // products a a* and a* a whose difference it is (magnitude i + 1).
    let mut ladder_ulps: f64 = 0.0;
    for d in [4, 8, 16, 32] {
        let (a, adag) = build_ladder(d).map_err(fail)?;
        let comm = &a * &adag - &adag * &a;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                ladder_ulps = ladder_ulps.max((comm[(i, j)] - want).norm() / (f64::EPSILON * (i + 1) as f64));
            }
        }
    }

    let basis = gaussian_basis(&[1.0], None)?;
    let mut residuals = Vec::new();
    for d in [8, 16, 32] {
        let fields = FieldOperators::new(&basis, Weighting::Nonrelativistic, d).map_err(fail)?;
        let f = [0.5 / fields.pi_amplitude(&[1.0]).map_err(fail)?];
        let g = [0.5 / fields.phi_amplitude(&[1.0]).map_err(fail)?];
        residuals.push(weyl_relation_residual(&fields, &f, &g, WeylPhase::Consistent).map_err(fail)?);
    }
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);

    let pair = gaussian_basis(&[1.0, 1.7], None)?;
    let vacuum = vacuum_annihilation_check(&pair, 8).map_err(fail)?;

    let c = 1e3;
    let relativistic = gaussian_basis(&[1.0], Some(c))?;
    let f = TestFunction::gaussian(1.0, 3).map_err(fail)?;
    let nr = two_point_vacuum(&relativistic, &f, &f, Weighting::Nonrelativistic).map_err(fail)?;
    let r = two_point_vacuum(&relativistic, &f, &f, Weighting::Relativistic).map_err(fail)?;
    let ratio = (r / nr).norm();
    check(
        ladder_ulps <= 2.0 && decreasing && vacuum < 1e-12 && (ratio - 1.0).abs() < 1e-4,
        format!(
            "[a,a*] - I below cutoff {ladder_ulps:.0} ulp; Weyl residual D=8,16,32: {}; vacuum {vacuum:.1e}; two-point ratio at c=1e3 {ratio:.8}",
            residuals.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn lieb_liniger() -> Verdict {
    let tonks = PI * PI / 3.0;
    let f_big = solve_ll(1e3, 128).map_err(fail)?.f_gamma;
    let rel = (f_big - tonks).abs() / tonks;
    let f128 = solve_ll(1.0, 128).map_err(fail)?.f_gamma;
    let f256 = solve_ll(1.0, 256).map_err(fail)?.f_gamma;
    let scaling = scaling_residual(1.0, 1.0, 2.0, 256).map_err(fail)?;
    check(
        rel < 0.02 && (f128 - f256).abs() < 1e-8 && scaling < 1e-9,
        format!(
            "f(1e3) = {f_big:.5} ({:.2}% from pi^2/3); |f128 - f256| at gamma=1 {:.1e}; scaling residual {scaling:.1e}",
            100.0 * rel,
            (f128 - f256).abs()
        ),
    )
}

fn reproducibility() -> Verdict {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/configs");
    let dir = tempfile::tempdir().map_err(fail)?;
    let mut differing = Vec::new();
    for command in Command::ALL {
        let config = load_config(command, &root.join(format!("{}.json", command.name()))).map_err(fail)?;
        let mut bodies = Vec::new();
        for (i, jobs) in [1, 4].into_iter().enumerate() {
            let options = RunOptions {
                out: Some(dir.path().join(format!("{}-{i}", command.name()))),
                jobs: Some(jobs),
                plot: None,
            };
            let report = run(&config, &options).map_err(fail)?;
            bodies.push(std::fs::read(&report.csv).map_err(fail)?);
        }
        if bodies[0] != bodies[1] {
            differing.push(command.name());
        }
    }
    check(
        differing.is_empty(),
        format!(
            "{} commands run twice (1 and 4 workers), {} differ{}",
            Command::ALL.len(),
            differing.len(),
            if differing.is_empty() { String::new() } else { format!(": {}", differing.join(", ")) }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("boundary spectra", boundary_spectra),
        ("attractive boundaries", attractive_boundaries),
        ("momentum operator witnesses", momentum_witnesses),
        ("probability currents", currents),
        ("instantaneous spreading", instantaneous_spreading),
        ("dichotomy suite", dichotomy_suite),
        ("correlator bound sweep", lemma2_sweep),
        ("nonrelativistic convergence", nonrelativistic_convergence),
        ("Fock and Weyl relations", fock_weyl),
        ("Lieb-Liniger", lieb_liniger),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (n, (name, criterion)) in criteria.iter().enumerate() {
        let verdict = criterion();
        let (status, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(verdict.is_err());
        println!("criterion {:>2} {status} {name}: {detail}", n + 1);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
