use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{key, required, Command, Key, Kind, Params, RunConfig};
use super::plot::{fitted_slope, PlotKind, PlotRequest};
use super::table::{Cell, ResultTable};
use super::{CliError, Outcome};
use crate::boundary::{
    boundary_residual, boundary_term, current_profile, flux_report, momentum_symmetry_defect, solve_spectrum,
    BoundarySpec, EigenMode, GridSpec, SpectralDecomposition, WaveFunction,
};
use crate::fock::{
    build_ladder, vacuum_annihilation_check, FieldOperators, ModeBasis, TruncatedFock, Weighting, WeylPhase,
};
use crate::lieb_liniger::{energy_density, scaling_residual, solve_ll};
use crate::numerics::QuadratureSpec;
use crate::relcompare::{
    beta, convergence_scan, kernel_gap, kernel_mismatch_certificate, kernel_pair, kinetic_relativistic,
    pointwise_inequalities, verify_lemma2, DispersionParams, TestFunction,
};
use crate::spreading::{
    bump_state, classify_dichotomy, free_line_grid, gaussian_evolved, gaussian_state, p_a_series, tail_probability,
    Branch, Evolution, FreeLine, LocalizationOperator, Region,
};
use crate::Error;

type Run = Result<Outcome, CliError>;

const BC_ALL: &[&str] = &["dirichlet", "neumann", "robin", "twisted"];
const BC_WALLS: &[&str] = &["dirichlet", "neumann", "robin"];

const fn bc(options: &'static [&'static str]) -> Key {
    key("bc", Kind::Choice(options), "\"dirichlet\"", "boundary condition")
}
const LENGTH: Key = key("length", Kind::Positive, "3.141592653589793", "interval length L");
const SIGMA0: Key = key("sigma0", Kind::Number, "0", "Robin parameter at x = 0: psi'(0) = sigma0 psi(0)");
const SIGMA_L: Key = key("sigma_l", Kind::Number, "0", "Robin parameter at x = L: psi'(L) = -sigma_l psi(L)");
const THETA: Key = key("theta", Kind::Number, "0", "twist angle: psi(0) = e^{i theta} psi(L)");
const fn points(default: &'static str) -> Key {
    key("points", Kind::Integer, default, "grid points")
}
const fn modes(default: &'static str) -> Key {
    key("modes", Kind::Integer, default, "number of eigenmodes")
}
const MASS: Key = key("mass", Kind::Positive, "1", "particle mass on the free line");
const M0: Key = key("m0", Kind::Positive, "1", "rest mass");
const REL_TOL: Key = key("rel_tol", Kind::Positive, "1e-12", "quadrature relative tolerance");
const ABS_TOL: Key = key("abs_tol", Kind::Positive, "1e-15", "quadrature absolute tolerance");
const MAX_SUB: Key = key("max_subdivisions", Kind::Integer, "4000", "quadrature subdivision budget");
const WIDTH1: Key = key("width1", Kind::Positive, "1", "width of the first Gaussian test function");
const WIDTH2: Key = key("width2", Kind::Positive, "1.5", "width of the second Gaussian test function");
const DIMENSION: Key = key("dimension", Kind::Integer, "3", "spatial dimension of the test functions");
const TAU: Key = key("tau", Kind::Number, "0", "time difference tau");
const K_POINTS: Key = key("k_points", Kind::Integer, "1000", "momenta per cell for the pointwise inequalities");
const NODES: Key = key("nodes", Kind::Integer, "128", "Gauss-Legendre nodes");

const SPECTRUM_KEYS: &[Key] = &[bc(BC_ALL), LENGTH, SIGMA0, SIGMA_L, THETA, modes("5"), points("2001")];
const TWISTED_KEYS: &[Key] = &[
    key("theta", Kind::Number, "0.7", "twist angle"),
    key("length", Kind::Positive, "1", "interval length L"),
    modes("8"),
    points("1024"),
    key("tolerance", Kind::Positive, "1e-10", "largest accepted |<p psi, p psi> - E| / max(1, E)"),
];
const DEFECT_KEYS: &[Key] = &[
    bc(BC_WALLS),
    LENGTH,
    SIGMA0,
    SIGMA_L,
    modes("8"),
    points("2001"),
    key("pairs", Kind::Integer, "50", "random pairs of states"),
    key("tolerance", Kind::Positive, "1e-8", "largest accepted |defect - boundary term|"),
];
const CURRENT_KEYS: &[Key] = &[
    bc(BC_ALL),
    LENGTH,
    SIGMA0,
    SIGMA_L,
    THETA,
    modes("6"),
    points("1001"),
    key(
        "state",
        Kind::Choice(&["eigenstate", "superposition"]),
        "\"superposition\"",
        "single eigenmode or seeded random superposition of the modes",
    ),
    key("index", Kind::Integer, "0", "eigenmode for state = eigenstate"),
    key("time", Kind::Number, "0.37", "evolution time of the superposition"),
];
const EVOLVE_KEYS: &[Key] = &[
    key("initial", Kind::Choice(&["gaussian", "bump"]), "\"gaussian\"", "initial state"),
    key("center", Kind::Number, "0", "centre of the initial state"),
    key("width", Kind::Positive, "1", "Gaussian position spread, or bump radius"),
    MASS,
    key("box", Kind::Positive, "256", "length of the periodic embedding box"),
    points("8192"),
    key("t_max", Kind::Positive, "1", "final time"),
    key("samples", Kind::Integer, "11", "equally spaced times in [0, t_max]"),
];
const TAIL_KEYS: &[Key] = &[
    key("radius", Kind::Positive, "1", "bump radius; the bump sits at the origin"),
    key("r", Kind::Positive, "2", "tail threshold R"),
    key("times", Kind::NumberList, "[0, 0.0001, 0.001, 0.01]", "sample times"),
    MASS,
    key("box", Kind::Positive, "16", "length of the periodic embedding box"),
    points("1048576"),
    key(
        "require_resolved",
        Kind::Bool,
        "false",
        "exit with code 3 when a tail is at or below the noise floor",
    ),
];
const DICHOTOMY_KEYS: &[Key] = &[
    key("evolution", Kind::Choice(&["free", "bounded"]), "\"free\"", "free line or interval"),
    key("initial", Kind::Choice(&["gaussian", "bump"]), "\"bump\"", "initial state"),
    key("center", Kind::Number, "0", "centre of the initial state"),
    key("width", Kind::Positive, "1", "Gaussian position spread, or bump radius"),
    MASS,
    key("box", Kind::Positive, "16", "embedding box for free evolution"),
    points("4096"),
    bc(BC_ALL),
    LENGTH,
    SIGMA0,
    SIGMA_L,
    THETA,
    modes("150"),
    required("region_a", Kind::Number, "left end of V"),
    required("region_b", Kind::Number, "right end of V"),
    key(
        "operator",
        Kind::Choice(&["projector", "rank-one"]),
        "\"projector\"",
        "localization operator N(V)",
    ),
    key("normalized", Kind::Bool, "true", "scale the rank-one operator by 1/|V|"),
    key("t_max", Kind::Positive, "1", "last sample time"),
    key("samples", Kind::Integer, "64", "equally spaced times in [0, t_max]"),
    key("tolerance", Kind::Positive, "1e-10", "zero threshold for p_A"),
];
const FOCK_KEYS: &[Key] = &[
    key("cutoffs", Kind::IntegerList, "[4, 8, 16]", "occupation cutoffs D"),
    key("widths", Kind::PositiveList, "[1, 1.7]", "Gaussian widths spanning the modes"),
    DIMENSION,
    M0,
    key("tolerance", Kind::Positive, "1e-12", "largest accepted ladder defect"),
    REL_TOL,
    ABS_TOL,
    MAX_SUB,
];
const WEYL_KEYS: &[Key] = &[
    key("cutoffs", Kind::IntegerList, "[8, 16, 32]", "occupation cutoffs D"),
    key("amplitude", Kind::Positive, "0.5", "coherent amplitude of both exponentials"),
    key("width", Kind::Positive, "1", "Gaussian width of the single test function"),
    DIMENSION,
    M0,
    key(
        "weighting",
        Kind::Choice(&["nonrelativistic", "relativistic"]),
        "\"nonrelativistic\"",
        "field weighting",
    ),
    key("c", Kind::Positive, "10", "speed of light for relativistic weighting"),
    key(
        "phase",
        Kind::Choice(&["consistent", "reversed"]),
        "\"consistent\"",
        "sign of the phase e^{+-i(f,g)}",
    ),
    key(
        "require_decreasing",
        Kind::Bool,
        "true",
        "exit with code 4 unless the residual decreases strictly with D",
    ),
    REL_TOL,
    ABS_TOL,
    MAX_SUB,
];
const KERNELS_KEYS: &[Key] = &[
    M0,
    key("c", Kind::Positive, "10", "speed of light"),
    TAU,
    key("k_max", Kind::Positive, "50", "largest momentum"),
    points("201"),
];
const LEMMA2_KEYS: &[Key] = &[
    key("delta", Kind::Positive, "0.5", "momentum threshold as a fraction of m0 c"),
    key("c", Kind::Positive, "10", "speed of light"),
    TAU,
    M0,
    WIDTH1,
    WIDTH2,
    DIMENSION,
    K_POINTS,
    REL_TOL,
    ABS_TOL,
    MAX_SUB,
];
const SWEEP_KEYS: &[Key] = &[
    key(
        "deltas",
        Kind::PositiveList,
        "[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]",
        "momentum thresholds",
    ),
    key("speeds", Kind::PositiveList, "[5, 10, 50]", "speeds of light"),
    key("taus", Kind::NumberList, "[0, 0.01]", "time differences"),
    M0,
    WIDTH1,
    WIDTH2,
    DIMENSION,
    K_POINTS,
    REL_TOL,
    ABS_TOL,
    MAX_SUB,
];
const CONVERGE_KEYS: &[Key] = &[
    key("speeds", Kind::PositiveList, "[10, 100, 1000, 10000]", "speeds of light, increasing"),
    TAU,
    M0,
    WIDTH1,
    WIDTH2,
    DIMENSION,
    key("slope_target", Kind::Number, "-2", "expected log-log slope"),
    key("slope_tolerance", Kind::Positive, "0.1", "accepted deviation from the slope target"),
    REL_TOL,
    ABS_TOL,
    MAX_SUB,
];
const LL_KEYS: &[Key] = &[
    key("gammas", Kind::PositiveList, "[0.1, 1, 10, 100, 1000]", "couplings gamma"),
    NODES,
];
const LL_SCALING_KEYS: &[Key] = &[
    key("lambda", Kind::Positive, "1", "interaction strength"),
    key("densities", Kind::PositiveList, "[1, 2]", "densities rho; the first two must differ"),
    key("nodes", Kind::Integer, "256", "Gauss-Legendre nodes"),
    key("tolerance", Kind::Positive, "1e-9", "largest accepted scaling residual"),
];

pub fn keys(command: Command) -> &'static [Key] {
    match command {
        Command::Spectrum => SPECTRUM_KEYS,
        Command::TwistedMomentum => TWISTED_KEYS,
        Command::Defect => DEFECT_KEYS,
        Command::Current => CURRENT_KEYS,
        Command::Evolve => EVOLVE_KEYS,
        Command::Tail => TAIL_KEYS,
        Command::Dichotomy => DICHOTOMY_KEYS,
        Command::FockCheck => FOCK_KEYS,
        Command::WeylResidual => WEYL_KEYS,
        Command::Kernels => KERNELS_KEYS,
        Command::Lemma2 => LEMMA2_KEYS,
        Command::Lemma2Sweep => SWEEP_KEYS,
        Command::Converge => CONVERGE_KEYS,
        Command::LiebLiniger => LL_KEYS,
        Command::LlScaling => LL_SCALING_KEYS,
    }
}

const LEMMA2_COLUMNS: &[&str] = &[
    "delta",
    "c",
    "tau",
    "epsilon",
    "delta_c",
    "lhs",
    "rhs",
    "margin",
    "pass",
    "kernel_gap_violations",
    "phase_violations",
    "ordering_violations",
];

/// Fixed CSV header of each command.
pub fn columns(command: Command) -> &'static [&'static str] {
    match command {
        Command::Spectrum => &["index", "energy", "boundary_residual"],
        Command::TwistedMomentum => &["index", "k", "energy", "momentum_squared", "residual"],
        Command::Defect => &[
            "pair",
            "defect_re",
            "defect_im",
            "boundary_re",
            "boundary_im",
            "difference",
        ],
        Command::Current => &["x", "j"],
        Command::Evolve => &["t", "norm", "mean", "spread", "aliasing_bound"],
        Command::Tail => &["t", "tail", "resolved"],
        Command::Dichotomy => &["t", "p_a"],
        Command::FockCheck => &[
            "cutoff",
            "dimension",
            "commutator_defect",
            "number_defect",
            "vacuum_residual",
        ],
        Command::WeylResidual => &["cutoff", "dimension", "residual"],
        Command::Kernels => &["k", "k_nr", "k_r", "gap", "omega_minus_rest", "beta_abs"],
        Command::Lemma2 | Command::Lemma2Sweep => LEMMA2_COLUMNS,
        Command::Converge => &["c", "delta_c", "certificate", "certificate_error"],
        Command::LiebLiniger => &["gamma", "alpha", "f_gamma", "residual"],
        Command::LlScaling => &["rho", "gamma", "energy_density", "scaled_energy", "f_gamma", "deviation"],
    }
}

pub fn summary(command: Command) -> &'static str {
    match command {
        Command::Spectrum => "Lowest eigenvalues of -d^2/dx^2 on [0, L] with the boundary residual of each sampled mode.",
        Command::TwistedMomentum => {
            "Twisted momentum eigenvalues k and Hamiltonian energies, compared with <p psi, p psi> from a spectral derivative of the samples."
        }
        Command::Defect => {
            "Momentum symmetry defect <phi, p psi> - <p phi, psi> against the boundary term -i [conj(phi) psi]_0^L on seeded random pairs of mode superpositions."
        }
        Command::Current => "Probability current profile of an eigenmode or an evolved superposition; wall currents in the summary.",
        Command::Evolve => "Free evolution of a Gaussian or bump: norm, mean, spread and aliasing bound over time.",
        Command::Tail => "Tail probability outside [-R, R] of the evolved bump, with the noise-floor verdict per time.",
        Command::Dichotomy => "p_A(t) for A = 1 - N(V) and the confined/spreading verdict.",
        Command::FockCheck => "Ladder commutator, number operator and vacuum annihilation checks per cutoff.",
        Command::WeylResidual => "Weyl relation residual per cutoff for coherent data of fixed amplitude.",
        Command::Kernels => "Nonrelativistic and relativistic kinetic kernels and the correlator integrand factor.",
        Command::Lemma2 => "One cell of the correlator bound with its pointwise inequalities.",
        Command::Lemma2Sweep => "The correlator bound over a grid of (delta, c, tau).",
        Command::Converge => "Delta C against c with fitted log-log slope and kernel mismatch certificates.",
        Command::LiebLiniger => "Lieb-Liniger ground state coefficient f(gamma).",
        Command::LlScaling => "Energy density rho^3 f(lambda/rho) and its scaling residual.",
    }
}

pub fn plot_request(command: Command, kind: PlotKind) -> Result<PlotRequest, CliError> {
    let (x, y): (&str, &[&str]) = match command {
        Command::Spectrum => ("index", &["energy"]),
        Command::TwistedMomentum => ("k", &["energy"]),
        Command::Defect => ("pair", &["difference"]),
        Command::Current => ("x", &["j"]),
        Command::Evolve => ("t", &["spread"]),
        Command::Tail => ("t", &["tail"]),
        Command::Dichotomy => ("t", &["p_a"]),
        Command::FockCheck => ("cutoff", &["commutator_defect"]),
        Command::WeylResidual => ("cutoff", &["residual"]),
        Command::Kernels => ("k", &["k_nr", "k_r"]),
        Command::Lemma2 | Command::Lemma2Sweep => ("delta", &["lhs", "rhs"]),
        Command::Converge => ("c", &["delta_c"]),
        Command::LiebLiniger => ("gamma", &["f_gamma"]),
        Command::LlScaling => ("rho", &["energy_density"]),
    };
    let mut request = PlotRequest {
        kind,
        x: x.into(),
        y: y.iter().map(|s| s.to_string()).collect(),
        value: None,
        title: command.name().into(),
    };
    if kind == PlotKind::Heatmap {
        match command {
            Command::Lemma2Sweep => {
                request.y = vec!["c".into()];
                request.value = Some("margin".into());
            }
            _ => {
                return Err(CliError::config(format!(
                    "no heatmap layout for {}; heatmaps are available for lemma2-sweep",
                    command.name()
                )))
            }
        }
    }
    Ok(request)
}

pub fn dispatch(config: &RunConfig) -> Run {
    let p = &config.parameters;
    match config.command {
        Command::Spectrum => spectrum(p),
        Command::TwistedMomentum => twisted_momentum(p),
        Command::Defect => defect(p, config.seed),
        Command::Current => current(p, config.seed),
        Command::Evolve => evolve(p),
        Command::Tail => tail(p),
        Command::Dichotomy => dichotomy(p),
        Command::FockCheck => fock_check(p),
        Command::WeylResidual => weyl(p),
        Command::Kernels => kernels(p),
        Command::Lemma2 => lemma2(p),
        Command::Lemma2Sweep => lemma2_sweep(p),
        Command::Converge => converge(p),
        Command::LiebLiniger => lieb_liniger(p),
        Command::LlScaling => ll_scaling(p),
    }
}

fn table(command: Command) -> ResultTable {
    ResultTable::new(columns(command))
}

fn boundary(p: &Params) -> Result<BoundarySpec, CliError> {
    let length = p.f64("length");
    Ok(match p.str("bc") {
        "dirichlet" => BoundarySpec::dirichlet(length)?,
        "neumann" => BoundarySpec::neumann(length)?,
        "robin" => BoundarySpec::robin(p.f64("sigma0"), p.f64("sigma_l"), length)?,
        "twisted" => BoundarySpec::twisted(p.f64("theta"), length)?,
        other => return Err(CliError::config(format!("unknown boundary condition {other}"))),
    })
}

fn quadrature(p: &Params) -> Result<QuadratureSpec, CliError> {
    Ok(QuadratureSpec::new(
        p.f64("rel_tol"),
        p.f64("abs_tol"),
        p.usize("max_subdivisions"),
    )?)
}

fn linspace(t_max: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if samples < 2 {
        return Err(CliError::config("need at least 2 samples"));
    }
    Ok((0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect())
}

/// Seeded coefficients with decaying magnitude, so superpositions stay smooth.
fn random_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let scale = 1.0 / (1.0 + j as f64).powi(2);
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        })
        .collect()
}

fn superpose(modes: &[EigenMode], coefficients: &[Complex64]) -> Result<WaveFunction, CliError> {
    let terms: Vec<(Complex64, &WaveFunction)> = coefficients.iter().copied().zip(modes.iter().map(|m| &m.wave)).collect();
    Ok(WaveFunction::combine(&terms)?)
}

fn spectrum(p: &Params) -> Run {
    let bc = boundary(p)?;
    let grid = bc.grid(p.usize("points"))?;
    let modes = solve_spectrum(&bc, &grid, p.usize("modes"))?;
    let mut t = table(Command::Spectrum);
    for m in &modes {
        t.push(vec![m.index.into(), m.energy.into(), boundary_residual(&bc, &m.wave)?.into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("energies", modes.iter().map(|m| m.energy).collect::<Vec<_>>());
    Ok(out)
}

fn twisted_momentum(p: &Params) -> Run {
    let bc = BoundarySpec::twisted(p.f64("theta"), p.f64("length"))?;
    let grid = bc.grid(p.usize("points"))?;
    let modes = solve_spectrum(&bc, &grid, p.usize("modes"))?;
    let mut t = table(Command::TwistedMomentum);
    let mut worst: f64 = 0.0;
    for m in &modes {
        // Bare samples: the derivative below is spectral, not the exact one
        // the solver attached.
        let bare = WaveFunction::new(grid, m.wave.values().to_vec())?;
        let slope = WaveFunction::new(grid, bare.derivative())?;
        let p2 = slope.norm().powi(2) / bare.norm().powi(2);
        let residual = (p2 - m.energy).abs() / m.energy.max(1.0);
        worst = worst.max(residual);
        let k = m
            .momentum
            .ok_or_else(|| CliError::assertion("twisted mode without a momentum"))?;
        t.push(vec![m.index.into(), k.into(), m.energy.into(), p2.into(), residual.into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("max_residual", worst);
    let tol = p.f64("tolerance");
    out.fail_if(worst > tol, || format!("energy and momentum square differ by {worst:e} > {tol:e}"));
    Ok(out)
}

fn defect(p: &Params, seed: u64) -> Run {
    let bc = boundary(p)?;
    let grid = bc.grid(p.usize("points"))?;
    let modes = solve_spectrum(&bc, &grid, p.usize("modes"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..p.usize("pairs"))
        .map(|_| (random_coefficients(&mut rng, modes.len()), random_coefficients(&mut rng, modes.len())))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|(a, b)| {
            let phi = superpose(&modes, a)?;
            let psi = superpose(&modes, b)?;
            Ok((momentum_symmetry_defect(&phi, &psi)?, boundary_term(&phi, &psi)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut t = table(Command::Defect);
    let mut worst: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for (i, (d, b)) in rows.iter().enumerate() {
        let diff = (d - b).norm();
        worst = worst.max(diff);
        largest = largest.max(d.norm());
        t.push(vec![i.into(), d.re.into(), d.im.into(), b.re.into(), b.im.into(), diff.into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("max_difference", worst);
    out.value("max_defect", largest);
    let tol = p.f64("tolerance");
    out.fail_if(worst > tol, || format!("defect differs from the boundary term by {worst:e} > {tol:e}"));
    Ok(out)
}

fn current(p: &Params, seed: u64) -> Run {
    let bc = boundary(p)?;
    let grid = bc.grid(p.usize("points"))?;
    let modes = solve_spectrum(&bc, &grid, p.usize("modes"))?;
    let psi = match p.str("state") {
        "eigenstate" => {
            let i = p.usize("index");
            modes
                .get(i)
                .ok_or_else(|| CliError::config(format!("index {i} beyond the {} modes", modes.len())))?
                .wave
                .clone()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coefficients = random_coefficients(&mut rng, modes.len());
            let decomposition = SpectralDecomposition::from_coefficients(modes, coefficients)?;
            crate::spreading::evolve_bounded(&decomposition, p.f64("time"))?
        }
    };
    let profile = current_profile(&psi)?;
    let report = flux_report(&bc, &psi)?;
    let mut t = table(Command::Current);
    for (x, j) in grid.points().iter().zip(&profile) {
        t.push(vec![(*x).into(), (*j).into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("j0", report.j0);
    out.value("jl", report.jl);
    out.value("max_abs_j", profile.iter().fold(0.0, |m: f64, j| m.max(j.abs())));
    out.verdict = Some(format!("{:?}", report.classification));
    Ok(out)
}

fn free_state(p: &Params, grid: GridSpec) -> Result<WaveFunction, CliError> {
    let (center, width) = (p.f64("center"), p.f64("width"));
    Ok(match p.str("initial") {
        "gaussian" => gaussian_state(grid, center, width)?,
        _ => bump_state(grid, center, width)?,
    })
}

fn moments(psi: &WaveFunction) -> (f64, f64, f64) {
    let w = psi.grid().weights();
    let xs = psi.grid().points();
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for ((v, x), w) in psi.values().iter().zip(&xs).zip(&w) {
        let d = v.norm_sqr() * w;
        m0 += d;
        m1 += d * x;
        m2 += d * x * x;
    }
    let mean = m1 / m0;
    (m0.sqrt(), mean, (m2 / m0 - mean * mean).max(0.0).sqrt())
}

fn evolve(p: &Params) -> Run {
    let grid = free_line_grid(p.f64("box"), p.usize("points"))?;
    let psi0 = free_state(p, grid)?;
    let line = FreeLine::new(&psi0, p.f64("mass"))?;
    let times = linspace(p.f64("t_max"), p.usize("samples"))?;
    let rows = times
        .par_iter()
        .map(|&t| {
            let psi = line.evolve(t)?;
            let (norm, mean, spread) = moments(&psi);
            Ok((t, norm, mean, spread, line.aliasing_bound(t)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut tab = table(Command::Evolve);
    for (t, norm, mean, spread, alias) in &rows {
        tab.push(vec![(*t).into(), (*norm).into(), (*mean).into(), (*spread).into(), (*alias).into()])?;
    }
    let mut out = Outcome::new(tab);
    out.value("max_aliasing_bound", rows.iter().fold(0.0, |m: f64, r| m.max(r.4)));
    if p.str("initial") == "gaussian" {
        let t = p.f64("t_max");
        let psi = line.evolve(t)?;
        let err = grid
            .points()
            .iter()
            .zip(psi.values())
            .map(|(x, v)| (v - gaussian_evolved(*x, p.f64("center"), p.f64("width"), t, p.f64("mass"))).norm())
            .fold(0.0, f64::max);
        out.value("max_error_vs_exact", err);
    }
    Ok(out)
}

fn tail(p: &Params) -> Run {
    let grid = free_line_grid(p.f64("box"), p.usize("points"))?;
    let psi0 = bump_state(grid, 0.0, p.f64("radius"))?;
    let line = FreeLine::new(&psi0, p.f64("mass"))?;
    let times = p.f64_list("times");
    if times.iter().any(|t| *t < 0.0) {
        return Err(CliError::config("tail times must be non-negative"));
    }
    let r = p.f64("r");
    let rows = times
        .par_iter()
        .map(|&t| match tail_probability(&line, t, r) {
            Ok(v) => Ok((t, v, true)),
            Err(Error::ResolutionInsufficient { value, .. }) => Ok((t, value, false)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut tab = table(Command::Tail);
    for (t, v, ok) in &rows {
        tab.push(vec![(*t).into(), (*v).into(), (*ok).into()])?;
    }
    let mut positive: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 > 0.0).map(|r| (r.0, r.1)).collect();
    positive.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = positive.windows(2).all(|w| w[0].1 < w[1].1);
    let all_resolved = rows.iter().all(|r| r.2);
    let mut out = Outcome::new(tab);
    out.value("monotone", monotone);
    out.value("all_resolved", all_resolved);
    out.value("noise_floor", crate::spreading::NOISE_FLOOR);
    if p.bool("require_resolved") && !all_resolved {
        out.fail_with(CliError::non_convergence(
            "some tail probabilities are at or below the noise floor",
        ));
    }
    Ok(out)
}

fn dichotomy(p: &Params) -> Run {
    let region = Region::new(p.f64("region_a"), p.f64("region_b"))?;
    let base = match p.str("operator") {
        "projector" => LocalizationOperator::projector(region),
        _ => LocalizationOperator::rank_one(region, p.bool("normalized"))?,
    };
    let (psi0, evolution) = match p.str("evolution") {
        "free" => {
            let grid = free_line_grid(p.f64("box"), p.usize("points"))?;
            (free_state(p, grid)?, Evolution::FreeLine { mass: p.f64("mass") })
        }
        _ => {
            let bc = boundary(p)?;
            let grid = bc.grid(p.usize("points"))?;
            (
                free_state(p, grid)?,
                Evolution::Bounded {
                    boundary: bc,
                    modes: p.usize("modes"),
                },
            )
        }
    };
    let times = linspace(p.f64("t_max"), p.usize("samples"))?;
    let record = p_a_series(&psi0, &evolution, &base.complement(), &times)?;
    let verdict = classify_dichotomy(&record, p.f64("tolerance"))?;
    let mut t = table(Command::Dichotomy);
    for (time, v) in record.times.iter().zip(&record.values) {
        t.push(vec![(*time).into(), (*v).into()])?;
    }
    let mut out = Outcome::new(t);
    out.verdict = Some(
        match verdict.branch {
            Branch::Confined => "Confined",
            Branch::Spreading => "Spreading",
        }
        .into(),
    );
    out.value("zero_fraction", verdict.zero_fraction);
    out.value("nonzero_samples", verdict.support_evidence.nonzero);
    out.value("max_value", verdict.support_evidence.max_value);
    if let Some(v) = verdict.support_evidence.min_nonzero_value {
        out.value("min_nonzero_value", v);
    }
    Ok(out)
}

fn gaussian_basis(widths: &[f64], dimension: usize, m0: f64, c: Option<f64>, quad: QuadratureSpec) -> Result<ModeBasis, CliError> {
    let functions = widths
        .iter()
        .map(|w| TestFunction::gaussian(*w, dimension))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(ModeBasis::new(functions, m0, c, quad)?)
}

fn fock_check(p: &Params) -> Run {
    let widths = p.f64_list("widths");
    let basis = gaussian_basis(&widths, p.usize("dimension"), p.f64("m0"), None, quadrature(p)?)?;
    let cutoffs = p.usize_list("cutoffs");
    let rows = cutoffs
        .par_iter()
        .map(|&d| {
            let (a, adag) = build_ladder(d)?;
            let comm = &a * &adag - &adag * &a;
            let mut commutator: f64 = 0.0;
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 1.0 } else { 0.0 };
                    commutator = commutator.max((comm[(i, j)] - want).norm());
                }
            }
            let fock = TruncatedFock::new(basis.len(), d)?;
            let mut number = crate::numerics::CMatrix::zeros(fock.dimension, fock.dimension);
            for j in 0..fock.n_modes {
                let aj = fock.annihilator(j);
                number += aj.adjoint() * &aj;
            }
            let mut number_defect: f64 = 0.0;
            for i in 0..fock.dimension {
                for k in 0..fock.dimension {
                    let want = if i == k {
                        fock.occupations(i).iter().sum::<usize>() as f64
                    } else {
                        0.0
                    };
                    number_defect = number_defect.max((number[(i, k)] - want).norm());
                }
            }
            let vacuum = vacuum_annihilation_check(&basis, d)?;
            Ok((d, fock.dimension, commutator, number_defect, vacuum))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = table(Command::FockCheck);
    let tol = p.f64("tolerance");
    let mut worst: f64 = 0.0;
    for (d, dim, c, n, v) in &rows {
        worst = worst.max(*c).max(*n);
        t.push(vec![(*d).into(), (*dim).into(), (*c).into(), (*n).into(), (*v).into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("max_ladder_defect", worst);
    out.fail_if(worst > tol, || format!("ladder defect {worst:e} > {tol:e}"));
    Ok(out)
}

fn weyl(p: &Params) -> Run {
    let weighting = match p.str("weighting") {
        "relativistic" => Weighting::Relativistic,
        _ => Weighting::Nonrelativistic,
    };
    let phase = match p.str("phase") {
        "reversed" => WeylPhase::Reversed,
        _ => WeylPhase::Consistent,
    };
    let c = (weighting == Weighting::Relativistic).then(|| p.f64("c"));
    let basis = gaussian_basis(&[p.f64("width")], p.usize("dimension"), p.f64("m0"), c, quadrature(p)?)?;
    let amplitude = p.f64("amplitude");
    let cutoffs = p.usize_list("cutoffs");
    let rows = cutoffs
        .par_iter()
        .map(|&d| {
            let fields = FieldOperators::new(&basis, weighting, d)?;
            let f = [amplitude / fields.pi_amplitude(&[1.0])?];
            let g = [amplitude / fields.phi_amplitude(&[1.0])?];
            let r = crate::fock::weyl_relation_residual(&fields, &f, &g, phase)?;
            Ok((d, fields.fock.dimension, r))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = table(Command::WeylResidual);
    for (d, dim, r) in &rows {
        t.push(vec![(*d).into(), (*dim).into(), (*r).into()])?;
    }
    let decreasing = rows.windows(2).all(|w| w[0].0 < w[1].0 && w[1].2 < w[0].2);
    let mut out = Outcome::new(t);
    out.value("strictly_decreasing", decreasing);
    out.fail_if(p.bool("require_decreasing") && !decreasing, || {
        "Weyl residual does not decrease strictly with increasing cutoff".into()
    });
    Ok(out)
}

fn kernels(p: &Params) -> Run {
    let disp = DispersionParams::new(p.f64("m0"), p.f64("c"))?;
    let n = p.usize("points");
    if n < 2 {
        return Err(CliError::config("need at least 2 points"));
    }
    let (k_max, tau) = (p.f64("k_max"), p.f64("tau"));
    let mut t = table(Command::Kernels);
    for i in 0..n {
        let k = k_max * i as f64 / (n - 1) as f64;
        let (k_nr, k_r) = kernel_pair(k, &disp);
        t.push(vec![
            k.into(),
            k_nr.into(),
            k_r.into(),
            kernel_gap(k, &disp).into(),
            kinetic_relativistic(k, &disp).into(),
            beta(k, tau, &disp).norm().into(),
        ])?;
    }
    Ok(Outcome::new(t))
}

struct Corpus {
    f1: TestFunction,
    f2: TestFunction,
    m0: f64,
    k_points: usize,
    quad: QuadratureSpec,
}

impl Corpus {
    fn from(p: &Params) -> Result<Self, CliError> {
        let d = p.usize("dimension");
        Ok(Corpus {
            f1: TestFunction::gaussian(p.f64("width1"), d)?,
            f2: TestFunction::gaussian(p.f64("width2"), d)?,
            m0: p.f64("m0"),
            k_points: p.usize("k_points"),
            quad: quadrature(p)?,
        })
    }

    fn cell(&self, delta: f64, c: f64, tau: f64) -> Result<(Vec<Cell>, bool), Error> {
        let disp = DispersionParams::new(self.m0, c)?;
        let r = verify_lemma2(&self.f1, &self.f2, tau, delta, &disp, &self.quad)?;
        let q = pointwise_inequalities(&disp, delta, tau, self.k_points)?;
        let ok = r.pass && q.kernel_gap_violations + q.phase_violations + q.ordering_violations == 0;
        Ok((
            vec![
                delta.into(),
                c.into(),
                tau.into(),
                r.epsilon.into(),
                r.delta_c.into(),
                r.lhs.into(),
                r.rhs.into(),
                r.margin.into(),
                r.pass.into(),
                q.kernel_gap_violations.into(),
                q.phase_violations.into(),
                q.ordering_violations.into(),
            ],
            ok,
        ))
    }
}

fn lemma2(p: &Params) -> Run {
    let corpus = Corpus::from(p)?;
    let (row, ok) = corpus.cell(p.f64("delta"), p.f64("c"), p.f64("tau"))?;
    let mut t = table(Command::Lemma2);
    t.push(row)?;
    let mut out = Outcome::new(t);
    out.value("pass", ok);
    out.verdict = Some(if ok { "pass" } else { "fail" }.into());
    out.fail_if(!ok, || "correlator bound or a pointwise inequality fails".into());
    Ok(out)
}

fn lemma2_sweep(p: &Params) -> Run {
    let corpus = Corpus::from(p)?;
    let mut cells = Vec::new();
    for tau in p.f64_list("taus") {
        for c in p.f64_list("speeds") {
            for delta in p.f64_list("deltas") {
                cells.push((delta, c, tau));
            }
        }
    }
    let rows = cells
        .par_iter()
        .map(|&(d, c, tau)| corpus.cell(d, c, tau))
        .collect::<Result<Vec<_>, Error>>()?;
    let failed = rows.iter().filter(|r| !r.1).count();
    let mut t = table(Command::Lemma2Sweep);
    for (row, _) in rows {
        t.push(row)?;
    }
    let mut out = Outcome::new(t);
    out.value("cells", cells.len());
    out.value("failed_cells", failed);
    out.verdict = Some(if failed == 0 { "pass" } else { "fail" }.into());
    out.fail_if(failed > 0, || format!("{failed} of {} cells fail", cells.len()));
    Ok(out)
}

fn converge(p: &Params) -> Run {
    let d = p.usize("dimension");
    let f1 = TestFunction::gaussian(p.f64("width1"), d)?;
    let f2 = TestFunction::gaussian(p.f64("width2"), d)?;
    let (m0, quad) = (p.f64("m0"), quadrature(p)?);
    let speeds = p.f64_list("speeds");
    let scan = convergence_scan(&f1, &f2, p.f64("tau"), &speeds, m0, &quad)?;
    let certificates = speeds
        .par_iter()
        .map(|&c| kernel_mismatch_certificate(&DispersionParams::new(m0, c)?, &f1, &quad))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = table(Command::Converge);
    for ((c, dc), cert) in scan.c.iter().zip(&scan.delta_c).zip(&certificates) {
        t.push(vec![(*c).into(), (*dc).into(), cert.value.into(), cert.error.into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("slope", scan.slope);
    debug_assert!((fitted_slope(&scan.c, &scan.delta_c) - scan.slope).abs() < 1e-9);
    let (target, tol) = (p.f64("slope_target"), p.f64("slope_tolerance"));
    out.fail_if((scan.slope - target).abs() > tol, || {
        format!("slope {} outside {target} +- {tol}", scan.slope)
    });
    out.fail_if(certificates.iter().any(|c| !(c.value > 0.0) || c.degenerate), || {
        "kernel mismatch certificate not strictly positive".into()
    });
    Ok(out)
}

fn lieb_liniger(p: &Params) -> Run {
    let nodes = p.usize("nodes");
    let solutions = p
        .f64_list("gammas")
        .par_iter()
        .map(|&g| solve_ll(g, nodes))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = table(Command::LiebLiniger);
    for s in &solutions {
        t.push(vec![s.gamma.into(), s.alpha.into(), s.f_gamma.into(), s.residual.into()])?;
    }
    let mut out = Outcome::new(t);
    out.value("tonks_value", PI * PI / 3.0);
    Ok(out)
}

fn ll_scaling(p: &Params) -> Run {
    let (lambda, nodes) = (p.f64("lambda"), p.usize("nodes"));
    let rhos = p.f64_list("densities");
    if rhos.len() < 2 {
        return Err(CliError::config("need at least two densities"));
    }
    let rows = rhos
        .par_iter()
        .map(|&rho| {
            let f = solve_ll(lambda / rho, nodes)?.f_gamma;
            let e = energy_density(lambda, rho, nodes)?;
            Ok((rho, f, e))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = table(Command::LlScaling);
    for (rho, f, e) in &rows {
        let scaled = e / rho.powi(3);
        t.push(vec![
            (*rho).into(),
            (lambda / rho).into(),
            (*e).into(),
            scaled.into(),
            (*f).into(),
            (f - scaled).abs().into(),
        ])?;
    }
    let residual = scaling_residual(lambda, rhos[0], rhos[1], nodes)?;
    let mut out = Outcome::new(t);
    out.value("scaling_residual", residual);
    let tol = p.f64("tolerance");
    out.fail_if(residual > tol, || format!("scaling residual {residual:e} > {tol:e}"));
    Ok(out)
}
