use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use causalab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(causalab_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn dirichlet_spectrum_round_trip() {
    let pi = std::f64::consts::PI;
    let mut handle = ptr::null_mut();
    let status = unsafe {
        causalab_spectrum_solve(CausalabBoundary::Dirichlet, pi, 0.0, 0.0, 0.0, 4, 801, &mut handle)
    };
    assert_eq!(status, CausalabStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { causalab_spectrum_len(handle) }, 4);

    let mut short = [0.0; 2];
    let mut written = 0;
    let status = unsafe { causalab_spectrum_energies(handle, short.as_mut_ptr(), short.len(), &mut written) };
    assert_eq!(status, CausalabStatus::BufferTooSmall);
    assert_eq!(written, 4);

    let mut energies = [0.0; 4];
    let status = unsafe { causalab_spectrum_energies(handle, energies.as_mut_ptr(), 4, &mut written) };
    assert_eq!(status, CausalabStatus::Ok);
    for (n, e) in energies.iter().enumerate() {
        let exact = ((n + 1) * (n + 1)) as f64;
        assert!((e - exact).abs() < 1e-8 * exact, "{n}: {e}");
    }
    unsafe { causalab_spectrum_free(handle) };
}

#[test]
fn invalid_input_sets_message() {
    let mut handle = ptr::null_mut();
    let status = unsafe {
        causalab_spectrum_solve(CausalabBoundary::Robin, -1.0, 0.5, 0.5, 0.0, 3, 401, &mut handle)
    };
    assert_eq!(status, CausalabStatus::InvalidArgument);
    assert!(handle.is_null());
    assert!(!last_error().is_empty());

    let status = unsafe { causalab_spectrum_solve(CausalabBoundary::Dirichlet, 1.0, 0.0, 0.0, 0.0, 3, 401, ptr::null_mut()) };
    assert_eq!(status, CausalabStatus::NullPointer);
    assert_eq!(unsafe { causalab_spectrum_len(ptr::null()) }, 0);
    unsafe { causalab_spectrum_free(ptr::null_mut()) };
}

#[test]
fn lieb_liniger_handle() {
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { causalab_ll_solve(1.0, 64, &mut handle) }, CausalabStatus::Ok, "{}", last_error());
    let (mut f, mut alpha) = (0.0, 0.0);
    assert_eq!(unsafe { causalab_ll_values(handle, &mut f, &mut alpha) }, CausalabStatus::Ok);
    assert!((f - 0.63915).abs() < 1e-4, "{f}");
    assert!(alpha > 0.0);

    let mut g = vec![0.0; 64];
    let mut written = 0;
    assert_eq!(
        unsafe { causalab_ll_density(handle, g.as_mut_ptr(), g.len(), &mut written) },
        CausalabStatus::Ok
    );
    assert_eq!(written, 64);
    assert!(g.iter().all(|v| *v > 0.0));
    unsafe { causalab_ll_free(handle) };

    let mut e = 0.0;
    assert_eq!(unsafe { causalab_ll_energy_density(2.0, 2.0, 64, &mut e) }, CausalabStatus::Ok);
    assert!((e - 8.0 * f).abs() < 1e-8, "{e}");

    assert_eq!(unsafe { causalab_ll_solve(1e-5, 64, &mut handle) }, CausalabStatus::InvalidArgument);
}

#[test]
fn scalar_kernels() {
    let (mut omega, mut gap) = (0.0, 0.0);
    assert_eq!(unsafe { causalab_dispersion(3.0, 1.0, 2.0, &mut omega, &mut gap) }, CausalabStatus::Ok);
    assert!((omega - (16.0f64 + 36.0).sqrt()).abs() < 1e-12);
    assert!((gap - (0.5 - 4.0 / (2.0 * omega))).abs() < 1e-12);
    assert_eq!(
        unsafe { causalab_dispersion(1.0, -1.0, 1.0, &mut omega, &mut gap) },
        CausalabStatus::InvalidArgument
    );

    let mut d = 0.0;
    let status = unsafe { causalab_delta_c_gaussian(1.0, 1.0, 1, 0.0, 1.0, 10.0, &mut d) };
    assert_eq!(status, CausalabStatus::Ok, "{}", last_error());
    assert!(d >= 0.0 && d < 1e-2, "{d}");
}

#[test]
fn tail_probability_and_noise_floor() {
    let mut p = 0.0;
    let status = unsafe { causalab_tail_probability(1.0, 2.0, 1e-2, 1.0, 16.0, 65536, &mut p) };
    assert_eq!(status, CausalabStatus::Ok, "{}", last_error());
    assert!((p - 3.627e-11).abs() < 0.05e-11, "{p}");
    let status = unsafe { causalab_tail_probability(1.0, 2.0, 1e-4, 1.0, 16.0, 65536, &mut p) };
    assert_eq!(status, CausalabStatus::BelowNoiseFloor);
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(causalab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/causalab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["causalab_spectrum_solve", "causalab_ll_density", "CAUSALAB_STATUS_BELOW_NOISE_FLOOR"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("use.c");
    std::fs::write(
        &source,
        "#include \"causalab.h\"\nint main(void) { CausalabSpectrum *s = 0; return (int)causalab_spectrum_len(s); }\n",
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&source)
        .output()
    else {
        eprintln!("no C compiler found; header syntax not checked");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
