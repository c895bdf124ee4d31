use std::ffi::CStr;
use std::ptr;

use entangle_net_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { en_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(en_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn model_roundtrip() {
    let mut model = ptr::null_mut();
    let st = unsafe { en_model_new(EnDynamics::Tavis, EnFamily::Phi, 45.0, 0, 0.0, &mut model) };
    assert_eq!(st, EnStatus::Ok);

    let mut c = -1.0;
    assert_eq!(unsafe { en_model_concurrence(model, EnPair::Same, 0.0, &mut c) }, EnStatus::Ok);
    assert!((c - 1.0).abs() < 1e-12);

    let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
    let st = unsafe { en_model_pair_density(model, EnPair::Cross, 1.3, re.as_mut_ptr(), im.as_mut_ptr()) };
    assert_eq!(st, EnStatus::Ok);
    let trace: f64 = (0..4).map(|k| re[5 * k]).sum();
    assert!((trace - 1.0).abs() < 1e-12);

    let mut from_entries = -1.0;
    assert_eq!(unsafe { en_concurrence(re.as_ptr(), im.as_ptr(), &mut from_entries) }, EnStatus::Ok);
    let mut direct = -1.0;
    assert_eq!(unsafe { en_model_concurrence(model, EnPair::Cross, 1.3, &mut direct) }, EnStatus::Ok);
    assert!((from_entries - direct).abs() < 1e-12);

    unsafe { en_model_free(model) };
    unsafe { en_model_free(ptr::null_mut()) };
}

#[test]
fn bad_arguments_set_status_and_message() {
    let mut model = ptr::null_mut();
    let st = unsafe { en_model_new(EnDynamics::Tavis, EnFamily::Psi, 100.0, 0, 0.0, &mut model) };
    assert_eq!(st, EnStatus::InvalidArgument);
    assert!(model.is_null());
    assert!(last_error().contains("alpha_deg"));

    let st = unsafe { en_model_new(EnDynamics::Tavis, EnFamily::Psi, 10.0, 0, 0.0, ptr::null_mut()) };
    assert_eq!(st, EnStatus::NullPointer);

    let mut c = 0.0;
    assert_eq!(unsafe { en_model_concurrence(ptr::null(), EnPair::Same, 0.0, &mut c) }, EnStatus::NullPointer);

    let mut jc = ptr::null_mut();
    assert_eq!(unsafe { en_model_new(EnDynamics::DoubleJc, EnFamily::Phi, 30.0, 0, 0.0, &mut jc) }, EnStatus::Ok);
    assert_eq!(unsafe { en_model_concurrence(jc, EnPair::Cross, 0.5, &mut c) }, EnStatus::InvalidArgument);
    unsafe { en_model_free(jc) };

    let (re, mut im) = ([0.0; 16], [0.0; 16]);
    im[1] = 0.3;
    assert_eq!(unsafe { en_concurrence(re.as_ptr(), im.as_ptr(), &mut c) }, EnStatus::InvalidArgument);
}

#[test]
fn coefficients_at_zero_time() {
    let mut out = [f64::NAN; 13];
    assert_eq!(unsafe { en_coefficients(0.0, 1, out.as_mut_ptr()) }, EnStatus::Ok);
    // a b c d f h k l m n p q r at τ = 0
    let expected = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0];
    for (k, (x, e)) in out.iter().zip(expected).enumerate() {
        assert!((x - e).abs() < 1e-15, "coefficient {k}: {x}");
    }
}

#[test]
fn steady_state_values() {
    let (mut y, mut x, mut c) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { en_steady_state(EnFamily::Phi, 45.0, &mut y, &mut x, &mut c) }, EnStatus::Ok);
    assert!((y - 1.0 / 16.0).abs() < 1e-15);
    assert!((x - 0.125).abs() < 1e-15);
    assert!((c - 0.125).abs() < 1e-12);
    assert_eq!(unsafe { en_steady_state(EnFamily::Psi, 45.0, &mut y, &mut x, &mut c) }, EnStatus::Ok);
    assert_eq!(c, 0.0);
    assert_eq!(unsafe { en_steady_state(EnFamily::Phi, -1.0, &mut y, &mut x, &mut c) }, EnStatus::InvalidArgument);
}

#[test]
fn sweep_lifecycle() {
    let mut sweep = ptr::null_mut();
    assert_eq!(unsafe { en_sweep_new(EnFamily::Phi, 0, 20.0, 2001, &mut sweep) }, EnStatus::Ok);

    let mut len = 0;
    assert_eq!(unsafe { en_sweep_len(sweep, &mut len) }, EnStatus::NotReady);

    let grid = [30.0, 45.0, 65.0];
    assert_eq!(unsafe { en_sweep_run(sweep, grid.as_ptr(), grid.len()) }, EnStatus::Ok);
    assert_eq!(unsafe { en_sweep_len(sweep, &mut len) }, EnStatus::Ok);
    assert_eq!(len, 3);

    let (mut a, mut e, mut t) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { en_sweep_get(sweep, 0, &mut a, &mut e, &mut t) }, EnStatus::Ok);
    assert!((a - 30.0).abs() < 1e-12);
    assert!(e < 1e-6);
    assert_eq!(unsafe { en_sweep_get(sweep, 3, &mut a, &mut e, &mut t) }, EnStatus::InvalidArgument);

    let (mut found, mut thr, mut arg, mut best) = (0, 0.0, 0.0, 0.0);
    assert_eq!(unsafe { en_sweep_summary(sweep, &mut found, &mut thr, &mut arg, &mut best) }, EnStatus::Ok);
    assert_eq!(found, 1);
    assert!((30.0..=45.0).contains(&thr));
    assert_eq!(arg, 65.0);
    assert!(best > 0.24);

    unsafe { en_sweep_free(sweep) };
}

#[test]
fn sweep_rejects_bad_grid() {
    let mut sweep = ptr::null_mut();
    assert_eq!(unsafe { en_sweep_new(EnFamily::Phi, 0, 20.0, 1, &mut sweep) }, EnStatus::InvalidArgument);
    assert_eq!(unsafe { en_sweep_new(EnFamily::Phi, 0, 1.0, 11, &mut sweep) }, EnStatus::Ok);
    let grid = [95.0];
    assert_eq!(unsafe { en_sweep_run(sweep, grid.as_ptr(), 1) }, EnStatus::InvalidArgument);
    assert_eq!(unsafe { en_sweep_run(sweep, ptr::null(), 1) }, EnStatus::NullPointer);
    unsafe { en_sweep_free(sweep) };
}

/// The generated header must compile as C when a compiler is available.
#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = std::env::temp_dir().join(format!("entangle_net_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"entangle_net.h\"\nint main(void) { EnModel *m = 0; (void)m; return EN_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header failed to compile"),
        Err(_) => eprintln!("no C compiler found; header check skipped"),
    }
    let _ = std::fs::remove_dir_all(dir);
}
