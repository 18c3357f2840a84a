//! C ABI over `siegel_theta`.
//!
//! Every entry point returns an [`SthStatus`]. On failure a message is kept
//! per thread and can be read with [`sth_last_error`]. Strings handed out by
//! the library must be released with [`sth_string_free`], handles with their
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::json;

use siegel_theta::cmfield::{belong_criterion, build_context, CMContext, GaloisActor};
use siegel_theta::harness::{run_suite, Suite, SuiteConfig};
use siegel_theta::modularity::{check_family, ThetaProduct};
use siegel_theta::symplectic::SiegelPoint;
use siegel_theta::theta::{phi_eval, theta_eval, Characteristic, EvalSettings};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SthStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SthComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for SthComplex {
    fn from(v: Complex64) -> Self {
        Self { re: v.re, im: v.im }
    }
}

/// CM data for Q(zeta_5) together with its evaluation settings.
pub struct SthContext {
    ctx: CMContext,
    settings: EvalSettings,
}

/// A parsed theta product.
pub struct SthFamily {
    fam: ThetaProduct,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(SthStatus, String);

type FfiResult = Result<(), Fail>;

fn domain<E: std::fmt::Display>(e: E) -> Fail {
    Fail(SthStatus::Domain, e.to_string())
}

fn parse_err<E: std::fmt::Display>(e: E) -> Fail {
    Fail(SthStatus::Parse, e.to_string())
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult) -> SthStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SthStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panicked: {msg}"));
            SthStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SthStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SthStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn chi_arg(text: &str) -> Result<Characteristic, Fail> {
    text.parse().map_err(parse_err)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("json has no nul").into_raw()
}

fn coords_arg(coords: *const i64, len: usize) -> Result<Vec<i64>, Fail> {
    if len > 5 {
        return Err(Fail(SthStatus::Domain, "at most five coordinates".into()));
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    if coords.is_null() {
        return Err(null("coords"));
    }
    Ok(unsafe { std::slice::from_raw_parts(coords, len) }.to_vec())
}

/// Message for the last failed call on this thread, or null.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sth_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn sth_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates Theta(u, Z; r, s). `z_re`/`z_im` hold Z row-major (g*g
/// entries); `u_re`/`u_im` hold g entries and may both be null for u = 0.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn sth_theta_eval(
    g: usize,
    z_re: *const f64,
    z_im: *const f64,
    u_re: *const f64,
    u_im: *const f64,
    chi: *const c_char,
    tol: f64,
    out: *mut SthComplex,
) -> SthStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let chi = chi_arg(str_arg(chi, "chi")?)?;
        if g == 0 {
            return Err(Fail(SthStatus::Domain, "g must be positive".into()));
        }
        if z_re.is_null() || z_im.is_null() {
            return Err(null("z"));
        }
        let re = std::slice::from_raw_parts(z_re, g * g);
        let im = std::slice::from_raw_parts(z_im, g * g);
        let z = SiegelPoint::new(nalgebra::DMatrix::from_fn(g, g, |i, j| {
            Complex64::new(re[i * g + j], im[i * g + j])
        }))
        .map_err(domain)?;
        let u: Vec<Complex64> = match (u_re.is_null(), u_im.is_null()) {
            (true, true) => vec![Complex64::new(0.0, 0.0); g],
            (false, false) => {
                let ur = std::slice::from_raw_parts(u_re, g);
                let ui = std::slice::from_raw_parts(u_im, g);
                ur.iter()
                    .zip(ui)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect()
            }
            _ => return Err(null("one of u_re, u_im")),
        };
        *out = theta_eval(&u, &z, &chi, &EvalSettings::with_tol(tol))
            .map_err(domain)?
            .into();
        Ok(())
    })
}

/// Builds the CM context; `tol` is the target error of the lattice sums.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sth_context_new(tol: f64, out: *mut *mut SthContext) -> SthStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let settings = EvalSettings::with_tol(tol);
        let ctx = build_context(settings).map_err(domain)?;
        *out = Box::into_raw(Box::new(SthContext { ctx, settings }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`sth_context_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sth_context_free(ctx: *mut SthContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Phi_chi(Z0) for the CM point Z0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sth_context_phi(
    ctx: *const SthContext,
    chi: *const c_char,
    out: *mut SthComplex,
) -> SthStatus {
    guard(|| {
        let c = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let out = out_arg(out, "out")?;
        let chi = chi_arg(str_arg(chi, "chi")?)?;
        *out = phi_eval(&chi, c.ctx.z0(), &c.settings)
            .map_err(domain)?
            .into();
        Ok(())
    })
}

/// Applies the Artin symbol of (x), x = sum coords[k] zeta^k, to Phi_chi.
/// Writes a JSON object with `chi_out`, `multiplier` and `value` to
/// `out_json`.
///
/// # Safety
/// Pointers must be valid; `coords` holds `len` entries.
#[no_mangle]
pub unsafe extern "C" fn sth_artin_action(
    ctx: *const SthContext,
    coords: *const i64,
    len: usize,
    p: u64,
    chi: *const c_char,
    out_json: *mut *mut c_char,
) -> SthStatus {
    guard(|| {
        let c = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let out = out_arg(out_json, "out_json")?;
        let chi = chi_arg(str_arg(chi, "chi")?)?;
        let x = c.ctx.from_coords(&coords_arg(coords, len)?);
        let res = GaloisActor::new(&c.ctx, &x, &BigInt::from(p))
            .and_then(|a| a.act(&chi))
            .map_err(domain)?;
        let value = res.multiplier.to_complex()
            * phi_eval(&res.chi_out, c.ctx.z0(), &c.settings).map_err(domain)?;
        *out = into_c_string(
            json!({
                "chi_out": res.chi_out.to_string(),
                "multiplier": res.multiplier.to_string(),
                "value": [value.re, value.im],
            })
            .to_string(),
        );
        Ok(())
    })
}

/// Evaluates the fixed-point congruence for x and p; JSON in `out_json`.
///
/// # Safety
/// Pointers must be valid; `coords` holds `len` entries.
#[no_mangle]
pub unsafe extern "C" fn sth_belong_criterion(
    ctx: *const SthContext,
    coords: *const i64,
    len: usize,
    p: u64,
    out_json: *mut *mut c_char,
) -> SthStatus {
    guard(|| {
        let c = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let out = out_arg(out_json, "out_json")?;
        let mut xs: [BigInt; 5] = Default::default();
        for (o, v) in xs.iter_mut().zip(coords_arg(coords, len)?) {
            *o = BigInt::from(v);
        }
        let r = belong_criterion(&c.ctx, &xs, &BigInt::from(p)).map_err(domain)?;
        *out = into_c_string(serde_json::to_string(&r).expect("plain data"));
        Ok(())
    })
}

/// Parses a theta product in the text format read by the CLI.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sth_family_parse(
    text: *const c_char,
    out: *mut *mut SthFamily,
) -> SthStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let fam = ThetaProduct::parse(str_arg(text, "text")?).map_err(parse_err)?;
        *out = Box::into_raw(Box::new(SthFamily { fam }));
        Ok(())
    })
}

/// # Safety
/// `fam` must come from [`sth_family_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sth_family_free(fam: *mut SthFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Checks modularity for Gamma(N), N the common denominator of the family.
/// `diagnostic` may be null; otherwise it receives a string to free.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sth_family_check(
    fam: *const SthFamily,
    modular: *mut bool,
    diagnostic: *mut *mut c_char,
) -> SthStatus {
    guard(|| {
        let f = &fam.as_ref().ok_or_else(|| null("fam"))?.fam;
        let modular = out_arg(modular, "modular")?;
        let check = check_family(f, f.den()).map_err(domain)?;
        *modular = check.modular;
        if let Some(d) = diagnostic.as_mut() {
            *d = into_c_string(check.diagnostic());
        }
        Ok(())
    })
}

/// Runs verification suites and writes the JSON report to `out_json`.
/// `suites` is a comma separated list such as "theta,cm", or null for all.
/// `failed` (nullable) receives the number of failed checks.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sth_verify(
    suites: *const c_char,
    seed: u64,
    failed: *mut usize,
    out_json: *mut *mut c_char,
) -> SthStatus {
    guard(|| {
        let out = out_arg(out_json, "out_json")?;
        let mut cfg = SuiteConfig {
            seed,
            ..SuiteConfig::default()
        };
        if !suites.is_null() {
            cfg.suites = str_arg(suites, "suites")?
                .split(',')
                .map(|s| {
                    <Suite as clap::ValueEnum>::from_str(s.trim(), true)
                        .map_err(|_| Fail(SthStatus::Parse, format!("unknown suite {s:?}")))
                })
                .collect::<Result<_, _>>()?;
        }
        let report = run_suite(&cfg).map_err(domain)?;
        if let Some(f) = failed.as_mut() {
            *f = report.failed();
        }
        *out = into_c_string(report.to_json());
        Ok(())
    })
}
