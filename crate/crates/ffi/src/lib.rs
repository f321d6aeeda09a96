//! C ABI for the gwidth library: JSON results over a handful of entry
//! points, plus an opaque handle to the ball-embedding engine.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`GwidthStatus`]; out-parameters are
//!   written only when the status is OK.
//! * Strings returned through out-parameters are NUL-terminated UTF-8 owned
//!   by the caller; release them with [`gwidth_string_free`]. The pointers
//!   from [`gwidth_version`] and [`gwidth_last_error`] must not be freed.
//! * [`gwidth_last_error`] describes the most recent failure on the calling
//!   thread; the pointer stays valid until the next failure on that thread.
//! * Panics never unwind across the boundary: they are caught and surfaced
//!   as `GWIDTH_STATUS_PANIC`.
//! * JSON payloads match the gwidth CLI byte for byte: the certificate,
//!   product, and toric documents equal the CLI's `results` objects, and
//!   the selftest document equals its full `--json` report.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe, UnwindSafe};

use nalgebra::DVector;

use gwidth::moser::{
    construct_embedding, sample_admissible, verify_pullback, ChartForm, IntegrationGrid,
    MoserError,
};
use gwidth::report::{quantum_product_value, toric_bounds_value};
use gwidth::{
    grassmannian_width_certificate, gw_invariant_3pt, quantum_product, run_selftest, BoxContext,
    DelzantPolytope, Partition,
};

/// Differencing step used by the pullback residual entry point.
const FD_STEP: f64 = 1e-4;

/// Longest partition accepted over the boundary; Gr(k,n) with n <= 8 only
/// ever needs seven parts, so anything near this cap is a caller bug.
const MAX_PARTS: usize = 64;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwidthStatus {
    /// Success; out-parameters are valid.
    Ok = 0,
    /// An argument failed validation: bad (k, n), an unboxed or malformed
    /// partition, an unknown form name, a negative flow time, an invalid
    /// polytope, or a null pointer.
    InvalidArgument = 1,
    /// A point lay outside the embedding's admissible domain.
    Domain = 2,
    /// The computation produced a non-finite value or could not draw the
    /// requested samples.
    Numeric = 3,
    /// A string argument was not valid UTF-8.
    Utf8 = 4,
    /// A panic was caught at the boundary.
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean: String = message
        .chars()
        .map(|c| if c == '\0' { ' ' } else { c })
        .collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).unwrap_or_default();
    });
}

fn guard(f: impl FnOnce() -> GwidthStatus + UnwindSafe) -> GwidthStatus {
    match catch_unwind(f) {
        Ok(status) => status,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with a non-string payload".into());
            set_error(&format!("panic: {text}"));
            GwidthStatus::Panic
        }
    }
}

fn moser_status(e: &MoserError) -> GwidthStatus {
    match e {
        MoserError::InvalidForm(_) | MoserError::InvalidGrid(_) | MoserError::InvalidTime(_) => {
            GwidthStatus::InvalidArgument
        }
        MoserError::Domain { .. } => GwidthStatus::Domain,
        MoserError::DegenerateGradient { .. }
        | MoserError::SingularSolve { .. }
        | MoserError::NonFinite { .. }
        | MoserError::Sampling { .. } => GwidthStatus::Numeric,
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one `*mut c_char`.
unsafe fn write_out_string(out: *mut *mut c_char, text: String) -> GwidthStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            GwidthStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            GwidthStatus::Numeric
        }
    }
}

/// # Safety
/// `parts` must point to `len` readable u32 values when `len > 0`.
unsafe fn partition_from_raw(parts: *const u32, len: usize) -> Result<Partition, GwidthStatus> {
    if len > 0 && parts.is_null() {
        set_error("partition pointer is null");
        return Err(GwidthStatus::InvalidArgument);
    }
    if len > MAX_PARTS {
        set_error("partition has too many parts");
        return Err(GwidthStatus::InvalidArgument);
    }
    let slice: &[u32] = if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(parts, len)
    };
    Partition::new(slice.to_vec()).map_err(|e| {
        set_error(&e.to_string());
        GwidthStatus::InvalidArgument
    })
}

/// Toolkit version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn gwidth_version() -> *const c_char {
    const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message for the most recent failure on the calling thread (empty string
/// if none). Valid until the next failure on this thread. Do not free.
#[no_mangle]
pub extern "C" fn gwidth_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through an out-parameter. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library through a
/// string out-parameter, or null, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gwidth_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Certified lower and upper Gromov-width bounds for Gr(k,n), as the
/// certificate JSON document (bounds, fixed-point weights, and the checked
/// hypotheses). Requires 0 < k < n <= 8.
///
/// # Safety
/// `out_json` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gwidth_width_certificate_json(
    k: u32,
    n: u32,
    out_json: *mut *mut c_char,
) -> GwidthStatus {
    if out_json.is_null() {
        set_error("out_json is null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        if n > 8 {
            set_error("n must be at most 8");
            return GwidthStatus::InvalidArgument;
        }
        let ctx = match BoxContext::new(k, n) {
            Ok(ctx) => ctx,
            Err(e) => {
                set_error(&e.to_string());
                return GwidthStatus::InvalidArgument;
            }
        };
        match grassmannian_width_certificate(ctx) {
            Ok(cert) => {
                let value = serde_json::to_value(&cert).expect("certificate serializes");
                write_out_string(out_json, value.to_string())
            }
            Err(e) => {
                set_error(&e.to_string());
                GwidthStatus::Numeric
            }
        }
    }))
}

/// Genus-zero three-point Gromov-Witten invariant of Gr(k,n) at degree `d`,
/// as a JSON document with the invariant (a decimal string) and the
/// degree-condition weight counts. Partitions are part arrays with
/// `len = 0` meaning the empty partition; classes must fit the k x (n-k)
/// box.
///
/// # Safety
/// Partition pointers must each address `len` readable u32 values when the
/// corresponding `len > 0`; `out_json` must be valid writable storage for
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn gwidth_gw_invariant_json(
    k: u32,
    n: u32,
    a: *const u32,
    a_len: usize,
    b: *const u32,
    b_len: usize,
    c: *const u32,
    c_len: usize,
    d: u64,
    out_json: *mut *mut c_char,
) -> GwidthStatus {
    if out_json.is_null() {
        set_error("out_json is null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let ctx = match BoxContext::new(k, n) {
            Ok(ctx) => ctx,
            Err(e) => {
                set_error(&e.to_string());
                return GwidthStatus::InvalidArgument;
            }
        };
        let (pa, pb, pc) = match (
            partition_from_raw(a, a_len),
            partition_from_raw(b, b_len),
            partition_from_raw(c, c_len),
        ) {
            (Ok(pa), Ok(pb), Ok(pc)) => (pa, pb, pc),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        match gw_invariant_3pt(&pa, &pb, &pc, d, ctx) {
            Ok(invariant) => {
                let weight_sum = pa.weight() + pb.weight() + pc.weight();
                let required = ctx.dim() + d * u64::from(n);
                let value = serde_json::json!({
                    "invariant": invariant.to_string(),
                    "weight_sum": weight_sum,
                    "required_weight": required,
                });
                write_out_string(out_json, value.to_string())
            }
            Err(e) => {
                set_error(&e.to_string());
                GwidthStatus::InvalidArgument
            }
        }
    }))
}

/// Quantum product expansion sigma_a * sigma_b in QH*(Gr(k,n)), as a JSON
/// term dump ordered by (degree, partition).
///
/// # Safety
/// Same contract as [`gwidth_gw_invariant_json`] for the partition and out
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn gwidth_quantum_product_json(
    k: u32,
    n: u32,
    a: *const u32,
    a_len: usize,
    b: *const u32,
    b_len: usize,
    out_json: *mut *mut c_char,
) -> GwidthStatus {
    if out_json.is_null() {
        set_error("out_json is null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let ctx = match BoxContext::new(k, n) {
            Ok(ctx) => ctx,
            Err(e) => {
                set_error(&e.to_string());
                return GwidthStatus::InvalidArgument;
            }
        };
        let (pa, pb) = match (partition_from_raw(a, a_len), partition_from_raw(b, b_len)) {
            (Ok(pa), Ok(pb)) => (pa, pb),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match quantum_product(&pa, &pb, ctx) {
            Ok(product) => write_out_string(out_json, quantum_product_value(&product).to_string()),
            Err(e) => {
                set_error(&e.to_string());
                GwidthStatus::InvalidArgument
            }
        }
    }))
}

/// Validates a Delzant polytope and reports per-vertex capacities and the
/// packing lower bound. `polytope_json` is the same document the CLI reads:
/// `{"dim": d, "facets": [{"normal": [...], "offset": "p/q"}]}`. A polytope
/// failing validation is an invalid argument; the violation (naming the
/// offending vertex) is available from [`gwidth_last_error`].
///
/// # Safety
/// `polytope_json` must be a NUL-terminated string; `out_json` must be
/// valid writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gwidth_toric_bounds_json(
    polytope_json: *const c_char,
    out_json: *mut *mut c_char,
) -> GwidthStatus {
    if polytope_json.is_null() || out_json.is_null() {
        set_error("polytope_json and out_json must be non-null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let text = match CStr::from_ptr(polytope_json).to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(&format!("polytope_json is not UTF-8: {e}"));
                return GwidthStatus::Utf8;
            }
        };
        let polytope: DelzantPolytope = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => {
                set_error(&format!(
                    "invalid polytope at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ));
                return GwidthStatus::InvalidArgument;
            }
        };
        match toric_bounds_value(&polytope) {
            Ok(value) => write_out_string(out_json, value.to_string()),
            Err(e) => {
                set_error(&e.to_string());
                GwidthStatus::InvalidArgument
            }
        }
    }))
}

/// Runs the full invariant suite. Writes whether every check passed and the
/// complete report document (command, inputs, results, named checks,
/// version). The status is OK whenever the suite ran, even with failing
/// checks; consult `out_all_pass`.
///
/// # Safety
/// `out_all_pass` and `out_json` must be valid writable storage for one
/// bool and one pointer respectively.
#[no_mangle]
pub unsafe extern "C" fn gwidth_selftest_json(
    seed: u64,
    tolerance: f64,
    out_all_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> GwidthStatus {
    if out_all_pass.is_null() || out_json.is_null() {
        set_error("out_all_pass and out_json must be non-null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let report = run_selftest(seed, tolerance);
        let all_pass = report.all_pass();
        let status = write_out_string(out_json, report.to_json());
        if status == GwidthStatus::Ok {
            *out_all_pass = all_pass;
        }
        status
    }))
}

/// Symplectic ball embedding built by the Moser flow engine. Opaque;
/// create with [`gwidth_embedding_new`], release with
/// [`gwidth_embedding_free`].
pub struct GwidthEmbedding {
    inner: gwidth::Embedding,
}

/// Builds the embedding for a named chart form at flow horizon `t_final`
/// (nonnegative). Form names are the CLI's: "standard[:m]", "cp1",
/// "radial:gauss[:amp]", "radial:bump[:amp[:lo:hi]]",
/// "annulus[:amp[:lo:hi]]". The form's contract is spot-checked; a form
/// failing it is an invalid argument.
///
/// # Safety
/// `form_name` must be a NUL-terminated string; `out_embedding` must be
/// valid writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gwidth_embedding_new(
    form_name: *const c_char,
    t_final: f64,
    out_embedding: *mut *mut GwidthEmbedding,
) -> GwidthStatus {
    if form_name.is_null() || out_embedding.is_null() {
        set_error("form_name and out_embedding must be non-null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let name = match CStr::from_ptr(form_name).to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(&format!("form_name is not UTF-8: {e}"));
                return GwidthStatus::Utf8;
            }
        };
        let form = match ChartForm::by_name(name) {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return moser_status(&e);
            }
        };
        match construct_embedding(&form, t_final, &IntegrationGrid::default()) {
            Ok(inner) => {
                *out_embedding = Box::into_raw(Box::new(GwidthEmbedding { inner }));
                GwidthStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                moser_status(&e)
            }
        }
    }))
}

/// Real dimension of the embedding's chart (the length expected by
/// evaluate). Zero for a null handle.
///
/// # Safety
/// `embedding` must be null or a live handle from
/// [`gwidth_embedding_new`].
#[no_mangle]
pub unsafe extern "C" fn gwidth_embedding_dim(embedding: *const GwidthEmbedding) -> usize {
    if embedding.is_null() {
        return 0;
    }
    (*embedding).inner.dim()
}

/// Evaluates the embedding at a chart point. `point` and `out_point` are
/// arrays of length `len`, which must equal the embedding dimension. Points
/// outside the admissible sublevel set of the moment map yield
/// `GWIDTH_STATUS_DOMAIN`.
///
/// # Safety
/// `embedding` must be a live handle; `point` must address `len` readable
/// doubles and `out_point` `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gwidth_embedding_evaluate(
    embedding: *const GwidthEmbedding,
    point: *const f64,
    len: usize,
    out_point: *mut f64,
) -> GwidthStatus {
    if embedding.is_null() || point.is_null() || out_point.is_null() {
        set_error("embedding, point, and out_point must be non-null");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let emb = &(*embedding).inner;
        if len != emb.dim() {
            set_error(&format!(
                "point length {len} does not match the embedding dimension {}",
                emb.dim()
            ));
            return GwidthStatus::InvalidArgument;
        }
        let x = DVector::from_column_slice(std::slice::from_raw_parts(point, len));
        match emb.evaluate(&x) {
            Ok(y) => {
                std::ptr::copy_nonoverlapping(y.as_slice().as_ptr(), out_point, len);
                GwidthStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                moser_status(&e)
            }
        }
    }))
}

/// Draws `samples` seeded points from the admissible region and writes the
/// worst pullback residual of the embedding over them (the verification the
/// CLI's moser subcommand runs).
///
/// # Safety
/// `embedding` must be a live handle; `out_residual` must be valid
/// writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn gwidth_embedding_residual(
    embedding: *const GwidthEmbedding,
    seed: u64,
    samples: usize,
    out_residual: *mut f64,
) -> GwidthStatus {
    if embedding.is_null() || out_residual.is_null() {
        set_error("embedding and out_residual must be non-null");
        return GwidthStatus::InvalidArgument;
    }
    if samples == 0 {
        set_error("need at least one sample");
        return GwidthStatus::InvalidArgument;
    }
    guard(AssertUnwindSafe(|| {
        let emb = &(*embedding).inner;
        let points = match sample_admissible(emb, seed, samples) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return moser_status(&e);
            }
        };
        match verify_pullback(|x| emb.evaluate(x), emb.form(), &points, FD_STEP) {
            Ok(residual) => {
                *out_residual = residual;
                GwidthStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                moser_status(&e)
            }
        }
    }))
}

/// Releases an embedding handle. Null is a no-op.
///
/// # Safety
/// `embedding` must be null or a live handle from
/// [`gwidth_embedding_new`], and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gwidth_embedding_free(embedding: *mut GwidthEmbedding) {
    if !embedding.is_null() {
        drop(Box::from_raw(embedding));
    }
}
