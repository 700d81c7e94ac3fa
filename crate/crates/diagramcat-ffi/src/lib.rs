//! C ABI over `diagramcat`.
//!
//! Partitions and sandwich contexts are opaque handles owned by the caller
//! and released with the matching `_free` function. Every fallible call
//! returns a [`DcStatus`]; the message for the most recent failure on the
//! calling thread is available from [`dc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diagramcat::cli::{analyze_report, parse_specs, CliError};
use diagramcat::diagrams::{CategoryTag, DiagramError, Partition};
use diagramcat::homsets::HomSetError;
use diagramcat::numbers;
use diagramcat::sandwich::{SandwichContext, SandwichError};
use diagramcat::semigroups::SemigroupError;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidPartition = 4,
    ShapeMismatch = 5,
    NotInCategory = 6,
    BoundExceeded = 7,
    NotRegular = 8,
    Overflow = 9,
    InvalidArgument = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcTag {
    P = 0,
    Pb = 1,
    B = 2,
    Pp = 3,
    M = 4,
    Tl = 5,
}

impl From<DcTag> for CategoryTag {
    fn from(t: DcTag) -> Self {
        match t {
            DcTag::P => CategoryTag::P,
            DcTag::Pb => CategoryTag::PB,
            DcTag::B => CategoryTag::B,
            DcTag::Pp => CategoryTag::PP,
            DcTag::M => CategoryTag::M,
            DcTag::Tl => CategoryTag::TL,
        }
    }
}

/// Opaque partition handle.
pub struct DcPartition(Partition);

/// Opaque sandwich semigroup handle.
pub struct DcContext(SandwichContext);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(DcStatus, String);

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let status = match e {
            DiagramError::Parse { .. } => DcStatus::Parse,
            DiagramError::ShapeMismatch { .. } => DcStatus::ShapeMismatch,
            DiagramError::TooLarge(_) => DcStatus::BoundExceeded,
            _ => DcStatus::InvalidPartition,
        };
        Failure(status, e.to_string())
    }
}

impl From<SandwichError> for Failure {
    fn from(e: SandwichError) -> Self {
        let status = match &e {
            SandwichError::NotInCategory(_) => DcStatus::NotInCategory,
            SandwichError::Shape { .. } => DcStatus::ShapeMismatch,
            SandwichError::NotRegularElement => DcStatus::NotRegular,
            SandwichError::RankNotAdmissible(_) => DcStatus::InvalidArgument,
            SandwichError::HomSet(HomSetError::BoundExceeded { .. }) => DcStatus::BoundExceeded,
            SandwichError::Semigroup(SemigroupError::BoundExceeded { .. }) => DcStatus::BoundExceeded,
            SandwichError::Semigroup(_) => DcStatus::InvalidArgument,
            SandwichError::Diagram(d) => return Failure::from(d.clone()),
        };
        Failure(status, e.to_string())
    }
}

impl From<HomSetError> for Failure {
    fn from(e: HomSetError) -> Self {
        Failure(DcStatus::BoundExceeded, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, recording failures and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(DcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(DcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(DcStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(DcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse the text form `m n | block | …`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_parse(text: *const c_char, out: *mut *mut DcPartition) -> DcStatus {
    guard(|| {
        let p: Partition = read_str(text)?.parse()?;
        write_out(out, Box::into_raw(Box::new(DcPartition(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not already freed.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_free(p: *mut DcPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Text form of `p`; release with [`dc_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_to_text(p: *const DcPartition, out: *mut *mut c_char) -> DcStatus {
    guard(|| write_out(out, owned_string(deref(p)?.0.to_text())))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p` must be a live handle; `m` and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_shape(p: *const DcPartition, m: *mut usize, n: *mut usize) -> DcStatus {
    guard(|| {
        let p = &deref(p)?.0;
        write_out(m, p.upper_size())?;
        write_out(n, p.lower_size())
    })
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_rank(p: *const DcPartition, out: *mut usize) -> DcStatus {
    guard(|| write_out(out, deref(p)?.0.rank()))
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_in_category(p: *const DcPartition, tag: DcTag, out: *mut bool) -> DcStatus {
    guard(|| write_out(out, deref(p)?.0.in_category(tag.into())))
}

/// `a·b`, floating components discarded.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_compose(
    a: *const DcPartition,
    b: *const DcPartition,
    out: *mut *mut DcPartition,
) -> DcStatus {
    guard(|| {
        let ab = deref(a)?.0.compose(&deref(b)?.0)?;
        write_out(out, Box::into_raw(Box::new(DcPartition(ab))))
    })
}

/// `α*`, the up-down reflection.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_partition_involution(p: *const DcPartition, out: *mut *mut DcPartition) -> DcStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(DcPartition(deref(p)?.0.involution())))))
}

/// `|K_mn|` by formula; `Overflow` if it does not fit in 64 bits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_homset_size(tag: DcTag, m: usize, n: usize, out: *mut u64) -> DcStatus {
    guard(|| {
        let size = numbers::homset_cardinality(tag.into(), m, n);
        let v = size.to_u64().ok_or_else(|| Failure(DcStatus::Overflow, format!("|K_mn| = {size}")))?;
        write_out(out, v)
    })
}

/// The sandwich semigroup on `K_mn` with `σ ∈ K_nm`. `sigma` stays owned by the caller.
///
/// # Safety
/// `sigma` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_context_new(
    tag: DcTag,
    m: usize,
    n: usize,
    sigma: *const DcPartition,
    out: *mut *mut DcContext,
) -> DcStatus {
    guard(|| {
        let ctx = SandwichContext::new(tag.into(), m, n, deref(sigma)?.0.clone())?;
        write_out(out, Box::into_raw(Box::new(DcContext(ctx))))
    })
}

/// # Safety
/// `ctx` must be null or a handle from this library, not already freed.
#[no_mangle]
pub unsafe extern "C" fn dc_context_free(ctx: *mut DcContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `|K_mn|`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_context_size(ctx: *const DcContext, out: *mut usize) -> DcStatus {
    guard(|| write_out(out, deref(ctx)?.0.len()))
}

/// `|Reg(K_mn^σ)|`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_context_regular_size(ctx: *const DcContext, out: *mut usize) -> DcStatus {
    guard(|| write_out(out, deref(ctx)?.0.regular_elements().len()))
}

/// `|E(K_mn^σ)|`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_context_idempotent_count(ctx: *const DcContext, out: *mut usize) -> DcStatus {
    guard(|| write_out(out, deref(ctx)?.0.idempotents().len()))
}

/// `α ⋆ β = ασβ`.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_context_star(
    ctx: *const DcContext,
    a: *const DcPartition,
    b: *const DcPartition,
    out: *mut *mut DcPartition,
) -> DcStatus {
    guard(|| {
        let p = deref(ctx)?.0.star(&deref(a)?.0, &deref(b)?.0)?;
        write_out(out, Box::into_raw(Box::new(DcPartition(p))))
    })
}

/// The JSON analysis report for a single context spec; release with [`dc_string_free`].
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_analyze_json(spec: *const c_char, out: *mut *mut c_char) -> DcStatus {
    guard(|| {
        let cli = |e: CliError| match e {
            CliError::Usage(m) | CliError::Failed(m) => Failure(DcStatus::Parse, m),
            CliError::ClosedPipe => Failure(DcStatus::InvalidArgument, "closed pipe".into()),
        };
        let specs = parse_specs(read_str(spec)?).map_err(cli)?;
        let [spec] = specs.as_slice() else {
            return Err(Failure(DcStatus::InvalidArgument, "expected exactly one context spec".into()));
        };
        let contexts = spec.contexts().map_err(cli)?;
        let [ctx] = contexts.as_slice() else {
            return Err(Failure(DcStatus::InvalidArgument, "spec names more than one context".into()));
        };
        let report = analyze_report(ctx, &spec.options)?;
        write_out(out, owned_string(report.to_string()))
    })
}
