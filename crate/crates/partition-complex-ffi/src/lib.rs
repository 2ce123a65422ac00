//! C interface to `partition-complex`.
//!
//! Results come back as opaque `PcxBettiTable` handles that the caller
//! releases with `pcx_table_free`. Every fallible call returns a `PcxStatus`;
//! on failure `pcx_last_error` describes the most recent error raised on the
//! calling thread. Fields are passed as a characteristic: 0 for the
//! rationals, a prime `p` for `F_p`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::{Arc, OnceLock};

use partition_complex::error::Error;
use partition_complex::homology::{betti_numbers_over, BettiTable, Field};
use partition_complex::lyndon::witt_count;
use partition_complex::poset_core::{FiniteLattice, GroupAction};
use partition_complex::predictions::{
    computed_quotient_betti_fields, model_betti, predicted_atom_betti, predicted_quotient_betti,
    wedge_of_spheres_classifier,
};
use partition_complex::simplicial::{
    atom_model, nerve_model, orbit_chain_complex_with, ChainBasis, NerveEnds, CODE_VERSION, DEFAULT_CHAIN_BOUND,
};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcxStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// Malformed input, including invalid UTF-8 and non-prime characteristics.
    Argument = 2,
    /// A hypothesis of the requested computation does not hold.
    Precondition = 3,
    /// The computation would exceed its size bound.
    Resource = 4,
    /// An internal consistency check failed.
    Invariant = 5,
    /// A value does not fit the output type.
    Overflow = 6,
    /// The library panicked; the handle arguments are unchanged.
    Panic = 7,
}

/// A table of Betti numbers over one field, indexed by degree.
pub struct PcxBettiTable {
    table: BettiTable,
    entries: Vec<(i64, u64)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PcxStatus, message: impl Into<String>) -> PcxStatus {
    set_error(message.into());
    status
}

fn status_of(e: &Error) -> PcxStatus {
    match e {
        Error::Argument(_) => PcxStatus::Argument,
        Error::Precondition(_) => PcxStatus::Precondition,
        Error::Resource { .. } => PcxStatus::Resource,
        Error::Invariant(_) => PcxStatus::Invariant,
    }
}

/// Runs `body`, converting library errors and panics into a status.
fn guarded(body: impl FnOnce() -> Result<(), (PcxStatus, String)>) -> PcxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PcxStatus::Ok,
        Ok(Err((status, message))) => fail(status, message),
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(PcxStatus::Panic, message)
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, (PcxStatus, String)>;
}

impl<T> OrStatus<T> for partition_complex::error::Result<T> {
    fn or_status(self) -> Result<T, (PcxStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn field_of(characteristic: u64) -> Result<Field, (PcxStatus, String)> {
    if characteristic == 0 {
        Ok(Field::Rationals)
    } else {
        Field::prime(characteristic).or_status()
    }
}

/// # Safety
/// `parts` must point to `len` readable values, or be null with `len == 0`.
unsafe fn composition<'a>(parts: *const usize, len: usize) -> Result<&'a [usize], (PcxStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if parts.is_null() {
        return Err((PcxStatus::NullPointer, "composition pointer is null".into()));
    }
    Ok(slice::from_raw_parts(parts, len))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn emit(out: *mut *mut PcxBettiTable, table: BettiTable) -> Result<(), (PcxStatus, String)> {
    if out.is_null() {
        return Err((PcxStatus::NullPointer, "output pointer is null".into()));
    }
    let entries = table.betti.iter().map(|(&d, &r)| (d, r)).collect();
    *out = Box::into_raw(Box::new(PcxBettiTable { table, entries }));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The string
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pcx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Version string of the library and its chain-complex code.
#[no_mangle]
pub extern "C" fn pcx_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(format!("{}+{}", env!("CARGO_PKG_VERSION"), CODE_VERSION)).expect("no nul"))
        .as_ptr()
}

/// Reduced Betti numbers of `|Π_n|`, or of `|Π_n|/G` when `generators` is
/// non-null. `generators` holds `generator_count` NUL-terminated strings in
/// cycle notation such as `"(1 2)(3 4)"`.
///
/// # Safety
/// `generators` must be null or point to `generator_count` valid C strings;
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pcx_partition_betti(
    n: usize,
    generators: *const *const c_char,
    generator_count: usize,
    characteristic: u64,
    out: *mut *mut PcxBettiTable,
) -> PcxStatus {
    guarded(|| {
        let field = field_of(characteristic)?;
        let lattice = Arc::new(FiniteLattice::partition_lattice(n).or_status()?);
        let mut model = nerve_model(lattice, NerveEnds::Open);
        if !generators.is_null() && generator_count > 0 {
            let mut gens = Vec::with_capacity(generator_count);
            for &g in slice::from_raw_parts(generators, generator_count) {
                if g.is_null() {
                    return Err((PcxStatus::NullPointer, "generator string is null".into()));
                }
                let s = CStr::from_ptr(g)
                    .to_str()
                    .map_err(|e| (PcxStatus::Argument, format!("generator is not UTF-8: {e}")))?;
                gens.push(s);
            }
            model = model
                .with_group(&GroupAction::parse(n, &gens).or_status()?)
                .or_status()?;
        }
        let complex = orbit_chain_complex_with(&model, Field::Rationals, ChainBasis::FactorTensor, DEFAULT_CHAIN_BOUND)
            .or_status()?;
        emit(out, betti_numbers_over(&complex, field))
    })
}

/// Reduced Betti numbers of `|Π_n|/(Σ_{n_1} × … × Σ_{n_k})`, computed from
/// the simplicial model.
///
/// # Safety
/// `parts` must point to `len` values; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pcx_quotient_betti(
    parts: *const usize,
    len: usize,
    characteristic: u64,
    out: *mut *mut PcxBettiTable,
) -> PcxStatus {
    guarded(|| {
        let field = field_of(characteristic)?;
        let mut tables =
            computed_quotient_betti_fields(composition(parts, len)?, &[field], DEFAULT_CHAIN_BOUND).or_status()?;
        emit(out, tables.remove(0))
    })
}

/// Betti numbers of the same quotient predicted from the closed-form basis.
///
/// # Safety
/// `parts` must point to `len` values; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pcx_predicted_quotient_betti(
    parts: *const usize,
    len: usize,
    characteristic: u64,
    out: *mut *mut PcxBettiTable,
) -> PcxStatus {
    guarded(|| {
        let field = field_of(characteristic)?;
        emit(
            out,
            predicted_quotient_betti(composition(parts, len)?, field).or_status()?,
        )
    })
}

/// Reduced Betti numbers of the atom `Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}`;
/// `predicted` selects the closed form instead of the simplicial model.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pcx_atom_betti(
    n: usize,
    ell: usize,
    characteristic: u64,
    predicted: bool,
    out: *mut *mut PcxBettiTable,
) -> PcxStatus {
    guarded(|| {
        let field = field_of(characteristic)?;
        let table = if predicted {
            predicted_atom_betti(field, ell, n)
        } else {
            atom_model(n, ell).and_then(|m| model_betti(&m, field, DEFAULT_CHAIN_BOUND))
        };
        emit(out, table.or_status()?)
    })
}

/// Number of Lyndon words with the given letter multiplicities.
///
/// # Safety
/// `parts` must point to `len` values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pcx_witt_count(parts: *const usize, len: usize, out: *mut u64) -> PcxStatus {
    guarded(|| {
        let count = witt_count(composition(parts, len)?);
        let count = u64::try_from(count).map_err(|_| (PcxStatus::Overflow, format!("{count} exceeds 64 bits")))?;
        if out.is_null() {
            return Err((PcxStatus::NullPointer, "output pointer is null".into()));
        }
        *out = count;
        Ok(())
    })
}

/// Whether the quotient for this composition is a wedge of spheres.
///
/// # Safety
/// `parts` must point to `len` values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pcx_quotient_is_wedge(parts: *const usize, len: usize, out: *mut bool) -> PcxStatus {
    guarded(|| {
        let verdict = wedge_of_spheres_classifier(composition(parts, len)?).or_status()?;
        if out.is_null() {
            return Err((PcxStatus::NullPointer, "output pointer is null".into()));
        }
        *out = verdict.wedge;
        Ok(())
    })
}

/// Number of degrees with nonzero rank; 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_len(table: *const PcxBettiTable) -> usize {
    table.as_ref().map_or(0, |t| t.entries.len())
}

/// The `index`-th nonzero entry in increasing degree.
///
/// # Safety
/// `table` must be a live handle; `degree` and `rank` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_entry(
    table: *const PcxBettiTable,
    index: usize,
    degree: *mut i64,
    rank: *mut u64,
) -> PcxStatus {
    let (Some(t), false, false) = (table.as_ref(), degree.is_null(), rank.is_null()) else {
        return fail(PcxStatus::NullPointer, "table or output pointer is null");
    };
    let Some(&(d, r)) = t.entries.get(index) else {
        return fail(
            PcxStatus::Argument,
            format!("index {index} out of range for {} entries", t.entries.len()),
        );
    };
    *degree = d;
    *rank = r;
    PcxStatus::Ok
}

/// Rank in `degree`, 0 when absent or for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_rank(table: *const PcxBettiTable, degree: i64) -> u64 {
    table.as_ref().map_or(0, |t| t.table.get(degree))
}

/// Characteristic of the table's field, 0 for the rationals.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_characteristic(table: *const PcxBettiTable) -> u64 {
    table.as_ref().map_or(0, |t| t.table.field.characteristic())
}

/// Whether two tables have the same field and ranks.
///
/// # Safety
/// Both arguments must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_equal(a: *const PcxBettiTable, b: *const PcxBettiTable) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.table.field == b.table.field && a.table.betti == b.table.betti,
        _ => false,
    }
}

/// The table as JSON, to be released with `pcx_string_free`; null on error.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_to_json(table: *const PcxBettiTable) -> *mut c_char {
    let Some(t) = table.as_ref() else {
        fail(PcxStatus::NullPointer, "table is null");
        return ptr::null_mut();
    };
    match serde_json::to_string(&t.table) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            fail(PcxStatus::Invariant, e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from `pcx_table_to_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a table handle. Null is ignored.
///
/// # Safety
/// `table` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcx_table_free(table: *mut PcxBettiTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
