//! C ABI over `akq-core`.
//!
//! Every fallible call returns an [`AkqStatus`]; on failure a message is
//! available from [`akq_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Angles are radians.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use akq_core::entanglement::entanglement_entropy;
use akq_core::error::Error;
use akq_core::interaction::{uncertainty_report, Sign, Theta};
use akq_core::operator::C64;
use akq_core::random::{random_qubit_state, rng_from_seed, SimRng};
use akq_core::state::StateVector;
use akq_core::swap::{run_swap, SwapInput};
use akq_core::teleport::{branch_decomposition, imperfection_measure, run_protocol_recycling, DEFAULT_MAX_ROUNDS};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AkqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Layout = 3,
    ProjectionEmpty = 4,
    Singular = 5,
    DegenerateInput = 6,
    Inconsistency = 7,
    /// The protocol hit its round limit without a first beam.
    Exhausted = 8,
    Panic = 99,
}

/// Which maximally entangling angle to use.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AkqSign {
    Plus = 0,
    Minus = 1,
}

impl From<AkqSign> for Sign {
    fn from(s: AkqSign) -> Sign {
        match s {
            AkqSign::Plus => Sign::Plus,
            AkqSign::Minus => Sign::Minus,
        }
    }
}

/// A normalized single-qubit state.
pub struct AkqState {
    inner: StateVector,
}

/// Seeded Monte-Carlo driver for teleportation and swapping.
pub struct AkqTeleporter {
    rng: SimRng,
    sign: Sign,
    max_rounds: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> AkqStatus {
    match err {
        Error::Layout(_) => AkqStatus::Layout,
        Error::Contract(_) => AkqStatus::InvalidArgument,
        Error::ProjectionEmpty { .. } => AkqStatus::ProjectionEmpty,
        Error::SingularScaling { .. } => AkqStatus::Singular,
        Error::DegenerateInput { .. } => AkqStatus::DegenerateInput,
        Error::Inconsistency(_) => AkqStatus::Inconsistency,
    }
}

struct Failure(AkqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(AkqStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> AkqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AkqStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AkqStatus::Panic
        }
    }
}

fn theta(radians: f64) -> Result<Theta, Failure> {
    Ok(Theta::new(radians)?)
}

unsafe fn state_ref<'a>(p: *const AkqState, what: &str) -> Result<&'a StateVector, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn boxed_state(s: StateVector) -> *mut AkqState {
    Box::into_raw(Box::new(AkqState { inner: s }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn akq_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Message for the most recent failure on this thread, or NULL.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn akq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds `a|0⟩ + b|1⟩`, normalizing the input.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn akq_state_new(re0: f64, im0: f64, re1: f64, im1: f64, out: *mut *mut AkqState) -> AkqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = StateVector::normalized(1, vec![C64::new(re0, im0), C64::new(re1, im1)])?;
        *out = boxed_state(s);
        Ok(())
    })
}

/// Draws a Haar-random qubit from a seeded generator.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn akq_state_random(seed: u64, out: *mut *mut AkqState) -> AkqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed_state(random_qubit_state(&mut rng_from_seed(seed)));
        Ok(())
    })
}

/// # Safety
/// `state` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn akq_state_free(state: *mut AkqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Writes the two amplitudes as `re[0] + i·im[0]`, `re[1] + i·im[1]`.
///
/// # Safety
/// `re` and `im` must each point to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn akq_state_amplitudes(state: *const AkqState, re: *mut f64, im: *mut f64) -> AkqStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        for k in 0..2 {
            let a = s.amplitude(k);
            *re.add(k) = a.re;
            *im.add(k) = a.im;
        }
        Ok(())
    })
}

/// Von Neumann entropy (nats) of the system qubit after the interaction.
///
/// # Safety
/// `state` must be a live handle and `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn akq_entropy(state: *const AkqState, theta_rad: f64, out: *mut f64) -> AkqStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        let out = out_ref(out, "out")?;
        *out = entanglement_entropy(s, theta(theta_rad)?)?.entropy_nats;
        Ok(())
    })
}

/// Probabilities of the three meter beams.
///
/// # Safety
/// `state` must be a live handle and `out` must point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn akq_branch_probabilities(state: *const AkqState, theta_rad: f64, out: *mut f64) -> AkqStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = branch_decomposition(s, theta(theta_rad)?)?;
        for (k, p) in d.probabilities.iter().enumerate() {
            *out.add(k) = *p;
        }
        Ok(())
    })
}

/// `1 − (4/3) sin²θ`; NaN for a non-finite angle.
#[no_mangle]
pub extern "C" fn akq_imperfection(theta_rad: f64) -> f64 {
    Theta::new(theta_rad).map_or(f64::NAN, imperfection_measure)
}

/// Per-axis excess tracking noise (three doubles) and the total tracking noise.
/// Fails with `AKQ_STATUS_SINGULAR` where `sin 2θ` vanishes.
///
/// # Safety
/// `state` must be a live handle, `excess` three writable doubles, `total` one.
#[no_mangle]
pub unsafe extern "C" fn akq_uncertainty(
    state: *const AkqState,
    theta_rad: f64,
    excess: *mut f64,
    total: *mut f64,
) -> AkqStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if excess.is_null() {
            return Err(null("excess"));
        }
        let total = out_ref(total, "total")?;
        let r = uncertainty_report(s, theta(theta_rad)?)?;
        for (k, d) in r.differences().iter().enumerate() {
            *excess.add(k) = *d;
        }
        *total = r.tracking_sum();
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn akq_teleporter_new(seed: u64, sign: AkqSign, out: *mut *mut AkqTeleporter) -> AkqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let t = AkqTeleporter { rng: rng_from_seed(seed), sign: sign.into(), max_rounds: DEFAULT_MAX_ROUNDS };
        *out = Box::into_raw(Box::new(t));
        Ok(())
    })
}

/// # Safety
/// `teleporter` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn akq_teleporter_free(teleporter: *mut AkqTeleporter) {
    if !teleporter.is_null() {
        drop(Box::from_raw(teleporter));
    }
}

/// Teleports `input` onto the carrier qubit, recycling failed rounds.
///
/// `output` may be NULL; otherwise it receives a new handle for the carrier
/// state, owned by the caller.
///
/// # Safety
/// Handles must be live; `rounds` and `fidelity` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akq_teleport(
    teleporter: *mut AkqTeleporter,
    input: *const AkqState,
    rounds: *mut u32,
    fidelity: *mut f64,
    output: *mut *mut AkqState,
) -> AkqStatus {
    guard(|| {
        let tp = out_ref(teleporter, "teleporter")?;
        let psi = state_ref(input, "input")?;
        let rounds = out_ref(rounds, "rounds")?;
        let fidelity = out_ref(fidelity, "fidelity")?;
        let outcome = run_protocol_recycling(psi, tp.sign, &mut tp.rng, tp.max_rounds)?;
        *rounds = u32::try_from(outcome.rounds_used).unwrap_or(u32::MAX);
        match (outcome.carrier_state, outcome.fidelity_vs_input) {
            (Some(state), Some(f)) => {
                *fidelity = f;
                if let Some(slot) = output.as_mut() {
                    *slot = boxed_state(state);
                }
                Ok(())
            }
            _ => Err(Failure(AkqStatus::Exhausted, format!("no first beam in {} rounds", tp.max_rounds))),
        }
    })
}

/// Swaps `(phi1 ⊗ psi1 + phi2 ⊗ psi2)` from `R–P` onto `R–A2`.
///
/// Reports the fidelity of the final `R–A2` pair with the input pair and the
/// `R` entropies before and after.
///
/// # Safety
/// Handles must be live; `rounds`, `fidelity`, `entropy_in` and `entropy_out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn akq_swap(
    teleporter: *mut AkqTeleporter,
    phi1: *const AkqState,
    psi1: *const AkqState,
    phi2: *const AkqState,
    psi2: *const AkqState,
    rounds: *mut u32,
    fidelity: *mut f64,
    entropy_in: *mut f64,
    entropy_out: *mut f64,
) -> AkqStatus {
    guard(|| {
        let tp = out_ref(teleporter, "teleporter")?;
        let pair = |p: *const AkqState, what: &str| -> Result<[C64; 2], Failure> {
            let s = state_ref(p, what)?;
            Ok([s.amplitude(0), s.amplitude(1)])
        };
        let input = SwapInput {
            phi1: pair(phi1, "phi1")?,
            psi1: pair(psi1, "psi1")?,
            phi2: pair(phi2, "phi2")?,
            psi2: pair(psi2, "psi2")?,
        };
        let rounds = out_ref(rounds, "rounds")?;
        let fidelity = out_ref(fidelity, "fidelity")?;
        let entropy_in = out_ref(entropy_in, "entropy_in")?;
        let entropy_out = out_ref(entropy_out, "entropy_out")?;
        let outcome = run_swap(&input, tp.sign, &mut tp.rng)?;
        *rounds = u32::try_from(outcome.path.len()).unwrap_or(u32::MAX);
        *entropy_in = outcome.input_r_entropy;
        match (outcome.fidelity_vs_target, outcome.output_r_entropy) {
            (Some(f), Some(e)) => {
                *fidelity = f;
                *entropy_out = e;
                Ok(())
            }
            _ => Err(Failure(AkqStatus::Exhausted, "no first beam within the round limit".into())),
        }
    })
}
