// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for the qdatabus simulator.
//!
//! Conventions:
//! - Every fallible function returns a [`QdbStatus`]; results are written
//!   through out-pointers only on success.
//! - Handles (`QdbChain`, `QdbState`) are opaque, created by `*_new`/factory
//!   functions and released with the matching `*_free`. Passing NULL to a
//!   `*_free` function is a no-op.
//! - On failure a human-readable message is stored per thread and can be
//!   read with [`qdb_last_error_message`].
//! - Panics never cross the boundary; they are reported as `QDB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qdatabus::chain::{ChainSpec, Disorder, Probe};
use qdatabus::effective::three_probe_coefficients;
use qdatabus::experiments::TransferProblem;
use qdatabus::gaussian::{
    evolve, pair_log_negativity, two_mode_squeezed_with_labels, ChainDynamics, CovarianceState, LogBase,
};
use qdatabus::Error;

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdbStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Inputs were rejected (bad chain, label, size, non-UTF-8 string, ...).
    InvalidArgument = 2,
    /// The computation failed numerically (e.g. an unphysical state).
    Numerical = 3,
    /// The caller's buffer is too small; nothing was written.
    BufferTooSmall = 4,
    /// A panic was caught at the boundary.
    Panic = 5,
}

/// Values accepted by the `model` argument of `qdb_chain_set_disorder`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdbDisorderModel {
    /// Relative perturbation of every ring bond.
    Bond = 0,
    /// Additive perturbation of every ring on-site term.
    Site = 1,
}

/// Values accepted by the `base` argument of `qdb_state_pair_log_negativity`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdbLogBase {
    Natural = 0,
    Two = 1,
}

/// Opaque chain description: ring, probes, spectator and disorder.
pub struct QdbChain {
    spec: ChainSpec,
}

/// Opaque Gaussian state (covariance matrix) over the modes of a chain.
pub struct QdbState {
    state: CovarianceState,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(QdbStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = if err.is_numerical() {
            QdbStatus::Numerical
        } else {
            QdbStatus::InvalidArgument
        };
        Failure(status, err.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(QdbStatus::NullPointer, format!("`{name}` is NULL"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F>(body: F) -> QdbStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            QdbStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {message}"));
            QdbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(QdbStatus::InvalidArgument, format!("`{name}` is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(name))
}

unsafe fn mut_arg<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(ptr: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(null(name));
    }
    ptr.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qdb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message (NUL-terminated) into
/// `buffer` and returns the number of bytes required including the NUL.
///
/// If `buffer` is NULL or `capacity` is too small, nothing is written and the
/// required size is still returned. An empty message means the last call
/// succeeded.
///
/// # Safety
/// `buffer` must be NULL or valid for `capacity` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn qdb_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let message = e.borrow();
        let needed = message.len() + 1;
        if !buffer.is_null() && capacity >= needed {
            std::ptr::copy_nonoverlapping(message.as_ptr(), buffer.cast::<u8>(), message.len());
            *buffer.add(message.len()) = 0;
        }
        needed
    })
}

/// Creates a ring of `ring_size` oscillators with nearest-neighbour coupling
/// `coupling` and no probes.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_new(ring_size: usize, coupling: f64, out: *mut *mut QdbChain) -> QdbStatus {
    guard(|| {
        let spec = ChainSpec::ring(ring_size, coupling);
        spec.validate()?;
        write_out(out, "out", Box::into_raw(Box::new(QdbChain { spec })))
    })
}

/// Releases a chain. NULL is ignored.
///
/// # Safety
/// `chain` must be NULL or a pointer returned by `qdb_chain_new` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_free(chain: *mut QdbChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Attaches a probe oscillator `label` to ring site `site` (1-based) with
/// coupling `epsilon` and squared-frequency shift `detuning`.
///
/// # Safety
/// `chain` must be a live handle; `label` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_add_probe(
    chain: *mut QdbChain,
    label: *const c_char,
    site: usize,
    epsilon: f64,
    detuning: f64,
) -> QdbStatus {
    guard(|| {
        let chain = mut_arg(chain, "chain")?;
        let label = str_arg(label, "label")?;
        let candidate = chain
            .spec
            .clone()
            .with_probe(Probe::new(label, site, epsilon).detuned(detuning));
        candidate.validate()?;
        chain.spec = candidate;
        Ok(())
    })
}

/// Adds (`enabled != 0`) or removes the decoupled spectator mode.
///
/// # Safety
/// `chain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_set_spectator(chain: *mut QdbChain, enabled: bool) -> QdbStatus {
    guard(|| {
        let chain = mut_arg(chain, "chain")?;
        let mut candidate = chain.spec.clone();
        candidate.include_decoupled_c = enabled;
        candidate.validate()?;
        chain.spec = candidate;
        Ok(())
    })
}

/// Sets seeded ring disorder of width `spread`; `spread = 0` clears it.
/// `model` is one of the `QdbDisorderModel` values.
///
/// # Safety
/// `chain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_set_disorder(chain: *mut QdbChain, model: u32, spread: f64, seed: u64) -> QdbStatus {
    guard(|| {
        let chain = mut_arg(chain, "chain")?;
        let mut candidate = chain.spec.clone();
        candidate.disorder = if spread == 0.0 {
            None
        } else {
            Some(match model {
                m if m == QdbDisorderModel::Bond as u32 => Disorder::bond(spread, seed),
                m if m == QdbDisorderModel::Site as u32 => Disorder::site(spread, seed),
                other => {
                    return Err(Failure(
                        QdbStatus::InvalidArgument,
                        format!("unknown disorder model {other}"),
                    ))
                }
            })
        };
        candidate.validate()?;
        chain.spec = candidate;
        Ok(())
    })
}

/// Number of modes: ring sites, probes and the spectator if present.
///
/// # Safety
/// `chain` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_mode_count(chain: *const QdbChain, out: *mut usize) -> QdbStatus {
    guard(|| {
        let chain = ref_arg(chain, "chain")?;
        write_out(out, "out", chain.spec.mode_count())
    })
}

/// Writes the potential matrix `V` (row-major, `n × n` with `n` the mode
/// count) into `buffer`.
///
/// # Safety
/// `chain` must be a live handle; `buffer` valid for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn qdb_chain_potential(chain: *const QdbChain, buffer: *mut f64, capacity: usize) -> QdbStatus {
    guard(|| {
        let chain = ref_arg(chain, "chain")?;
        let h = chain.spec.build()?;
        let v = h.potential();
        let n = v.nrows();
        if capacity < n * n {
            return Err(Failure(
                QdbStatus::BufferTooSmall,
                format!("potential needs {} doubles, buffer holds {capacity}", n * n),
            ));
        }
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        let out = std::slice::from_raw_parts_mut(buffer, n * n);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = v[(i, j)];
            }
        }
        Ok(())
    })
}

/// Creates the two-mode squeezed vacuum with squeezing `r` between the modes
/// labelled `label_a` and `label_b` of `chain`, all other modes in vacuum.
///
/// # Safety
/// `chain` must be a live handle, labels NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qdb_state_two_mode_squeezed(
    chain: *const QdbChain,
    r: f64,
    label_a: *const c_char,
    label_b: *const c_char,
    out: *mut *mut QdbState,
) -> QdbStatus {
    guard(|| {
        let chain = ref_arg(chain, "chain")?;
        let (a, b) = (str_arg(label_a, "label_a")?, str_arg(label_b, "label_b")?);
        let labels = chain.spec.labels();
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let (i, j) = (find(a)?, find(b)?);
        if i == j {
            return Err(Failure(QdbStatus::InvalidArgument, "squeezed modes must differ".into()));
        }
        let state = two_mode_squeezed_with_labels(r, i, j, labels)?;
        write_out(out, "out", Box::into_raw(Box::new(QdbState { state })))
    })
}

/// Releases a state. NULL is ignored.
///
/// # Safety
/// `state` must be NULL or a live handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qdb_state_free(state: *mut QdbState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Evolves `state` in place for time `t` under the chain's Hamiltonian.
///
/// # Safety
/// Both handles must be live; the state must have the chain's mode count.
#[no_mangle]
pub unsafe extern "C" fn qdb_state_evolve(chain: *const QdbChain, state: *mut QdbState, t: f64) -> QdbStatus {
    guard(|| {
        let chain = ref_arg(chain, "chain")?;
        let state = mut_arg(state, "state")?;
        if !t.is_finite() {
            return Err(Failure(
                QdbStatus::InvalidArgument,
                format!("time must be finite, got {t}"),
            ));
        }
        let h = chain.spec.build()?;
        if h.labels() != state.state.labels() {
            return Err(Failure(
                QdbStatus::InvalidArgument,
                "state and chain have different modes".into(),
            ));
        }
        let s = ChainDynamics::new(&h)?.propagator(t);
        state.state = evolve(&state.state, &s)?;
        Ok(())
    })
}

/// Logarithmic negativity between modes `i` and `j` (0-based) of `state`;
/// `base` is one of the `QdbLogBase` values.
///
/// # Safety
/// `state` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qdb_state_pair_log_negativity(
    state: *const QdbState,
    i: usize,
    j: usize,
    base: u32,
    out: *mut f64,
) -> QdbStatus {
    guard(|| {
        let state = ref_arg(state, "state")?;
        let n = state.state.mode_count();
        if i >= n || j >= n || i == j {
            return Err(Failure(
                QdbStatus::InvalidArgument,
                format!("mode pair ({i}, {j}) invalid for {n} modes"),
            ));
        }
        let base = match base {
            b if b == QdbLogBase::Natural as u32 => LogBase::Natural,
            b if b == QdbLogBase::Two as u32 => LogBase::Two,
            other => return Err(Failure(QdbStatus::InvalidArgument, format!("unknown log base {other}"))),
        };
        write_out(out, "out", pair_log_negativity(&state.state, i, j, base)?)
    })
}

/// Entanglement transfer efficiency at time `t` for a chain with exactly two
/// probes and the spectator: `E_N(receiver : spectator)(t) / E_N(0)`, the
/// sender starting two-mode squeezed (`r`) with the spectator.
///
/// # Safety
/// `chain` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qdb_transfer_efficiency(chain: *const QdbChain, r: f64, t: f64, out: *mut f64) -> QdbStatus {
    guard(|| {
        let chain = ref_arg(chain, "chain")?;
        let problem = TransferProblem::new(&chain.spec, r)?;
        write_out(out, "out", problem.efficiency(t)?)
    })
}

/// Closed-form three-probe amplitudes at scaled time `tau` for a ring of
/// `ring_size`: `[bus, probe a, probe b, probe c]`, real parts in `re` and
/// imaginary parts in `im` (four doubles each).
///
/// # Safety
/// `re` and `im` must each be valid for four writes.
#[no_mangle]
pub unsafe extern "C" fn qdb_three_probe_coefficients(
    ring_size: usize,
    tau: f64,
    re: *mut f64,
    im: *mut f64,
) -> QdbStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null(if re.is_null() { "re" } else { "im" }));
        }
        let coeffs = three_probe_coefficients(ring_size, tau)?.as_array();
        for (k, z) in coeffs.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        LAST_ERROR.with(|e| e.borrow().clone())
    }

    #[test]
    fn panics_become_status_codes() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, QdbStatus::Panic);
        assert_eq!(message(), "panic: boom");
        assert_eq!(guard(|| Ok(())), QdbStatus::Ok);
        assert_eq!(message(), "");
    }

    #[test]
    fn core_errors_map_to_statuses() {
        let status = guard(|| Err(Error::Unphysical("x".into()).into()));
        assert_eq!(status, QdbStatus::Numerical);
        let status = guard(|| Err(Error::UnknownLabel("q".into()).into()));
        assert_eq!(status, QdbStatus::InvalidArgument);
        assert!(message().contains("`q`"));
    }

    #[test]
    fn short_message_buffers_are_left_untouched() {
        set_error("abcdef".into());
        let mut buf = [1 as c_char; 4];
        let needed = unsafe { qdb_last_error_message(buf.as_mut_ptr(), buf.len()) };
        assert_eq!(needed, 7);
        assert_eq!(buf, [1; 4]);
    }
}
