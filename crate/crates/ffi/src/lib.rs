//! C ABI over the `ltlrl` library.
//!
//! Objects cross the boundary as opaque handles created by `*_parse` or
//! `*_new` functions and released with the matching `*_free`. Every fallible
//! call returns an [`LtlrlStatus`]; on failure a message is kept per thread
//! and can be copied out with [`ltlrl_last_error`]. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ltlrl::exact::{lemma1_report, satisfaction_probability, two_choice_report, InducedChain};
use ltlrl::harness::verify::oracle_agreement;
use ltlrl::lcer::min_horizon;
use ltlrl::ldba::{load_ldba, Ldba};
use ltlrl::ltl::{parse_ltl, Ltl};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtlrlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ComputationError = 5,
    Panic = 6,
}

/// A parsed automaton.
pub struct LtlrlLdba(Ldba);

/// A parsed LTL formula.
pub struct LtlrlFormula(Ltl);

/// A finite Markov chain with accepting states.
pub struct LtlrlChain(InducedChain);

/// Satisfaction probability, eventual value and failing visits of a chain,
/// with both sides of the sandwich check.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtlrlBoundReport {
    pub p_sat: f64,
    pub v_gamma: f64,
    pub o_pi: f64,
    pub gamma: f64,
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Exact values of the two stationary choices `[A, B]` of the two-choice MDP.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtlrlMyopiaReport {
    pub alpha: f64,
    pub gamma: f64,
    pub eventual: [f64; 2],
    pub standard: [f64; 2],
    pub p_sat: [f64; 2],
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

type Fallible = Result<(), (LtlrlStatus, String)>;

fn guard(f: impl FnOnce() -> Fallible) -> LtlrlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtlrlStatus::Ok,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            LtlrlStatus::Panic
        }
    }
}

fn null() -> (LtlrlStatus, String) {
    (LtlrlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, (LtlrlStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (LtlrlStatus::InvalidUtf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, (LtlrlStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Fallible {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, (LtlrlStatus, String)> {
    r.map_err(|e| (LtlrlStatus::ComputationError, e.to_string()))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses an automaton in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_ldba_parse(text: *const c_char, out: *mut *mut LtlrlLdba) -> LtlrlStatus {
    guard(|| {
        let t = cstr(text)?;
        let aut = load_ldba(t).map_err(|e| (LtlrlStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(LtlrlLdba(aut))))
    })
}

/// # Safety
/// `aut` must be null or a handle from [`ltlrl_ldba_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_ldba_free(aut: *mut LtlrlLdba) {
    if !aut.is_null() {
        drop(Box::from_raw(aut));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_ldba_num_states(aut: *const LtlrlLdba, out: *mut usize) -> LtlrlStatus {
    guard(|| put(out, get(aut)?.0.num_states()))
}

/// Number of automaton states that have a jump.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_ldba_min_horizon(aut: *const LtlrlLdba, out: *mut usize) -> LtlrlStatus {
    guard(|| put(out, min_horizon(&get(aut)?.0)))
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_formula_parse(text: *const c_char, out: *mut *mut LtlrlFormula) -> LtlrlStatus {
    guard(|| {
        let t = cstr(text)?;
        let phi = parse_ltl(t).map_err(|e| (LtlrlStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(LtlrlFormula(phi))))
    })
}

/// # Safety
/// `phi` must be null or a handle from [`ltlrl_formula_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_formula_free(phi: *mut LtlrlFormula) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// Counts how many of `words` seeded random lasso words the automaton and
/// the formula classify alike.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_oracle_agreement(
    aut: *const LtlrlLdba,
    phi: *const LtlrlFormula,
    words: usize,
    seed: u64,
    agree: *mut usize,
) -> LtlrlStatus {
    guard(|| {
        let (n, _) = oracle_agreement(&get(aut)?.0, &get(phi)?.0, words, seed);
        put(agree, n)
    })
}

/// Builds a chain in compressed sparse rows: row `i` holds the entries
/// `row_offsets[i]..row_offsets[i+1]` of `cols`/`probs`. `accepting` has
/// one byte per state. The chain starts in state 0.
///
/// # Safety
/// `row_offsets` must hold `n + 1` entries, `cols` and `probs`
/// `row_offsets[n]` entries, `accepting` `n` entries; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_chain_new(
    n: usize,
    row_offsets: *const usize,
    cols: *const usize,
    probs: *const f64,
    accepting: *const u8,
    out: *mut *mut LtlrlChain,
) -> LtlrlStatus {
    guard(|| {
        if row_offsets.is_null() || accepting.is_null() || out.is_null() {
            return Err(null());
        }
        if n == 0 {
            return Err((LtlrlStatus::InvalidArgument, "a chain needs at least one state".into()));
        }
        let offsets = std::slice::from_raw_parts(row_offsets, n + 1);
        let nnz = offsets[n];
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err((LtlrlStatus::InvalidArgument, "row offsets must be nondecreasing".into()));
        }
        if nnz > 0 && (cols.is_null() || probs.is_null()) {
            return Err(null());
        }
        let (cols, probs) = if nnz == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(cols, nnz), std::slice::from_raw_parts(probs, nnz))
        };
        let rows = (0..n)
            .map(|i| (offsets[i]..offsets[i + 1]).map(|k| (cols[k], probs[k])).collect())
            .collect();
        let acc = std::slice::from_raw_parts(accepting, n).iter().map(|&a| a != 0).collect();
        let chain = InducedChain::new(rows, acc, vec![(0, 1.0)])
            .map_err(|e| (LtlrlStatus::InvalidArgument, e.to_string()))?;
        put(out, Box::into_raw(Box::new(LtlrlChain(chain))))
    })
}

/// # Safety
/// `chain` must be null or a handle from [`ltlrl_chain_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_chain_free(chain: *mut LtlrlChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_chain_satisfaction(chain: *const LtlrlChain, out: *mut f64) -> LtlrlStatus {
    guard(|| put(out, compute(satisfaction_probability(&get(chain)?.0))?))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_chain_lemma1(
    chain: *const LtlrlChain,
    gamma: f64,
    out: *mut LtlrlBoundReport,
) -> LtlrlStatus {
    guard(|| {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err((LtlrlStatus::InvalidArgument, format!("gamma {gamma} must lie in (0, 1)")));
        }
        let b = compute(lemma1_report(&get(chain)?.0, gamma))?;
        put(
            out,
            LtlrlBoundReport {
                p_sat: b.p_sat,
                v_gamma: b.v_gamma,
                o_pi: b.o_pi,
                gamma: b.gamma,
                lhs: b.lhs,
                mid: b.mid,
                rhs: b.rhs,
                pass: b.pass,
            },
        )
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltlrl_two_choice_report(alpha: f64, gamma: f64, out: *mut LtlrlMyopiaReport) -> LtlrlStatus {
    guard(|| {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err((LtlrlStatus::InvalidArgument, format!("gamma {gamma} must lie in (0, 1)")));
        }
        let r = two_choice_report(alpha, gamma).map_err(|e| (LtlrlStatus::InvalidArgument, e.to_string()))?;
        put(
            out,
            LtlrlMyopiaReport {
                alpha: r.alpha,
                gamma: r.gamma,
                eventual: r.eventual,
                standard: r.standard,
                p_sat: r.p_sat,
            },
        )
    })
}
