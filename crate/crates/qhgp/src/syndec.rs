//! Classical syndrome decoders.
//!
//! Three decoders live here, all consuming a syndrome rather than a received
//! word:
//!
//! * the key-equation decoder for the windowed polynomial codes built by
//!   [`rs_code`](crate::codes::rs_code) and [`frs_code`](crate::codes::frs_code)
//!   (and their duals): an error-locator polynomial is solved for from a
//!   Toeplitz linear system in the known stretch of the error's interpolation
//!   coefficients, the remaining coefficients are completed by the locator
//!   recurrence, and the error is read off by evaluation;
//! * a bit-flip decoder for expander codes that tolerates syndrome noise by
//!   returning the residual it could not explain as a separate syndrome
//!   error;
//! * a brute-force oracle that walks error vectors by increasing weight.
//!
//! The decoders are pure functions of their inputs. [`PolyDecoder`] exists
//! only to hoist the one-time setup (the inverse syndrome adapter) out of
//! decode loops.

use crate::codes::{next_subset, BipartiteGraph, LinearCode};
use crate::gf::{Field, FieldRef, Gf, GfError, Poly, ToeplitzSystem};
use crate::matrix::{weight, Mat};
use thiserror::Error;

/// Cap on the number of block supports tried when a key-equation system is
/// singular or underdetermined. Beyond the cap the block count is rejected
/// (the downward sweep then tries a smaller one) rather than searched.
const KEY_EQUATION_ENUM_CAP: u128 = 4096;

/// Enumeration budget for [`brute_force_decode`].
const BRUTE_FORCE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SynDecError {
    #[error("code has no evaluation-domain metadata; build it with rs_code/frs_code")]
    NotPolynomialCode,
    #[error("key-equation system is singular or inconsistent for the assumed block count")]
    SingularOrInconsistent,
    #[error("completed coefficients violate the locator recurrence")]
    RecurrenceInconsistent,
    #[error("flip decoding exceeded its iteration bound without settling")]
    NoConvergence { flips: Vec<Gf>, residual: Vec<Gf> },
    #[error("no error within the weight budget matches the syndrome")]
    NoSolutionWithinBudget,
}

/// A clean syndrome-decoding problem: find e with H e = s and wt(e) <= t.
/// The answer is unique whenever 2t is below the code distance.
#[derive(Debug, Clone)]
pub struct SyndromeInstance {
    pub h: Mat,
    pub s: Vec<Gf>,
    pub t: usize,
}

/// A noisy-syndrome problem: the observation is s_obs = H e + e_hat and the
/// decoder must account for both the data error e and the syndrome error
/// e_hat, with wt(e) + wt(e_hat) inside the stated budget.
#[derive(Debug, Clone)]
pub struct NoisySyndromeInstance {
    pub h: Mat,
    pub s_obs: Vec<Gf>,
    pub budget: usize,
}

/// Error-locator polynomial, normalized so lambda(0) = 1, together with the
/// folded blocks its roots cover. The degree is always fold * #blocks: roots
/// come in complete blocks by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorLocator {
    pub lambda: Poly,
    pub located_blocks: Vec<usize>,
}

/// Evaluation-domain geometry shared by every key-equation routine, read off
/// a code's metadata. Codewords are evaluations (at gamma^0..gamma^(sn-1))
/// of polynomials supported on the cyclic exponent window
/// [start, start+len); the syndrome determines the interpolation
/// coefficients of the error on the complementary window, which is where
/// every index below comes from.
#[derive(Debug, Clone, Copy)]
struct Window {
    gamma: Gf,
    sn: usize,
    start: usize,
    len: usize,
    fold: usize,
}

impl Window {
    fn of(code: &LinearCode) -> Result<Window, SynDecError> {
        let m = code.meta().ok_or(SynDecError::NotPolynomialCode)?;
        Ok(Window {
            gamma: m.gamma,
            sn: m.sn,
            start: m.window_start,
            len: m.window_len,
            fold: m.fold,
        })
    }

    /// First exponent of the syndrome-determined stretch of coefficients.
    fn known_start(&self) -> usize {
        (self.start + self.len) % self.sn
    }

    /// Length of that stretch (= number of parity checks).
    fn known_len(&self) -> usize {
        self.sn - self.len
    }

    fn blocks(&self) -> usize {
        self.sn / self.fold
    }

    /// Designed block distance n - floor((k-1)/s) of the folded code.
    fn designed_block_distance(&self) -> usize {
        self.blocks() - (self.len - 1) / self.fold
    }

    fn attempt_radius(&self) -> usize {
        self.designed_block_distance() / 2
    }

    fn promise_radius(&self) -> usize {
        (self.designed_block_distance() - 1) / 2
    }
}

/// The matrix M with s = M * (E_a, ..., E_{a+L-1}): row b holds, for each
/// known coefficient index, the weight with which that coefficient shows up
/// in parity check b. Row b of H is itself a polynomial evaluation vector;
/// its spectrum g satisfies s_b = sum_u g_u E_{-u mod sn}, which is where
/// the reversed index comes from.
fn adapter_matrix(code: &LinearCode, wnd: &Window) -> Mat {
    let f = code.field();
    let a = wnd.known_start();
    let l = wnd.known_len();
    let rows: Vec<Vec<Gf>> = (0..l)
        .map(|b| {
            let g = Poly::interpolate_at_powers(f, code.parity_check().row(b), wnd.gamma);
            (0..l).map(|i| g.coeff((wnd.sn - (a + i) % wnd.sn) % wnd.sn)).collect()
        })
        .collect();
    Mat::from_rows(f.clone(), rows)
}

/// Converts a parity-check syndrome into the interpolation syndrome: the
/// error's interpolation coefficients on the window the parity checks pin
/// down (exponents k..sn-1 for a plain RS or FRS code). The map is an
/// invertible linear bijection between the two syndrome spaces.
pub fn syndrome_adapter(code: &LinearCode, s: &[Gf]) -> Result<Vec<Gf>, SynDecError> {
    let wnd = Window::of(code)?;
    let m = adapter_matrix(code, &wnd);
    let inv = m
        .solve_columns(&Mat::identity(code.field().clone(), wnd.known_len()))
        .expect("parity rows are independent, so the window map is a bijection");
    Ok(inv.mul_vec(s))
}

/// Builds the locator for a candidate coefficient vector (lambda_1.. of the
/// tail; lambda_0 = 1 implicitly) and applies the structural filters: exact
/// degree, and roots forming exactly d complete blocks of evaluation points.
fn locator_from_tail(f: &Field, wnd: &Window, tail: &[Gf], d: usize) -> Option<ErrorLocator> {
    let sd = tail.len();
    if sd == 0 || tail[sd - 1].is_zero() {
        return None;
    }
    let mut coeffs = Vec::with_capacity(sd + 1);
    coeffs.push(Gf::ONE);
    coeffs.extend_from_slice(tail);
    let lambda = Poly::new(coeffs);
    let vals = lambda.eval_at_powers(f, wnd.gamma, wnd.sn);
    let mut located = Vec::new();
    let mut roots = 0usize;
    for b in 0..wnd.blocks() {
        let in_block = vals[b * wnd.fold..(b + 1) * wnd.fold]
            .iter()
            .filter(|v| v.is_zero())
            .count();
        roots += in_block;
        if in_block == wnd.fold {
            located.push(b);
        } else if in_block > 0 {
            return None; // partially corrupted block cannot come from a block error
        }
    }
    if roots != sd || located.len() != d {
        return None;
    }
    Some(ErrorLocator { lambda, located_blocks: located })
}

/// All locator candidates for an assumed block count d, in a deterministic
/// order. For the usual overdetermined case this is zero or one locator
/// (unique Toeplitz solution, consistency-checked on the leftover rows).
/// When the leading square block is singular the full relation set is
/// solved by elimination instead, and the leftover solution space is
/// searched through the structural filters: swept outright when small,
/// otherwise collapsed to the minimal annihilator by a polynomial gcd of
/// its generators, whose roots name the corrupted blocks directly. Only
/// when both fail (small codes, or syndromes no locator of this count can
/// explain) are the block supports themselves enumerated: each support
/// pins its locator exactly, and the known-window relations filter out
/// the wrong ones.
fn key_equation_candidates(f: &FieldRef, wnd: &Window, si: &[Gf], d: usize) -> Vec<ErrorLocator> {
    let l = wnd.known_len();
    assert_eq!(si.len(), l);
    if d == 0 {
        return if si.iter().all(|x| x.is_zero()) {
            vec![ErrorLocator { lambda: Poly::one(), located_blocks: Vec::new() }]
        } else {
            Vec::new()
        };
    }
    let sd = wnd.fold * d;
    if sd > l {
        return Vec::new();
    }
    // Row t (absolute exponent a + sd + t) of the cyclic relation
    // sum_l lambda_l E_{t-l} = 0 reads, over known coefficients only:
    //   sum_{l=1..sd} lambda_l si[sd + t - l] = si[sd + t].
    let rows = l - sd;
    if rows >= sd {
        // leading square subsystem is Toeplitz; try it first
        let top: Vec<Gf> = (0..sd).map(|j| si[sd - 1 - j]).collect();
        let left: Vec<Gf> = (0..sd).map(|i| si[sd - 1 + i]).collect();
        let rhs: Vec<Gf> = si[sd..2 * sd].to_vec();
        match ToeplitzSystem::new(top, left, rhs).solve(f) {
            Ok(tail) => {
                // unique solution; remaining rows must agree
                for t in sd..rows {
                    let mut acc = si[sd + t];
                    for (ell, lam) in tail.iter().enumerate() {
                        acc += f.mul(*lam, si[sd + t - (ell + 1)]);
                    }
                    if !acc.is_zero() {
                        return Vec::new();
                    }
                }
                return locator_from_tail(f, wnd, &tail, d).into_iter().collect();
            }
            Err(GfError::SingularSystem) => {} // fall through to the general solve
            Err(e) => unreachable!("toeplitz solve only signals singularity: {e}"),
        }
    }
    // A singular leading block does not mean the locator is undetermined:
    // the remaining relations often still pin it. Solve the whole system by
    // elimination and, when a small solution space is left, enumerate it
    // through the structural filters.
    if rows >= 1 {
        let m = Mat::from_fn(f.clone(), rows, sd, |t, j| si[sd + t - 1 - j]);
        let rhs: Vec<Gf> = (0..rows).map(|t| si[sd + t]).collect();
        let Some(sol) = m.solve_affine(&rhs) else {
            return Vec::new(); // every locator satisfies these relations
        };
        let q = f.order() as u128;
        let mut combos: u128 = 1;
        for _ in 0..sol.kernel.len() {
            combos = combos.saturating_mul(q);
            if combos > KEY_EQUATION_ENUM_CAP {
                break;
            }
        }
        let dim = sol.kernel.len();
        if combos <= KEY_EQUATION_ENUM_CAP {
            let mut out = Vec::new();
            let mut digits = vec![0usize; dim];
            let mut tail = sol.particular.clone();
            loop {
                if let Some(loc) = locator_from_tail(f, wnd, &tail, d) {
                    out.push(loc);
                }
                // odometer over the kernel span, last slot fastest
                let mut slot = dim;
                loop {
                    if slot == 0 {
                        return out;
                    }
                    slot -= 1;
                    let old = Gf(digits[slot] as u16);
                    digits[slot] += 1;
                    let new = if digits[slot] < f.order() {
                        Gf(digits[slot] as u16)
                    } else {
                        digits[slot] = 0;
                        Gf::ZERO
                    };
                    let delta = old + new;
                    for (x, &kv) in tail.iter_mut().zip(&sol.kernel[slot]) {
                        *x += f.mul(delta, kv);
                    }
                    if !new.is_zero() {
                        break;
                    }
                }
            }
        }
        // Too many combinations for a blind sweep. Inside the decoding
        // radius every solution of the window relations is a polynomial
        // multiple of the minimal annihilator (the degrees involved stay
        // within the LFSR uniqueness bound: symbol weight + sd <= window
        // length), so the gcd of the generators recovers that annihilator
        // outright. Its roots are the corrupted coordinates themselves,
        // which handles partially corrupted blocks that no exact-degree
        // tail can represent.
        let mut pcoeffs = Vec::with_capacity(sd + 1);
        pcoeffs.push(Gf::ONE);
        pcoeffs.extend_from_slice(&sol.particular);
        let mut g = Poly::new(pcoeffs);
        for kv in &sol.kernel {
            let mut c = Vec::with_capacity(sd + 1);
            c.push(Gf::ZERO);
            c.extend_from_slice(kv);
            g = Poly::gcd(f, &g, &Poly::new(c));
        }
        if let Some(deg) = g.degree() {
            let vals = g.eval_at_powers(f, wnd.gamma, wnd.sn);
            let mut located = Vec::new();
            let mut roots = 0usize;
            for b in 0..wnd.blocks() {
                let in_block = vals[b * wnd.fold..(b + 1) * wnd.fold]
                    .iter()
                    .filter(|v| v.is_zero())
                    .count();
                roots += in_block;
                if in_block > 0 {
                    located.push(b);
                }
            }
            if roots == deg && located.len() == d {
                // the full-block locator over the located support
                let mut lambda = Poly::one();
                for &b in &located {
                    for j in 0..wnd.fold {
                        let point = f.pow(wnd.gamma, (b * wnd.fold + j) as u64);
                        lambda = lambda.mul(f, &Poly::new(vec![Gf::ONE, f.inv(point)]));
                    }
                }
                return vec![ErrorLocator { lambda, located_blocks: located }];
            }
        }
    }
    // Support enumeration: C(#blocks, d) must stay small, which it does for
    // every code small enough to reach this path.
    let nb = wnd.blocks();
    let mut combos: u128 = 1;
    for i in 0..d {
        combos = combos.saturating_mul((nb - i) as u128) / (i as u128 + 1);
        if combos > KEY_EQUATION_ENUM_CAP {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    let mut blocks: Vec<usize> = (0..d).collect();
    loop {
        let mut lambda = Poly::one();
        for &b in &blocks {
            for j in 0..wnd.fold {
                let point = f.pow(wnd.gamma, (b * wnd.fold + j) as u64);
                lambda = lambda.mul(f, &Poly::new(vec![Gf::ONE, f.inv(point)]));
            }
        }
        // keep the support iff its locator satisfies every known-window
        // relation sum_l lambda_l E_{t-l} = 0
        let consistent = (sd..l).all(|i| {
            let mut acc = Gf::ZERO;
            for ell in 0..=sd {
                acc += f.mul(lambda.coeff(ell), si[i - ell]);
            }
            acc.is_zero()
        });
        if consistent {
            out.push(ErrorLocator { lambda, located_blocks: blocks.clone() });
        }
        if !next_subset(&mut blocks, nb) {
            break;
        }
    }
    out
}

/// One-pass decode attempt: the minimal recurrence of the whole known
/// window (Berlekamp-Massey) is the error's symbol locator whenever the
/// recurrence length stays within half the window, the regime where that
/// recurrence is unique. Acceptance is self-verifying: exact degree,
/// simple roots all on the evaluation set, block count within the attempt
/// radius, and a fully consistent completion. Anything else returns None
/// and the caller falls back to the block-count sweep.
fn min_recurrence_candidate(
    f: &FieldRef,
    wnd: &Window,
    si: &[Gf],
    attempt_radius: usize,
) -> Option<(Vec<Gf>, ErrorLocator)> {
    let l = wnd.known_len();
    let (lambda, len) = Poly::min_recurrence(f, si);
    let deg = lambda.degree()?;
    if deg == 0 || deg != len || 2 * len > l {
        return None;
    }
    let vals = lambda.eval_at_powers(f, wnd.gamma, wnd.sn);
    let mut located = Vec::new();
    let mut roots = 0usize;
    for b in 0..wnd.blocks() {
        let in_block = vals[b * wnd.fold..(b + 1) * wnd.fold]
            .iter()
            .filter(|v| v.is_zero())
            .count();
        roots += in_block;
        if in_block > 0 {
            located.push(b);
        }
    }
    if roots != deg || located.is_empty() || located.len() > attempt_radius {
        return None;
    }
    let loc = ErrorLocator { lambda, located_blocks: located };
    let e = complete_error_impl(f, wnd, si, &loc).ok()?;
    Some((e, loc))
}

/// Solves the key equation for an assumed number d of corrupted blocks:
/// the locator tail (lambda_1..lambda_{sd}) from the Toeplitz system in the
/// known coefficient stretch. Fails with `SingularOrInconsistent` when no
/// locator with exactly d complete root blocks fits; callers sweep d
/// upward to the attempt radius.
pub fn key_equation_decode(
    code: &LinearCode,
    si: &[Gf],
    d: usize,
) -> Result<ErrorLocator, SynDecError> {
    let wnd = Window::of(code)?;
    key_equation_candidates(code.field(), &wnd, si, d)
        .into_iter()
        .next()
        .ok_or(SynDecError::SingularOrInconsistent)
}

fn complete_error_impl(
    f: &Field,
    wnd: &Window,
    si: &[Gf],
    loc: &ErrorLocator,
) -> Result<Vec<Gf>, SynDecError> {
    let sn = wnd.sn;
    let a = wnd.known_start();
    assert_eq!(si.len(), wnd.known_len());
    let lam = &loc.lambda;
    let deg = lam.degree().unwrap_or(0);
    let mut coef = vec![Gf::ZERO; sn];
    for (i, &v) in si.iter().enumerate() {
        coef[(a + i) % sn] = v;
    }
    if deg == 0 {
        if si.iter().any(|v| !v.is_zero()) {
            return Err(SynDecError::RecurrenceInconsistent);
        }
        return Ok(vec![Gf::ZERO; sn]);
    }
    // Fill the unknown window top-down: for target exponent x, the relation
    // at t = x + deg involves only x and already-known exponents above it.
    let lead_inv = f.inv(lam.coeff(deg));
    for u in (0..wnd.len).rev() {
        let x = (wnd.start + u) % sn;
        let t = (x + deg) % sn;
        let mut acc = Gf::ZERO;
        for ell in 0..deg {
            acc += f.mul(lam.coeff(ell), coef[(t + sn - ell) % sn]);
        }
        coef[x] = f.mul(lead_inv, acc);
    }
    // The locator annihilates the error cyclically; check every position,
    // not only the ones used above.
    for t in 0..sn {
        let mut r = Gf::ZERO;
        for ell in 0..=deg {
            r += f.mul(lam.coeff(ell), coef[(t + sn - ell) % sn]);
        }
        if !r.is_zero() {
            return Err(SynDecError::RecurrenceInconsistent);
        }
    }
    let e = Poly::new(coef).eval_at_powers(f, wnd.gamma, sn);
    // Support must be exactly the located blocks: a located block that
    // completed to all-zero values means the assumed block count was too
    // high, and support outside the blocks cannot happen for a consistent
    // locator. Either way the locator does not explain this syndrome.
    for (b, chunk) in e.chunks(wnd.fold).enumerate() {
        let nonzero = chunk.iter().any(|v| !v.is_zero());
        if nonzero != loc.located_blocks.contains(&b) {
            return Err(SynDecError::RecurrenceInconsistent);
        }
    }
    Ok(e)
}

/// Completes the interpolation coefficients of the error from the locator
/// recurrence (lambda_0 = 1, so E_t = sum_{l>=1} lambda_l E_{t-l mod sn}),
/// then evaluates to recover the error vector itself. The returned error is
/// supported exactly on the locator's blocks.
pub fn complete_error(
    code: &LinearCode,
    si: &[Gf],
    loc: &ErrorLocator,
) -> Result<Vec<Gf>, SynDecError> {
    let wnd = Window::of(code)?;
    complete_error_impl(code.field(), &wnd, si, loc)
}

/// Key-equation pipeline with the one-time setup hoisted out: the inverse
/// adapter matrix is computed once, then [`decode`](PolyDecoder::decode) is
/// cheap enough for Monte Carlo loops.
#[derive(Debug, Clone)]
pub struct PolyDecoder {
    code: LinearCode,
    wnd: Window,
    adapter_inv: Mat,
    attempt_radius: usize,
    promise_radius: usize,
}

impl PolyDecoder {
    pub fn new(code: &LinearCode) -> Result<PolyDecoder, SynDecError> {
        let wnd = Window::of(code)?;
        let m = adapter_matrix(code, &wnd);
        let adapter_inv = m
            .solve_columns(&Mat::identity(code.field().clone(), wnd.known_len()))
            .expect("parity rows are independent, so the window map is a bijection");
        Ok(PolyDecoder {
            code: code.clone(),
            wnd,
            adapter_inv,
            attempt_radius: wnd.attempt_radius(),
            promise_radius: wnd.promise_radius(),
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Largest block count the key-equation sweep will assume,
    /// floor(designed block distance / 2).
    pub fn attempt_radius(&self) -> usize {
        self.attempt_radius
    }

    /// Block count up to which decoding is guaranteed unique,
    /// floor((designed block distance - 1) / 2). One less than the attempt
    /// radius exactly when the designed distance is even.
    pub fn promise_radius(&self) -> usize {
        self.promise_radius
    }

    /// The syndrome adapter as a matrix action (see [`syndrome_adapter`]).
    pub fn adapter(&self, s: &[Gf]) -> Vec<Gf> {
        self.adapter_inv.mul_vec(s)
    }

    /// Full pipeline: adapter, then a one-pass minimal-recurrence attempt
    /// over the whole window; when that does not pin the error, block
    /// counts are swept upward to the attempt radius, each count's locator
    /// candidates are completed, and the first fully consistent error
    /// wins. Within the promise radius the result is unique and equals the
    /// injected error; between promise and attempt radius a consistent
    /// error of block weight at most the attempt radius is still returned
    /// deterministically, but ties with the true error are possible on
    /// ambiguous syndromes.
    pub fn decode(&self, s: &[Gf]) -> Result<Vec<Gf>, SynDecError> {
        self.decode_with_locator(s).map(|(e, _)| e)
    }

    pub fn decode_with_locator(&self, s: &[Gf]) -> Result<(Vec<Gf>, ErrorLocator), SynDecError> {
        assert_eq!(s.len(), self.wnd.known_len());
        let f = self.code.field().clone();
        let si = self.adapter(s);
        if si.iter().all(|v| v.is_zero()) {
            let loc = ErrorLocator { lambda: Poly::one(), located_blocks: Vec::new() };
            return Ok((vec![Gf::ZERO; self.wnd.sn], loc));
        }
        if let Some((e, loc)) = min_recurrence_candidate(&f, &self.wnd, &si, self.attempt_radius) {
            debug_assert_eq!(self.code.syndrome(&e), s, "window bijection broke");
            return Ok((e, loc));
        }
        for d in 1..=self.attempt_radius {
            for loc in key_equation_candidates(&f, &self.wnd, &si, d) {
                match complete_error_impl(&f, &self.wnd, &si, &loc) {
                    Ok(e) => {
                        debug_assert_eq!(self.code.syndrome(&e), s, "window bijection broke");
                        return Ok((e, loc));
                    }
                    Err(SynDecError::RecurrenceInconsistent) => continue,
                    Err(other) => return Err(other),
                }
            }
        }
        Err(SynDecError::SingularOrInconsistent)
    }
}

/// One-shot convenience over [`PolyDecoder`].
pub fn poly_decode(code: &LinearCode, s: &[Gf]) -> Result<Vec<Gf>, SynDecError> {
    PolyDecoder::new(code)?.decode(s)
}

fn bools_to_gf(bits: &[bool]) -> Vec<Gf> {
    bits.iter().map(|&b| if b { Gf::ONE } else { Gf::ZERO }).collect()
}

/// Bit-flip decoding of a noisy syndrome in the graph presentation: H has
/// one parity row per right vertex. Left bits with a strict majority of
/// unsatisfied neighbors are flipped in fixed index order until a full pass
/// changes nothing; whatever residual remains is returned as the syndrome
/// error. Each flip strictly lowers the number of unsatisfied checks, so
/// termination is immediate in practice; the iteration cap exists as a
/// hard backstop and surfaces the best effort if ever hit.
pub fn flip_decode_noisy(
    inst: &NoisySyndromeInstance,
    graph: &BipartiteGraph,
) -> Result<(Vec<Gf>, Vec<Gf>), SynDecError> {
    let n = graph.n_left;
    let m = graph.n_right;
    assert_eq!(inst.h.rows(), m, "graph presentation: one check per right vertex");
    assert_eq!(inst.h.cols(), n);
    assert_eq!(inst.s_obs.len(), m);
    assert_eq!(inst.h.field().r(), 1, "flip decoding is a binary-code routine");
    #[cfg(debug_assertions)]
    for (j, nbrs) in graph.right_adj.iter().enumerate() {
        let sup = crate::matrix::support(inst.h.row(j));
        debug_assert_eq!(&sup, nbrs, "parity row {j} must match the graph");
    }

    let mut resid: Vec<bool> = inst.s_obs.iter().map(|v| !v.is_zero()).collect();
    let mut flipped = vec![false; n];
    let round_cap = (inst.budget + 1) * n + m + 2;
    let mut rounds = 0usize;
    loop {
        let mut changed = false;
        for v in 0..n {
            let unsat = graph.checks_of(v).iter().filter(|&&c| resid[c]).count();
            if 2 * unsat > graph.d_left {
                flipped[v] = !flipped[v];
                for &c in graph.checks_of(v) {
                    resid[c] = !resid[c];
                }
                changed = true;
            }
        }
        if !changed {
            return Ok((bools_to_gf(&flipped), bools_to_gf(&resid)));
        }
        rounds += 1;
        if rounds > round_cap {
            return Err(SynDecError::NoConvergence {
                flips: bools_to_gf(&flipped),
                residual: bools_to_gf(&resid),
            });
        }
    }
}

/// Exhaustive minimum-weight decoding: error vectors are enumerated by
/// increasing weight; within a weight, supports in lexicographic order and
/// values in field-representation order, so ties break deterministically.
/// The enumeration size sum_w C(n,w) (q-1)^w must stay within 1e7.
pub fn brute_force_decode(inst: &SyndromeInstance) -> Result<Vec<Gf>, SynDecError> {
    let f = inst.h.field().clone();
    let n = inst.h.cols();
    let m = inst.h.rows();
    assert_eq!(inst.s.len(), m);
    let q = f.order() as u128;
    let mut budget: u128 = 0;
    let mut binom: u128 = 1;
    for w in 0..=inst.t.min(n) {
        if w > 0 {
            binom = binom * (n - w + 1) as u128 / w as u128;
        }
        budget += binom * (q - 1).pow(w as u32);
    }
    assert!(
        budget <= BRUTE_FORCE_BUDGET,
        "brute-force enumeration of {budget} candidates exceeds the 1e7 budget"
    );

    if weight(&inst.s) == 0 {
        return Ok(vec![Gf::ZERO; n]);
    }
    let cols: Vec<Vec<Gf>> = (0..n).map(|j| (0..m).map(|i| inst.h.get(i, j)).collect()).collect();
    let nonzero: Vec<Gf> = (1..f.order()).map(|v| Gf(v as u16)).collect();
    let axpy = |acc: &mut [Gf], c: Gf, col: &[Gf]| {
        for (a, &x) in acc.iter_mut().zip(col) {
            *a += f.mul(c, x);
        }
    };
    for w in 1..=inst.t.min(n) {
        let mut sup: Vec<usize> = (0..w).collect();
        loop {
            let mut digits = vec![0usize; w];
            let mut acc = vec![Gf::ZERO; m];
            for &j in &sup {
                axpy(&mut acc, nonzero[0], &cols[j]);
            }
            loop {
                if acc == inst.s {
                    let mut e = vec![Gf::ZERO; n];
                    for (slot, &j) in sup.iter().enumerate() {
                        e[j] = nonzero[digits[slot]];
                    }
                    return Ok(e);
                }
                // odometer over values, last slot fastest, syndrome updated
                // incrementally by the digit delta
                let mut slot = w;
                let advanced = loop {
                    if slot == 0 {
                        break false;
                    }
                    slot -= 1;
                    let j = sup[slot];
                    if digits[slot] + 1 < nonzero.len() {
                        let delta = nonzero[digits[slot]] + nonzero[digits[slot] + 1];
                        digits[slot] += 1;
                        axpy(&mut acc, delta, &cols[j]);
                        break true;
                    }
                    let delta = nonzero[digits[slot]] + nonzero[0];
                    digits[slot] = 0;
                    axpy(&mut acc, delta, &cols[j]);
                };
                if !advanced {
                    break;
                }
            }
            if !next_subset(&mut sup, n) {
                break;
            }
        }
    }
    Err(SynDecError::NoSolutionWithinBudget)
}
