use crate::algebra::AlgElement;
use crate::error::{Error, Result};

use super::backend::{PowerElement, RadialFree, Sparse};
use super::characters::character_lower_bound;
use super::driver::{State, Step};
use super::estimate::{EstimatorOptions, SpectralEstimate};
use super::semigroup::support_generates_free_semigroup;

/// Characters sampled for the `l1` lower bound.
const CHARACTER_BUDGET: usize = 1 << 14;

fn nonzero(a: &AlgElement) -> Result<()> {
    if a.is_zero() {
        return Err(Error::Domain("spectral estimate of the zero element".into()));
    }
    if !a.is_finite() {
        return Err(Error::Domain("element has non-finite coefficients".into()));
    }
    Ok(())
}

/// Spectral radius of `a` in `l1(G)` with default options.
pub fn l1_spectral_radius(a: &AlgElement, n_max: u64) -> Result<SpectralEstimate> {
    l1_spectral_radius_with(a, &EstimatorOptions::with_n_max(n_max), &[])
}

/// Spectral radius in `l1(G)` by renormalized repeated squaring.
///
/// The trace lists `||a^n||_1^(1/n)` for `n = 1, 2, 4, ..., n_max`; every term
/// bounds the radius from above. The lower bound is the largest of the
/// supplied `lower_hints`, the character bound `max |chi(a)|`, and
/// `||a||_1` when the support generates a free subsemigroup.
pub fn l1_spectral_radius_with(
    a: &AlgElement,
    opts: &EstimatorOptions,
    lower_hints: &[f64],
) -> Result<SpectralEstimate> {
    nonzero(a)?;
    opts.validate()?;
    let free_semigroup = support_generates_free_semigroup(a);
    let (trace, upper) = if free_semigroup {
        // ||a^n||_1 = ||a||_1^n for every n
        let l1 = a.l1();
        let trace =
            std::iter::successors(Some(1u64), |n| (*n < opts.n_max).then_some(2 * n)).map(|n| (n, l1)).collect();
        (trace, l1)
    } else {
        match RadialFree::from_element(a) {
            Some(r) => gelfand_trace(r, opts)?,
            None => gelfand_trace(Sparse::new(a.clone(), opts.truncation, opts.support_cap), opts)?,
        }
    };
    let mut lower = character_lower_bound(a, CHARACTER_BUDGET);
    if free_semigroup {
        lower = lower.max(a.l1());
    }
    for h in lower_hints {
        lower = lower.max(*h);
    }
    let value = trace.last().map(|t| t.1).unwrap_or(upper);
    Ok(SpectralEstimate::new(value, lower, upper, trace, opts.n_max))
}

fn gelfand_trace<P: PowerElement>(x: P, opts: &EstimatorOptions) -> Result<(Vec<(u64, f64)>, f64)> {
    let mut state = State::start(x);
    let mut trace = vec![(1, state.l1_root())];
    let mut upper = state.l1_root_upper();
    while state.n < opts.n_max {
        match state.square(opts.pair_budget)? {
            Step::Next(s) => state = s,
            Step::Zero => {
                trace.push((2 * state.n, 0.0));
                return Ok((trace, 0.0));
            }
            Step::Stopped => break,
        }
        trace.push((state.n, state.l1_root()));
        upper = upper.min(state.l1_root_upper());
    }
    Ok((trace, upper))
}

/// Reduced C*-norm of `a` with default options.
pub fn reduced_norm_trace(a: &AlgElement, n_max: u64) -> Result<SpectralEstimate> {
    reduced_norm_trace_with(a, &EstimatorOptions::with_n_max(n_max))
}

/// Reduced C*-norm from trace moments.
///
/// The trace lists `tau((a*a)^n)^(1/2n)` for `n = 1, 2, 4, ..., n_max`; each is
/// a lower bound for `||a||`. Upper bounds come from `||a||_1`, from
/// `||(a*a)^n||_1^(1/2n)`, and on free groups from the Haagerup inequality
/// applied to `(a*a)^n`.
pub fn reduced_norm_trace_with(a: &AlgElement, opts: &EstimatorOptions) -> Result<SpectralEstimate> {
    nonzero(a)?;
    opts.validate()?;
    let (trace, lower, upper) = match RadialFree::from_element(a) {
        Some(r) => moment_trace(r, opts)?,
        None => moment_trace(Sparse::new(a.clone(), opts.truncation, opts.support_cap), opts)?,
    };
    let upper = upper.min(a.l1());
    let value = trace.last().map(|t| t.1).unwrap_or(lower);
    Ok(SpectralEstimate::new(value, lower, upper, trace, opts.n_max))
}

/// Trace with its lower and upper bounds.
type MomentTrace = (Vec<(u64, f64)>, f64, f64);

fn moment_trace<P: PowerElement>(a: P, opts: &EstimatorOptions) -> Result<MomentTrace> {
    let l2 = a.log_l2().exp();
    let mut trace = vec![(1u64, l2)];
    let mut lower = l2;
    let mut upper = f64::INFINITY;
    let aa = match a.adjoint_square() {
        Ok(x) => x,
        Err(e) if e.is_resource() => return Ok((trace, lower, upper)),
        Err(e) => return Err(e),
    };
    let mut state = State::start(aa);
    loop {
        // state holds (a*a)^n = S (b + e); since (a*a)^n is self-adjoint,
        // tau((a*a)^(2n)) = ||(a*a)^n||_2^2 >= S^2 (||b||_2 - eps)^2
        let n = state.n as f64;
        let log_b2 = state.b.log_l2();
        trace.push((2 * state.n, ((state.log_s + log_b2) / (2.0 * n)).exp()));
        let certified = if state.eps == 0.0 {
            log_b2
        } else {
            let diff = log_b2.exp() - state.eps;
            if diff > 0.0 {
                diff.ln()
            } else {
                f64::NEG_INFINITY
            }
        };
        lower = lower.max(((state.log_s + certified) / (2.0 * n)).exp());
        // ||a||^(2n) = ||(a*a)^n|| <= ||(a*a)^n||_1
        upper = upper.min(((state.log_s + state.eps.ln_1p()) / (2.0 * n)).exp());
        if let Some(log_h) = state.b.log_haagerup() {
            let h = (log_h.exp() + state.eps).ln();
            upper = upper.min(((state.log_s + h) / (2.0 * n)).exp());
        }
        if 2 * state.n >= opts.n_max {
            break;
        }
        match state.square(opts.pair_budget)? {
            Step::Next(s) => state = s,
            Step::Zero => unreachable!("powers of a*a are nonzero when a is"),
            Step::Stopped => break,
        }
    }
    Ok((trace, lower, upper))
}
