//! Renormalized repeated squaring.
//!
//! The state after `m` squarings is `x^(2^m) = S (b + e)` with `||b||_1 = 1`,
//! `ln S` accumulated, and `||e||_1 <= eps` covering everything truncation
//! discarded. A square maps `eps` to `(dropped + 2 eps + eps^2) / nu`, where
//! `nu` is the `l1` norm of the truncated square.

use crate::error::Result;

use super::backend::PowerElement;

pub(crate) struct State<P> {
    pub b: P,
    pub log_s: f64,
    pub eps: f64,
    /// Exponent represented by the state.
    pub n: u64,
}

pub(crate) enum Step<P> {
    Next(State<P>),
    /// The exact square is zero.
    Zero,
    /// Resource limits or total truncation stopped the iteration.
    Stopped,
}

impl<P: PowerElement> State<P> {
    pub fn start(x: P) -> Self {
        let l1 = x.l1();
        State { b: x.scaled(1.0 / l1), log_s: l1.ln(), eps: 0.0, n: 1 }
    }

    pub fn square(&self, pair_budget: usize) -> Result<Step<P>> {
        if self.b.work() > pair_budget {
            return Ok(Step::Stopped);
        }
        let (c, dropped) = match self.b.square() {
            Ok(v) => v,
            Err(e) if e.is_resource() => return Ok(Step::Stopped),
            Err(e) => return Err(e),
        };
        if c.is_zero() {
            return Ok(if dropped == 0.0 && self.eps == 0.0 { Step::Zero } else { Step::Stopped });
        }
        let nu = c.l1();
        let eps = (dropped + 2.0 * self.eps + self.eps * self.eps) / nu;
        Ok(Step::Next(State { b: c.scaled(1.0 / nu), log_s: 2.0 * self.log_s + nu.ln(), eps, n: 2 * self.n }))
    }

    /// `||x^n||_1^(1/n)` as computed.
    pub fn l1_root(&self) -> f64 {
        (self.log_s / self.n as f64).exp()
    }

    /// Certified upper bound for `||x^n||_1^(1/n)`.
    pub fn l1_root_upper(&self) -> f64 {
        ((self.log_s + self.eps.ln_1p()) / self.n as f64).exp()
    }
}
