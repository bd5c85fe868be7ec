//! Closed-form error bounds for the relaxed-to-standard transformations and
//! their admissible radius ranges.

mod enclosure;

use num_traits::{Signed, Zero};

pub use enclosure::Enclosure;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Parameters shared by every bound. `r` and `delta` are fractions of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub q: usize,
    pub sigma: usize,
    pub delta: Rational,
    pub s: Rational,
    pub r: Rational,
    pub eps: Rational,
    pub t: usize,
}

impl BoundParams {
    pub fn new(q: usize, sigma: usize, delta: Rational, s: Rational, r: Rational) -> Self {
        Self {
            q,
            sigma,
            delta,
            s,
            r,
            eps: Rational::zero(),
            t: 1,
        }
    }

    pub fn with_eps(mut self, eps: Rational) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = t;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadBoundParams(m));
        if self.q == 0 {
            return bad("q must be at least 1".into());
        }
        if self.sigma < 2 {
            return bad("alphabet size must be at least 2".into());
        }
        if !self.delta.is_positive() || self.delta > rational::one() {
            return bad(format!("delta = {} is outside (0, 1]", rational::display(&self.delta)));
        }
        for (name, v) in [("s", &self.s), ("r", &self.r), ("eps", &self.eps)] {
            if !rational::is_probability(v) {
                return bad(format!("{name} = {} is outside [0, 1]", rational::display(v)));
            }
        }
        Ok(())
    }

    /// `|Σ|^q`.
    pub fn sigma_q(&self) -> Rational {
        rational::pow(&rational::int(self.sigma as i64), self.q)
    }

    /// `α = 1 - s|Σ|^q`.
    pub fn alpha(&self) -> Rational {
        rational::one() - &self.s * self.sigma_q()
    }

    /// `η = rq/δ`.
    pub fn eta(&self) -> Rational {
        &self.r * rational::int(self.q as i64) / &self.delta
    }

    fn require_low_soundness(&self) -> Result<()> {
        let limit = rational::one() / self.sigma_q();
        if self.s >= limit {
            return Err(Error::SoundnessTooLarge {
                s: rational::display(&self.s),
                limit: rational::display(&limit),
            });
        }
        Ok(())
    }

    /// `s|Σ|^q (1 - 1/|Σ|)`.
    fn guess_loss(&self) -> Rational {
        let sigma = rational::int(self.sigma as i64);
        &self.s * self.sigma_q() * (rational::one() - rational::one() / sigma)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub bound: Rational,
    pub r_max: Rational,
    /// `0 < r < r_max`.
    pub admissible: bool,
}

fn admissible(r: &Rational, r_max: &Rational) -> bool {
    r.is_positive() && r < r_max
}

/// Error of the derived LDC decoder built from a perfectly complete RLDC:
/// `s|Σ|^q(1 - 1/|Σ|) + rq/δ`.
pub fn bound_perfect(p: &BoundParams) -> Result<BoundValue> {
    p.validate()?;
    let r_max = radius_range_perfect(p.q, p.sigma, &p.delta, &p.s)?;
    Ok(BoundValue {
        bound: p.guess_loss() + p.eta(),
        admissible: admissible(&p.r, &r_max),
        r_max,
    })
}

/// As [`bound_perfect`] with an additive completeness deficit `ε`.
pub fn bound_imperfect(p: &BoundParams) -> Result<BoundValue> {
    p.validate()?;
    let r_max = radius_range_imperfect(p.q, p.sigma, &p.delta, &p.s, &p.eps)?;
    Ok(BoundValue {
        bound: &p.eps + p.guess_loss() + p.eta(),
        admissible: admissible(&p.r, &r_max),
        r_max,
    })
}

fn range_scale(q: usize, sigma: usize, delta: &Rational) -> Rational {
    let s = rational::int(sigma as i64);
    delta * (&s - rational::one()) / (rational::int(q as i64) * s)
}

/// `δ(|Σ|-1)/(q|Σ|) · (1 - s|Σ|^q)`.
pub fn radius_range_perfect(q: usize, sigma: usize, delta: &Rational, s: &Rational) -> Result<Rational> {
    radius_range_imperfect(q, sigma, delta, s, &Rational::zero())
}

/// `δ(|Σ|-1)/(q|Σ|) · (1 - ε|Σ|/(|Σ|-1) - s|Σ|^q)`, which may be `<= 0`.
pub fn radius_range_imperfect(q: usize, sigma: usize, delta: &Rational, s: &Rational, eps: &Rational) -> Result<Rational> {
    let p = BoundParams::new(q, sigma, delta.clone(), s.clone(), Rational::zero()).with_eps(eps.clone());
    p.validate()?;
    p.require_low_soundness()?;
    let sig = rational::int(sigma as i64);
    let eps_term = eps * &sig / (&sig - rational::one());
    Ok(range_scale(q, sigma, delta) * (rational::one() - eps_term - &p.s * p.sigma_q()))
}

/// `ρ = (1-α) + 2√(η(α-η))`, or `None` when `η(α-η) < 0`.
pub fn rho(alpha: &Rational, eta: &Rational) -> Result<Option<Enclosure>> {
    let radicand = eta * (alpha - eta);
    if radicand.is_negative() || eta.is_negative() || alpha > &rational::one() {
        return Ok(None);
    }
    let root = Enclosure::sqrt(&radicand)?.scale_nonneg(&rational::int(2));
    Ok(Some(Enclosure::exact(rational::one() - alpha).add(&root)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TqBound {
    pub alpha: Rational,
    pub eta: Rational,
    pub rho: Option<Enclosure>,
    pub rho_t: Option<Enclosure>,
    /// `s|Σ|^q + 2rq/δ < 1`.
    pub admissible: bool,
}

/// Parameters of the `tq`-query decoder: error at most `ρ^t` when admissible.
pub fn bound_tq(p: &BoundParams) -> Result<TqBound> {
    if p.t == 0 {
        return Err(Error::BadT(0));
    }
    p.validate()?;
    let alpha = p.alpha();
    let eta = p.eta();
    let rho = rho(&alpha, &eta)?;
    let rho_t = rho.as_ref().map(|r| r.powi(p.t));
    let two = rational::int(2);
    let admissible = &p.s * p.sigma_q() + &two * &eta < rational::one();
    Ok(TqBound {
        alpha,
        eta,
        rho,
        rho_t,
        admissible,
    })
}

/// `(2√(s(1-s)))^t`, the majority-vote bound for an LDC with error `s`.
pub fn bound_ldc_amplify(s: &Rational, t: usize) -> Result<Enclosure> {
    if t == 0 {
        return Err(Error::BadT(0));
    }
    if !rational::is_probability(s) {
        return Err(Error::BadBoundParams(format!("s = {} is outside [0, 1]", rational::display(s))));
    }
    let base = Enclosure::sqrt(&(s * (rational::one() - s)))?.scale_nonneg(&rational::int(2));
    Ok(base.powi(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn reference() -> BoundParams {
        BoundParams::new(3, 2, rat(3, 10), rat(1, 100), rat(1, 100))
    }

    #[test]
    fn perfect_reference_values() {
        let v = bound_perfect(&reference()).unwrap();
        assert_eq!(v.bound, rat(14, 100));
        assert_eq!(v.r_max, rat(46, 1000));
        assert!(v.admissible);
        let zero = BoundParams::new(3, 2, rat(3, 10), rat(0, 1), rat(0, 1));
        let z = bound_perfect(&zero).unwrap();
        assert_eq!(z.bound, rat(0, 1));
        assert!(!z.admissible);
        assert_eq!(radius_range_perfect(3, 2, &rat(3, 10), &rat(0, 1)).unwrap(), rat(1, 20));
    }

    #[test]
    fn soundness_threshold() {
        let p = BoundParams::new(3, 2, rat(3, 10), rat(1, 8), rat(1, 100));
        assert!(matches!(bound_perfect(&p), Err(Error::SoundnessTooLarge { .. })));
        let just_below = radius_range_perfect(3, 2, &rat(3, 10), &rat(1_000_000 - 1, 8_000_000)).unwrap();
        assert!(just_below > rat(0, 1) && just_below < rat(1, 1_000_000));
    }

    #[test]
    fn imperfect_reference_values() {
        let v = bound_imperfect(&reference().with_eps(rat(2, 100))).unwrap();
        assert_eq!(v.bound, rat(16, 100));
        assert_eq!(v.r_max, rat(44, 1000));
        assert_eq!(bound_imperfect(&reference()).unwrap(), bound_perfect(&reference()).unwrap());
        let heavy = bound_imperfect(&reference().with_eps(rat(1, 2))).unwrap();
        assert!(heavy.r_max <= rat(0, 1) && !heavy.admissible);
    }

    #[test]
    fn tq_reference_values() {
        let b = bound_tq(&reference().with_t(2)).unwrap();
        assert_eq!(b.alpha, rat(92, 100));
        assert_eq!(b.eta, rat(1, 10));
        assert!((b.rho.unwrap().midpoint() - 0.652_713).abs() < 1e-6);
        assert!((b.rho_t.unwrap().midpoint() - 0.426_034).abs() < 1e-6);
        assert!(b.admissible);
        let collapsed = bound_tq(&BoundParams::new(3, 2, rat(3, 10), rat(1, 100), rat(0, 1))).unwrap();
        assert_eq!(collapsed.rho.unwrap(), Enclosure::exact(rat(8, 100)));
        let wide = bound_tq(&BoundParams::new(3, 2, rat(3, 10), rat(1, 100), rat(1, 10))).unwrap();
        assert!(!wide.admissible);
        assert!(matches!(bound_tq(&reference().with_t(0)), Err(Error::BadT(0))));
    }

    #[test]
    fn ldc_amplify_values() {
        assert_eq!(bound_ldc_amplify(&rat(1, 10), 2).unwrap(), Enclosure::exact(rat(36, 100)));
        for t in 1..5 {
            assert_eq!(bound_ldc_amplify(&rat(1, 2), t).unwrap(), Enclosure::exact(rat(1, 1)));
            assert!(bound_ldc_amplify(&rat(0, 1), t).unwrap().is_zero());
        }
    }
}
