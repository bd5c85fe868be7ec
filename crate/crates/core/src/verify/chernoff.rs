use num_traits::{Signed, Zero};

use crate::bounds::{rho, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Sum of `t` i.i.d. steps with `Pr[+1] = α-η`, `Pr[-1] = η`, `Pr[0] = 1-α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernoffModel {
    pub alpha: Rational,
    pub eta: Rational,
    pub t: usize,
}

impl ChernoffModel {
    pub fn new(alpha: Rational, eta: Rational, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadParameters("t must be at least 1".into()));
        }
        if eta.is_negative() || alpha > rational::one() {
            return Err(Error::BadParameters(format!(
                "need 0 <= eta and alpha <= 1, got alpha = {}, eta = {}",
                rational::display(&alpha),
                rational::display(&eta)
            )));
        }
        if alpha <= &eta * rational::int(2) {
            return Err(Error::BadParameters(format!(
                "need alpha > 2 eta, got alpha = {}, eta = {}",
                rational::display(&alpha),
                rational::display(&eta)
            )));
        }
        Ok(Self { alpha, eta, t })
    }

    /// `((1-α) + 2√(η(α-η)))^t`.
    pub fn bound(&self) -> Enclosure {
        rho(&self.alpha, &self.eta)
            .expect("validated parameters")
            .expect("alpha > 2 eta keeps the radicand nonnegative")
            .powi(self.t)
    }
}

/// Exact `Pr[S_t <= 0]` by dynamic programming over the partial-sum law.
///
/// Panics if the result exceeds the upper end of [`ChernoffModel::bound`].
pub fn chernoff_exact(model: &ChernoffModel) -> Rational {
    let t = model.t;
    let up = &model.alpha - &model.eta;
    let down = model.eta.clone();
    let stay = rational::one() - &model.alpha;
    // law[k] = Pr[S = k - t]
    let mut law = vec![Rational::zero(); 2 * t + 1];
    law[t] = rational::one();
    for _ in 0..t {
        let mut next = vec![Rational::zero(); 2 * t + 1];
        for (k, p) in law.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            next[k] += p * &stay;
            if k + 1 < next.len() {
                next[k + 1] += p * &up;
            }
            if k > 0 {
                next[k - 1] += p * &down;
            }
        }
        law = next;
    }
    let tail: Rational = law[..=t].iter().sum();
    assert!(&tail <= model.bound().hi(), "Pr[S_t <= 0] exceeds the closed-form bound");
    tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn spot_values() {
        let one = ChernoffModel::new(rat(92, 100), rat(1, 10), 1).unwrap();
        assert_eq!(chernoff_exact(&one), rat(18, 100));
        assert!((one.bound().midpoint() - 0.652_713).abs() < 1e-6);
        let two = ChernoffModel::new(rat(92, 100), rat(1, 10), 2).unwrap();
        assert_eq!(chernoff_exact(&two), rat(1964, 10000));
        assert!((two.bound().midpoint() - 0.426_034).abs() < 1e-6);
    }

    #[test]
    fn no_down_steps_meets_the_bound() {
        for t in 1..5 {
            let m = ChernoffModel::new(rat(3, 5), rat(0, 1), t).unwrap();
            let exact = chernoff_exact(&m);
            assert_eq!(exact, rational::pow(&rat(2, 5), t));
            assert_eq!(m.bound(), Enclosure::exact(exact));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ChernoffModel::new(rat(1, 5), rat(1, 10), 1).is_err());
        assert!(ChernoffModel::new(rat(1, 2), rat(-1, 10), 1).is_err());
        assert!(ChernoffModel::new(rat(1, 2), rat(1, 10), 0).is_err());
    }
}
