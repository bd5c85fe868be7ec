use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::decoder::{Decoder, Target};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `p(j) = Pr_Q[j ∈ Q]` for one target.
pub fn query_probability(decoder: &Decoder, target: Target, j: usize) -> Result<Rational> {
    let n = crate::decoder::LocalDecoder::n(decoder);
    if j == 0 || j > n {
        return Err(Error::CoordOutOfRange { coord: j, n });
    }
    Ok(decoder
        .entries(target)?
        .iter()
        .filter(|e| e.query.contains(&j))
        .map(|e| &e.weight)
        .sum())
}

/// Partition of `[n]` into heavy coordinates (`p(j) > q/(δn)`) and light ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyLightSplit {
    pub target: Target,
    pub delta: Rational,
    pub n: usize,
    pub q: usize,
    pub heavy: Vec<usize>,
    pub light: Vec<usize>,
    /// `p(j)` at index `j - 1`.
    pub probabilities: Vec<Rational>,
}

impl HeavyLightSplit {
    /// `q / (δ n)`.
    pub fn threshold(&self) -> Rational {
        rational::int(self.q as i64) / (&self.delta * rational::int(self.n as i64))
    }

    pub fn is_heavy(&self, j: usize) -> bool {
        self.heavy.binary_search(&j).is_ok()
    }

    /// `Q ∩ L` in coordinate order.
    pub fn light_part(&self, query: &[usize]) -> Vec<usize> {
        query.iter().copied().filter(|&j| !self.is_heavy(j)).collect()
    }

    /// `Q ∩ H` in coordinate order.
    pub fn heavy_part(&self, query: &[usize]) -> Vec<usize> {
        query.iter().copied().filter(|&j| self.is_heavy(j)).collect()
    }
}

fn check_delta(delta: &Rational) -> Result<()> {
    if !delta.is_positive() || delta > &rational::one() {
        return Err(Error::DeltaOutOfRange(rational::display(delta)));
    }
    Ok(())
}

pub fn heavy_light_split(decoder: &Decoder, target: Target, delta: &Rational) -> Result<HeavyLightSplit> {
    check_delta(delta)?;
    let n = crate::decoder::LocalDecoder::n(decoder);
    let q = decoder.q();
    let entries = decoder.entries(target)?;
    let mut probabilities = vec![Rational::zero(); n];
    for e in entries {
        for &j in &e.query {
            probabilities[j - 1] += &e.weight;
        }
    }
    let delta_n = delta * Rational::from_integer(BigInt::from(n));
    let threshold = Rational::from_integer(BigInt::from(q)) / &delta_n;
    let (mut heavy, mut light) = (Vec::new(), Vec::new());
    for (i, p) in probabilities.iter().enumerate() {
        if p > &threshold {
            heavy.push(i + 1);
        } else {
            light.push(i + 1);
        }
    }
    let total: Rational = probabilities.iter().sum();
    assert!(total <= Rational::from_integer(BigInt::from(q)), "sum of p(j) exceeds q");
    let h = Rational::from_integer(BigInt::from(heavy.len()));
    assert!(h <= delta_n, "|H| exceeds δn");
    // |H| q/(δn) < Σ_H p(j) <= q, so the inequality is strict once H is nonempty
    assert!(heavy.is_empty() || h < delta_n, "|H| attains δn");
    Ok(HeavyLightSplit {
        target,
        delta: delta.clone(),
        n,
        q,
        heavy,
        light,
        probabilities,
    })
}
