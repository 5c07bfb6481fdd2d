//! Stationary binary renewal processes.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_distr::{Geometric, Zeta};
use serde::{Deserialize, Serialize};

use super::hidden::HiddenFunctionModel;
use super::kernel::MarkovKernel;
use crate::error::{Error, Result};
use crate::sequence::Symbol;

/// Law of the gaps between consecutive ones, on `{1, 2, ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GapLaw {
    /// `probs[g - 1] = P(G = g)`.
    Finite { probs: Vec<f64> },
    /// `P(G = g) = p (1 - p)^{g - 1}`.
    Geometric { p: f64 },
    /// `P(G = g) ∝ g^{-s}`; the mean is finite iff `s > 2`.
    Zeta { s: f64 },
}

impl GapLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            GapLaw::Finite { probs } => {
                if probs.iter().any(|&p| !(p >= 0.0)) {
                    return Err(Error::InvalidModel("negative gap probability".into()));
                }
                if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidModel("gap probabilities do not sum to 1".into()));
                }
                Ok(())
            }
            GapLaw::Geometric { p } if *p > 0.0 && *p <= 1.0 => Ok(()),
            GapLaw::Geometric { p } => Err(Error::InvalidModel(format!("geometric parameter {p} outside (0, 1]"))),
            GapLaw::Zeta { s } if *s > 2.0 => Ok(()),
            GapLaw::Zeta { s } => Err(Error::InvalidModel(format!("zeta gaps with s = {s} have infinite mean"))),
        }
    }

    /// Finite-support law with trailing zeros removed.
    fn support(probs: &[f64]) -> &[f64] {
        let end = probs.iter().rposition(|&p| p > 0.0).map_or(0, |i| i + 1);
        &probs[..end]
    }

    pub fn mean(&self) -> f64 {
        match self {
            GapLaw::Finite { probs } => probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum(),
            GapLaw::Geometric { p } => 1.0 / p,
            GapLaw::Zeta { s } => {
                // ratio of zeta sums by direct summation with an integral tail bound
                let terms = 1_000_000u32;
                let (mut a, mut b) = (0.0, 0.0);
                for g in (1..=terms).rev() {
                    let g = g as f64;
                    a += g.powf(1.0 - s);
                    b += g.powf(-s);
                }
                let t = terms as f64;
                a += t.powf(2.0 - s) / (s - 2.0);
                b += t.powf(1.0 - s) / (s - 1.0);
                a / b
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenewalProcess {
    law: GapLaw,
}

impl RenewalProcess {
    pub fn new(law: GapLaw) -> Result<Self> {
        law.validate()?;
        Ok(Self { law })
    }

    pub fn law(&self) -> &GapLaw {
        &self.law
    }

    fn gap<R: Rng + ?Sized>(&self, rng: &mut R, finite: Option<&WeightedIndex<f64>>) -> usize {
        match &self.law {
            GapLaw::Finite { .. } => finite.expect("finite sampler").sample(rng) + 1,
            GapLaw::Geometric { p } => Geometric::new(*p).expect("valid p").sample(rng) as usize + 1,
            GapLaw::Zeta { s } => Zeta::new(*s).expect("valid s").sample(rng) as usize,
        }
    }

    /// Length-biased gap covering time 0.
    fn first_gap<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.law {
            GapLaw::Finite { probs } => {
                let w = WeightedIndex::new(probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p))
                    .expect("positive mean");
                w.sample(rng) + 1
            }
            // g p^2 (1 - p)^{g - 1}: the sum of two gaps minus one
            GapLaw::Geometric { p } => {
                let d = Geometric::new(*p).expect("valid p");
                (d.sample(rng) + d.sample(rng)) as usize + 1
            }
            // g^{1-s} is a zeta law with exponent s - 1
            GapLaw::Zeta { s } => Zeta::new(*s - 1.0).expect("s > 2").sample(rng) as usize,
        }
    }

    /// Stationary path of length `len`: the gap covering time 0 is
    /// length-biased and time 0 sits at a uniform phase within it.
    pub fn sample_path<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Symbol> {
        let mut out = vec![0; len];
        if len == 0 {
            return out;
        }
        let finite = match &self.law {
            GapLaw::Finite { probs } => Some(WeightedIndex::new(probs).expect("valid law")),
            _ => None,
        };
        let g = self.first_gap(rng);
        let phase = rng.gen_range(0..g);
        if phase == 0 {
            out[0] = 1;
        }
        let mut t = g - phase;
        while t < len {
            out[t] = 1;
            t += self.gap(rng, finite.as_ref());
        }
        out
    }

    /// Hidden chain on the residual time to the next one, for finite gaps;
    /// an i.i.d. kernel for geometric gaps; `NoOracle` otherwise.
    pub fn hidden(&self) -> Result<HiddenFunctionModel<f64>> {
        match &self.law {
            GapLaw::Finite { probs } => {
                let probs = GapLaw::support(probs);
                let m = probs.len();
                let mut p = vec![vec![0.0; m]; m];
                for (g, q) in probs.iter().enumerate() {
                    // a gap of g + 1 leaves residual g after the one
                    p[0][g] += q;
                }
                for (r, row) in p.iter_mut().enumerate().skip(1) {
                    row[r - 1] = 1.0;
                }
                let f = (0..m).map(|r| Symbol::from(r == 0)).collect();
                HiddenFunctionModel::new(p, f)
            }
            GapLaw::Geometric { p } => MarkovKernel::iid(vec![1.0 - p, *p])?.to_hidden(),
            GapLaw::Zeta { .. } => Err(Error::NoOracle),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::MemoryLength;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_gap() {
        let r = RenewalProcess::new(GapLaw::Finite { probs: vec![0.0, 1.0] }).unwrap();
        let mut phases = [0usize; 2];
        for seed in 0..40 {
            let v = r.sample_path(50, &mut ChaCha8Rng::seed_from_u64(seed));
            assert!(v.windows(2).all(|w| w[0] != w[1]));
            phases[v[0] as usize] += 1;
        }
        assert!(phases[0] > 5 && phases[1] > 5);
    }

    #[test]
    fn infinite_mean_is_rejected() {
        assert!(RenewalProcess::new(GapLaw::Zeta { s: 2.0 }).is_err());
        assert!(RenewalProcess::new(GapLaw::Geometric { p: 0.0 }).is_err());
        assert!(RenewalProcess::new(GapLaw::Finite { probs: vec![0.5, 0.4] }).is_err());
    }

    #[test]
    fn stationary_density_of_ones() {
        // P(X = 1) = 1 / E[G] for every law
        for law in [
            GapLaw::Finite { probs: vec![0.2, 0.0, 0.8] },
            GapLaw::Geometric { p: 0.3 },
            GapLaw::Zeta { s: 3.5 },
        ] {
            let r = RenewalProcess::new(law.clone()).unwrap();
            let mean = law.mean();
            let mut ones = 0usize;
            let (reps, len) = (4000, 8);
            // the first symbol alone checks the phase initialization
            for seed in 0..reps {
                let v = r.sample_path(len, &mut ChaCha8Rng::seed_from_u64(seed));
                ones += v[0] as usize;
            }
            let f = ones as f64 / reps as f64;
            let p = 1.0 / mean;
            let sd = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((f - p).abs() < 4.0 * sd, "{law:?}: {f} vs {p}");
        }
    }

    #[test]
    fn residual_chain_oracle() {
        let r = RenewalProcess::new(GapLaw::Finite { probs: vec![0.5, 0.0, 0.5] }).unwrap();
        let h = r.hidden().unwrap();
        // after a one the next symbol is one with probability 1/2
        let a = h.oracle(&[0, 1]).unwrap();
        assert_eq!(a.memory, MemoryLength::Finite(1));
        assert!((a.law[1].1 - 0.5).abs() < 1e-12);
        // "1, 0" forces the long gap
        let a = h.oracle(&[1, 0]).unwrap();
        assert_eq!(a.memory, MemoryLength::Finite(2));
        assert!(a.law[1].1.abs() < 1e-12);
        let g = RenewalProcess::new(GapLaw::Geometric { p: 0.3 }).unwrap().hidden().unwrap();
        assert_eq!(g.oracle(&[1, 0, 0]).unwrap().memory, MemoryLength::Finite(0));
    }
}
