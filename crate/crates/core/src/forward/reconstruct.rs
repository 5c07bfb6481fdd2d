//! Backward-path reconstruction from forward data via recurrence times.
//!
//! For an anchor `i`, `zeta_0 = 0` and `zeta_m = zeta_{m-1} + t` where `t > 0`
//! is the first shift at which the length-`m` block ending at `i + zeta_{m-1}`
//! recurs. The reconstructed symbol is `X~_{-m} = X_{i + zeta_m - m}`, so the
//! depth-`m` reconstruction `X~_{-m}^0` is the data window of length `m + 1`
//! ending at `i + zeta_m`.

use crate::sequence::{Sample, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub anchor: usize,
    /// `zeta[m]` for `m = 0..=depth`.
    pub zeta: Vec<usize>,
    /// Next shift to try for the following level.
    resume_t: usize,
}

impl Reconstruction {
    pub fn new(anchor: usize) -> Self {
        Self {
            anchor,
            zeta: vec![0],
            resume_t: 1,
        }
    }

    /// Deepest materialized level (`0` before any recurrence was found).
    pub fn depth(&self) -> usize {
        self.zeta.len() - 1
    }

    /// Materializes further levels using `data`, which must extend the data of
    /// earlier calls. Stops at `max_depth` or when the next recurrence lies
    /// beyond the data.
    pub fn extend(&mut self, data: &[Symbol], max_depth: usize) {
        let i = self.anchor;
        if i >= data.len() {
            return;
        }
        while self.depth() < max_depth {
            let m = self.depth() + 1;
            let a = i + self.zeta[m - 1];
            let block = &data[a + 1 - m..=a];
            let mut t = self.resume_t;
            let mut found = None;
            while a + t < data.len() {
                let end = a + t;
                if data[end] == block[m - 1] && data[end + 1 - m..=end] == *block {
                    found = Some(t);
                    break;
                }
                t += 1;
            }
            match found {
                Some(t) => {
                    self.zeta.push(self.zeta[m - 1] + t);
                    self.resume_t = 1;
                }
                None => {
                    self.resume_t = t;
                    return;
                }
            }
        }
    }

    /// `X~_{-m}`.
    pub fn tilde(&self, data: &[Symbol], m: usize) -> Symbol {
        data[self.anchor + self.zeta[m] - m]
    }

    /// `max{j >= -1 : i + zeta_j <= n}` over the materialized levels.
    pub fn eta(&self, n: usize) -> i64 {
        if self.anchor > n {
            return -1;
        }
        let lim = n - self.anchor;
        self.zeta.partition_point(|&z| z <= lim) as i64 - 1
    }

    /// `X~_{-m}^0` in time order.
    pub fn window<'a>(&self, data: &'a [Symbol], m: usize) -> &'a [Symbol] {
        let end = self.anchor + self.zeta[m];
        &data[end - m..=end]
    }
}

/// Reconstruction at anchor `i` up to `max_depth` within the sample.
pub fn zeta_times(sample: &Sample, i: usize, max_depth: usize) -> Reconstruction {
    let mut r = Reconstruction::new(i);
    r.extend(sample.symbols(), max_depth);
    r
}

/// Reconstruction depth available within `X_0^n`; `-1` when `i > n`.
pub fn eta(sample: &Sample, i: usize) -> i64 {
    let n = sample.n();
    if i > n {
        return -1;
    }
    zeta_times(sample, i, usize::MAX).eta(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alternating_first_level() {
        let s = Sample::forward(vec![0, 1, 0, 1, 0, 1, 0, 1, 0]).unwrap();
        let r = zeta_times(&s, 0, 3);
        assert_eq!(r.zeta[1], 2);
        assert_eq!(r.tilde(s.symbols(), 1), 1);
        assert_eq!(r.tilde(s.symbols(), 0), 0);
    }

    #[test]
    fn constant_sample() {
        let s = Sample::forward(vec![7; 20]).unwrap();
        let r = zeta_times(&s, 0, 10);
        assert_eq!(r.zeta, (0..=10).collect::<Vec<_>>());
        assert!((0..=10).all(|m| r.tilde(s.symbols(), m) == 7));
        let s = Sample::forward(vec![7; 6]).unwrap();
        assert_eq!(eta(&s, 0), 5);
    }

    #[test]
    fn no_recurrence() {
        let s = Sample::forward(vec![3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        assert_eq!(zeta_times(&s, 0, 5).depth(), 0);
    }

    #[test]
    fn eta_boundaries() {
        let s = Sample::forward(vec![0, 1, 1, 0, 1, 0]).unwrap();
        assert_eq!(eta(&s, 5), 0);
        assert_eq!(eta(&s, 6), -1);
    }

    #[test]
    fn resume_matches_one_shot() {
        let v: Vec<Symbol> = (0..400u32).map(|i| (i * 7 + i / 5) % 3).collect();
        let full = zeta_times(&Sample::forward(v.clone()).unwrap(), 4, 50);
        let mut r = Reconstruction::new(4);
        for end in (10..=400).step_by(37) {
            r.extend(&v[..end], 50);
        }
        r.extend(&v, 50);
        assert_eq!(r, full);
    }

    proptest! {
        #[test]
        fn replay(v in prop::collection::vec(0u32..3, 1..300), i in 0usize..20) {
            let s = Sample::forward(v.clone()).unwrap();
            let i = i.min(v.len() - 1);
            let r = zeta_times(&s, i, 40);
            for m in 1..=r.depth() {
                prop_assert!(r.zeta[m] > r.zeta[m - 1]);
                let a = i + r.zeta[m - 1];
                let b = i + r.zeta[m];
                prop_assert_eq!(&v[a + 1 - m..=a], &v[b + 1 - m..=b]);
                // no earlier recurrence
                for t in a + 1..b {
                    prop_assert!(v[t + 1 - m..=t] != v[a + 1 - m..=a]);
                }
                // the window of depth m is consistent with the materialized symbols
                let w = r.window(&v, m);
                for j in 0..=m {
                    prop_assert_eq!(w[m - j], r.tilde(&v, j));
                }
            }
        }
    }
}
