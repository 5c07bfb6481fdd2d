use serde::{Deserialize, Serialize};

use super::hidden::HiddenFunctionModel;
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::sequence::Symbol;

/// Order-`L` chain on symbols `0..alphabet`.
///
/// `rows[c]` is the next-symbol law after context `c`, where contexts of
/// length `L` are numbered lexicographically with the oldest symbol most
/// significant. Order 0 is an i.i.d. law with a single row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovKernel<T> {
    order: usize,
    alphabet: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Field> MarkovKernel<T> {
    pub fn new(order: usize, alphabet: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidModel("empty alphabet".into()));
        }
        let contexts = alphabet
            .checked_pow(order as u32)
            .filter(|&c| c <= 1 << 16)
            .ok_or_else(|| Error::InvalidModel("too many contexts".into()))?;
        if rows.len() != contexts {
            return Err(Error::InvalidModel(format!(
                "order {order} over {alphabet} symbols needs {contexts} rows, got {}",
                rows.len()
            )));
        }
        for (c, row) in rows.iter().enumerate() {
            if row.len() != alphabet {
                return Err(Error::InvalidModel(format!("row {c} has {} entries", row.len())));
            }
            if row.iter().any(|x| *x < T::zero()) {
                return Err(Error::InvalidModel(format!("row {c} has a negative entry")));
            }
            let sum = row.iter().fold(T::zero(), |a, x| a + x.clone());
            if !(sum - T::one()).negligible() {
                return Err(Error::InvalidModel(format!("row {c} does not sum to 1")));
            }
        }
        Ok(Self {
            order,
            alphabet,
            rows,
        })
    }

    pub fn iid(law: Vec<T>) -> Result<Self> {
        let a = law.len();
        Self::new(0, a, vec![law])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Row index of a context given oldest first; `context.len()` must equal the order.
    pub fn context_index(&self, context: &[Symbol]) -> usize {
        context
            .iter()
            .fold(0, |acc, &s| acc * self.alphabet + s as usize)
    }

    pub fn row(&self, context: &[Symbol]) -> &[T] {
        &self.rows[self.context_index(context)]
    }

    /// The chain on contexts of length `max(L, 1)` observed through the last symbol.
    pub fn to_hidden(&self) -> Result<HiddenFunctionModel<T>> {
        let a = self.alphabet;
        let width = self.order.max(1);
        let states = a.pow(width as u32);
        let top = states / a;
        let mut p = vec![vec![T::zero(); states]; states];
        for (c, prow) in p.iter_mut().enumerate() {
            let row = if self.order == 0 { &self.rows[0] } else { &self.rows[c] };
            for (y, q) in row.iter().enumerate() {
                let next = (c % top) * a + y;
                prow[next] = prow[next].clone() + q.clone();
            }
        }
        let f = (0..states).map(|c| (c % a) as Symbol).collect();
        HiddenFunctionModel::new(p, f)
    }
}

impl MarkovKernel<f64> {
    /// Order-2 chain on three symbols: after `(a, b)` the next symbol is
    /// `(a + b) mod 3` with probability `0.9` and each other symbol with `0.05`.
    pub fn ternary_order2() -> Self {
        let mut rows = Vec::with_capacity(9);
        for a in 0..3 {
            for b in 0..3 {
                let mut row = vec![0.05; 3];
                row[(a + b) % 3] = 0.9;
                rows.push(row);
            }
        }
        Self::new(2, 3, rows).expect("valid kernel")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::MemoryLength;
    use num_rational::BigRational;

    #[test]
    fn rejects_non_stochastic() {
        assert!(MarkovKernel::new(1, 2, vec![vec![0.5, 0.5], vec![0.3, 0.3]]).is_err());
        assert!(MarkovKernel::new(1, 2, vec![vec![0.5, 0.5]]).is_err());
        assert!(MarkovKernel::new(1, 2, vec![vec![1.5, -0.5], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn iid_memory_is_zero() {
        let q = |a, b| BigRational::from_ratio(a, b);
        let m = MarkovKernel::iid(vec![q(1, 3), q(2, 3)]).unwrap().to_hidden().unwrap();
        for past in [vec![], vec![0], vec![1, 1, 0]] {
            let a = m.oracle(&past).unwrap();
            assert_eq!(a.memory, MemoryLength::Finite(0));
            assert_eq!(a.law, vec![(0, q(1, 3)), (1, q(2, 3))]);
        }
    }

    #[test]
    fn order_two_memory() {
        let k = MarkovKernel::ternary_order2();
        let h = k.to_hidden().unwrap();
        let a = h.oracle(&[2, 0, 1]).unwrap();
        assert_eq!(a.memory, MemoryLength::Finite(2));
        assert!((a.law[1].1 - 0.9).abs() < 1e-12);
        assert!(h.oracle(&[2, 0, 1]).unwrap().memory.finite().unwrap() <= k.order());
    }

    #[test]
    fn shorter_suffix_suffices() {
        // nominal order 2, but the law depends only on the last symbol
        let rows = vec![
            vec![0.2, 0.8],
            vec![0.6, 0.4],
            vec![0.2, 0.8],
            vec![0.6, 0.4],
        ];
        let h = MarkovKernel::new(2, 2, rows).unwrap().to_hidden().unwrap();
        assert_eq!(h.oracle(&[1, 0, 1]).unwrap().memory, MemoryLength::Finite(1));
    }
}
