//! Small dense linear algebra over a [`Field`].

use crate::scalar::Field;

fn argmax_abs<T: Field>(v: &[T]) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, x) in v.iter().enumerate() {
        let a = x.abs();
        if a.negligible() {
            continue;
        }
        match &best {
            Some((_, b)) if a <= *b => {}
            _ => best = Some((i, a)),
        }
    }
    best.map(|(i, _)| i)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for a singular system.
pub fn solve<T: Field>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let column: Vec<T> = (col..n).map(|r| a[r][col].clone()).collect();
        let piv = col + argmax_abs(&column)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].negligible() {
                continue;
            }
            let f = a[r][col].clone() / p.clone();
            for c in col..n {
                let d = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - d;
            }
            let d = f * b[col].clone();
            b[r] = b[r].clone() - d;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

/// Stationary law of a row-stochastic matrix, if unique.
pub fn stationary<T: Field>(p: &[Vec<T>]) -> Option<Vec<T>> {
    let n = p.len();
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let v = p[c][r].clone();
                    if r == c {
                        v - T::one()
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    a[n - 1] = vec![T::one(); n];
    let mut b = vec![T::zero(); n];
    b[n - 1] = T::one();
    let pi = solve(a, b)?;
    let pi: Vec<T> = pi
        .into_iter()
        .map(|x| if x.negligible() { T::zero() } else { x })
        .collect();
    if pi.iter().any(|x| *x < T::zero()) {
        return None;
    }
    Some(pi)
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Divides by the largest absolute entry; returns `false` for a negligible vector.
pub fn normalize<T: Field>(v: &mut [T]) -> bool {
    match argmax_abs(v) {
        None => false,
        Some(i) => {
            let m = v[i].abs();
            for x in v.iter_mut() {
                *x = x.clone() / m.clone();
            }
            true
        }
    }
}

/// Row-echelon basis of a growing subspace.
#[derive(Clone, Debug)]
pub struct Basis<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Field> Default for Basis<T> {
    fn default() -> Self {
        Self { rows: Vec::new() }
    }
}

impl<T: Field> Basis<T> {
    /// Adds `v` if it is independent of the basis; returns the reduced vector when added.
    pub fn insert(&mut self, mut v: Vec<T>) -> Option<Vec<T>> {
        if !normalize(&mut v) {
            return None;
        }
        for (piv, b) in &self.rows {
            let f = v[*piv].clone();
            if f.negligible() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        let piv = argmax_abs(&v)?;
        let m = v[piv].clone();
        for x in v.iter_mut() {
            *x = x.clone() / m.clone();
        }
        for x in v.iter_mut() {
            if x.negligible() {
                *x = T::zero();
            }
        }
        // keep the basis fully reduced so later pivots stay independent
        for (_, b) in self.rows.iter_mut() {
            let f = b[piv].clone();
            if f.negligible() {
                continue;
            }
            for (x, y) in b.iter_mut().zip(&v) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        self.rows.push((piv, v.clone()));
        Some(v)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<T>> {
        self.rows.iter().map(|(_, v)| v)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}
