use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub const MAX_PERMANENT_SIZE: usize = 12;

/// Ryser's formula with Gray-code subset updates, `O(2ⁿ n)`.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Invalid(format!("permanent of a {}x{} matrix", n, m.ncols())));
    }
    if n > MAX_PERMANENT_SIZE {
        return Err(Error::Invalid(format!(
            "permanent size {n} exceeds the limit {MAX_PERMANENT_SIZE}"
        )));
    }
    Ok(ryser(m))
}

pub(crate) fn ryser(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0usize;
    for k in 1..(1usize << n) {
        let next = k ^ (k >> 1);
        let j = (gray ^ next).trailing_zeros() as usize;
        let sign = if next & (1 << j) != 0 { 1.0 } else { -1.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += m[(i, j)] * sign;
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

#[cfg(test)]
pub(crate) fn permanent_naive(m: &DMatrix<Complex64>) -> Complex64 {
    fn rec(m: &DMatrix<Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
        if row == m.nrows() {
            return Complex64::new(1.0, 0.0);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for c in 0..m.ncols() {
            if !used[c] {
                used[c] = true;
                s += m[(row, c)] * rec(m, row + 1, used);
                used[c] = false;
            }
        }
        s
    }
    rec(m, 0, &mut vec![false; m.ncols()])
}
