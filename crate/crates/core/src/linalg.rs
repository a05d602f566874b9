//! Small dense complex linear algebra: Gaussian elimination with partial
//! pivoting. Matrices here are at most a few dozen rows.

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

/// Determinant via LU with partial pivoting.
pub fn determinant(m: &Matrix) -> Complex64 {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty range");
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let delta = factor * a[col][k];
                a[row][k] -= delta;
            }
        }
    }
    det
}

/// Solves `m x = rhs`; `None` if a pivot vanishes.
pub fn solve(m: &Matrix, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() == 0.0 {
            return None;
        }
        a.swap(pivot, col);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..=n {
                let delta = factor * a[col][k];
                a[row][k] -= delta;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: Complex64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Some(x)
}
