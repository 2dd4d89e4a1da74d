use num::{One, Zero};

use crate::rational::Rational;

/// Solves `a · x = b` by Gaussian elimination with partial pivoting on the
/// first non-zero entry. Returns `None` for a singular system.
pub(crate) fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn two_by_two() {
        // 2x - y = 1, -x + 2y = 0
        let a = vec![vec![int(2), int(-1)], vec![int(-1), int(2)]];
        let x = solve(a, vec![int(1), int(0)]).unwrap();
        assert_eq!(x, vec![ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve(a, vec![int(1), int(2)]).is_none());
    }

    #[test]
    fn needs_row_swap() {
        let a = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(solve(a, vec![int(3), int(4)]).unwrap(), vec![int(4), int(3)]);
    }
}
