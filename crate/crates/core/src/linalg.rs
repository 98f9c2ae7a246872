//! Gaussian elimination over any scalar backend, for the small affine
//! systems of the builder.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<S> {
    /// One solution; free unknowns are set to zero.
    Found { x: Vec<S>, pivots: Vec<usize> },
    /// Row `row` reduces to `0 = rhs` with `rhs ≠ 0`.
    Inconsistent { row: usize, rhs: S },
}

/// Solves `m · x = b` for `x`.
///
/// Columns are tried as pivots in the order given by `order` (which must be
/// a permutation of `0..cols`); a column without a usable pivot becomes a
/// free unknown. For floats the largest remaining entry is used as pivot.
pub fn solve<S: Scalar>(m: &[Vec<S>], b: &[S], order: &[usize], tol: f64) -> Solution<S> {
    let rows = m.len();
    let cols = order.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut rhs: Vec<S> = b.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for &col in order {
        if next == rows {
            break;
        }
        let best = (next..rows)
            .filter(|&r| !a[r][col].is_zero_within(tol))
            .max_by(|&x, &y| {
                a[x][col]
                    .to_c64()
                    .norm()
                    .partial_cmp(&a[y][col].to_c64().norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else { continue };
        a.swap(next, p);
        rhs.swap(next, p);
        let inv = a[next][col].checked_inv(tol).expect("pivot is nonzero");
        for r in 0..rows {
            if r == next || a[r][col].is_zero_within(0.0) {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            let pivot_row = a[next].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
            a[r][col] = S::zero();
            rhs[r] = rhs[r].clone() - factor * rhs[next].clone();
        }
        pivots.push((next, col));
        next += 1;
    }
    for (r, value) in rhs.iter().enumerate().skip(next) {
        if !value.is_zero_within(tol) {
            return Solution::Inconsistent {
                row: r,
                rhs: value.clone(),
            };
        }
    }
    let mut x = vec![S::zero(); cols];
    for &(r, col) in &pivots {
        x[col] = rhs[r].clone() * a[r][col].checked_inv(tol).expect("pivot is nonzero");
    }
    Solution::Found {
        x,
        pivots: pivots.into_iter().map(|(_, c)| c).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use num_complex::Complex64;

    fn ex(s: &str) -> Exact {
        s.parse().unwrap()
    }

    #[test]
    fn square_system() {
        // x + i y = -i, x - i y = i
        let m = vec![vec![ex("1"), ex("i")], vec![ex("1"), ex("-i")]];
        let b = vec![ex("-i"), ex("i")];
        match solve(&m, &b, &[0, 1], 0.0) {
            Solution::Found { x, .. } => assert_eq!(x, vec![ex("0"), ex("-1")]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_system() {
        let m = vec![vec![ex("1"), ex("1")], vec![ex("1"), ex("1")]];
        let b = vec![ex("-i"), ex("i")];
        assert!(matches!(solve(&m, &b, &[0, 1], 0.0), Solution::Inconsistent { .. }));
    }

    #[test]
    fn underdetermined_prefers_order() {
        // x0 + x1 + x2 = 3; pivot on x2 first, others free
        let m = vec![vec![ex("1"), ex("1"), ex("1")]];
        let b = vec![ex("3")];
        match solve(&m, &b, &[2, 0, 1], 0.0) {
            Solution::Found { x, pivots } => {
                assert_eq!(x, vec![ex("0"), ex("0"), ex("3")]);
                assert_eq!(pivots, vec![2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_tolerance() {
        let one = Complex64::new(1.0, 0.0);
        let m = vec![vec![one, one], vec![one, one + 1e-13]];
        let b = vec![one, one];
        assert!(matches!(solve(&m, &b, &[0, 1], 1e-9), Solution::Found { .. }));
    }
}
