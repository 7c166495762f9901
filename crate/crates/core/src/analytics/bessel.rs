// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Integer-order Bessel functions of the first kind, orders 0 through 3.

/// `J_n(x)` for `n` in `0..=3`, accurate to about `1e-13` for `|x| <= 50`.
///
/// Small arguments use the power series; everything else uses Miller's
/// backward recurrence normalized with `J_0 + 2 sum_k J_2k = 1`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    assert!(order <= 3, "bessel_j supports orders 0..=3, got {order}");
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order % 2 == 1 { -v } else { v };
    }
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        return series(order, x);
    }
    miller(x)[order as usize]
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let neg_q = -half * half;
    let mut term = half.powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..60 {
        term *= neg_q / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Returns `[J_0, J_1, J_2, J_3](x)` for `x >= 1`.
fn miller(x: f64) -> [f64; 4] {
    const BIG: f64 = 1e250;
    let mut start = (x + 30.0 + 6.0 * x.sqrt()) as usize;
    start += start % 2;
    let mut out = [0.0; 4];
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let j = k - 1;
        if j <= 3 {
            out[j] = cur;
        }
        if j % 2 == 0 && j > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            for v in out.iter_mut() {
                *v /= BIG;
            }
        }
    }
    norm += cur;
    out.map(|v| v / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        for n in 1..=3 {
            assert_eq!(bessel_j(n, 0.0), 0.0);
        }
    }

    #[test]
    fn small_argument_leading_term() {
        let x = 1e-4;
        assert!(((bessel_j(1, x) - x / 2.0) / (x / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn parity() {
        for n in 0..=3 {
            for x in [0.3, 2.7, 17.0] {
                let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
                assert_eq!(bessel_j(n, -x), sign * bessel_j(n, x));
            }
        }
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.404825) > 0.0);
        assert!(bessel_j(0, 2.404827) < 0.0);
    }

    #[test]
    fn branches_agree_at_switch() {
        for n in 0..=3 {
            let lo = series(n, 1.0);
            let hi = miller(1.0)[n as usize];
            assert!((lo - hi).abs() < 1e-12, "order {n}: {lo} vs {hi}");
        }
    }
}
