//! The parameter recursions. Values that would overflow saturate.

/// `τ(0,k) = k−2`, `τ(h,k) = τ(h−1, 2k+1) + k + 1`.
pub fn tau(h: usize, k: usize) -> i64 {
    let mut acc: i64 = 0;
    let mut k = k as i64;
    for _ in 0..h {
        acc = acc.saturating_add(k + 1);
        k = k.saturating_mul(2).saturating_add(1);
    }
    acc.saturating_add(k - 2)
}

/// Treewidth bound certified by the inductive partition when the `h = 1`
/// torso is kept whole: `k + t` at `h = 1`, then `+ k + 1` per level with
/// `k ↦ 2k + 1`.
pub fn singleton_tw_bound(h: usize, k: usize, t: usize) -> i64 {
    if h <= 1 {
        return (k + t) as i64;
    }
    singleton_tw_bound(h - 1, 2 * k + 1, t).saturating_add(k as i64 + 1)
}

/// `c(0,d,k) = 1`, `c(h,d,k) = max{d−1, 2, k, c(h−1, d+2k, 2k+1), 2(d−1)2^k − 1}`.
pub fn c_param(h: usize, d: usize, k: usize) -> u128 {
    if h == 0 {
        return 1;
    }
    let (d, k) = (d as u128, k as u128);
    let pow = if k >= 126 { u128::MAX } else { 1u128 << k };
    let last = 2u128
        .saturating_mul(d.saturating_sub(1))
        .saturating_mul(pow)
        .saturating_sub(1);
    let inner = c_param(h - 1, sat_usize(d + 2 * k), sat_usize(2 * k + 1));
    [d.saturating_sub(1), 2, k, inner, last].into_iter().max().unwrap()
}

/// `|V(K_k ⊕ U_{h,d})| = k + d(d^h − 1)/(d − 1)`, and `k + h` when `d = 1`.
pub fn t_size(h: usize, d: usize, k: usize) -> u128 {
    let mut level: u128 = 1;
    let mut total: u128 = 0;
    for _ in 0..h {
        level = level.saturating_mul(d as u128);
        total = total.saturating_add(level);
    }
    if d == 1 {
        total = h as u128;
    }
    total.saturating_add(k as u128)
}

/// `ε` with the Helly substitution: `max{k−3, 1}` at `h = 0`, otherwise
/// `max{d−1, k, (d−1)t, eps_impl(h−1, d+2k, 2k+1, t)}`.
pub fn eps_impl(h: usize, d: usize, k: usize, t: usize) -> u128 {
    if h == 0 {
        return (k as u128).saturating_sub(3).max(1);
    }
    let (dd, kk, tt) = (d as u128, k as u128, t as u128);
    let inner = eps_impl(h - 1, sat_usize(dd + 2 * kk), sat_usize(2 * kk + 1), t);
    [dd.saturating_sub(1), kk, dd.saturating_sub(1).saturating_mul(tt), inner]
        .into_iter()
        .max()
        .unwrap()
}

fn sat_usize(x: u128) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX / 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_closed_form() {
        for h in 0..=10 {
            assert_eq!(tau(h, 0), (1i64 << (h + 1)) - 4, "h = {h}");
        }
        assert_eq!(tau(1, 0), 0);
        assert_eq!(tau(0, 5), 3);
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_param(0, 7, 3), 1);
        assert_eq!(c_param(1, 3, 1), 7);
        assert_eq!(c_param(2, 2, 0), 3);
        assert_eq!(c_param(1, 2, 1), 3);
    }

    #[test]
    fn t_size_examples() {
        assert_eq!(t_size(2, 2, 0), 6);
        assert_eq!(t_size(2, 3, 2), 14);
        for d in 1..6 {
            assert_eq!(t_size(1, d, 4), 4 + d as u128);
        }
        assert_eq!(t_size(3, 1, 2), 5);
    }

    #[test]
    fn eps_examples() {
        assert_eq!(eps_impl(0, 9, 2, 5), 1);
        assert_eq!(eps_impl(1, 2, 0, 3), 3);
    }

    #[test]
    fn eps_is_monotone() {
        for h in 0..=4 {
            for d in 1..5 {
                for k in 0..5 {
                    for t in 1..5 {
                        let e = eps_impl(h, d, k, t);
                        assert!(eps_impl(h + 1, d, k, t) >= e);
                        assert!(eps_impl(h, d + 1, k, t) >= e);
                        assert!(eps_impl(h, d, k + 1, t) >= e);
                        assert!(eps_impl(h, d, k, t + 1) >= e);
                    }
                }
            }
        }
    }
}
