/// The `i`-th term (1-based) of the Luby restart sequence 1, 1, 2, 1, 1, 2, 4, 1, ...
///
/// Returns `None` for `i == 0`.
pub fn luby(i: u64) -> Option<u64> {
    if i == 0 {
        return None;
    }
    let mut i = i;
    loop {
        // smallest k with 2^k - 1 >= i
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return Some(1u64 << (k - 1));
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

/// Conflict budget before restart number `restart_count` fires.
pub fn restart_interval(restart_count: u64, base: u64) -> u64 {
    luby(restart_count.max(1)).unwrap_or(1).saturating_mul(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let got: alloc::vec::Vec<u64> = (1..=8).map(|i| luby(i).unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 1, 1, 2, 4, 1]);
        assert_eq!(luby(15), Some(8));
        assert_eq!(luby(0), None);
    }

    #[test]
    fn interval_scales_with_base() {
        assert_eq!(restart_interval(3, 64), 128);
        assert_eq!(restart_interval(1, 64), 64);
    }

    #[test]
    fn matches_recurrence() {
        // u(i) = 2^(k-1) if i = 2^k - 1, else u(i - 2^(k-1) + 1)
        fn reference(i: u64) -> u64 {
            let mut k = 1;
            while (1u64 << k) - 1 < i {
                k += 1;
            }
            if (1u64 << k) - 1 == i {
                1 << (k - 1)
            } else {
                reference(i - (1 << (k - 1)) + 1)
            }
        }
        for i in 1..2000 {
            assert_eq!(luby(i), Some(reference(i)), "i = {i}");
        }
    }
}
