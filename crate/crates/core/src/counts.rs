//! Closed-form sizes of the enumerated families, for size estimates.

use num::{BigUint, One, Zero};

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Number of ways to split `[n]` into nonempty blocks and decorate each block
/// of size `m` in `g(m)` ways, with an extra factor `h(k)` for `k` blocks.
fn decorated(n: usize, g: &dyn Fn(usize) -> BigUint, h: &dyn Fn(usize) -> BigUint) -> BigUint {
    // p[s][k]: decorated partitions of an s-set into k blocks.
    let mut p = vec![vec![BigUint::zero(); n + 1]; n + 1];
    p[0][0] = BigUint::one();
    for s in 1..=n {
        for k in 1..=s {
            let mut total = BigUint::zero();
            for m in 1..=s - k + 1 {
                total += binomial(s - 1, m - 1) * g(m) * &p[s - m][k - 1];
            }
            p[s][k] = total;
        }
    }
    (1..=n).map(|k| &p[n][k] * h(k)).sum()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn one(_: usize) -> BigUint {
    BigUint::one()
}

fn cyclic_orders(k: usize) -> BigUint {
    factorial(k - 1)
}

/// `|P([n])|`.
pub fn bell(n: usize) -> BigUint {
    if n == 0 {
        BigUint::one()
    } else {
        decorated(n, &one, &one)
    }
}

/// `|C([n])|`.
pub fn cyclic_count(n: usize) -> BigUint {
    decorated(n, &one, &cyclic_orders)
}

/// `|D([n])|`.
pub fn nested_count(n: usize) -> BigUint {
    decorated(n, &cyclic_count, &one)
}

/// `|G([n])|`.
pub fn g_count(n: usize) -> BigUint {
    decorated(n, &nested_count, &cyclic_orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(f: fn(usize) -> BigUint, upto: usize) -> Vec<u64> {
        (1..=upto).map(|n| f(n).try_into().unwrap()).collect()
    }

    #[test]
    fn known_sequences() {
        assert_eq!(seq(bell, 7), [1, 2, 5, 15, 52, 203, 877]);
        assert_eq!(seq(cyclic_count, 7), [1, 2, 6, 26, 150, 1082, 9366]);
        assert_eq!(seq(nested_count, 6), [1, 3, 13, 75, 541, 4683]);
        assert_eq!(seq(g_count, 5), [1, 4, 24, 196, 2040]);
    }
}
