//! Exhaustive lists of small finite abelian groups, in canonical order
//! (by order, then lexicographically by invariant factors).

use crate::arith;
use crate::group::FiniteAbelianGroup;

/// Partitions of `n` as non-decreasing part lists.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min..=rest {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// The `p`-group with cyclic summands `Z(p^{a})` for `a` in `exponents`.
pub fn p_group(p: u64, exponents: &[u32]) -> FiniteAbelianGroup {
    let orders: Vec<u64> = exponents.iter().map(|&a| p.pow(a)).collect();
    FiniteAbelianGroup::from_cyclic_orders(&orders).expect("prime powers form a valid group")
}

/// All nontrivial abelian `p`-groups of order at most `max_order`.
pub fn p_groups(p: u64, max_order: u64) -> Vec<FiniteAbelianGroup> {
    let mut out = Vec::new();
    let mut n = 1u32;
    while p.checked_pow(n).is_some_and(|o| o <= max_order) {
        for part in partitions(n) {
            out.push(p_group(p, &part));
        }
        n += 1;
    }
    sort_canonical(&mut out);
    out
}

/// Every nontrivial abelian `p`-group of order at most `max_order`, over all primes.
pub fn all_p_groups(max_order: u64) -> Vec<FiniteAbelianGroup> {
    let mut out: Vec<_> = arith::primes_upto(max_order)
        .into_iter()
        .flat_map(|p| p_groups(p, max_order))
        .collect();
    sort_canonical(&mut out);
    out
}

/// Every abelian group of order at most `max_order`, the trivial group included.
pub fn all_groups(max_order: u64) -> Vec<FiniteAbelianGroup> {
    let mut out = vec![FiniteAbelianGroup::trivial()];
    for n in 2..=max_order {
        let mut acc: Vec<Vec<u64>> = vec![vec![]];
        for (p, e) in arith::factorize(n) {
            let mut next = Vec::new();
            for orders in &acc {
                for part in partitions(e) {
                    let mut o = orders.clone();
                    o.extend(part.iter().map(|&a| p.pow(a)));
                    next.push(o);
                }
            }
            acc = next;
        }
        for orders in acc {
            out.push(FiniteAbelianGroup::from_cyclic_orders(&orders).expect("valid orders"));
        }
    }
    sort_canonical(&mut out);
    out
}

fn sort_canonical(groups: &mut [FiniteAbelianGroup]) {
    groups.sort_by(|a, b| {
        (a.order(), a.invariant_factors()).cmp(&(b.order(), b.invariant_factors()))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn catalog_sizes() {
        assert_eq!(p_groups(2, 64).len(), 29);
        assert_eq!(p_groups(3, 64).len(), 1 + 2 + 3);
        // Number of abelian groups of order n for n = 1..=32, summed.
        let per_order = [
            1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5, 1, 2, 1, 2, 1, 1, 1, 3, 2, 1, 3, 2, 1,
            1, 1, 7,
        ];
        assert_eq!(all_groups(32).len(), per_order.iter().sum::<usize>());
        for g in all_groups(32) {
            assert!(g.order() <= 32);
        }
    }
}
