use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// `Σ_{k=0}^{min(d,N)} C(N,k)·(q-1)^k`: vectors in `F_q^N` with at most `d`
/// nonzero entries.
pub fn hitting_set_size(n: usize, d: &BigUint, q: u32) -> BigUint {
    let top = d.to_usize().map_or(n, |d| d.min(n));
    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    let mut pow = BigUint::from(1u32);
    for k in 0..=top {
        if k > 0 {
            binom = binom * (n - k + 1) / k;
            pow *= q - 1;
        }
        total += &binom * &pow;
    }
    total
}

/// The bounded-support vectors of `F_q^N`, in a fixed order: support size
/// ascending, then support positions lexicographically, then the nonzero
/// values lexicographically (first position most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    n: usize,
    d: usize,
    q: u32,
}

impl HittingSet {
    pub fn new(n: usize, d: &BigUint, q: u32) -> Self {
        let d = d.to_usize().map_or(n, |d| d.min(n));
        HittingSet { n, d, q }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Support bound after clamping to `N`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> BigUint {
        hitting_set_size(self.n, &BigUint::from(self.d), self.q)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of vectors with exactly `k` nonzero entries, if it fits.
    fn layer(&self, k: usize) -> Option<u64> {
        let mut binom: u128 = 1;
        for i in 0..k {
            binom = binom.checked_mul((self.n - i) as u128)? / (i as u128 + 1);
        }
        let pow = (self.q as u128 - 1).checked_pow(k as u32)?;
        binom.checked_mul(pow)?.to_u64()
    }

    pub fn iter(&self) -> HittingIter {
        HittingIter::start(self.clone())
    }

    /// Iterator positioned at `rank`; empty if `rank` is past the end.
    pub fn iter_from(&self, rank: u64) -> HittingIter {
        match self.unrank_state(rank) {
            Some((k, support, values)) => HittingIter {
                set: self.clone(),
                k,
                support,
                values,
                done: false,
            },
            None => HittingIter {
                set: self.clone(),
                k: 0,
                support: Vec::new(),
                values: Vec::new(),
                done: true,
            },
        }
    }

    /// The vector at position `rank`.
    pub fn unrank(&self, rank: u64) -> Option<Vec<u32>> {
        let (_, support, values) = self.unrank_state(rank)?;
        Some(self.materialize(&support, &values))
    }

    fn materialize(&self, support: &[usize], values: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.n];
        for (&p, &x) in support.iter().zip(values) {
            v[p] = x;
        }
        v
    }

    fn unrank_state(&self, mut rank: u64) -> Option<(usize, Vec<usize>, Vec<u32>)> {
        let base = self.q as u64 - 1;
        for k in 0..=self.d {
            let layer = self.layer(k)?;
            if rank >= layer {
                rank -= layer;
                continue;
            }
            let per_support = base.pow(k as u32);
            let mut comb_rank = rank / per_support;
            let mut val_rank = rank % per_support;
            // lexicographic combination unranking
            let mut support = Vec::with_capacity(k);
            let mut next = 0;
            for slot in 0..k {
                let remaining = k - slot - 1;
                loop {
                    let with_next = binom_u64(self.n - next - 1, remaining);
                    if comb_rank < with_next {
                        break;
                    }
                    comb_rank -= with_next;
                    next += 1;
                }
                support.push(next);
                next += 1;
            }
            let mut values = vec![1; k];
            for slot in values.iter_mut().rev() {
                *slot = (val_rank % base) as u32 + 1;
                val_rank /= base;
            }
            return Some((k, support, values));
        }
        None
    }
}

fn binom_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i as u128 + 1);
    }
    r as u64
}

#[derive(Debug, Clone)]
pub struct HittingIter {
    set: HittingSet,
    k: usize,
    support: Vec<usize>,
    values: Vec<u32>,
    done: bool,
}

impl HittingIter {
    fn start(set: HittingSet) -> Self {
        HittingIter {
            set,
            k: 0,
            support: Vec::new(),
            values: Vec::new(),
            done: false,
        }
    }

    /// Writes the current vector into `out` and advances; false when exhausted.
    pub fn next_into(&mut self, out: &mut [u32]) -> bool {
        if self.done {
            return false;
        }
        out.iter_mut().for_each(|x| *x = 0);
        for (&p, &x) in self.support.iter().zip(&self.values) {
            out[p] = x;
        }
        self.advance();
        true
    }

    fn advance(&mut self) {
        let q = self.set.q;
        // values: last position fastest
        for i in (0..self.k).rev() {
            if self.values[i] + 1 < q {
                self.values[i] += 1;
                return;
            }
            self.values[i] = 1;
        }
        // next combination in lexicographic order
        let n = self.set.n;
        for i in (0..self.k).rev() {
            if self.support[i] < n - self.k + i {
                self.support[i] += 1;
                for j in i + 1..self.k {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return;
            }
        }
        if self.k < self.set.d {
            self.k += 1;
            self.support = (0..self.k).collect();
            self.values = vec![1; self.k];
        } else {
            self.done = true;
        }
    }
}

impl Iterator for HittingIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let mut v = vec![0; self.set.n];
        self.next_into(&mut v).then_some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn sizes() {
        assert_eq!(hitting_set_size(4, &big(2), 2), big(11));
        assert_eq!(hitting_set_size(4, &big(4), 2), big(16));
        assert_eq!(hitting_set_size(3, &big(1), 3), big(7));
        assert_eq!(hitting_set_size(4, &big(1u64 << 40), 2), big(16));
    }

    #[test]
    fn small_order() {
        let v: Vec<Vec<u32>> = HittingSet::new(2, &big(1), 2).iter().collect();
        assert_eq!(v, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let v: Vec<Vec<u32>> = HittingSet::new(3, &big(2), 3).iter().take(9).collect();
        assert_eq!(
            v,
            vec![
                vec![0, 0, 0],
                vec![1, 0, 0],
                vec![2, 0, 0],
                vec![0, 1, 0],
                vec![0, 2, 0],
                vec![0, 0, 1],
                vec![0, 0, 2],
                vec![1, 1, 0],
                vec![1, 2, 0],
            ]
        );
    }

    #[test]
    fn n4_d2_q2() {
        let v: Vec<Vec<u32>> = HittingSet::new(4, &big(2), 2).iter().collect();
        assert_eq!(v.len(), 11);
        assert!(v.iter().all(|x| x.iter().filter(|&&c| c != 0).count() <= 2));
        assert_eq!(v.iter().collect::<HashSet<_>>().len(), 11);
    }

    // Oracle: filter the full space and sort by the documented key.
    fn oracle(n: usize, d: usize, q: u32) -> Vec<Vec<u32>> {
        let total = (q as usize).pow(n as u32);
        let mut all: Vec<Vec<u32>> = (0..total)
            .map(|mut i| {
                let mut v = vec![0; n];
                for s in v.iter_mut() {
                    *s = (i % q as usize) as u32;
                    i /= q as usize;
                }
                v
            })
            .filter(|v| v.iter().filter(|&&c| c != 0).count() <= d)
            .collect();
        all.sort_by_key(|v| {
            let support: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
            let vals: Vec<u32> = support.iter().map(|&i| v[i]).collect();
            (support.len(), support, vals)
        });
        all
    }

    #[test]
    fn matches_sorted_oracle() {
        for q in [2, 3, 5] {
            for n in 0..=4 {
                for d in 0..=n {
                    let got: Vec<Vec<u32>> = HittingSet::new(n, &big(d as u64), q).iter().collect();
                    assert_eq!(got, oracle(n, d, q), "n={n} d={d} q={q}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unrank_matches_iteration(n in 0usize..8, d in 0usize..8, q in prop::sample::select(vec![2u32, 3, 5])) {
            let d = d.min(n);
            let hs = HittingSet::new(n, &big(d as u64), q);
            let all: Vec<Vec<u32>> = hs.iter().collect();
            for (i, v) in all.iter().enumerate() {
                prop_assert_eq!(hs.unrank(i as u64), Some(v.clone()));
            }
            for i in (0..all.len()).step_by(97) {
                let rest: Vec<Vec<u32>> = hs.iter_from(i as u64).take(3).collect();
                prop_assert_eq!(&rest[..], &all[i..(i + 3).min(all.len())]);
            }
            let len = hs.len().to_u64().unwrap();
            prop_assert_eq!(hs.unrank(len), None);
            prop_assert_eq!(hs.iter_from(len).count(), 0);
        }
    }
}
