//! Exact integer combinatorics used by the tensor and chaos algebra.

/// Largest `n` with `n!` representable in a `u64`.
pub const MAX_FACTORIAL: usize = 20;

pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_FACTORIAL, "factorial({n}) overflows u64");
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for j in 0..k as u64 {
        // acc * (n - j) is divisible by (j + 1) at every step
        acc = acc * (n as u64 - j) / (j + 1);
    }
    acc
}

/// Product-formula coefficient `p! q! / (i! (p-i)! (q-i)!)`.
pub fn product_coefficient(p: usize, q: usize, i: usize) -> u64 {
    debug_assert!(i <= p.min(q));
    binomial(p, i) * binomial(q, i) * factorial(i)
}

/// `(n - 1)!!` for even `n`, the `n`-th standard Gaussian moment; zero for odd `n`.
pub fn gaussian_moment_1d(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    (1..n as u64).step_by(2).product()
}

/// Number of distinct permutations of a sorted multiset, `p! / prod(mult!)`.
pub fn multiset_permutations(sorted: &[usize]) -> u64 {
    let mut count = factorial(sorted.len());
    for run in runs(sorted) {
        count /= factorial(run.1);
    }
    count
}

/// Run-length encoding `(value, multiplicity)` of a sorted slice.
pub fn runs(sorted: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut pos = 0;
    std::iter::from_fn(move || {
        if pos >= sorted.len() {
            return None;
        }
        let value = sorted[pos];
        let start = pos;
        while pos < sorted.len() && sorted[pos] == value {
            pos += 1;
        }
        Some((value, pos - start))
    })
}

/// Lexicographic successor of `v`; returns `false` once `v` is the last
/// permutation. Starting from a sorted slice this enumerates each distinct
/// multiset permutation exactly once.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `visit` on every nondecreasing index tuple of length `order` over `0..dim`.
pub fn for_each_sorted_index(dim: usize, order: usize, mut visit: impl FnMut(&[usize])) {
    if order == 0 {
        visit(&[]);
        return;
    }
    if dim == 0 {
        return;
    }
    let mut idx = vec![0usize; order];
    loop {
        visit(&idx);
        let mut k = order;
        while k > 0 && idx[k - 1] == dim - 1 {
            k -= 1;
        }
        if k == 0 {
            return;
        }
        let next = idx[k - 1] + 1;
        for slot in &mut idx[k - 1..] {
            *slot = next;
        }
    }
}

/// Calls `visit(chosen, rest)` for every distinct sub-multiset of `sorted`
/// of size `k` together with its complement. Both slices are sorted.
pub fn for_each_submultiset(sorted: &[usize], k: usize, mut visit: impl FnMut(&[usize], &[usize])) {
    let groups: Vec<(usize, usize)> = runs(sorted).collect();
    let mut take = vec![0usize; groups.len()];
    let mut chosen = Vec::with_capacity(k);
    let mut rest = Vec::with_capacity(sorted.len().saturating_sub(k));

    fn recurse(
        g: usize,
        remaining: usize,
        groups: &[(usize, usize)],
        take: &mut [usize],
        chosen: &mut Vec<usize>,
        rest: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &[usize]),
    ) {
        if g == groups.len() {
            if remaining == 0 {
                chosen.clear();
                rest.clear();
                for (&(value, mult), &t) in groups.iter().zip(take.iter()) {
                    chosen.extend(std::iter::repeat_n(value, t));
                    rest.extend(std::iter::repeat_n(value, mult - t));
                }
                visit(chosen, rest);
            }
            return;
        }
        let capacity: usize = groups[g + 1..].iter().map(|g| g.1).sum();
        let (_, mult) = groups[g];
        for t in 0..=mult.min(remaining) {
            if remaining - t > capacity {
                continue;
            }
            take[g] = t;
            recurse(g + 1, remaining - t, groups, take, chosen, rest, visit);
        }
    }

    if k > sorted.len() {
        return;
    }
    recurse(0, k, &groups, &mut take, &mut chosen, &mut rest, &mut visit);
}
