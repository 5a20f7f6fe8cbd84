//! Raw enumeration of the combinatorial objects behind complete types.

/// Restricted growth strings of length `k` (set partitions), lexicographic.
pub fn restricted_growth_strings(k: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, k: usize, max: i16, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..=(max + 1) as u8 {
            cur.push(v);
            go(cur, k, max.max(v as i16), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), k, -1, &mut out);
    out
}

/// Rank vectors of weak orders on `k` points: vectors over `0..r` hitting
/// every value, lexicographic.
pub fn weak_orders(k: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, used: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u8>>) {
        let max = used.iter().rposition(|&c| c > 0).map(|m| m as i32).unwrap_or(-1);
        let distinct = used.iter().filter(|&&c| c > 0).count() as i32;
        let missing = (max + 1 - distinct) as usize;
        let remaining = k - cur.len();
        if missing > remaining {
            return;
        }
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..k {
            cur.push(v as u8);
            used[v] += 1;
            go(cur, used, k, out);
            used[v] -= 1;
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), &mut vec![0; k], k, &mut out);
    out
}

/// Renormalizes arbitrary labels into a restricted growth string.
pub fn normalize_rgs(labels: impl IntoIterator<Item = u64>) -> Vec<u8> {
    let mut seen: Vec<u64> = Vec::new();
    labels
        .into_iter()
        .map(|l| match seen.iter().position(|&s| s == l) {
            Some(i) => i as u8,
            None => {
                seen.push(l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Compresses arbitrary ordered keys into dense ranks `0..r`.
pub fn dense_ranks<T: Ord + Clone>(keys: &[T]) -> Vec<u8> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present") as u8)
        .collect()
}

pub fn bell(k: usize) -> u128 {
    // Bell triangle.
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let x = next.last().unwrap().saturating_add(*v);
            next.push(x);
        }
        row = next;
    }
    row[0]
}

pub fn ordered_bell(k: usize) -> u128 {
    // a(n) = sum_{i=1..n} C(n,i) a(n-i)
    let mut a = vec![1u128];
    for n in 1..=k {
        let mut s = 0u128;
        let mut c = 1u128;
        for i in 1..=n {
            c = c * (n - i + 1) as u128 / i as u128;
            s = s.saturating_add(c.saturating_mul(a[n - i]));
        }
        a.push(s);
    }
    a[k]
}
