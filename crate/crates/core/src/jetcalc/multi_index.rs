use std::cmp::Ordering;
use std::fmt;

/// Largest supported base dimension.
pub const MAX_DIM: usize = 8;

/// Multi-index `σ = (σ_1, …, σ_n)` stored inline so jet variables stay `Copy`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    e: [u8; MAX_DIM],
    n: u8,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "base dimension {n} exceeds {MAX_DIM}");
        MultiIndex { e: [0; MAX_DIM], n: n as u8 }
    }

    pub fn from_slice(v: &[u32]) -> Self {
        let mut m = Self::zero(v.len());
        for (i, &x) in v.iter().enumerate() {
            m.e[i] = u8::try_from(x).expect("multi-index entry too large");
        }
        m
    }

    /// The unit index `1_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.e[i] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.e[..self.dim()].iter().map(|&x| x as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.entries().collect()
    }

    /// `|σ|`
    pub fn order(&self) -> usize {
        self.e[..self.dim()].iter().map(|&x| x as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 0
    }

    pub fn inc(&self, i: usize) -> Self {
        let mut m = *self;
        m.e[i] = m.e[i].checked_add(1).expect("multi-index overflow");
        m
    }

    pub fn dec(&self, i: usize) -> Option<Self> {
        if self.e[i] == 0 {
            return None;
        }
        let mut m = *self;
        m.e[i] -= 1;
        Some(m)
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let mut m = *self;
        for i in 0..self.dim() {
            m.e[i] += o.e[i];
        }
        m
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        let mut m = *self;
        for i in 0..self.dim() {
            m.e[i] = self.e[i].checked_sub(o.e[i])?;
        }
        Some(m)
    }

    /// Componentwise `self ≤ o`.
    pub fn le(&self, o: &Self) -> bool {
        (0..self.dim()).all(|i| self.e[i] <= o.e[i])
    }

    /// Product of binomials `C(σ, ρ)`.
    pub fn binomial(&self, rho: &Self) -> u64 {
        (0..self.dim())
            .map(|i| binom(self.e[i] as u64, rho.e[i] as u64))
            .product()
    }

    /// All `ρ ≤ self` componentwise.
    pub fn sub_indices(&self) -> Vec<Self> {
        let mut out = vec![Self::zero(self.dim())];
        for i in 0..self.dim() {
            let mut next = Vec::new();
            for r in &out {
                for k in 0..=self.e[i] {
                    let mut q = *r;
                    q.e[i] = k;
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    /// All indices of exactly order `k` in dimension `n`, ascending.
    pub fn all_of_order(n: usize, k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Self::zero(n);
        fill(&mut out, &mut cur, 0, k);
        out.sort();
        out
    }

    /// All indices with `|σ| ≤ k`, ascending.
    pub fn all_up_to(n: usize, k: usize) -> Vec<Self> {
        (0..=k).flat_map(|d| Self::all_of_order(n, d)).collect()
    }

    /// First direction with a non-zero entry.
    pub fn first_direction(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| self.e[i] > 0)
    }
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut MultiIndex, pos: usize, left: usize) {
    let n = cur.dim();
    if n == 0 {
        if left == 0 {
            out.push(*cur);
        }
        return;
    }
    if pos == n - 1 {
        cur.e[pos] = left as u8;
        out.push(*cur);
        cur.e[pos] = 0;
        return;
    }
    for k in 0..=left {
        cur.e[pos] = k as u8;
        fill(out, cur, pos + 1, left - k);
    }
    cur.e[pos] = 0;
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Graded lexicographic: first by `|σ|`, then lexicographically with the first
/// direction most significant.
impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.order()
            .cmp(&o.order())
            .then_with(|| self.e[..self.dim()].cmp(&o.e[..o.dim()]))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.e[i])?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_orders() {
        assert_eq!(MultiIndex::all_of_order(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
        let v = MultiIndex::all_of_order(2, 1);
        assert_eq!(v[0].to_vec(), vec![0, 1]);
        assert_eq!(v[1].to_vec(), vec![1, 0]);
    }

    #[test]
    fn graded_lex_is_total() {
        let all = MultiIndex::all_up_to(3, 3);
        for a in &all {
            for b in &all {
                let ab = a.cmp(b);
                assert_eq!(ab, b.cmp(a).reverse());
                assert_eq!(ab == Ordering::Equal, a == b);
            }
        }
    }

    #[test]
    fn binomials() {
        let s = MultiIndex::from_slice(&[2, 1]);
        let r = MultiIndex::from_slice(&[1, 1]);
        assert_eq!(s.binomial(&r), 2);
        assert_eq!(s.sub_indices().len(), 6);
        assert_eq!(binom(5, 2), 10);
    }
}
