//! Small shared helpers.

/// Mixed-radix counter over `0..r_0 × … × 0..r_{n-1}`, last digit fastest.
pub struct Odometer {
    radices: Vec<usize>,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.iter().any(|&r| r == 0);
        let cur = vec![0; radices.len()];
        Odometer { radices, cur, started: false, done }
    }

    /// Advances and returns the current digits, or `None` when exhausted.
    pub fn next_digits(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        for k in (0..self.cur.len()).rev() {
            self.cur[k] += 1;
            if self.cur[k] < self.radices[k] {
                return Some(&self.cur);
            }
            self.cur[k] = 0;
        }
        self.done = true;
        None
    }
}

/// All tuples of the odometer, collected. Only for small spaces.
pub fn all_tuples(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut od = Odometer::new(radices.to_vec());
    let mut out = Vec::new();
    while let Some(d) = od.next_digits() {
        out.push(d.to_vec());
    }
    out
}

/// Row-major index of `digits`.
pub fn encode(radices: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

pub fn decode(radices: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for k in (0..radices.len()).rev() {
        out[k] = index % radices[k];
        index /= radices[k];
    }
    out
}

/// Union-find with the least element as canonical representative.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn from_reps(reps: &[usize]) -> Self {
        UnionFind { parent: reps.to_vec() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merges the classes of `a` and `b`; true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn reps(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_order() {
        assert_eq!(all_tuples(&[2, 3]).len(), 6);
        assert_eq!(all_tuples(&[2, 2])[1], vec![0, 1]);
        assert_eq!(all_tuples(&[]), vec![Vec::<usize>::new()]);
        assert!(all_tuples(&[3, 0]).is_empty());
    }

    #[test]
    fn encode_decode() {
        let r = [3, 4, 2];
        for (k, t) in all_tuples(&r).iter().enumerate() {
            assert_eq!(encode(&r, t), k);
            assert_eq!(&decode(&r, k), t);
        }
    }

    #[test]
    fn union_find_least_rep() {
        let mut u = UnionFind::new(5);
        u.union(3, 4);
        u.union(4, 1);
        assert_eq!(u.reps(), vec![0, 1, 2, 1, 1]);
    }
}
