use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use super::QTuple;
use crate::product::{DiscountSpec, ProductTrajectory};

/// FIFO tuple buffer with uniform sampling.
#[derive(Debug, Clone)]
pub struct QReplay {
    capacity: usize,
    buf: VecDeque<QTuple>,
}

impl QReplay {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        QReplay {
            capacity,
            buf: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn push(&mut self, t: QTuple) {
        if self.buf.len() == self.capacity {
            self.buf.pop_front();
        }
        self.buf.push_back(t);
    }

    pub fn extend(&mut self, tuples: impl IntoIterator<Item = QTuple>) {
        for t in tuples {
            self.push(t);
        }
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &QTuple> {
        self.buf.iter()
    }

    /// `n` tuples drawn uniformly with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<QTuple> {
        if self.buf.is_empty() {
            return Vec::new();
        }
        (0..n).map(|_| self.buf[rng.gen_range(0..self.buf.len())]).collect()
    }
}

/// Content-deduplicated trajectory store with FIFO eviction.
#[derive(Debug, Clone)]
pub struct TrajectoryStore {
    capacity: usize,
    set: BTreeSet<ProductTrajectory>,
    order: VecDeque<ProductTrajectory>,
}

impl TrajectoryStore {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "store capacity must be positive");
        TrajectoryStore {
            capacity,
            set: BTreeSet::new(),
            order: VecDeque::new(),
        }
    }

    /// Inserts unless an identical trajectory is already stored.
    pub fn insert(&mut self, t: ProductTrajectory) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        if self.order.len() == self.capacity {
            if let Some(old) = self.order.pop_front() {
                self.set.remove(&old);
            }
        }
        self.set.insert(t.clone());
        self.order.push_back(t);
        true
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, t: &ProductTrajectory) -> bool {
        self.set.contains(t)
    }

    /// Trajectories in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &ProductTrajectory> {
        self.order.iter()
    }

    pub fn sample<'a, R: Rng + ?Sized>(&'a self, n: usize, rng: &mut R) -> Vec<&'a ProductTrajectory> {
        if self.order.is_empty() {
            return Vec::new();
        }
        (0..n).map(|_| &self.order[rng.gen_range(0..self.order.len())]).collect()
    }

    /// All trajectories in the text format, each preceded by a `# k` line.
    pub fn dump(&self, spec: &DiscountSpec) -> String {
        let mut out = String::new();
        for (k, t) in self.order.iter().enumerate() {
            out.push_str(&format!("# {k}\n"));
            out.push_str(&t.to_text(spec));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::product::{ProductAction, ProductState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tuple(s: usize) -> QTuple {
        QTuple {
            s,
            b: 0,
            a: ProductAction::Mdp(0),
            r: 0,
            s_next: s,
            b_next: 0,
        }
    }

    #[test]
    fn fifo_eviction() {
        let mut q = QReplay::new(3);
        q.extend((0..5).map(tuple));
        assert_eq!(q.iter().map(|t| t.s).collect::<Vec<_>>(), vec![2, 3, 4]);
    }

    #[test]
    fn uniform_sampling() {
        let mut q = QReplay::new(4);
        q.extend((0..4).map(tuple));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut counts = [0usize; 4];
        for t in q.sample(40_000, &mut rng) {
            counts[t.s] += 1;
        }
        assert!(counts.iter().all(|&c| (c as f64 - 10_000.0).abs() < 500.0), "{counts:?}");
    }

    #[test]
    fn trajectory_dedup_and_capacity() {
        let aut = fixtures::fgy();
        let mk = |b: usize| ProductTrajectory::new(&aut, vec![ProductState::new(0, b)], vec![]);
        let mut st = TrajectoryStore::new(2);
        assert!(st.insert(mk(0)));
        assert!(!st.insert(mk(0)));
        assert!(st.insert(mk(1)));
        assert!(st.insert(mk(2)));
        assert_eq!(st.len(), 2);
        assert!(!st.contains(&mk(0)));
        let spec = DiscountSpec::eventual(0.9).unwrap();
        assert_eq!(st.dump(&spec), "# 0\n0 1 -\n# 1\n0 2 -\n");
    }
}
