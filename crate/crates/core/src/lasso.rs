//! Eventually periodic sequences ("lassos"): a finite tail followed by a
//! cycle repeated forever. The common carrier for index sets, orbits,
//! pseudo-orbits and every other sequence the crate manipulates.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Lasso<T> {
    tail: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone + Eq> Lasso<T> {
    /// Canonical lasso: minimal period, then minimal tail.
    pub fn new(tail: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(invalid("cycle word must be non-empty"));
        }
        let mut l = Lasso { tail, cycle };
        l.canonicalize();
        Ok(l)
    }

    /// Tabulate `value(i)` for `i < tail_len + period` and canonicalize.
    pub fn from_fn(tail_len: usize, period: usize, mut value: impl FnMut(usize) -> T) -> Self {
        assert!(period >= 1, "period must be positive");
        let tail = (0..tail_len).map(&mut value).collect();
        let cycle = (tail_len..tail_len + period).map(value).collect();
        let mut l = Lasso { tail, cycle };
        l.canonicalize();
        l
    }

    pub fn constant(v: T) -> Self {
        Lasso {
            tail: Vec::new(),
            cycle: vec![v],
        }
    }

    fn canonicalize(&mut self) {
        let p = self.cycle.len();
        let period = (1..=p)
            .find(|d| p.is_multiple_of(*d) && (0..p).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(p);
        self.cycle.truncate(period);
        // Pull tail letters into the cycle while the alignment allows it.
        while let Some(last) = self.tail.last() {
            if *last != self.cycle[self.cycle.len() - 1] {
                break;
            }
            self.tail.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn tail(&self) -> &[T] {
        &self.tail
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    pub fn tail_len(&self) -> usize {
        self.tail.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn get(&self, i: usize) -> &T {
        if i < self.tail.len() {
            &self.tail[i]
        } else {
            &self.cycle[(i - self.tail.len()) % self.cycle.len()]
        }
    }

    /// First `n` elements.
    pub fn prefix(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.get(i).clone()).collect()
    }

    pub fn map<U: Clone + Eq>(&self, mut f: impl FnMut(&T) -> U) -> Lasso<U> {
        Lasso::from_fn(self.tail.len(), self.cycle.len(), |i| f(self.get(i)))
    }

    /// Pointwise combination; the result's tail is the longer tail and its
    /// period divides the lcm of both periods.
    pub fn zip_with<S: Clone + Eq, U: Clone + Eq>(
        &self,
        other: &Lasso<S>,
        mut f: impl FnMut(&T, &S) -> U,
    ) -> Lasso<U> {
        let (t, p) = joint_shape(self, other);
        Lasso::from_fn(t, p, |i| f(self.get(i), other.get(i)))
    }

    /// The sequence `i -> self[i + k]`.
    pub fn advance(&self, k: usize) -> Lasso<T> {
        let t = self.tail.len().saturating_sub(k);
        Lasso::from_fn(t, self.cycle.len(), |i| self.get(i + k).clone())
    }

    /// `(tail length, period)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.tail.len(), self.cycle.len())
    }
}

pub(crate) fn joint_shape<A, B>(a: &Lasso<A>, b: &Lasso<B>) -> (usize, usize) {
    (
        a.tail.len().max(b.tail.len()),
        a.cycle.len().lcm(&b.cycle.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        let l = Lasso::new(vec![], vec![1, 0, 1, 0]).unwrap();
        assert_eq!(l.cycle(), &[1, 0]);
        let l = Lasso::new(vec![1], vec![1]).unwrap();
        assert!(l.tail().is_empty());
        let l = Lasso::new(vec![0, 1, 1, 0], vec![0]).unwrap();
        assert_eq!(l.tail(), &[0, 1, 1]);
        assert_eq!(l.cycle(), &[0]);
        assert!(Lasso::<u8>::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn tail_migrates_with_rotation() {
        // 2 (0 1 2 ...)  ==  (2 0 1)
        let l = Lasso::new(vec![2], vec![0, 1, 2]).unwrap();
        assert!(l.tail().is_empty());
        assert_eq!(l.cycle(), &[2, 0, 1]);
    }

    fn raw() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (
            proptest::collection::vec(0u8..3, 0..6),
            proptest::collection::vec(0u8..3, 1..7),
        )
    }

    fn naive(tail: &[u8], cycle: &[u8], i: usize) -> u8 {
        if i < tail.len() {
            tail[i]
        } else {
            cycle[(i - tail.len()) % cycle.len()]
        }
    }

    proptest! {
        #[test]
        fn canonical_preserves_values_and_is_idempotent((t, c) in raw()) {
            let l = Lasso::new(t.clone(), c.clone()).unwrap();
            for i in 0..60 {
                prop_assert_eq!(*l.get(i), naive(&t, &c, i));
            }
            let again = Lasso::new(l.tail().to_vec(), l.cycle().to_vec()).unwrap();
            prop_assert_eq!(&again, &l);
            prop_assert!(l.period() <= c.len() && l.tail_len() <= t.len());
        }

        #[test]
        fn equal_sequences_have_equal_forms((t1, c1) in raw(), k in 1usize..4) {
            // Same sequence written with a repeated cycle and an unrolled tail.
            let mut t2 = t1.clone();
            t2.extend(c1.iter().cycle().take(k).copied());
            let c2: Vec<u8> = c1.iter().cycle().skip(k % c1.len()).take(c1.len() * k).copied().collect();
            let a = Lasso::new(t1, c1).unwrap();
            let b = Lasso::new(t2, c2).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
