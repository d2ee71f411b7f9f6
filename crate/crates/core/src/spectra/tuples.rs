//! `[n]_k`: ordered `k`-tuples of distinct elements of `{0, ..., n-1}`.
//!
//! Ranking is mixed radix with radices `n, n-1, ..., n-k+1`, most
//! significant first. Digit `j` of a tuple `t` is `t_j` minus the number of
//! earlier entries smaller than `t_j`, so ranks follow lexicographic order.

use super::SpectraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    n: usize,
    k: usize,
    size: usize,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Result<Self, SpectraError> {
        if k == 0 || k > n {
            return Err(SpectraError::BadTupleSpace { n, k });
        }
        let mut size: usize = 1;
        for j in 0..k {
            size = size.checked_mul(n - j).ok_or(SpectraError::BadTupleSpace { n, k })?;
        }
        Ok(TupleSpace { n, k, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `n (n-1) ... (n-k+1)`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self, tuple: &[usize]) -> Result<usize, SpectraError> {
        if tuple.len() != self.k {
            return Err(SpectraError::BadTuple(tuple.to_vec()));
        }
        for (j, &x) in tuple.iter().enumerate() {
            if x >= self.n || tuple[..j].contains(&x) {
                return Err(SpectraError::BadTuple(tuple.to_vec()));
            }
        }
        Ok(self.rank_unchecked(tuple))
    }

    pub(crate) fn rank_unchecked(&self, tuple: &[usize]) -> usize {
        let mut r = 0;
        for (j, &x) in tuple.iter().enumerate() {
            let smaller = tuple[..j].iter().filter(|&&y| y < x).count();
            r = r * (self.n - j) + (x - smaller);
        }
        r
    }

    pub fn unrank(&self, index: usize) -> Result<Vec<usize>, SpectraError> {
        if index >= self.size {
            return Err(SpectraError::RankOutOfRange { index, size: self.size });
        }
        let mut out = vec![0; self.k];
        self.unrank_into(index, &mut out);
        Ok(out)
    }

    pub(crate) fn unrank_into(&self, mut index: usize, out: &mut [usize]) {
        for j in (0..self.k).rev() {
            let radix = self.n - j;
            out[j] = index % radix;
            index /= radix;
        }
        // digit -> element: the digit-th smallest value not used earlier
        for j in 0..self.k {
            let mut x = out[j];
            let mut used: Vec<usize> = out[..j].to_vec();
            used.sort_unstable();
            for u in used {
                if u <= x {
                    x += 1;
                }
            }
            out[j] = x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singletons_rank_by_value() {
        let s = TupleSpace::new(7, 1).unwrap();
        for i in 0..7 {
            assert_eq!(s.rank(&[i]).unwrap(), i);
        }
    }

    #[test]
    fn pairs_in_lexicographic_order() {
        let s = TupleSpace::new(3, 2).unwrap();
        let pairs = [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]];
        for (i, p) in pairs.iter().enumerate() {
            assert_eq!(s.rank(p).unwrap(), i);
            assert_eq!(s.unrank(i).unwrap(), p.to_vec());
        }
        assert_eq!(s.size(), 6);
    }

    #[test]
    fn round_trip_random() {
        let s = TupleSpace::new(50, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let i = rng.random_range(0..s.size());
            assert_eq!(s.rank(&s.unrank(i).unwrap()).unwrap(), i);
        }
        let mut t = [0usize; 3];
        for _ in 0..1000 {
            t[0] = rng.random_range(0..50);
            loop {
                t[1] = rng.random_range(0..50);
                t[2] = rng.random_range(0..50);
                if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                    break;
                }
            }
            assert_eq!(s.unrank(s.rank(&t).unwrap()).unwrap(), t.to_vec());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TupleSpace::new(3, 4).is_err());
        assert!(TupleSpace::new(3, 0).is_err());
        let s = TupleSpace::new(4, 2).unwrap();
        assert!(s.rank(&[1, 1]).is_err());
        assert!(s.rank(&[4, 1]).is_err());
        assert!(s.unrank(12).is_err());
    }
}
