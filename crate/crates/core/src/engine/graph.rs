//! Contribution graphs `Γ(σ_f, τ_f, π_i)`.
//!
//! Letter `i` of `w` owns `2k` slots: its *out* slots `2k·i + t` feed the
//! inner product with `π_i` and its *in* slots `2k·i + k + t` receive
//! `π_{i-1}`. For `ε_i = +1` the out slots hold `I` and the in slots `J`;
//! `ε_i = -1` swaps them. `J` is always the initial vertex of the `f`-edge,
//! so `σ_f` glues `J` slots and `τ_f` glues `I` slots, with element
//! `z·k + t` of `[|w|_f k]` naming position `t` of the `z`-th occurrence.
//! `π_i` joins top `t` (out slot `t` of letter `i`) to bottom `t'` (in slot
//! `t'` of letter `i + 1 mod l`).

use crate::partition::{PartialMatching, SetPartition, UnionFind};

use super::{EngineError, ReducedWord};

/// Slot bookkeeping for one word at one `k`.
#[derive(Clone, Debug)]
pub(crate) struct SlotLayout {
    pub k: usize,
    pub len: usize,
    /// Per generator, the `J` slot of each element of `[|w|_f k]`.
    pub j_slots: Vec<Vec<usize>>,
    /// Per generator, the `I` slot of each element of `[|w|_f k]`.
    pub i_slots: Vec<Vec<usize>>,
}

impl SlotLayout {
    pub fn new(word: &ReducedWord, k: usize) -> Self {
        let rank = word.rank();
        let mut j_slots = vec![Vec::new(); rank];
        let mut i_slots = vec![Vec::new(); rank];
        for (i, letter) in word.letters().iter().enumerate() {
            let out = 2 * k * i;
            let inn = out + k;
            let (i_base, j_base) = if letter.inverse { (inn, out) } else { (out, inn) };
            for t in 0..k {
                i_slots[letter.generator].push(i_base + t);
                j_slots[letter.generator].push(j_base + t);
            }
        }
        SlotLayout { k, len: word.len(), j_slots, i_slots }
    }

    pub fn slot_count(&self) -> usize {
        2 * self.k * self.len
    }

    pub fn out_slot(&self, letter: usize, t: usize) -> usize {
        2 * self.k * letter + t
    }

    pub fn in_slot(&self, letter: usize, t: usize) -> usize {
        2 * self.k * ((letter + 1) % self.len) + self.k + t
    }

    /// The `2k` slots seen by `π_i`, top positions then bottom positions.
    pub fn pi_slot(&self, letter: usize, element: usize) -> usize {
        if element < self.k {
            self.out_slot(letter, element)
        } else {
            self.in_slot(letter, element - self.k)
        }
    }

    /// Glues the slots inside each block of `σ_f` and `τ_f`.
    pub fn glue_partitions(
        &self,
        uf: &mut UnionFind,
        sigma: &[SetPartition],
        tau: &[SetPartition],
    ) -> Result<(), EngineError> {
        if sigma.len() != self.j_slots.len() || tau.len() != self.i_slots.len() {
            return Err(EngineError::Malformed("one σ_f and one τ_f per generator".into()));
        }
        for f in 0..sigma.len() {
            for (p, slots) in [(&sigma[f], &self.j_slots[f]), (&tau[f], &self.i_slots[f])] {
                if p.size() != slots.len() {
                    return Err(EngineError::Malformed(format!(
                        "partition of [{}] for generator {} with {} slots",
                        p.size(),
                        f + 1,
                        slots.len()
                    )));
                }
                let mut first = vec![usize::MAX; p.block_count()];
                for (e, &slot) in slots.iter().enumerate() {
                    let b = p.block_of(e);
                    if first[b] == usize::MAX {
                        first[b] = slot;
                    } else {
                        uf.union(first[b], slot);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn glue_matching(&self, uf: &mut UnionFind, letter: usize, pi: &PartialMatching) {
        for (top, bottom) in pi.pairs() {
            uf.union(self.out_slot(letter, top), self.in_slot(letter, bottom));
        }
    }

    /// One representative slot per block of `π_i`; the iff rule forces
    /// these to carry pairwise distinct values.
    pub fn clique(&self, letter: usize, pi: &PartialMatching) -> Vec<usize> {
        let p = pi.to_partition();
        let mut reps = vec![usize::MAX; p.block_count()];
        for e in 0..2 * self.k {
            let b = p.block_of(e);
            if reps[b] == usize::MAX {
                reps[b] = self.pi_slot(letter, e);
            }
        }
        reps
    }
}

/// True iff two slots of the clique already share a class.
pub(crate) fn clique_collides(uf: &mut UnionFind, clique: &[usize]) -> bool {
    let roots: Vec<usize> = clique.iter().map(|&s| uf.find(s)).collect();
    (0..roots.len()).any(|a| (0..a).any(|b| roots[a] == roots[b]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionGraph {
    k: usize,
    /// Class of each of the `2k·l(w)` slots, numbered in order of first slot.
    slot_class: Vec<usize>,
    class_count: usize,
    edge_count: usize,
    /// Distinctness cliques, as slot lists.
    cliques: Vec<Vec<usize>>,
    contradiction: bool,
    del_sum: usize,
}

impl ContributionGraph {
    pub fn build(
        word: &ReducedWord,
        k: usize,
        sigma: &[SetPartition],
        tau: &[SetPartition],
        pis: &[PartialMatching],
    ) -> Result<Self, EngineError> {
        if pis.len() != word.len() {
            return Err(EngineError::Malformed(format!("{} matchings for a word of length {}", pis.len(), word.len())));
        }
        if let Some(bad) = pis.iter().find(|p| p.k() != k) {
            return Err(EngineError::Malformed(format!("matching on [{}] with k = {k}", 2 * bad.k())));
        }
        let layout = SlotLayout::new(word, k);
        let mut uf = UnionFind::new(layout.slot_count());
        layout.glue_partitions(&mut uf, sigma, tau)?;
        for (i, pi) in pis.iter().enumerate() {
            layout.glue_matching(&mut uf, i, pi);
        }
        let cliques: Vec<Vec<usize>> = pis.iter().enumerate().map(|(i, pi)| layout.clique(i, pi)).collect();
        let contradiction = cliques.iter().any(|c| clique_collides(&mut uf, c));
        let mut edge_count = 0;
        for (s, t) in sigma.iter().zip(tau) {
            edge_count += s.meet(t)?.block_count();
        }
        Ok(Self::from_parts(k, &mut uf, cliques, contradiction, edge_count, pis.iter().map(|p| p.del()).sum()))
    }

    pub(crate) fn from_parts(
        k: usize,
        uf: &mut UnionFind,
        cliques: Vec<Vec<usize>>,
        contradiction: bool,
        edge_count: usize,
        del_sum: usize,
    ) -> Self {
        let slot_class = uf.labels();
        let class_count = slot_class.iter().copied().max().map_or(0, |m| m + 1);
        ContributionGraph { k, slot_class, class_count, edge_count, cliques, contradiction, del_sum }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|V(Γ)|`.
    pub fn vertex_count(&self) -> usize {
        self.class_count
    }

    /// `|E(Γ)| = Σ_f |σ_f ∧ τ_f|`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn slot_classes(&self) -> &[usize] {
        &self.slot_class
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    /// The cliques as sets of vertex classes.
    pub fn class_cliques(&self) -> Vec<Vec<usize>> {
        self.cliques
            .iter()
            .map(|c| c.iter().map(|&s| self.slot_class[s]).collect())
            .collect()
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradiction
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.class_count as i64 - self.edge_count as i64
    }

    /// `Σ_i del(π_i)`.
    pub fn del_sum(&self) -> usize {
        self.del_sum
    }

    /// `-2χ(Γ) + 2Σ del(π_i) - 2k`; the order bound needs this to be `≥ 0`.
    pub fn euler_slack(&self) -> i64 {
        -2 * self.euler_characteristic() + 2 * self.del_sum as i64 - 2 * self.k as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{preprocess_word, Word};

    fn reduced(s: &str) -> ReducedWord {
        preprocess_word(&Word::parse(s, None).unwrap()).0.unwrap()
    }

    fn full(k: usize) -> PartialMatching {
        PartialMatching::new(k, &(0..k).map(|t| (t, t)).collect::<Vec<_>>()).unwrap()
    }

    /// The commutator at `k = 1` reproduces the worked expansion: the four
    /// inner products pair `I_{x1}^1 | J_{x2}^1`, `I_{x2}^1 | I_{x1}^2`,
    /// `J_{x1}^2 | I_{x2}^2` and `J_{x2}^2 | J_{x1}^1`.
    #[test]
    fn commutator_slot_wiring() {
        let w = reduced("abAB");
        let layout = SlotLayout::new(&w, 1);
        // letter i has out slot 2i and in slot 2i + 1
        assert_eq!(layout.i_slots[0], vec![0, 5]);
        assert_eq!(layout.j_slots[0], vec![1, 4]);
        assert_eq!(layout.i_slots[1], vec![2, 7]);
        assert_eq!(layout.j_slots[1], vec![3, 6]);
        let name = |s: usize| {
            for f in 0..2 {
                if let Some(z) = layout.i_slots[f].iter().position(|&x| x == s) {
                    return format!("I{}{}", f + 1, z + 1);
                }
                if let Some(z) = layout.j_slots[f].iter().position(|&x| x == s) {
                    return format!("J{}{}", f + 1, z + 1);
                }
            }
            unreachable!()
        };
        let named: Vec<(String, String)> =
            (0..4).map(|i| (name(layout.out_slot(i, 0)), name(layout.in_slot(i, 0)))).collect();
        let expect = [("I11", "J21"), ("I21", "I12"), ("J12", "I22"), ("J22", "J11")];
        for ((a, b), (ea, eb)) in named.iter().zip(expect) {
            assert_eq!((a.as_str(), b.as_str()), (ea, eb));
        }
    }

    #[test]
    fn commutator_k1_full_matchings() {
        let w = reduced("abAB");
        let pair = SetPartition::single_block(2);
        let g = ContributionGraph::build(&w, 1, &[pair.clone(), pair.clone()], &[pair.clone(), pair], &vec![full(1); 4])
            .unwrap();
        assert!(!g.is_contradictory());
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        assert!(g.euler_characteristic() <= 0);
        assert_eq!(g.euler_slack(), 0);
    }

    #[test]
    fn forced_equality_contradicts() {
        // x1^2 at k = 2 with σ = τ = {{1,3},{2,4}}
        let w = reduced("aa");
        let sigma = SetPartition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let tau = sigma.clone();
        let swap = PartialMatching::new(2, &[(0, 1), (1, 0)]).unwrap();
        let ok = ContributionGraph::build(&w, 2, &[sigma.clone()], &[tau.clone()], &[full(2), full(2)]).unwrap();
        assert!(!ok.is_contradictory());
        assert_eq!(ok.vertex_count(), 2);
        // swapping at π_1 chains both positions of each multi-index together
        let g = ContributionGraph::build(&w, 2, &[sigma], &[tau], &[full(2), swap]).unwrap();
        assert!(g.is_contradictory());
        let bad_sigma = SetPartition::from_blocks(4, &[vec![0, 1, 2, 3]]).unwrap();
        let g = ContributionGraph::build(&w, 2, &[bad_sigma.clone()], &[bad_sigma], &[full(2), full(2)]).unwrap();
        assert!(g.is_contradictory());
    }

    #[test]
    fn edge_count_is_meet_size() {
        let w = reduced("abAB");
        let s = SetPartition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let t = SetPartition::from_blocks(4, &[vec![0, 3], vec![1, 2]]).unwrap();
        let g = ContributionGraph::build(
            &w,
            2,
            &[s.clone(), s.clone()],
            &[t.clone(), s.clone()],
            &vec![PartialMatching::empty(2); 4],
        )
        .unwrap();
        assert_eq!(g.edge_count(), s.meet(&t).unwrap().block_count() + 2);
        assert_eq!(g.cliques().len(), 4);
        assert!(g.cliques().iter().all(|c| c.len() == 4));
    }

    #[test]
    fn malformed_inputs() {
        let w = reduced("abAB");
        let p = SetPartition::single_block(2);
        assert!(ContributionGraph::build(&w, 1, &[p.clone()], &[p.clone()], &vec![full(1); 4]).is_err());
        assert!(ContributionGraph::build(&w, 1, &[p.clone(), p.clone()], &[p.clone(), p], &vec![full(1); 3]).is_err());
    }
}
