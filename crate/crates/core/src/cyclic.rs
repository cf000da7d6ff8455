//! Cyclically arranged partitions and the nested objects built from them.
//!
//! * [`CyclicPartition`]: blocks on an oriented cycle, stored starting at the
//!   block that holds the smallest element.
//! * [`NestedObject`]: a set of cycles of inner blocks. The union of each
//!   cycle is an outer block.
//! * [`GObject`]: an outer cycle whose slots are nested objects, giving
//!   outer, middle (cycle) and inner blocks.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::partition::{disjoint_union, enumerate_finer, enumerate_partitions, is_indecomposable, Block, Element, GridShape, Partition};
use crate::value::Sign;

/// Rotate `blocks` so the block holding the smallest element comes first.
fn rotate_to_min<T>(items: &mut [T], key: impl Fn(&T) -> Element) {
    if let Some(pos) = items.iter().position_min_by_key(|b| key(b)) {
        items.rotate_left(pos);
    }
}

/// An element of `C(S)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CyclicPartition {
    blocks: Vec<Block>,
}

impl CyclicPartition {
    /// Blocks in cyclic order, starting anywhere.
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyGround);
        }
        disjoint_union(&blocks)?;
        Ok(Self::from_cycle(blocks))
    }

    /// Trusts that `blocks` are disjoint and nonempty.
    pub(crate) fn from_cycle(mut blocks: Vec<Block>) -> Self {
        rotate_to_min(&mut blocks, Block::least);
        CyclicPartition { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `|σ|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn least(&self) -> Element {
        self.blocks[0].least()
    }

    /// The cycle read starting from block `start`.
    pub fn read_from(&self, start: usize) -> Vec<Block> {
        let mut out = self.blocks.clone();
        out.rotate_left(start);
        out
    }

    pub fn position(&self, block: &Block) -> Option<usize> {
        self.blocks.iter().position(|b| b == block)
    }

    /// Union of all blocks.
    pub fn support(&self) -> Block {
        Block::from_sorted(self.blocks.iter().flat_map(|b| b.elements().iter().copied()).sorted().collect())
    }

    /// Forget the cyclic order.
    pub fn partition(&self) -> Partition {
        Partition::new(self.blocks.clone()).expect("cycle blocks are disjoint")
    }
}

impl<'de> Deserialize<'de> for CyclicPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CyclicPartition::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CyclicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.blocks.iter().join(" "))
    }
}

/// `s(σ) = (-1)^{|σ|-1}`.
pub fn cyclic_sign(sigma: &CyclicPartition) -> Sign {
    Sign::from_exponent(sigma.len() - 1)
}

/// All `(k-1)!` cyclic arrangements of a canonical partition.
pub fn arrangements(tau: &Partition) -> impl Iterator<Item = CyclicPartition> + '_ {
    let (first, rest) = tau.blocks().split_first().expect("partitions are nonempty");
    let k = rest.len();
    rest.iter().permutations(k).map(move |perm| {
        let mut blocks = Vec::with_capacity(k + 1);
        blocks.push(first.clone());
        blocks.extend(perm.into_iter().cloned());
        // The first block holds the global minimum, so this is canonical already.
        CyclicPartition { blocks }
    })
}

/// Every element of `C(ground)`.
pub fn enumerate_cyclic(ground: &[Element]) -> Result<impl Iterator<Item = CyclicPartition>> {
    Ok(enumerate_partitions(ground)?.flat_map(|tau| arrangements(&tau).collect::<Vec<_>>()))
}

/// An element of `D(S)`: cycles of inner blocks, one cycle per outer block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NestedObject {
    cycles: Vec<CyclicPartition>,
}

impl NestedObject {
    pub fn new(cycles: Vec<CyclicPartition>) -> Result<Self> {
        if cycles.is_empty() {
            return Err(Error::EmptyGround);
        }
        let inner: Vec<Block> = cycles.iter().flat_map(|c| c.blocks().iter().cloned()).collect();
        disjoint_union(&inner)?;
        Ok(Self::from_cycles(cycles))
    }

    pub(crate) fn from_cycles(mut cycles: Vec<CyclicPartition>) -> Self {
        cycles.sort_unstable_by_key(CyclicPartition::least);
        NestedObject { cycles }
    }

    /// The one-cycle, one-inner-block object on `block`.
    pub fn trivial(block: Block) -> Self {
        NestedObject { cycles: vec![CyclicPartition { blocks: vec![block] }] }
    }

    pub fn cycles(&self) -> &[CyclicPartition] {
        &self.cycles
    }

    /// Inner blocks ordered by their minimum element.
    pub fn inner_blocks(&self) -> Vec<Block> {
        self.cycles.iter().flat_map(|c| c.blocks().iter().cloned()).sorted().collect()
    }

    pub fn inner_count(&self) -> usize {
        self.cycles.iter().map(CyclicPartition::len).sum()
    }

    pub fn outer_partition(&self) -> Partition {
        Partition::new(self.cycles.iter().map(CyclicPartition::support).collect()).expect("cycles are disjoint")
    }

    pub fn least(&self) -> Element {
        self.cycles[0].least()
    }

    pub fn support(&self) -> Block {
        Block::from_sorted(self.cycles.iter().flat_map(|c| c.blocks().iter().flat_map(|b| b.elements().iter().copied())).sorted().collect())
    }

    /// Merge the cycles of `first` and `second` if they differ, otherwise split
    /// the shared cycle immediately before `second` when read from `first`:
    /// `(first C1)(second C2) <-> (first C1 second C2)`.
    ///
    /// Returns `None` when either block is not an inner block or they coincide.
    pub fn merge_or_split(&self, first: &Block, second: &Block) -> Option<NestedObject> {
        if first == second {
            return None;
        }
        let locate = |b: &Block| self.cycles.iter().enumerate().find_map(|(ci, c)| c.position(b).map(|p| (ci, p)));
        let (ci, pi) = locate(first)?;
        let (cj, pj) = locate(second)?;
        let mut cycles: Vec<CyclicPartition> = self.cycles.iter().enumerate().filter(|&(k, _)| k != ci && k != cj).map(|(_, c)| c.clone()).collect();
        if ci == cj {
            let read = self.cycles[ci].read_from(pi);
            let cut = read.iter().position(|b| b == second).expect("second lies on this cycle");
            let tail = read[cut..].to_vec();
            let mut head = read;
            head.truncate(cut);
            cycles.push(CyclicPartition::from_cycle(head));
            cycles.push(CyclicPartition::from_cycle(tail));
        } else {
            let mut merged = self.cycles[ci].read_from(pi);
            merged.extend(self.cycles[cj].read_from(pj));
            cycles.push(CyclicPartition::from_cycle(merged));
        }
        Some(NestedObject::from_cycles(cycles))
    }
}

impl<'de> Deserialize<'de> for NestedObject {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        NestedObject::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for NestedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycles.iter().join(""))
    }
}

/// `s(ρ) = (-1)^{(#inner blocks) - (#cycles)}`.
pub fn nested_sign(rho: &NestedObject) -> Sign {
    Sign::from_exponent(rho.inner_count() - rho.cycles.len())
}

fn nested_over_partition(outer: &Partition) -> Vec<NestedObject> {
    outer
        .blocks()
        .iter()
        .map(|b| enumerate_cyclic(b.elements()).expect("blocks are nonempty").collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(NestedObject::from_cycles)
        .collect()
}

/// Every element of `D(ground)`.
pub fn enumerate_nested(ground: &[Element]) -> Result<impl Iterator<Item = NestedObject>> {
    Ok(enumerate_partitions(ground)?.flat_map(|tau| nested_over_partition(&tau)))
}

/// `D_τ(S)`: nested objects whose outer partition refines `tau`.
pub fn enumerate_nested_finer(tau: &Partition) -> impl Iterator<Item = NestedObject> + '_ {
    enumerate_finer(tau).flat_map(|pi| nested_over_partition(&pi))
}

/// `D*(T)`: nested objects over the grid whose outer partition is indecomposable.
pub fn enumerate_nested_indecomposable(shape: &GridShape) -> Result<impl Iterator<Item = NestedObject> + '_> {
    Ok(enumerate_partitions(&shape.cells())?
        .filter(move |pi| is_indecomposable(pi, shape).expect("partition covers the grid"))
        .flat_map(|pi| nested_over_partition(&pi)))
}

/// An element of `G(S)`: an outer cycle of slots, each slot a nested object
/// over its outer block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct GObject {
    slots: Vec<NestedObject>,
}

impl GObject {
    /// Slots in outer cyclic order, starting anywhere.
    pub fn new(slots: Vec<NestedObject>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::EmptyGround);
        }
        disjoint_union(&slots.iter().map(NestedObject::support).collect::<Vec<_>>())?;
        Ok(Self::from_slots(slots))
    }

    pub(crate) fn from_slots(mut slots: Vec<NestedObject>) -> Self {
        rotate_to_min(&mut slots, NestedObject::least);
        GObject { slots }
    }

    pub fn slots(&self) -> &[NestedObject] {
        &self.slots
    }

    /// Outer blocks in cyclic order.
    pub fn outer_cycle(&self) -> CyclicPartition {
        CyclicPartition { blocks: self.slots.iter().map(NestedObject::support).collect() }
    }

    /// Replace slot `index`.
    pub(crate) fn with_slot(&self, index: usize, slot: NestedObject) -> GObject {
        let mut slots = self.slots.clone();
        slots[index] = slot;
        GObject { slots }
    }
}

impl<'de> Deserialize<'de> for GObject {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GObject::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.slots.iter().join(" | "))
    }
}

/// `(-1)^{|ρ|-1} · (-1)^{Σ_α (#inner in α - #middle in α)}`.
pub fn g_sign(rho: &GObject) -> Sign {
    let nested: usize = rho.slots.iter().map(|s| s.inner_count() - s.cycles.len()).sum();
    Sign::from_exponent(rho.slots.len() - 1 + nested)
}

/// Every element of `G(ground)`.
pub fn enumerate_g(ground: &[Element]) -> Result<impl Iterator<Item = GObject>> {
    Ok(enumerate_cyclic(ground)?.flat_map(|sigma| {
        sigma
            .blocks()
            .iter()
            .map(|b| enumerate_nested(b.elements()).expect("blocks are nonempty").collect::<Vec<_>>())
            .multi_cartesian_product()
            // Slot order follows the canonical cycle, so no rotation is needed.
            .map(|slots| GObject { slots })
            .collect::<Vec<_>>()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::vars;

    fn b(ids: &[u32]) -> Block {
        Block::new(ids.iter().map(|&i| Element::Var(i)).collect()).unwrap()
    }

    fn cyc(blocks: &[&[u32]]) -> CyclicPartition {
        CyclicPartition::new(blocks.iter().map(|x| b(x)).collect()).unwrap()
    }

    fn nested(cycles: &[&[&[u32]]]) -> NestedObject {
        NestedObject::new(cycles.iter().map(|c| cyc(c)).collect()).unwrap()
    }

    #[test]
    fn cyclic_counts() {
        assert_eq!(enumerate_cyclic(&vars(1)).unwrap().count(), 1);
        assert_eq!(enumerate_cyclic(&vars(3)).unwrap().count(), 6);
        assert_eq!(enumerate_cyclic(&vars(4)).unwrap().count(), 26);
        assert!(enumerate_cyclic(&[]).is_err());
    }

    #[test]
    fn rotation_is_canonical() {
        assert_eq!(cyc(&[&[2, 3], &[1], &[4]]), cyc(&[&[1], &[4], &[2, 3]]));
        assert_ne!(cyc(&[&[1], &[2], &[3]]), cyc(&[&[1], &[3], &[2]]));
        assert!(CyclicPartition::new(vec![b(&[1, 2]), b(&[2])]).is_err());
    }

    #[test]
    fn cyclic_signs() {
        assert_eq!(cyclic_sign(&cyc(&[&[1, 2]])), Sign::Plus);
        assert_eq!(cyclic_sign(&cyc(&[&[1], &[2]])), Sign::Minus);
        assert_eq!(cyclic_sign(&cyc(&[&[1], &[2], &[3]])), Sign::Plus);
    }

    #[test]
    fn nested_counts() {
        assert_eq!(enumerate_nested(&vars(1)).unwrap().count(), 1);
        // (12), ({1}{2}) as one cycle, and ({1})({2}).
        assert_eq!(enumerate_nested(&vars(2)).unwrap().count(), 3);
        assert_eq!(enumerate_nested(&vars(3)).unwrap().count(), 13);
    }

    #[test]
    fn nested_signs() {
        assert_eq!(nested_sign(&nested(&[&[&[1, 2]]])), Sign::Plus);
        assert_eq!(nested_sign(&nested(&[&[&[1], &[2]]])), Sign::Minus);
        assert_eq!(nested_sign(&nested(&[&[&[1], &[2]], &[&[3]]])), Sign::Minus);
    }

    #[test]
    fn finer_nested_degenerate_cases() {
        let singletons = Partition::singletons(&vars(3)).unwrap();
        let only: Vec<_> = enumerate_nested_finer(&singletons).collect();
        assert_eq!(only, vec![nested(&[&[&[1]], &[&[2]], &[&[3]]])]);
        let whole = Partition::single(&vars(3)).unwrap();
        let mut a: Vec<_> = enumerate_nested_finer(&whole).collect();
        let mut all: Vec<_> = enumerate_nested(&vars(3)).unwrap().collect();
        a.sort();
        all.sort();
        assert_eq!(a, all);
    }

    #[test]
    fn indecomposable_nested_excludes_split_outer() {
        let shape: GridShape = "1,1,1".parse().unwrap();
        let objs: Vec<_> = enumerate_nested_indecomposable(&shape).unwrap().collect();
        assert_eq!(objs.len(), 6);
        assert!(objs.iter().all(|o| o.cycles().len() == 1));
        assert_eq!(enumerate_nested_indecomposable(&"1,1".parse().unwrap()).unwrap().count(), 2);
        assert_eq!(enumerate_nested_indecomposable(&"2,1".parse().unwrap()).unwrap().count(), 10);
    }

    #[test]
    fn merge_and_split() {
        let (g1, g2, g3) = (b(&[1]), b(&[2]), b(&[3]));
        let apart = nested(&[&[&[1]], &[&[2]]]);
        let joined = nested(&[&[&[1], &[2]]]);
        assert_eq!(apart.merge_or_split(&g1, &g2).unwrap(), joined);
        assert_eq!(joined.merge_or_split(&g1, &g2).unwrap(), apart);
        // (γ1 γ3 γ2) splits right before γ2.
        let three = nested(&[&[&[1], &[3], &[2]]]);
        assert_eq!(three.merge_or_split(&g1, &g2).unwrap(), nested(&[&[&[1], &[3]], &[&[2]]]));
        assert!(three.merge_or_split(&g1, &g1).is_none());
        assert!(three.merge_or_split(&g3, &b(&[4])).is_none());
    }

    #[test]
    fn g_counts_and_signs() {
        assert_eq!(enumerate_g(&vars(1)).unwrap().count(), 1);
        assert_eq!(enumerate_g(&vars(2)).unwrap().count(), 4);
        assert_eq!(enumerate_g(&vars(3)).unwrap().count(), 24);
        let one = GObject::new(vec![NestedObject::trivial(b(&[1, 2]))]).unwrap();
        assert_eq!(g_sign(&one), Sign::Plus);
        let two = GObject::new(vec![NestedObject::trivial(b(&[1])), NestedObject::trivial(b(&[2]))]).unwrap();
        assert_eq!(g_sign(&two), Sign::Minus);
        let inner_two = GObject::new(vec![nested(&[&[&[1], &[2]]])]).unwrap();
        assert_eq!(g_sign(&inner_two), Sign::Minus);
    }

    #[test]
    fn json_forms() {
        let sigma = cyc(&[&[2], &[1, 3]]);
        assert_eq!(serde_json::to_string(&sigma).unwrap(), "[[1,3],[2]]");
        let rho = nested(&[&[&[3]], &[&[1], &[2]]]);
        assert_eq!(serde_json::to_string(&rho).unwrap(), "[[[1],[2]],[[3]]]");
        let g = GObject::new(vec![nested(&[&[&[2]]]), nested(&[&[&[1]]])]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), "[[[[1]]],[[[2]]]]");
        let back: NestedObject = serde_json::from_str("[[[1],[2]],[[3]]]").unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn display_forms() {
        assert_eq!(cyc(&[&[1, 4], &[2, 6, 7], &[3, 5]]).to_string(), "({1,4} {2,6,7} {3,5})");
        assert_eq!(nested(&[&[&[1], &[2]], &[&[3]]]).to_string(), "({1} {2})({3})");
    }
}
