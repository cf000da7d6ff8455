//! The sign-reversing involutions, one per identity.

use std::collections::HashMap;

use crate::cyclic::{CyclicPartition, GObject, NestedObject};
use crate::error::{Error, Result};
use crate::partition::{Block, Element, GridShape, Partition};

/// Merge the smallest element into the next block if it is alone, otherwise
/// pull it out into its own block just before its old block.
pub fn thm1_involution(sigma: &CyclicPartition) -> Result<CyclicPartition> {
    let first = &sigma.blocks()[0];
    let x1 = first.least();
    if first.len() == 1 {
        let blocks = sigma.blocks();
        if blocks.len() < 2 {
            return Err(Error::Precondition("the merge/split map needs at least two elements".into()));
        }
        let mut out = Vec::with_capacity(blocks.len() - 1);
        out.push(first.union(&blocks[1]));
        out.extend(blocks[2..].iter().cloned());
        Ok(CyclicPartition::from_cycle(out))
    } else {
        let rest = first.filter(|e| *e != x1).expect("block has another element");
        let mut out = vec![Block::from_sorted(vec![x1]), rest];
        out.extend(sigma.blocks()[1..].iter().cloned());
        Ok(CyclicPartition::from_cycle(out))
    }
}

/// Walk from the block holding `min(M)` to the first block `B` meeting `N`.
/// If `C = B ∩ M` is nonempty, pull `C` out just before `B`; otherwise fold
/// the previous (all-`M`) block into `B`.
pub fn thm3_involution(sigma: &CyclicPartition, m: &Block, n: &Block) -> Result<CyclicPartition> {
    let support = sigma.support();
    if m.elements().iter().any(|e| n.contains(e)) || m.union(n) != support {
        return Err(Error::Precondition(format!("{m} and {n} do not bipartition {support}")));
    }
    let blocks = sigma.blocks();
    let k = blocks.len();
    let m1 = m.least();
    let start = blocks.iter().position(|b| b.contains(&m1)).expect("m1 lies in some block");
    let t = (0..k).map(|step| (start + step) % k).find(|&i| blocks[i].elements().iter().any(|e| n.contains(e))).expect("N is nonempty");
    let b = &blocks[t];
    let mut out: Vec<Block> = Vec::with_capacity(k + 1);
    match b.filter(|e| m.contains(e)) {
        Some(c) => {
            let d = b.filter(|e| n.contains(e)).expect("B meets N");
            out.extend(blocks[..t].iter().cloned());
            out.push(c);
            out.push(d);
            out.extend(blocks[t + 1..].iter().cloned());
        }
        None => {
            let prev = (t + k - 1) % k;
            for (i, block) in blocks.iter().enumerate() {
                if i == t {
                    out.push(blocks[prev].union(block));
                } else if i != prev {
                    out.push(block.clone());
                }
            }
        }
    }
    Ok(CyclicPartition::from_cycle(out))
}

/// Merge/split on the two inner blocks with the smallest minima; `None` for
/// the single-inner-block exception.
pub fn thm4_involution(rho: &NestedObject) -> Option<NestedObject> {
    let inner = rho.inner_blocks();
    if inner.len() < 2 {
        return None;
    }
    rho.merge_or_split(&inner[0], &inner[1])
}

/// [`thm4_involution`] restricted to the first block of `tau` holding two or more
/// inner blocks; `None` when every block of `tau` holds exactly one.
pub fn thm5_involution(rho: &NestedObject, tau: &Partition) -> Option<NestedObject> {
    let inner = rho.inner_blocks();
    tau.blocks().iter().find_map(|alpha| {
        let mut inside = inner.iter().filter(|g| g.is_subset(alpha));
        let (g1, g2) = (inside.next()?, inside.next()?);
        rho.merge_or_split(g1, g2)
    })
}

/// The `i`-split used by [`thm6_involution`]: smallest row `i`, then smallest
/// `j`, then smallest `k > j` with `X_{i,j}` and `X_{i,k}` in different inner blocks.
pub fn i_split(rho: &NestedObject, shape: &GridShape) -> Option<(Element, Element)> {
    let owner: HashMap<Element, usize> = rho.inner_blocks().iter().enumerate().flat_map(|(i, b)| b.elements().iter().map(move |&e| (e, i))).collect();
    (1..=shape.rows() as u32).find_map(|row| {
        let cells = shape.row_cells(row);
        cells.iter().enumerate().find_map(|(a, x)| cells[a + 1..].iter().find(|y| owner.get(x) != owner.get(y)).map(|y| (*x, *y)))
    })
}

/// Merge/split on the inner blocks holding the selected `i`-split.
pub fn thm6_involution(rho: &NestedObject, shape: &GridShape) -> Option<NestedObject> {
    let (x, y) = i_split(rho, shape)?;
    let inner = rho.inner_blocks();
    let holding = |e: Element| inner.iter().find(|b| b.contains(&e)).cloned();
    rho.merge_or_split(&holding(x)?, &holding(y)?)
}

/// Merge/split inside the outer block of smallest minimum that holds two or
/// more inner blocks; `None` when every outer block holds one inner block.
pub fn thm7_involution(rho: &GObject) -> Option<GObject> {
    let mut order: Vec<usize> = (0..rho.slots().len()).collect();
    order.sort_unstable_by_key(|&i| rho.slots()[i].least());
    let slot = order.into_iter().find(|&i| rho.slots()[i].inner_count() > 1)?;
    let nested = &rho.slots()[slot];
    let image = thm4_involution(nested)?;
    Some(rho.with_slot(slot, image))
}
