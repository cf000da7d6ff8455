#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use cumulant_core::dist::Atom;
use cumulant_core::oracle::ExpectationOracle;
use cumulant_core::partition::vars;
use cumulant_core::{Block, CyclicPartition, Element, FiniteDistribution, GObject, NestedObject, Partition, Rational, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A distribution over `names` with 2 to 4 atoms of small signed rationals.
pub fn random_distribution(rng: &mut ChaCha8Rng, names: &[&str]) -> FiniteDistribution {
    let atoms = rng.gen_range(2..=4);
    let weights: Vec<i64> = (0..atoms).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = weights.iter().sum();
    let atoms = weights
        .iter()
        .map(|&w| Atom { values: names.iter().map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect(), prob: rat(w, total) })
        .collect();
    FiniteDistribution::new(names.iter().map(|s| s.to_string()).collect(), atoms).unwrap()
}

/// Like [`random_distribution`] with an extra column `Y` taking values in `0..y_values`.
pub fn random_conditioned(rng: &mut ChaCha8Rng, names: &[&str], y_values: i64) -> FiniteDistribution {
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for y in 0..y_values {
        for _ in 0..rng.gen_range(1..=3) {
            let mut values: Vec<Rational> = names.iter().map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
            values.push(rat(y, 1));
            atoms.push(values);
            weights.push(rng.gen_range(1..=4i64));
        }
    }
    let total: i64 = weights.iter().sum();
    let atoms = atoms.into_iter().zip(weights).map(|(values, w)| Atom { values, prob: rat(w, total) }).collect();
    let mut variables: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    variables.push("Y".into());
    FiniteDistribution::new(variables, atoms).unwrap()
}

/// All multisets of size `k` over `names`, as sorted name lists.
pub fn multisets(names: &[&str], k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, first) in names.iter().enumerate() {
        for mut rest in multisets(&names[i..], k - 1) {
            rest.insert(0, first.to_string());
            out.push(rest);
        }
    }
    out
}

/// Memoizing wrapper so repeated blocks are evaluated once.
pub struct Cached<O: ExpectationOracle> {
    inner: O,
    memo: Mutex<HashMap<Block, O::Value>>,
}

impl<O: ExpectationOracle> Cached<O> {
    pub fn new(inner: O) -> Self {
        Cached { inner, memo: Mutex::new(HashMap::new()) }
    }
}

impl<O: ExpectationOracle> ExpectationOracle for Cached<O>
where
    O::Value: Send,
{
    type Value = O::Value;

    fn expectation(&self, block: &Block) -> Result<O::Value> {
        if let Some(v) = self.memo.lock().unwrap().get(block) {
            return Ok(v.clone());
        }
        let v = self.inner.expectation(block)?;
        self.memo.lock().unwrap().insert(block.clone(), v.clone());
        Ok(v)
    }
}

fn blocks_from_labels(ground: &[Element], labels: &[usize], k: usize) -> Vec<Block> {
    (0..k).map(|b| Block::new(ground.iter().zip(labels).filter(|(_, &l)| l == b).map(|(e, _)| *e).collect()).unwrap()).collect()
}

/// Set partitions by inserting each element into an existing block or a new one.
pub fn partitions_by_insertion(ground: &[Element]) -> Vec<Vec<Vec<Element>>> {
    let mut acc: Vec<Vec<Vec<Element>>> = vec![Vec::new()];
    for &e in ground {
        let mut next = Vec::new();
        for p in acc {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(e);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![e]);
            next.push(q);
        }
        acc = next;
    }
    acc
}

pub fn to_partition(blocks: &[Vec<Element>]) -> Partition {
    Partition::new(blocks.iter().map(|b| Block::new(b.clone()).unwrap()).collect()).unwrap()
}

/// Cyclic partitions from surjections `ground -> 0..k`, read as a block
/// sequence and identified up to rotation.
pub fn cyclic_by_labels(ground: &[Element]) -> BTreeSet<CyclicPartition> {
    let n = ground.len();
    let mut out = BTreeSet::new();
    for k in 1..=n {
        let mut labels = vec![0usize; n];
        loop {
            let mut hit = vec![false; k];
            labels.iter().for_each(|&l| hit[l] = true);
            if hit.iter().all(|&h| h) {
                out.insert(CyclicPartition::new(blocks_from_labels(ground, &labels, k)).unwrap());
            }
            let Some(i) = (0..n).rev().find(|&i| labels[i] + 1 < k) else { break };
            labels[i] += 1;
            labels[i + 1..].iter_mut().for_each(|l| *l = 0);
        }
    }
    out
}

/// All permutations of `0..k` in cycle form.
fn permutation_cycles(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    heap_permutations(k, &mut p, &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut seen = vec![false; k];
            let mut cycles = Vec::new();
            for start in 0..k {
                if seen[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    cycle.push(i);
                    i = p[i];
                }
                cycles.push(cycle);
            }
            cycles
        })
        .collect()
}

fn heap_permutations(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1)
        } else {
            p.swap(0, k - 1)
        }
    }
    heap_permutations(k - 1, p, out);
}

/// Nested objects as (inner partition, permutation of its blocks); the
/// permutation's cycles become the cycles of inner blocks.
pub fn nested_by_permutations(ground: &[Element]) -> BTreeSet<NestedObject> {
    let mut out = BTreeSet::new();
    for inner in partitions_by_insertion(ground) {
        let blocks: Vec<Block> = inner.iter().map(|b| Block::new(b.clone()).unwrap()).collect();
        for cycles in permutation_cycles(blocks.len()) {
            let cycles = cycles.iter().map(|c| CyclicPartition::new(c.iter().map(|&i| blocks[i].clone()).collect()).unwrap()).collect();
            out.insert(NestedObject::new(cycles).unwrap());
        }
    }
    out
}

/// `G` objects as (inner partition, permutation, grouping of its cycles,
/// cyclic order of the groups).
pub fn g_by_permutations(ground: &[Element]) -> BTreeSet<GObject> {
    let mut out = BTreeSet::new();
    for inner in partitions_by_insertion(ground) {
        let blocks: Vec<Block> = inner.iter().map(|b| Block::new(b.clone()).unwrap()).collect();
        for cycles in permutation_cycles(blocks.len()) {
            let cycles: Vec<CyclicPartition> =
                cycles.iter().map(|c| CyclicPartition::new(c.iter().map(|&i| blocks[i].clone()).collect()).unwrap()).collect();
            let ids = vars(cycles.len() as u32);
            for grouping in partitions_by_insertion(&ids) {
                let slots: Vec<NestedObject> =
                    grouping.iter().map(|g| NestedObject::new(g.iter().map(|e| cycles[e.row() as usize - 1].clone()).collect()).unwrap()).collect();
                for order in permutation_cycles(slots.len()).into_iter().filter(|c| c.len() == 1) {
                    out.insert(GObject::new(order[0].iter().map(|&i| slots[i].clone()).collect()).unwrap());
                }
            }
        }
    }
    out
}

/// `π` is indecomposable iff `π ⪯ τ*` forces `τ = {[n]}`, checked by
/// building each `τ*` directly from row indices.
pub fn indecomposable_by_quantifier(pi: &Partition, row_sizes: &[u32]) -> bool {
    let rows = vars(row_sizes.len() as u32);
    partitions_by_insertion(&rows).into_iter().filter(|tau| tau.len() > 1).all(|tau| {
        let row_block = |row: u32| tau.iter().position(|b| b.contains(&Element::Var(row))).unwrap();
        !pi.blocks().iter().all(|b| {
            let owners: BTreeSet<usize> = b.elements().iter().map(|e| row_block(e.row())).collect();
            owners.len() == 1
        })
    })
}
