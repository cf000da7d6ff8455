//! Ground sets, set partitions and the refinement order.
//!
//! Partitions are always held in canonical form: every block is sorted and
//! blocks are ordered by their minimum element, so structural equality and
//! hashing coincide with equality of the underlying set partitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A variable of the ground set: either `X_i` or a grid cell `X_{i,j}`.
///
/// A single ground set never mixes the two kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Var(u32),
    Cell { row: u32, col: u32 },
}

impl Element {
    pub fn var(id: u32) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidPartition("element ids start at 1".into()));
        }
        Ok(Element::Var(id))
    }

    pub fn cell(row: u32, col: u32) -> Result<Self> {
        if row == 0 || col == 0 {
            return Err(Error::InvalidPartition("grid indices start at 1".into()));
        }
        Ok(Element::Cell { row, col })
    }

    /// Row index of a grid cell, or the id of a plain variable.
    pub fn row(self) -> u32 {
        match self {
            Element::Var(id) => id,
            Element::Cell { row, .. } => row,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Var(id) => write!(f, "{id}"),
            Element::Cell { row, col } => write!(f, "{row}.{col}"),
        }
    }
}

impl std::str::FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad element `{s}`"));
        match s.split_once('.') {
            Some((r, c)) => Element::cell(r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?),
            None => Element::var(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Var(id) => s.serialize_u32(*id),
            cell => s.collect_str(cell),
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(u32),
            Name(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Id(id) => Element::var(id),
            Raw::Name(name) => name.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// `X_1, ..., X_n` as plain elements.
pub fn vars(n: u32) -> Vec<Element> {
    (1..=n).map(Element::Var).collect()
}

/// A nonempty, strictly increasing set of elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Block(Vec<Element>);

impl Block {
    pub fn new(mut elements: Vec<Element>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyBlock);
        }
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition("repeated element inside a block".into()));
        }
        Ok(Block(elements))
    }

    /// Build from already sorted, deduplicated, nonempty elements.
    pub(crate) fn from_sorted(elements: Vec<Element>) -> Self {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Block(elements)
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn least(&self) -> Element {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.0.binary_search(e).is_ok()
    }

    pub fn is_subset(&self, other: &Block) -> bool {
        self.0.iter().all(|e| other.contains(e))
    }

    /// Union of two disjoint blocks.
    pub fn union(&self, other: &Block) -> Block {
        let mut all: Vec<Element> = self.0.iter().chain(&other.0).copied().collect();
        all.sort_unstable();
        Block(all)
    }

    /// Elements of `self` that satisfy `keep`, or `None` if nothing is left.
    pub fn filter(&self, keep: impl Fn(&Element) -> bool) -> Option<Block> {
        let kept: Vec<Element> = self.0.iter().copied().filter(|e| keep(e)).collect();
        (!kept.is_empty()).then_some(Block(kept))
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Block::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Check that `blocks` are pairwise disjoint and return their sorted union.
pub(crate) fn disjoint_union(blocks: &[Block]) -> Result<Vec<Element>> {
    let mut all: Vec<Element> = blocks.iter().flat_map(|b| b.elements().iter().copied()).collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPartition("blocks overlap".into()));
    }
    Ok(all)
}

/// A set partition in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    blocks: Vec<Block>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyGround);
        }
        disjoint_union(&blocks)?;
        blocks.sort_unstable();
        Ok(Partition { blocks })
    }

    pub fn from_elements(blocks: Vec<Vec<Element>>) -> Result<Self> {
        Partition::new(blocks.into_iter().map(Block::new).collect::<Result<_>>()?)
    }

    /// Partition of plain variables, e.g. `from_ids(&[&[1, 2], &[3]])`.
    pub fn from_ids(blocks: &[&[u32]]) -> Result<Self> {
        Partition::from_elements(blocks.iter().map(|b| b.iter().map(|&i| Element::var(i)).collect::<Result<_>>()).collect::<Result<_>>()?)
    }

    pub(crate) fn from_canonical(blocks: Vec<Block>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0].least() < w[1].least()));
        Partition { blocks }
    }

    /// The one-block partition `{ground}`.
    pub fn single(ground: &[Element]) -> Result<Self> {
        Partition::new(vec![Block::new(ground.to_vec())?])
    }

    /// The partition into singletons.
    pub fn singletons(ground: &[Element]) -> Result<Self> {
        Partition::new(ground.iter().map(|&e| Block::new(vec![e])).collect::<Result<_>>()?)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ground(&self) -> Vec<Element> {
        let mut all: Vec<Element> = self.blocks.iter().flat_map(|b| b.elements().iter().copied()).collect();
        all.sort_unstable();
        all
    }

    /// Index of the block holding each element.
    fn block_index(&self) -> BTreeMap<Element, usize> {
        self.blocks.iter().enumerate().flat_map(|(i, b)| b.elements().iter().map(move |&e| (e, i))).collect()
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.blocks.iter().join(","))
    }
}

/// Lexicographic restricted-growth-string enumeration of `P(ground)`.
#[derive(Clone, Debug)]
pub struct Partitions {
    ground: Vec<Element>,
    rgs: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn current(&self) -> Partition {
        let parts = self.rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![Vec::new(); parts];
        for (&label, &e) in self.rgs.iter().zip(&self.ground) {
            blocks[label].push(e);
        }
        // Labels appear in first-occurrence order, so blocks are already sorted by minimum.
        Partition::from_canonical(blocks.into_iter().map(Block::from_sorted).collect())
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..n).rev() {
            if self.rgs[i] <= prefix_max[i] {
                self.rgs[i] += 1;
                self.rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

fn canonical_ground(ground: &[Element]) -> Result<Vec<Element>> {
    if ground.is_empty() {
        return Err(Error::EmptyGround);
    }
    let set: BTreeSet<Element> = ground.iter().copied().collect();
    if set.len() != ground.len() {
        return Err(Error::InvalidPartition("ground set has repeated elements".into()));
    }
    Ok(set.into_iter().collect())
}

/// Every partition of `ground`, once each, in canonical form.
pub fn enumerate_partitions(ground: &[Element]) -> Result<Partitions> {
    let ground = canonical_ground(ground)?;
    Ok(Partitions { rgs: vec![0; ground.len()], ground, done: false })
}

/// `pi ⪯ tau`: every block of `pi` lies inside some block of `tau`.
pub fn refines(pi: &Partition, tau: &Partition) -> Result<bool> {
    if pi.ground() != tau.ground() {
        return Err(Error::GroundMismatch);
    }
    let owner = tau.block_index();
    Ok(pi.blocks.iter().all(|b| b.elements().iter().map(|e| owner[e]).all_equal()))
}

/// Every partition finer than `tau`, assembled block by block.
pub fn enumerate_finer(tau: &Partition) -> impl Iterator<Item = Partition> + Clone {
    let per_block: Vec<Vec<Partition>> =
        tau.blocks.iter().map(|b| Partitions { rgs: vec![0; b.len()], ground: b.elements().to_vec(), done: false }.collect()).collect();
    per_block.into_iter().multi_cartesian_product().map(|choice| {
        let blocks = choice.into_iter().flat_map(Partition::into_blocks).collect();
        Partition::new(blocks).expect("refinements of disjoint blocks are disjoint")
    })
}

/// Row lengths `(j_1, ..., j_n)` of the grid `T = { X_{i,j} }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GridShape(Vec<u32>);

impl GridShape {
    pub fn new(row_sizes: Vec<u32>) -> Result<Self> {
        if row_sizes.is_empty() {
            return Err(Error::InvalidShape("at least one row is required".into()));
        }
        if row_sizes.contains(&0) {
            return Err(Error::InvalidShape("every row needs at least one column".into()));
        }
        Ok(GridShape(row_sizes))
    }

    pub fn row_sizes(&self) -> &[u32] {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    /// `|T|`.
    pub fn size(&self) -> usize {
        self.0.iter().map(|&j| j as usize).sum()
    }

    /// All cells in lexicographic order.
    pub fn cells(&self) -> Vec<Element> {
        self.0.iter().zip(1u32..).flat_map(|(&cols, row)| (1..=cols).map(move |col| Element::Cell { row, col })).collect()
    }

    /// Cells of row `row` (1-based).
    pub fn row_cells(&self, row: u32) -> Vec<Element> {
        (1..=self.0[row as usize - 1]).map(|col| Element::Cell { row, col }).collect()
    }

    /// Every composition of `1..=max_size` as a shape.
    pub fn all_up_to(max_size: usize) -> Vec<GridShape> {
        fn compositions(total: u32, prefix: &mut Vec<u32>, out: &mut Vec<GridShape>) {
            if total == 0 {
                out.push(GridShape(prefix.clone()));
                return;
            }
            for first in 1..=total {
                prefix.push(first);
                compositions(total - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        for size in 1..=max_size as u32 {
            compositions(size, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl std::str::FromStr for GridShape {
    type Err = Error;

    /// Parses `"2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|part| part.trim().parse::<u32>().map_err(|_| Error::InvalidShape(format!("bad row size `{part}`"))))
            .collect::<Result<Vec<_>>>()?;
        GridShape::new(sizes)
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// `tau*`: expand each block of `tau ∈ P([n])` to the full rows it names.
pub fn induced_partition(tau: &Partition, shape: &GridShape) -> Result<Partition> {
    if tau.ground() != vars(shape.rows() as u32) {
        return Err(Error::InvalidShape(format!("partition must cover rows 1..={} of the shape", shape.rows())));
    }
    let blocks = tau
        .blocks
        .iter()
        .map(|b| {
            let cells = b.elements().iter().flat_map(|e| shape.row_cells(e.row())).collect();
            Block::new(cells)
        })
        .collect::<Result<_>>()?;
    Partition::new(blocks)
}

/// Grid sizes up to which [`is_indecomposable`] quantifies over `P([n])` directly.
pub const DEFINITIONAL_LIMIT: usize = 5;

fn check_covers_grid(pi: &Partition, shape: &GridShape) -> Result<()> {
    if pi.ground() != shape.cells() {
        return Err(Error::InvalidPartition(format!("partition does not cover the grid of shape {shape}")));
    }
    Ok(())
}

/// `pi` is indecomposable when `pi ⪯ tau*` forces `tau = {[n]}`.
pub fn is_indecomposable(pi: &Partition, shape: &GridShape) -> Result<bool> {
    if shape.size() <= DEFINITIONAL_LIMIT {
        is_indecomposable_by_definition(pi, shape)
    } else {
        rows_connected(pi, shape)
    }
}

/// The quantifier over every `tau ∈ P([n])`, taken literally.
pub fn is_indecomposable_by_definition(pi: &Partition, shape: &GridShape) -> Result<bool> {
    check_covers_grid(pi, shape)?;
    for tau in enumerate_partitions(&vars(shape.rows() as u32))? {
        if tau.len() > 1 && refines(pi, &induced_partition(&tau, shape)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rows `i` and `i'` are linked when a block of `pi` meets both; true iff
/// the resulting row graph is connected.
pub fn rows_connected(pi: &Partition, shape: &GridShape) -> Result<bool> {
    check_covers_grid(pi, shape)?;
    let mut parent: Vec<usize> = (0..shape.rows()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for block in &pi.blocks {
        let first = block.least().row() as usize - 1;
        for e in &block.elements()[1..] {
            let (a, b) = (find(&mut parent, first), find(&mut parent, e.row() as usize - 1));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    Ok((0..shape.rows()).all(|r| find(&mut parent, r) == root))
}
