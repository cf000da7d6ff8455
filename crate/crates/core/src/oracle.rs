//! Expectation backends for block moments `E(prod_{X in B} X)`.

use num::One;

use crate::dist::{ConditionalOracle, FiniteDistribution, VarSelection};
use crate::error::{Error, Result};
use crate::partition::{Block, Element, GridShape};
use crate::poly::MomentPolynomial;
use crate::value::{Rational, Value};

/// Supplies the expectation of the product of a block's variables.
pub trait ExpectationOracle: Sync {
    type Value: Value;

    fn expectation(&self, block: &Block) -> Result<Self::Value>;
}

/// `V(σ) = prod_{β in σ} E(prod_{X in β} X)`; only the set of blocks matters.
pub fn weight_v<O: ExpectationOracle + ?Sized>(blocks: &[Block], oracle: &O) -> Result<O::Value> {
    blocks.iter().try_fold(O::Value::one(), |acc, b| Ok(acc * oracle.expectation(b)?))
}

/// The formal symbol `m_B`.
pub fn symbolic_expectation(block: &Block) -> MomentPolynomial {
    MomentPolynomial::symbol(block.clone())
}

/// Every moment is a free symbol.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicOracle;

impl ExpectationOracle for SymbolicOracle {
    type Value = MomentPolynomial;

    fn expectation(&self, block: &Block) -> Result<MomentPolynomial> {
        Ok(symbolic_expectation(block))
    }
}

/// Moments under the hypothesis that every proper subset of `full` is
/// independent: proper sub-blocks factor into singleton moments.
#[derive(Clone, Debug)]
pub struct FactoringOracle {
    full: Block,
}

impl FactoringOracle {
    pub fn new(full: Block) -> Self {
        FactoringOracle { full }
    }
}

pub fn factoring_expectation(block: &Block, full: &Block) -> Result<MomentPolynomial> {
    if !block.is_subset(full) {
        return Err(Error::Precondition(format!("block {block} is not contained in {full}")));
    }
    Ok(if block == full { symbolic_expectation(block) } else { MomentPolynomial::product_of_singletons(block) })
}

impl ExpectationOracle for FactoringOracle {
    type Value = MomentPolynomial;

    fn expectation(&self, block: &Block) -> Result<MomentPolynomial> {
        factoring_expectation(block, &self.full)
    }
}

/// Row-product moments on a grid: the block `{i, i', ...}` of row indices
/// maps to the symbol of all cells in those rows.
#[derive(Clone, Debug)]
pub struct RowProductOracle {
    shape: GridShape,
}

impl RowProductOracle {
    pub fn new(shape: GridShape) -> Self {
        RowProductOracle { shape }
    }
}

impl ExpectationOracle for RowProductOracle {
    type Value = MomentPolynomial;

    fn expectation(&self, block: &Block) -> Result<MomentPolynomial> {
        let mut cells = Vec::new();
        for e in block.elements() {
            match *e {
                Element::Var(row) if (1..=self.shape.rows() as u32).contains(&row) => cells.extend(self.shape.row_cells(row)),
                other => return Err(Error::UnknownVariable(format!("row {other}"))),
            }
        }
        Ok(MomentPolynomial::symbol(Block::new(cells)?))
    }
}

/// Numeric moments read from a distribution through a selection.
#[derive(Clone, Copy, Debug)]
pub struct DistributionOracle<'a> {
    dist: &'a FiniteDistribution,
    selection: &'a VarSelection,
}

impl<'a> DistributionOracle<'a> {
    pub fn new(dist: &'a FiniteDistribution, selection: &'a VarSelection) -> Self {
        DistributionOracle { dist, selection }
    }
}

fn columns(selection: &VarSelection, block: &Block) -> Result<Vec<usize>> {
    block.elements().iter().map(|&e| selection.column_of(e)).collect()
}

/// `E(prod of the selected variables in block)`.
pub fn expectation(dist: &FiniteDistribution, selection: &VarSelection, block: &Block) -> Result<Rational> {
    Ok(dist.expectation_of(&columns(selection, block)?))
}

impl ExpectationOracle for DistributionOracle<'_> {
    type Value = Rational;

    fn expectation(&self, block: &Block) -> Result<Rational> {
        expectation(self.dist, self.selection, block)
    }
}

/// `E(· | Y = y)` for one fixed `y`.
#[derive(Clone, Copy, Debug)]
pub struct ConditionalAt<'a> {
    cond: &'a ConditionalOracle,
    selection: &'a VarSelection,
    y: &'a Rational,
}

impl<'a> ConditionalAt<'a> {
    pub fn new(cond: &'a ConditionalOracle, selection: &'a VarSelection, y: &'a Rational) -> Self {
        ConditionalAt { cond, selection, y }
    }
}

pub fn conditional_expectation(cond: &ConditionalOracle, selection: &VarSelection, block: &Block, y: &Rational) -> Result<Rational> {
    cond.conditional_expectation_of(&columns(selection, block)?, y)
}

impl ExpectationOracle for ConditionalAt<'_> {
    type Value = Rational;

    fn expectation(&self, block: &Block) -> Result<Rational> {
        conditional_expectation(self.cond, self.selection, block, self.y)
    }
}
