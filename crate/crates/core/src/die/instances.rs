//! Ready-made DIE instances for the seven cumulant identities.

use num::One;
use serde::Serialize;

use super::involution::{i_split, thm1_involution, thm3_involution, thm4_involution, thm5_involution, thm6_involution, thm7_involution};
use super::{check_die, DieInstance, DieReport};
use crate::cumulant::kappa_via_cyclic;
use crate::cyclic::{
    cyclic_sign, enumerate_cyclic, enumerate_g, enumerate_nested, enumerate_nested_finer, enumerate_nested_indecomposable, g_sign, nested_sign,
    CyclicPartition, GObject, NestedObject,
};
use crate::dist::{product_distribution, ConditionalOracle, FiniteDistribution, VarSelection};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::{conditional_expectation, expectation, weight_v, FactoringOracle, RowProductOracle, SymbolicOracle};
use crate::partition::{vars, Block, GridShape, Partition};
use crate::poly::MomentPolynomial;
use crate::value::Rational;

/// `Π m_γ` over the inner blocks.
fn inner_weight(rho: &NestedObject) -> Result<MomentPolynomial> {
    weight_v(&rho.inner_blocks(), &SymbolicOracle)
}

fn need_two(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("the identity needs n >= 2, got {n}")));
    }
    Ok(())
}

/// Cyclic partitions of `[n]`, weight 1, merge/split on `X_1`; no exceptions.
pub fn thm1_instance(n: u32) -> Result<DieInstance<'static, CyclicPartition, Rational>> {
    need_two(n)?;
    let objects = enumerate_cyclic(&vars(n))?.collect();
    Ok(DieInstance::new("thm1", objects, cyclic_sign, |_| Ok(Rational::one()), |s| thm1_involution(s).ok())
        .expecting(Vec::new(), Rational::from_integer(0.into())))
}

/// Cyclic partitions weighted by the factoring oracle; `{S}` and
/// `({X_1}, {X_2..X_n})` are the two exceptions.
pub fn thm2_instance(n: u32) -> Result<DieInstance<'static, CyclicPartition, MomentPolynomial>> {
    need_two(n)?;
    let ground = vars(n);
    let full = Block::new(ground.clone())?;
    let whole = CyclicPartition::new(vec![full.clone()])?;
    let split = CyclicPartition::new(vec![Block::new(vec![ground[0]])?, Block::new(ground[1..].to_vec())?])?;
    let oracle = FactoringOracle::new(full.clone());
    let objects = enumerate_cyclic(&ground)?.collect();
    let excluded = [whole.clone(), split.clone()];
    let expected = MomentPolynomial::symbol(full.clone()) - MomentPolynomial::product_of_singletons(&full);
    Ok(DieInstance::new(
        "thm2",
        objects,
        cyclic_sign,
        move |s| weight_v(s.blocks(), &oracle),
        move |s| if excluded.contains(s) { None } else { thm1_involution(s).ok() },
    )
    .expecting(vec![whole, split], expected))
}

/// Cyclic partitions of the selection over the product of two independent
/// distributions, weighted by exact moments; no exceptions.
pub fn thm3_instance<S: AsRef<str>>(
    dist_m: &FiniteDistribution,
    dist_n: &FiniteDistribution,
    selection: &[S],
) -> Result<DieInstance<'static, CyclicPartition, Rational>> {
    let joint = product_distribution(dist_m, dist_n)?;
    let sel = VarSelection::new(&joint, selection)?;
    let ground = sel.ground();
    let mut m_part = Vec::new();
    let mut n_part = Vec::new();
    for &e in &ground {
        let name = &joint.variables()[sel.column_of(e)?];
        if dist_m.variables().contains(name) {
            m_part.push(e)
        } else {
            n_part.push(e)
        }
    }
    if m_part.is_empty() || n_part.is_empty() {
        return Err(Error::Precondition("the selection must use variables from both independent groups".into()));
    }
    let (m, n) = (Block::new(m_part)?, Block::new(n_part)?);
    let objects = enumerate_cyclic(&ground)?.collect();
    Ok(DieInstance::new(
        "thm3",
        objects,
        cyclic_sign,
        move |s: &CyclicPartition| s.blocks().iter().try_fold(Rational::one(), |acc, b| Ok(acc * expectation(&joint, &sel, b)?)),
        move |s| thm3_involution(s, &m, &n).ok(),
    )
    .expecting(Vec::new(), Rational::from_integer(0.into())))
}

/// `D([n])` with inner-block weights; the only exception is `{{S}}`.
pub fn thm4_instance(n: u32) -> Result<DieInstance<'static, NestedObject, MomentPolynomial>> {
    let ground = vars(n);
    let full = Block::new(ground.clone())?;
    let objects = enumerate_nested(&ground)?.collect();
    Ok(DieInstance::new("thm4", objects, nested_sign, inner_weight, thm4_involution)
        .expecting(vec![NestedObject::trivial(full.clone())], MomentPolynomial::symbol(full)))
}

/// `D_τ` with inner-block weights; the exception has the blocks of `tau` as
/// its inner blocks.
pub fn thm5_instance(tau: &Partition) -> Result<DieInstance<'static, NestedObject, MomentPolynomial>> {
    let objects = enumerate_nested_finer(tau).collect();
    let exception = NestedObject::new(tau.blocks().iter().map(|b| CyclicPartition::new(vec![b.clone()])).collect::<Result<_>>()?)?;
    let expected = weight_v(tau.blocks(), &SymbolicOracle)?;
    let tau = tau.clone();
    Ok(DieInstance::new("thm5", objects, nested_sign, inner_weight, move |rho| thm5_involution(rho, &tau)).expecting(vec![exception], expected))
}

/// `D*(T)` with inner-block weights; exceptions are single cycles of row
/// unions, one per cyclic partition of the rows.
pub fn thm6_instance(shape: &GridShape) -> Result<DieInstance<'static, NestedObject, MomentPolynomial>> {
    let objects = enumerate_nested_indecomposable(shape)?.collect();
    let rows = vars(shape.rows() as u32);
    let exceptions = enumerate_cyclic(&rows)?
        .map(|sigma| {
            let blocks = sigma
                .blocks()
                .iter()
                .map(|b| Block::new(b.elements().iter().flat_map(|e| shape.row_cells(e.row())).collect()))
                .collect::<Result<_>>()?;
            NestedObject::new(vec![CyclicPartition::new(blocks)?])
        })
        .collect::<Result<_>>()?;
    let expected = kappa_via_cyclic(&rows, &RowProductOracle::new(shape.clone()))?;
    let (s1, s2) = (shape.clone(), shape.clone());
    Ok(DieInstance::new("thm6", objects, nested_sign, inner_weight, move |rho| thm6_involution(rho, &s1))
        .with_pivot(move |rho| format!("{:?}", i_split(rho, &s2)))
        .expecting(exceptions, expected))
}

/// `G(S)` weighted by `Π_α Σ_y P(y) Π_{γ ⊆ α} E(γ | y)`; exceptions have one
/// inner block per outer block.
pub fn thm7_instance(cond: &ConditionalOracle, selection: &VarSelection) -> Result<DieInstance<'static, GObject, Rational>> {
    let ground = selection.ground();
    let objects = enumerate_g(&ground)?.collect();
    let exceptions = enumerate_cyclic(&ground)?
        .map(|sigma| GObject::new(sigma.blocks().iter().cloned().map(NestedObject::trivial).collect()))
        .collect::<Result<_>>()?;
    let expected = kappa_via_cyclic(&ground, &crate::oracle::DistributionOracle::new(cond.distribution(), selection))?;
    let (cond, sel) = (cond.clone(), selection.clone());
    let support = cond.y_support();
    let weight = move |rho: &GObject| {
        rho.slots().iter().try_fold(Rational::one(), |acc, slot| {
            let inner = slot.inner_blocks();
            let mixed = support.iter().try_fold(Rational::from_integer(0.into()), |sum, (y, p)| {
                let product = inner.iter().try_fold(p.clone(), |prod, g| Ok::<_, Error>(prod * conditional_expectation(&cond, &sel, g, y)?))?;
                Ok::<_, Error>(sum + product)
            })?;
            Ok(acc * mixed)
        })
    };
    Ok(DieInstance::new("thm7", objects, g_sign, weight, thm7_involution).expecting(exceptions, expected))
}

/// Inputs for [`build_instance`]; each identity reads only the fields it needs.
#[derive(Clone, Debug, Default)]
pub struct TheoremParams {
    pub n: Option<u32>,
    pub tau: Option<Partition>,
    pub shape: Option<GridShape>,
    pub dist_m: Option<FiniteDistribution>,
    pub dist_n: Option<FiniteDistribution>,
    pub cond: Option<ConditionalOracle>,
    pub vars: Option<Vec<String>>,
}

fn missing(what: &str, id: u8) -> Error {
    Error::Precondition(format!("identity {id} needs {what}"))
}

/// One of the seven instances with its concrete object and value types.
pub enum AnyInstance {
    Cyclic(DieInstance<'static, CyclicPartition, Rational>),
    CyclicSymbolic(DieInstance<'static, CyclicPartition, MomentPolynomial>),
    Nested(DieInstance<'static, NestedObject, MomentPolynomial>),
    G(DieInstance<'static, GObject, Rational>),
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum AnyReport {
    Numeric(DieReport<Rational>),
    Symbolic(DieReport<MomentPolynomial>),
}

impl AnyReport {
    pub fn passed(&self) -> bool {
        match self {
            AnyReport::Numeric(r) => r.passed(),
            AnyReport::Symbolic(r) => r.passed(),
        }
    }

    pub fn object_count(&self) -> usize {
        match self {
            AnyReport::Numeric(r) => r.object_count,
            AnyReport::Symbolic(r) => r.object_count,
        }
    }

    pub fn exception_count(&self) -> usize {
        match self {
            AnyReport::Numeric(r) => r.exception_count,
            AnyReport::Symbolic(r) => r.exception_count,
        }
    }
}

impl AnyInstance {
    pub fn object_count(&self) -> usize {
        match self {
            AnyInstance::Cyclic(i) => i.objects.len(),
            AnyInstance::CyclicSymbolic(i) => i.objects.len(),
            AnyInstance::Nested(i) => i.objects.len(),
            AnyInstance::G(i) => i.objects.len(),
        }
    }

    pub fn check(&self, exec: Exec) -> Result<AnyReport> {
        Ok(match self {
            AnyInstance::Cyclic(i) => AnyReport::Numeric(check_die(i, exec)?),
            AnyInstance::CyclicSymbolic(i) => AnyReport::Symbolic(check_die(i, exec)?),
            AnyInstance::Nested(i) => AnyReport::Symbolic(check_die(i, exec)?),
            AnyInstance::G(i) => AnyReport::Numeric(check_die(i, exec)?),
        })
    }
}

/// Wire up the instance for identity `id` (1 to 7).
pub fn build_instance(id: u8, params: &TheoremParams) -> Result<AnyInstance> {
    let n = || params.n.ok_or_else(|| missing("n", id));
    Ok(match id {
        1 => AnyInstance::Cyclic(thm1_instance(n()?)?),
        2 => AnyInstance::CyclicSymbolic(thm2_instance(n()?)?),
        3 => {
            let m = params.dist_m.as_ref().ok_or_else(|| missing("a first distribution", id))?;
            let d = params.dist_n.as_ref().ok_or_else(|| missing("a second distribution", id))?;
            let v = params.vars.as_ref().ok_or_else(|| missing("a variable selection", id))?;
            AnyInstance::Cyclic(thm3_instance(m, d, v)?)
        }
        4 => AnyInstance::Nested(thm4_instance(n()?)?),
        5 => AnyInstance::Nested(thm5_instance(params.tau.as_ref().ok_or_else(|| missing("a partition", id))?)?),
        6 => AnyInstance::Nested(thm6_instance(params.shape.as_ref().ok_or_else(|| missing("a shape", id))?)?),
        7 => {
            let cond = params.cond.as_ref().ok_or_else(|| missing("a conditioned distribution", id))?;
            let v = params.vars.as_ref().ok_or_else(|| missing("a variable selection", id))?;
            let sel = VarSelection::new(cond.distribution(), v)?;
            AnyInstance::G(thm7_instance(cond, &sel)?)
        }
        other => return Err(Error::Precondition(format!("unknown identity {other}; expected 1 to 7"))),
    })
}
