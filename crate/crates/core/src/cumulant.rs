//! Joint cumulants and exact verification of the cumulant identities.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::cyclic::{cyclic_sign, enumerate_cyclic};
use crate::dist::{product_distribution, Atom, ConditionalOracle, FiniteDistribution, VarSelection};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::oracle::{weight_v, ConditionalAt, DistributionOracle, ExpectationOracle, FactoringOracle, RowProductOracle, SymbolicOracle};
use crate::partition::{enumerate_finer, enumerate_partitions, is_indecomposable, vars, Block, Element, GridShape, Partition};
use crate::poly::MomentPolynomial;
use crate::value::{factorial, serialize_display, Rational, Sign, Value};

/// Coefficient `(-1)^{k-1} (k-1)!` of a `k`-block partition.
fn mobius_coefficient<V: Value>(k: usize) -> V {
    Sign::from_exponent(k - 1).apply(V::from_integer(factorial(k - 1)))
}

/// `κ(ground)` by the defining sum over set partitions.
pub fn kappa<O: ExpectationOracle + ?Sized>(ground: &[Element], oracle: &O) -> Result<O::Value> {
    enumerate_partitions(ground)?
        .try_fold(O::Value::zero(), |acc, tau| Ok(acc + mobius_coefficient::<O::Value>(tau.len()) * weight_v(tau.blocks(), oracle)?))
}

/// [`kappa`] with the per-partition terms spread according to `exec`.
pub fn kappa_exec<O: ExpectationOracle>(ground: &[Element], oracle: &O, exec: Exec) -> Result<O::Value> {
    let partitions: Vec<Partition> = enumerate_partitions(ground)?.collect();
    exec::try_sum(exec, &partitions, |tau| Ok(mobius_coefficient::<O::Value>(tau.len()) * weight_v(tau.blocks(), oracle)?))
}

/// `κ(ground) = Σ_{σ ∈ C(ground)} s(σ) V(σ)`.
pub fn kappa_via_cyclic<O: ExpectationOracle + ?Sized>(ground: &[Element], oracle: &O) -> Result<O::Value> {
    enumerate_cyclic(ground)?.try_fold(O::Value::zero(), |acc, sigma| Ok(acc + cyclic_sign(&sigma).apply(weight_v(sigma.blocks(), oracle)?)))
}

/// `K(τ) = prod_{β in τ} κ(β)`.
pub fn kappa_of_partition<O: ExpectationOracle + ?Sized>(tau: &Partition, oracle: &O) -> Result<O::Value> {
    tau.blocks().iter().try_fold(O::Value::one(), |acc, b| Ok(acc * kappa(b.elements(), oracle)?))
}

/// `Σ_τ K(τ)` over `partitions`, computing each distinct block cumulant once.
pub fn sum_of_partition_cumulants<O: ExpectationOracle>(partitions: &[Partition], oracle: &O, exec: Exec) -> Result<O::Value> {
    let mut distinct: Vec<Block> = partitions.iter().flat_map(|p| p.blocks().iter().cloned()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let values = exec::map(exec, &distinct, |b| kappa(b.elements(), oracle));
    let mut memo: HashMap<Block, O::Value> = HashMap::with_capacity(distinct.len());
    for (b, v) in distinct.into_iter().zip(values) {
        memo.insert(b, v?);
    }
    exec::try_sum(exec, partitions, |tau| Ok(tau.blocks().iter().fold(O::Value::one(), |acc, b| acc * memo[b].clone())))
}

/// `κ(block | Y = y)`.
pub fn conditional_kappa(cond: &ConditionalOracle, selection: &VarSelection, block: &Block, y: &Rational) -> Result<Rational> {
    if cond.marginal(y).is_zero() {
        return Err(Error::ZeroMarginal(y.to_string()));
    }
    kappa(block.elements(), &ConditionalAt::new(cond, selection, y))
}

/// The law of `(κ(β_1 | Y), ..., κ(β_k | Y))` as a distribution over Y's support,
/// with variables named `k1..kk`.
pub fn conditional_cumulant_law(cond: &ConditionalOracle, selection: &VarSelection, tau: &Partition) -> Result<FiniteDistribution> {
    let variables = (1..=tau.len()).map(|i| format!("k{i}")).collect();
    let atoms = cond
        .y_support()
        .into_iter()
        .map(|(y, p)| {
            let values = tau.blocks().iter().map(|b| conditional_kappa(cond, selection, b, &y)).collect::<Result<_>>()?;
            Ok(Atom { values, prob: p })
        })
        .collect::<Result<_>>()?;
    FiniteDistribution::new(variables, atoms)
}

/// Outcome of checking one identity exactly.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport<V: Value> {
    pub identity: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    #[serde(serialize_with = "serialize_display")]
    pub left: V,
    #[serde(serialize_with = "serialize_display")]
    pub right: V,
    pub equal: bool,
    pub objects_visited: usize,
}

impl<V: Value> VerificationReport<V> {
    fn new(identity: &str, parameters: BTreeMap<String, serde_json::Value>, left: V, right: V, objects_visited: usize) -> Self {
        let equal = (left.clone() - right.clone()).is_zero();
        VerificationReport { identity: identity.to_string(), parameters, left, right, equal, objects_visited }
    }

    pub fn residual(&self) -> V {
        self.left.clone() - self.right.clone()
    }
}

fn params(pairs: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn at_least_two(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("the identity needs n >= 2, got {n}")));
    }
    Ok(())
}

/// The coefficients of `κ` sum to zero: `Σ_{σ ∈ C([n])} s(σ) = 0`.
pub fn verify_thm1(n: u32, exec: Exec) -> Result<VerificationReport<Rational>> {
    at_least_two(n)?;
    let objects: Vec<_> = enumerate_cyclic(&vars(n))?.collect();
    let left = exec::try_sum(exec, &objects, |s| Ok(Rational::from_integer(cyclic_sign(s).as_i32().into())))?;
    Ok(VerificationReport::new("thm1", params(&[("n", json!(n))]), left, Rational::zero(), objects.len()))
}

/// With every proper subset independent, `κ(S) = m_S - prod m_i`.
pub fn verify_thm2(n: u32, exec: Exec) -> Result<VerificationReport<MomentPolynomial>> {
    at_least_two(n)?;
    let ground = vars(n);
    let full = Block::new(ground.clone())?;
    let left = kappa_exec(&ground, &FactoringOracle::new(full.clone()), exec)?;
    let right = MomentPolynomial::symbol(full.clone()) - MomentPolynomial::product_of_singletons(&full);
    let visited = enumerate_partitions(&ground)?.count();
    Ok(VerificationReport::new("thm2", params(&[("n", json!(n))]), left, right, visited))
}

/// `κ = 0` when the selection splits into two independent nonempty groups.
pub fn verify_thm3<S: AsRef<str>>(
    dist_m: &FiniteDistribution,
    dist_n: &FiniteDistribution,
    selection: &[S],
    exec: Exec,
) -> Result<VerificationReport<Rational>> {
    let touches = |d: &FiniteDistribution| selection.iter().any(|s| d.variables().iter().any(|v| v == s.as_ref()));
    if !touches(dist_m) || !touches(dist_n) {
        return Err(Error::Precondition("the selection must use variables from both independent groups".into()));
    }
    let joint = product_distribution(dist_m, dist_n)?;
    let sel = VarSelection::new(&joint, selection)?;
    let ground = sel.ground();
    let left = kappa_exec(&ground, &DistributionOracle::new(&joint, &sel), exec)?;
    let visited = enumerate_partitions(&ground)?.count();
    let p = params(&[("vars", json!(sel.names())), ("m", json!(dist_m.variables())), ("n", json!(dist_n.variables()))]);
    Ok(VerificationReport::new("thm3", p, left, Rational::zero(), visited))
}

/// Moments from cumulants: `m_S = Σ_{τ ∈ P(S)} K(τ)`.
pub fn verify_thm4(n: u32, exec: Exec) -> Result<VerificationReport<MomentPolynomial>> {
    let ground = vars(n);
    let partitions: Vec<Partition> = enumerate_partitions(&ground)?.collect();
    let right = sum_of_partition_cumulants(&partitions, &SymbolicOracle, exec)?;
    let left = MomentPolynomial::symbol(Block::new(ground)?);
    Ok(VerificationReport::new("thm4", params(&[("n", json!(n))]), left, right, partitions.len()))
}

/// `prod_{β in τ} m_β = Σ_{π ⪯ τ} K(π)`.
pub fn verify_thm5(tau: &Partition, exec: Exec) -> Result<VerificationReport<MomentPolynomial>> {
    let partitions: Vec<Partition> = enumerate_finer(tau).collect();
    let right = sum_of_partition_cumulants(&partitions, &SymbolicOracle, exec)?;
    let left = weight_v(tau.blocks(), &SymbolicOracle)?;
    Ok(VerificationReport::new("thm5", params(&[("tau", json!(tau))]), left, right, partitions.len()))
}

/// Cumulant of row products equals the sum of `K(π)` over indecomposable `π`.
pub fn verify_thm6(shape: &GridShape, exec: Exec) -> Result<VerificationReport<MomentPolynomial>> {
    let all: Vec<Partition> = enumerate_partitions(&shape.cells())?.collect();
    let flags = exec::map(exec, &all, |pi| is_indecomposable(pi, shape));
    let mut indecomposable = Vec::new();
    for (pi, flag) in all.iter().zip(flags) {
        if flag? {
            indecomposable.push(pi.clone());
        }
    }
    let left = sum_of_partition_cumulants(&indecomposable, &SymbolicOracle, exec)?;
    let right = kappa_exec(&vars(shape.rows() as u32), &RowProductOracle::new(shape.clone()), exec)?;
    Ok(VerificationReport::new("thm6", params(&[("shape", json!(shape))]), left, right, all.len()))
}

/// Law of total cumulance: `κ(S) = Σ_τ κ(κ(β_1 | Y), ..., κ(β_k | Y))`.
pub fn verify_thm7(cond: &ConditionalOracle, selection: &VarSelection, exec: Exec) -> Result<VerificationReport<Rational>> {
    let ground = selection.ground();
    let left = kappa_exec(&ground, &DistributionOracle::new(cond.distribution(), selection), exec)?;
    let partitions: Vec<Partition> = enumerate_partitions(&ground)?.collect();
    let right = exec::try_sum(exec, &partitions, |tau| {
        let law = conditional_cumulant_law(cond, selection, tau)?;
        let outer = VarSelection::new(&law, law.variables())?;
        kappa(&outer.ground(), &DistributionOracle::new(&law, &outer))
    })?;
    let p = params(&[("vars", json!(selection.names())), ("y", json!(cond.y_name()))]);
    Ok(VerificationReport::new("thm7", p, left, right, partitions.len()))
}
