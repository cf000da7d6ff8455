//! Description / Involution / Exception checking.
//!
//! A [`DieInstance`] describes a signed, weighted family of objects together
//! with a partial involution. [`check_die`] verifies pointwise that the
//! involution is self-inverse, flips the sign and keeps the weight, then
//! confirms that the full signed sum equals the sum over the exceptions.

mod instances;
mod involution;

use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

use crate::error::Result;
use crate::exec::{self, Exec};
use crate::value::{serialize_display, Sign, Value};

pub use instances::{
    build_instance, thm1_instance, thm2_instance, thm3_instance, thm4_instance, thm5_instance, thm6_instance, thm7_instance, AnyInstance, AnyReport,
    TheoremParams,
};
pub use involution::{i_split, thm1_involution, thm3_involution, thm4_involution, thm5_involution, thm6_involution, thm7_involution};

type SignFn<'a, O> = Box<dyn Fn(&O) -> Sign + Send + Sync + 'a>;
type WeightFn<'a, O, V> = Box<dyn Fn(&O) -> Result<V> + Send + Sync + 'a>;
type InvolutionFn<'a, O> = Box<dyn Fn(&O) -> Option<O> + Send + Sync + 'a>;
type PivotFn<'a, O> = Box<dyn Fn(&O) -> String + Send + Sync + 'a>;

/// Objects that a DIE instance can range over.
pub trait DieObject: Clone + Eq + Hash + Serialize + Send + Sync {}

impl<T: Clone + Eq + Hash + Serialize + Send + Sync> DieObject for T {}

pub struct DieInstance<'a, O, V> {
    pub name: String,
    pub objects: Vec<O>,
    sign: SignFn<'a, O>,
    weight: WeightFn<'a, O, V>,
    involution: InvolutionFn<'a, O>,
    /// Data the involution's choice depends on; must agree on `x` and `f(x)`.
    pivot: Option<PivotFn<'a, O>>,
    pub expected_exceptions: Option<Vec<O>>,
    pub expected_exception_sum: Option<V>,
}

impl<'a, O: DieObject, V: Value> DieInstance<'a, O, V> {
    pub fn new(
        name: impl Into<String>,
        objects: Vec<O>,
        sign: impl Fn(&O) -> Sign + Send + Sync + 'a,
        weight: impl Fn(&O) -> Result<V> + Send + Sync + 'a,
        involution: impl Fn(&O) -> Option<O> + Send + Sync + 'a,
    ) -> Self {
        DieInstance {
            name: name.into(),
            objects,
            sign: Box::new(sign),
            weight: Box::new(weight),
            involution: Box::new(involution),
            pivot: None,
            expected_exceptions: None,
            expected_exception_sum: None,
        }
    }

    pub fn with_pivot(mut self, pivot: impl Fn(&O) -> String + Send + Sync + 'a) -> Self {
        self.pivot = Some(Box::new(pivot));
        self
    }

    /// Declare the exception set and the value their signed weights must sum to.
    pub fn expecting(mut self, exceptions: Vec<O>, exception_sum: V) -> Self {
        self.expected_exceptions = Some(exceptions);
        self.expected_exception_sum = Some(exception_sum);
        self
    }

    pub fn sign(&self, x: &O) -> Sign {
        (self.sign)(x)
    }

    pub fn weight(&self, x: &O) -> Result<V> {
        (self.weight)(x)
    }

    pub fn involution(&self, x: &O) -> Option<O> {
        (self.involution)(x)
    }

    /// Membership in `C - C_0`: the involution is undefined at `x`.
    pub fn is_exception(&self, x: &O) -> bool {
        self.involution(x).is_none()
    }

    pub fn exceptions(&self) -> Vec<O> {
        self.objects.iter().filter(|x| self.is_exception(x)).cloned().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Offender {
    pub reason: String,
    pub object: serde_json::Value,
    pub image: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DieReport<V: Value> {
    pub instance: String,
    pub object_count: usize,
    pub exception_count: usize,
    pub involution_ok: bool,
    pub sign_ok: bool,
    pub weight_ok: bool,
    /// Exceptions equal the declared set (vacuously true when none is declared).
    pub exceptions_ok: bool,
    #[serde(serialize_with = "serialize_display")]
    pub total: V,
    #[serde(serialize_with = "serialize_display")]
    pub exception_sum: V,
    #[serde(serialize_with = "serialize_display")]
    pub residual: V,
    pub expected_exception_sum: Option<String>,
    pub exception_sum_ok: bool,
    pub first_offender: Option<Offender>,
}

impl<V: Value> DieReport<V> {
    pub fn passed(&self) -> bool {
        self.involution_ok && self.sign_ok && self.weight_ok && self.exceptions_ok && self.exception_sum_ok && self.residual.is_zero()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flaw {
    Involution,
    Sign,
    Weight,
}

struct Visit<O, V> {
    signed: V,
    image: Option<O>,
    flaw: Option<(Flaw, String)>,
}

fn visit<O: DieObject, V: Value>(instance: &DieInstance<'_, O, V>, members: &HashSet<&O>, x: &O) -> Result<Visit<O, V>> {
    let sign = instance.sign(x);
    let weight = instance.weight(x)?;
    let signed = sign.apply(weight.clone());
    let Some(y) = instance.involution(x) else {
        return Ok(Visit { signed, image: None, flaw: None });
    };
    let flaw = if !members.contains(&y) {
        Some((Flaw::Involution, "image lies outside the object set".to_string()))
    } else if y == *x {
        Some((Flaw::Involution, "fixed point of the involution".into()))
    } else if instance.involution(&y).as_ref() != Some(x) {
        Some((Flaw::Involution, "f(f(x)) != x or f(x) is an exception".into()))
    } else if instance.pivot.as_ref().is_some_and(|p| p(x) != p(&y)) {
        Some((Flaw::Involution, "involution choice differs between x and f(x)".into()))
    } else if instance.sign(&y) != -sign {
        Some((Flaw::Sign, "sign not reversed".into()))
    } else if instance.weight(&y)? != weight {
        Some((Flaw::Weight, "weight not preserved".into()))
    } else {
        None
    };
    Ok(Visit { signed, image: Some(y), flaw })
}

/// Check the three involution laws on every object and compare the full
/// signed sum with the exception sum.
pub fn check_die<O: DieObject, V: Value>(instance: &DieInstance<'_, O, V>, exec: Exec) -> Result<DieReport<V>> {
    let members: HashSet<&O> = instance.objects.iter().collect();
    let visits = exec::map(exec, &instance.objects, |x| visit(instance, &members, x));

    let mut total = V::zero();
    let mut exception_sum = V::zero();
    let mut exceptions = Vec::new();
    let (mut involution_ok, mut sign_ok, mut weight_ok) = (true, true, true);
    let mut first_offender = None;
    for (x, v) in instance.objects.iter().zip(visits) {
        let v = v?;
        total = total + v.signed.clone();
        if v.image.is_none() {
            exception_sum = exception_sum + v.signed;
            exceptions.push(x);
        }
        if let Some((flaw, reason)) = v.flaw {
            match flaw {
                Flaw::Involution => involution_ok = false,
                Flaw::Sign => sign_ok = false,
                Flaw::Weight => weight_ok = false,
            }
            first_offender.get_or_insert_with(|| Offender {
                reason,
                object: serde_json::to_value(x).expect("objects serialize"),
                image: v.image.as_ref().map(|y| serde_json::to_value(y).expect("objects serialize")),
            });
        }
    }

    let exceptions_ok = instance.expected_exceptions.as_ref().is_none_or(|expected| {
        let expected: HashSet<&O> = expected.iter().collect();
        expected.len() == exceptions.len() && exceptions.iter().all(|x| expected.contains(x))
    });
    let exception_sum_ok = instance.expected_exception_sum.as_ref().is_none_or(|e| *e == exception_sum);
    let residual = total.clone() - exception_sum.clone();
    Ok(DieReport {
        instance: instance.name.clone(),
        object_count: instance.objects.len(),
        exception_count: exceptions.len(),
        involution_ok,
        sign_ok,
        weight_ok,
        exceptions_ok,
        total,
        exception_sum,
        residual,
        expected_exception_sum: instance.expected_exception_sum.as_ref().map(ToString::to_string),
        exception_sum_ok,
        first_offender,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Rational;
    use num::Zero;

    #[test]
    fn all_exceptions_leave_zero_residual() {
        let inst: DieInstance<'_, u32, Rational> =
            DieInstance::new("all-exceptions", vec![1, 2, 3], |_| Sign::Plus, |x| Ok(Rational::from_integer((*x).into())), |_| None);
        let report = check_die(&inst, Exec::Sequential).unwrap();
        assert_eq!(report.exception_count, 3);
        assert!(report.residual.is_zero());
        assert!(report.passed());
    }

    #[test]
    fn broken_involutions_are_reported() {
        // 1 -> 2 -> 3: not self-inverse.
        let inst: DieInstance<'_, u32, Rational> = DieInstance::new(
            "cycle",
            vec![1, 2, 3],
            |x| if x % 2 == 0 { Sign::Minus } else { Sign::Plus },
            |_| Ok(Rational::from_integer(1.into())),
            |x| Some(x % 3 + 1),
        );
        let report = check_die(&inst, Exec::Sequential).unwrap();
        assert!(!report.involution_ok);
        assert_eq!(report.first_offender.unwrap().object, serde_json::json!(1));

        // Pairs 1 <-> 2 but both carry the same sign.
        let inst: DieInstance<'_, u32, Rational> =
            DieInstance::new("same-sign", vec![1, 2], |_| Sign::Plus, |_| Ok(Rational::from_integer(1.into())), |x| Some(3 - x));
        let report = check_die(&inst, Exec::Sequential).unwrap();
        assert!(report.involution_ok && !report.sign_ok);
        assert!(!report.passed());

        // Maps a non-exception onto an exception.
        let inst: DieInstance<'_, u32, Rational> = DieInstance::new(
            "into-exception",
            vec![1, 2],
            |x| if *x == 1 { Sign::Plus } else { Sign::Minus },
            |_| Ok(Rational::from_integer(1.into())),
            |x| (*x == 1).then_some(2),
        );
        assert!(!check_die(&inst, Exec::Sequential).unwrap().involution_ok);
    }

    #[test]
    fn weight_changes_are_reported() {
        let inst: DieInstance<'_, u32, Rational> = DieInstance::new(
            "weights",
            vec![1, 2],
            |x| if *x == 1 { Sign::Plus } else { Sign::Minus },
            |x| Ok(Rational::from_integer((*x).into())),
            |x| Some(3 - x),
        );
        let report = check_die(&inst, Exec::Sequential).unwrap();
        assert!(report.involution_ok && report.sign_ok && !report.weight_ok);
    }
}
