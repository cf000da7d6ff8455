//! Exact finite joint distributions.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{vars, Element};
use crate::value::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub values: Vec<Rational>,
    pub prob: Rational,
}

/// A probability vector over finitely many value vectors.
///
/// Atoms are kept sorted by value vector with duplicates merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistribution {
    variables: Vec<String>,
    atoms: Vec<Atom>,
}

/// On-disk form: `{"variables": [...], "atoms": [{"values": ["1/2", ...], "prob": "1/4"}]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    variables: Vec<String>,
    atoms: Vec<AtomFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomFile {
    values: Vec<String>,
    prob: String,
}

impl FiniteDistribution {
    pub fn new(variables: Vec<String>, atoms: Vec<Atom>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidDistribution("no variables".into()));
        }
        for (i, name) in variables.iter().enumerate() {
            if variables[..i].contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (i, atom) in atoms.into_iter().enumerate() {
            if atom.values.len() != variables.len() {
                return Err(Error::AtomParse { atom: i, message: format!("expected {} values, found {}", variables.len(), atom.values.len()) });
            }
            if !atom.prob.is_positive() {
                return Err(Error::AtomParse { atom: i, message: format!("probability {} is not positive", atom.prob) });
            }
            *merged.entry(atom.values).or_insert_with(Rational::zero) += atom.prob;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        let atoms = merged.into_iter().map(|(values, prob)| Atom { values, prob }).collect();
        Ok(FiniteDistribution { variables, atoms })
    }

    /// Convenience constructor from `(values, prob)` pairs of integers over a common denominator.
    pub fn from_weights(variables: &[&str], atoms: &[(&[i64], i64)], denominator: i64) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|(values, w)| Atom {
                values: values.iter().map(|&v| Rational::from_integer(v.into())).collect(),
                prob: Rational::new((*w).into(), denominator.into()),
            })
            .collect();
        FiniteDistribution::new(variables.iter().map(|s| s.to_string()).collect(), atoms)
    }

    /// The point mass at `values`.
    pub fn point(variables: &[&str], values: &[Rational]) -> Result<Self> {
        FiniteDistribution::new(variables.iter().map(|s| s.to_string()).collect(), vec![Atom { values: values.to_vec(), prob: Rational::one() }])
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: DistributionFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let atoms = file
            .atoms
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                let values = a
                    .values
                    .iter()
                    .map(|v| parse_rational(v))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|message| Error::AtomParse { atom: i, message })?;
                let prob = parse_rational(&a.prob).map_err(|message| Error::AtomParse { atom: i, message })?;
                Ok(Atom { values, prob })
            })
            .collect::<Result<_>>()?;
        FiniteDistribution::new(file.variables, atoms)
    }

    pub fn to_json_string(&self) -> String {
        let file = DistributionFile {
            variables: self.variables.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomFile { values: a.values.iter().map(ToString::to_string).collect(), prob: a.prob.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("distribution serializes")
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// `E(prod of the given columns)`; repeated columns multiply repeatedly.
    pub fn expectation_of(&self, columns: &[usize]) -> Rational {
        self.atoms.iter().map(|a| &a.prob * columns.iter().map(|&c| &a.values[c]).product::<Rational>()).sum()
    }

    pub fn expectation(&self, names: &[&str]) -> Result<Rational> {
        let columns = names.iter().map(|n| self.column(n)).collect::<Result<Vec<_>>>()?;
        Ok(self.expectation_of(&columns))
    }

    /// Append a column computed from each atom's existing values.
    pub fn with_column(&self, name: &str, f: impl Fn(&[Rational]) -> Rational) -> Result<Self> {
        let mut variables = self.variables.clone();
        variables.push(name.to_string());
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let mut values = a.values.clone();
                values.push(f(&a.values));
                Atom { values, prob: a.prob.clone() }
            })
            .collect();
        FiniteDistribution::new(variables, atoms)
    }
}

/// The joint law making the variables of `d1` independent of those of `d2`.
pub fn product_distribution(d1: &FiniteDistribution, d2: &FiniteDistribution) -> Result<FiniteDistribution> {
    if let Some(clash) = d1.variables.iter().find(|v| d2.variables.contains(v)) {
        return Err(Error::DuplicateVariable(clash.clone()));
    }
    let variables = d1.variables.iter().chain(&d2.variables).cloned().collect();
    let atoms = d1
        .atoms
        .iter()
        .flat_map(|a| d2.atoms.iter().map(move |b| Atom { values: a.values.iter().chain(&b.values).cloned().collect(), prob: &a.prob * &b.prob }))
        .collect();
    FiniteDistribution::new(variables, atoms)
}

/// Which distribution column each ground element `X_i` reads; repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSelection {
    names: Vec<String>,
    columns: Vec<usize>,
}

impl VarSelection {
    pub fn new<S: AsRef<str>>(dist: &FiniteDistribution, names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyGround);
        }
        let columns = names.iter().map(|n| dist.column(n.as_ref())).collect::<Result<_>>()?;
        Ok(VarSelection { names: names.iter().map(|n| n.as_ref().to_string()).collect(), columns })
    }

    /// Parse `"X1,X2,X1"`.
    pub fn parse(dist: &FiniteDistribution, list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        VarSelection::new(dist, &names)
    }

    /// `X_1, ..., X_n`.
    pub fn ground(&self) -> Vec<Element> {
        vars(self.names.len() as u32)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn column_of(&self, e: Element) -> Result<usize> {
        match e {
            Element::Var(i) if (1..=self.columns.len() as u32).contains(&i) => Ok(self.columns[i as usize - 1]),
            other => Err(Error::UnknownVariable(format!("X{other}"))),
        }
    }
}

/// A distribution together with a designated conditioning variable `Y`.
#[derive(Clone, Debug)]
pub struct ConditionalOracle {
    dist: FiniteDistribution,
    y: usize,
}

impl ConditionalOracle {
    pub fn new(dist: FiniteDistribution, y_name: &str) -> Result<Self> {
        let y = dist.column(y_name)?;
        Ok(ConditionalOracle { dist, y })
    }

    pub fn distribution(&self) -> &FiniteDistribution {
        &self.dist
    }

    pub fn y_name(&self) -> &str {
        &self.dist.variables[self.y]
    }

    /// `(y, P(Y = y))` for every value in the support, sorted by `y`.
    pub fn y_support(&self) -> Vec<(Rational, Rational)> {
        let mut marginal: BTreeMap<Rational, Rational> = BTreeMap::new();
        for a in &self.dist.atoms {
            *marginal.entry(a.values[self.y].clone()).or_insert_with(Rational::zero) += &a.prob;
        }
        marginal.into_iter().collect()
    }

    pub fn marginal(&self, y: &Rational) -> Rational {
        self.dist.atoms.iter().filter(|a| &a.values[self.y] == y).map(|a| a.prob.clone()).sum()
    }

    /// `E(prod of columns | Y = y)`.
    pub fn conditional_expectation_of(&self, columns: &[usize], y: &Rational) -> Result<Rational> {
        let p_y = self.marginal(y);
        if p_y.is_zero() {
            return Err(Error::ZeroMarginal(y.to_string()));
        }
        let joint: Rational = self
            .dist
            .atoms
            .iter()
            .filter(|a| &a.values[self.y] == y)
            .map(|a| &a.prob * columns.iter().map(|&c| &a.values[c]).product::<Rational>())
            .sum();
        Ok(joint / p_y)
    }
}
