//! Formal moment symbols `m_B = E(prod_{X in B} X)` and polynomials over them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num::{One, Zero};

use crate::error::Result;
use crate::partition::{Block, Element};
use crate::value::{coefficient_prefix, Rational, Value};

/// The moment of the product of the variables in a block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MomentSymbol(Block);

impl MomentSymbol {
    pub fn new(index_set: Block) -> Self {
        MomentSymbol(index_set)
    }

    pub fn index_set(&self) -> &Block {
        &self.0
    }
}

impl fmt::Display for MomentSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// A multiset of symbols, kept sorted.
pub type Monomial = Vec<MomentSymbol>;

fn merge(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: Monomial = a.iter().chain(b).cloned().collect();
    out.sort_unstable();
    out
}

/// A polynomial in moment symbols with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MomentPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl MomentPolynomial {
    pub fn symbol(block: Block) -> Self {
        Self::monomial(vec![MomentSymbol(block)], Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn monomial(mut symbols: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            symbols.sort_unstable();
            terms.insert(symbols, c);
        }
        MomentPolynomial { terms }
    }

    /// Product of `m_{x}` over the elements of `block`.
    pub fn product_of_singletons(block: &Block) -> Self {
        let symbols = block.elements().iter().map(|&e| MomentSymbol(Block::from_sorted(vec![e]))).collect();
        Self::monomial(symbols, Rational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Rename the elements inside every symbol.
    pub fn map_elements(&self, f: impl Fn(Element) -> Element) -> Result<Self> {
        let mut out = MomentPolynomial::zero();
        for (m, c) in &self.terms {
            let renamed =
                m.iter().map(|s| Block::new(s.0.elements().iter().map(|&e| f(e)).collect()).map(MomentSymbol)).collect::<Result<Monomial>>()?;
            out.add_term(renamed.into_iter().sorted().collect(), c.clone());
        }
        Ok(out)
    }
}

impl Add for MomentPolynomial {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for MomentPolynomial {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for MomentPolynomial {
    type Output = Self;

    fn neg(mut self) -> Self {
        self.terms.values_mut().for_each(|c| *c = -c.clone());
        self
    }
}

impl Mul for MomentPolynomial {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &MomentPolynomial {
    type Output = MomentPolynomial;

    fn mul(self, rhs: &MomentPolynomial) -> MomentPolynomial {
        let mut out = MomentPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(merge(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Zero for MomentPolynomial {
    fn zero() -> Self {
        MomentPolynomial::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MomentPolynomial {
    fn one() -> Self {
        MomentPolynomial::constant(Rational::one())
    }
}

impl Value for MomentPolynomial {
    fn from_rational(r: Rational) -> Self {
        MomentPolynomial::constant(r)
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.iter()
        .chunk_by(|s| *s)
        .into_iter()
        .map(|(s, run)| match run.count() {
            1 => s.to_string(),
            k => format!("{s}^{k}"),
        })
        .join("*")
}

/// Canonical text: monomials in sorted order, e.g. `m{1,2} - m{1}*m{2}`.
impl fmt::Display for MomentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let text = if m.is_empty() { c.to_string() } else { format!("{}{}", coefficient_prefix(c), fmt_monomial(m)) };
            match (i, text.strip_prefix('-')) {
                (0, _) => f.write_str(&text)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}
