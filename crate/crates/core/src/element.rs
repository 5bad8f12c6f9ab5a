//! Finitely supported linear combinations of basis keys with exact rational
//! coefficients. Used both for semigroup algebra elements (keys are lattice
//! points) and for elements of finite-dimensional test spaces (keys are
//! basis indices).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Key type for the bases our cochains act on.
pub trait BasisKey: Clone + Ord + Eq + std::hash::Hash + std::fmt::Debug + 'static {}
impl<T: Clone + Ord + Eq + std::hash::Hash + std::fmt::Debug + 'static> BasisKey for T {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<B: BasisKey> {
    terms: BTreeMap<B, BigRational>,
}

impl<B: BasisKey> Default for Element<B> {
    fn default() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: BasisKey> Element<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(b: B) -> Self {
        Self::term(b, BigRational::one())
    }

    pub fn term(b: B, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> BigRational {
        self.terms.get(b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, b: B, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Element<B>) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Element<B>) -> Element<B> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Element<B>) -> Element<B> {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Element<B> {
        Element {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Element<B> {
        if k.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        }
    }

    pub fn scaled_add(&mut self, k: &BigRational, other: &Element<B>) {
        if k.is_zero() {
            return;
        }
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c * k);
        }
    }
}

impl<B: BasisKey + std::fmt::Display> std::fmt::Display for Element<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·[{}]", c, b)?;
        }
        Ok(())
    }
}
