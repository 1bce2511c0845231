use std::sync::Arc;

use super::{is_irreducible, Fp, Poly, PrimeField};
use crate::error::{Error, Result};

/// `F_ℓ[x]/(m(x))` for an irreducible `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    modulus: Arc<Poly>,
}

impl ExtField {
    pub fn new(modulus: Poly) -> Result<Self> {
        if !is_irreducible(&modulus) {
            return Err(Error::Reducible);
        }
        Ok(Self {
            modulus: Arc::new(modulus.monic()),
        })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn base(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    pub fn element(&self, residue: Poly) -> ExtFieldElement {
        ExtFieldElement {
            residue: residue.rem(&self.modulus),
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn from_base(&self, c: Fp) -> ExtFieldElement {
        self.element(Poly::new(self.base(), vec![c.value()]))
    }

    pub fn zero(&self) -> ExtFieldElement {
        self.element(Poly::zero(self.base()))
    }

    pub fn one(&self) -> ExtFieldElement {
        self.element(Poly::one(self.base()))
    }

    /// The class of `x`.
    pub fn generator(&self) -> ExtFieldElement {
        self.element(Poly::monomial(self.base(), 1))
    }
}

/// A residue class modulo an irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtFieldElement {
    residue: Poly,
    modulus: Arc<Poly>,
}

impl ExtFieldElement {
    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn same(&self, residue: Poly) -> Self {
        Self {
            residue,
            modulus: Arc::clone(&self.modulus),
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "mixed extension fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        self.same(self.residue.add(&other.residue))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        self.same(self.residue.sub(&other.residue))
    }

    pub fn neg(&self) -> Self {
        self.same(self.residue.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        self.same(self.residue.mul_mod(&other.residue, &self.modulus))
    }

    pub fn scale(&self, c: u64) -> Self {
        self.same(self.residue.scale(c))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.same(self.residue.pow_mod(exp, &self.modulus))
    }

    /// Evaluates `g` at this element.
    pub fn eval(&self, g: &Poly) -> Self {
        let mut acc = self.same(Poly::zero(self.residue.field()));
        for &c in g.coeffs().iter().rev() {
            acc = acc.mul(self);
            acc = acc.same(acc.residue.add(&Poly::new(g.field(), vec![c])));
        }
        acc
    }
}
