use std::cmp::Ordering;
use std::fmt;

use super::{Fp, PrimeField};
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_ℓ`, lowest degree first.
///
/// The coefficient vector never has trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = Self { field, coeffs };
        poly.trim();
        poly
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce_i64(c)).collect())
    }

    pub fn from_fp(field: PrimeField, coeffs: &[Fp]) -> Self {
        Self::new(field, coeffs.iter().map(|c| c.value()).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(field, vec![1])
    }

    /// `x^k`.
    pub fn monomial(field: PrimeField, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self { field, coeffs: c }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            None => self.clone(),
            Some(inv) => self.scale(inv),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.mul(c, k)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.check(divisor);
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f
            .inv(divisor.leading())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut acc = Self::one(self.field).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            exp >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, i as u64 % f.modulus()))
                .collect(),
        )
    }

    /// Horner evaluation at a point of `F_ℓ`.
    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field, other.field, "mixed-field polynomial arithmetic");
    }
}

/// Orders polynomials by degree, then coefficient vectors lowest degree first.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic greatest common divisor.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

fn gcd_nonzero(f: &Poly, g: &Poly) -> Poly {
    poly_gcd(f, g).expect("at least one operand is nonzero")
}

/// Distinct-degree factorization of a squarefree monic polynomial.
/// Returns `(d, product of all degree-d irreducible factors)` pairs.
fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let q = field.modulus();
    let x = Poly::monomial(field, 1);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest);
        let g = gcd_nonzero(&h.sub(&x), &rest);
        if g.degree() != Some(0) {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((d, g));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((deg, rest));
        }
    }
    out
}

/// Deterministic candidate splitting polynomials: base-ℓ digits of a counter.
fn nth_candidate(field: PrimeField, mut t: u64, max_deg: usize) -> Poly {
    let q = field.modulus();
    let mut coeffs = Vec::with_capacity(max_deg);
    while t > 0 && coeffs.len() < max_deg {
        coeffs.push(t % q);
        t /= q;
    }
    Poly::new(field, coeffs)
}

/// Splits a product of distinct irreducibles, all of degree `d`.
fn equal_degree(g: &Poly, d: usize, out: &mut Vec<Poly>) {
    let deg = g.degree().expect("nonzero");
    if deg == d {
        out.push(g.monic());
        return;
    }
    let field = g.field();
    let q = field.modulus();
    let one = Poly::one(field);
    // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
    for t in (q + 1).. {
        let a = nth_candidate(field, t, deg);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut frob = a.rem(g);
        let mut norm = frob.clone();
        for _ in 1..d {
            frob = frob.pow_mod(q, g);
            norm = norm.mul_mod(&frob, g);
        }
        let b = norm.pow_mod((q - 1) / 2, g).sub(&one);
        if b.is_zero() {
            continue;
        }
        let h = gcd_nonzero(&b, g);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < deg {
            let other = g.div_rem(&h).0;
            equal_degree(&h, d, out);
            equal_degree(&other, d, out);
            return;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, sorted by
/// [`Poly`]'s ordering.
pub fn irreducible_factors(f: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f) {
        equal_degree(&g, d, &mut out);
    }
    out.sort();
    out
}

/// Rabin-style irreducibility test: `gcd(f, x^{ℓ^d} − x) = 1` for every
/// `d < deg f` and `x^{ℓ^{deg f}} ≡ x mod f`.
pub fn is_irreducible(f: &Poly) -> bool {
    let deg = match f.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let field = f.field();
    let q = field.modulus();
    let x = Poly::monomial(field, 1).rem(f);
    let mut h = x.clone();
    for _ in 1..deg {
        h = h.pow_mod(q, f);
        if gcd_nonzero(&h.sub(&x), f).degree() != Some(0) {
            return false;
        }
    }
    h = h.pow_mod(q, f);
    h == x
}
