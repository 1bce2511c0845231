//! Exact arithmetic over prime fields `F_ℓ` and their extensions
//! `F_ℓ[x]/(m(x))`, where `m` divides `x^{2^{n-1}} + 1`.

mod ext;
mod poly;

pub use ext::{ExtField, ExtFieldElement};
pub use poly::{irreducible_factors, is_irreducible, poly_gcd, Poly};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The field `F_ℓ` for an odd prime `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp {
            value: v % self.p,
            field: *self,
        }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        Fp {
            value: self.reduce_i64(v),
            field: *self,
        }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p, "unreduced operand mod {}", self.p);
        if self.p <= u32::MAX as u64 {
            // reduced operands, so the product fits in 64 bits
            a * b % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via Fermat. Returns `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Legendre symbol as 1, -1 or 0.
    pub fn legendre(&self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

/// An element of `F_ℓ`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

impl Fp {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<Fp> {
        self.field.inv(self.value).map(|v| self.field.elem(v))
    }

    pub fn pow(&self, exp: u64) -> Fp {
        self.field.elem(self.field.pow(self.value, exp))
    }

    fn check(&self, other: &Fp) {
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: self.field.sub(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

/// Square root in `F_ℓ` by Tonelli–Shanks.
///
/// Of the two roots `r` and `ℓ - r`, the smaller representative is returned.
/// Non-residues give `None`.
pub fn sqrt_mod(a: Fp) -> Option<Fp> {
    let f = a.field();
    let p = f.modulus();
    let a = a.value();
    if a == 0 {
        return Some(f.zero());
    }
    if f.legendre(a) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        f.pow(a, (p + 1) / 4)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&z| f.legendre(z) == -1)
            .expect("non-residue exists");
        let mut m = s;
        let mut c = f.pow(z, q);
        let mut t = f.pow(a, q);
        let mut r = f.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = f.mul(t2, t2);
                i += 1;
            }
            let b = f.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = f.mul(b, b);
            t = f.mul(t, c);
            r = f.mul(r, b);
        }
        r
    };
    Some(f.elem(root.min(p - root)))
}

/// Residue class of `ℓ` that admits the factorization of `x^{2^{n-1}} + 1`
/// into two factors of degree `2^{n-2}` with coefficients in `F_ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EllClass {
    /// `ℓ ≡ 3 mod 8`: `√−2 ∈ F_ℓ`.
    Three,
    /// `ℓ ≡ 5 mod 8`: `√−1 ∈ F_ℓ`.
    Five,
}

impl EllClass {
    pub fn of(ell: u64) -> Result<Self> {
        match ell % 8 {
            3 => Ok(EllClass::Three),
            5 => Ok(EllClass::Five),
            class => Err(Error::WrongCongruence { ell, class }),
        }
    }

    /// The field element whose square root drives the factorization: −2 or −1.
    pub fn radicand(&self, field: PrimeField) -> Fp {
        match self {
            EllClass::Three => field.from_i64(-2),
            EllClass::Five => field.from_i64(-1),
        }
    }
}

/// `x^m + 1` over `field`.
pub fn negacyclic_modulus(field: PrimeField, m: usize) -> Poly {
    let mut c = vec![0u64; m + 1];
    c[0] = 1;
    c[m] = 1;
    Poly::new(field, c)
}

/// Splits `x^{2^{n-1}} + 1` into two explicit factors of degree `2^{n-2}`.
///
/// For `ℓ ≡ 3 mod 8` the factors are `x^{2^{n-2}} ± r·x^{2^{n-3}} − 1` with
/// `r = √−2`; for `ℓ ≡ 5 mod 8` they are `x^{2^{n-2}} ± r` with `r = √−1`.
/// `r` is the root returned by [`sqrt_mod`] and the `+r` factor comes first.
pub fn lemma_factor_split(ell: u64, n: u32) -> Result<(Poly, Poly)> {
    let field = PrimeField::new(ell)?;
    let class = EllClass::of(ell)?;
    if n <= 2 {
        return Err(Error::LevelTooSmall { n, min: 3 });
    }
    if n > 16 {
        return Err(Error::LevelTooLarge(n));
    }
    let r = sqrt_mod(class.radicand(field)).expect("radicand is a residue in this class");
    let half = 1usize << (n - 2);
    let quarter = 1usize << (n - 3);
    let mut plus = vec![0u64; half + 1];
    let mut minus = vec![0u64; half + 1];
    plus[half] = 1;
    minus[half] = 1;
    match class {
        EllClass::Three => {
            plus[quarter] = r.value();
            minus[quarter] = (-r).value();
            plus[0] = field.neg(1);
            minus[0] = field.neg(1);
        }
        EllClass::Five => {
            plus[0] = r.value();
            minus[0] = (-r).value();
        }
    }
    Ok((Poly::new(field, plus), Poly::new(field, minus)))
}

/// Least irreducible factor of degree `2^{n-2}` of `x^{2^{n-1}} + 1`.
///
/// Factors are ordered by their coefficient vectors, lowest degree first.
/// For `n = 2` the least irreducible factor of `x^2 + 1` is returned, which
/// is linear for `ℓ ≡ 5 mod 8` and `x^2 + 1` itself for `ℓ ≡ 3 mod 8`; the
/// symbol-matrix code treats `n = 2` through explicit base-case matrices and
/// never relies on this value.
pub fn minimal_poly_of_zeta(ell: u64, n: u32) -> Result<Poly> {
    let field = PrimeField::new(ell)?;
    EllClass::of(ell)?;
    if n < 2 {
        return Err(Error::LevelTooSmall { n, min: 2 });
    }
    if n > 9 {
        return Err(Error::LevelTooLarge(n));
    }
    let m = 1usize << (n - 1);
    let factors = irreducible_factors(&negacyclic_modulus(field, m));
    if n == 2 {
        return Ok(factors.into_iter().next().expect("x^2+1 has a factor"));
    }
    let want = 1usize << (n - 2);
    factors
        .into_iter()
        .find(|f| f.degree() == Some(want))
        .ok_or(Error::Reducible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares_brute(p: u64, a: u64) -> Option<u64> {
        (0..p).find(|r| r * r % p == a % p)
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(PrimeField::new(9), Err(Error::NotOddPrime(9)));
        assert_eq!(PrimeField::new(2), Err(Error::NotOddPrime(2)));
        assert!(PrimeField::new(997).is_ok());
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn sqrt_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(sqrt_mod(f3.from_i64(-2)).map(|r| r.value()), Some(1));
        let f11 = PrimeField::new(11).unwrap();
        assert_eq!(sqrt_mod(f11.from_i64(-2)).map(|r| r.value()), Some(3));
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(sqrt_mod(f5.from_i64(-1)).map(|r| r.value()), Some(2));
        assert_eq!(sqrt_mod(f3.from_i64(-1)), None);
    }

    #[test]
    fn sqrt_matches_brute_force() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 73, 97, 193, 257, 641, 997] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                let got = sqrt_mod(f.elem(a)).map(|r| r.value());
                assert_eq!(got, squares_brute(p, a), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn lemma_split_examples() {
        let (a, b) = lemma_factor_split(3, 3).unwrap();
        assert_eq!(a.coeffs(), &[2, 1, 1]);
        assert_eq!(b.coeffs(), &[2, 2, 1]);
        let (a, b) = lemma_factor_split(5, 3).unwrap();
        assert_eq!(a.coeffs(), &[2, 0, 1]);
        assert_eq!(b.coeffs(), &[3, 0, 1]);
        assert!(matches!(
            lemma_factor_split(7, 3),
            Err(Error::WrongCongruence { ell: 7, class: 7 })
        ));
        assert!(matches!(
            lemma_factor_split(3, 2),
            Err(Error::LevelTooSmall { .. })
        ));
    }

    #[test]
    fn minimal_poly_examples() {
        assert_eq!(minimal_poly_of_zeta(3, 3).unwrap().coeffs(), &[2, 1, 1]);
        assert_eq!(minimal_poly_of_zeta(5, 3).unwrap().coeffs(), &[2, 0, 1]);
        // n = 2, ℓ ≡ 3: x^2 + 1 stays irreducible, so the degree is 2, not 2^{n-2} = 1.
        assert_eq!(minimal_poly_of_zeta(3, 2).unwrap().coeffs(), &[1, 0, 1]);
        assert_eq!(minimal_poly_of_zeta(5, 2).unwrap().coeffs(), &[2, 1]);
        assert!(minimal_poly_of_zeta(17, 3).is_err());
    }
}
