//! Exact rank distribution of the ambiguous class group `A_n^Δ` under the
//! equidistribution model, plus Chevalley's formula, the stabilization tail
//! bound, and the `μ`-invariant compatibility check.
//!
//! By Chevalley, `rank A_n^Δ = 2^n·t − 1 − r_n`, where `r_n` is the rank of
//! the norm residue matrix of the units of `K_n`. Levels contribute
//! independently:
//!
//! * level 1 contributes 1 unless all `s` symbols at primes `≡ 7 mod 8`
//!   vanish (probability `ℓ^{-s}`); primes `≡ 3 mod 8` always give trivial
//!   symbols at this level;
//! * level `j ≥ 2` contributes `2^{j-1}` unless all `2^{j-2}·t` symbols
//!   vanish (probability `ℓ^{-2^{j-2}·t}`).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allornothing::{stacked_rank, SymbolAssignment};
use crate::error::{Error, Result};
use crate::ff::{is_prime, PrimeField};
use crate::galois::{derive_shape, PrimeCase};
use crate::sampling;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `ℓ^{-exp}`.
pub fn inverse_power(ell: u64, exp: u64) -> Rational {
    let den = BigInt::from(ell).pow(u32::try_from(exp).expect("exponent fits in u32"));
    Rational::new(BigInt::one(), den)
}

/// Renders `r` with four decimal places, rounding half away from zero.
pub fn decimal4(r: &Rational) -> String {
    let scaled = r * Rational::from_integer(BigInt::from(10_000));
    let abs = scaled.abs();
    let (q, rem) = abs.numer().div_rem(abs.denom());
    let q = if rem * 2u32 >= *abs.denom() {
        q + 1u32
    } else {
        q
    };
    let (int, frac) = q.div_rem(&BigInt::from(10_000));
    let sign = if r.is_negative() && !(int.is_zero() && frac.is_zero()) {
        "-"
    } else {
        ""
    };
    format!(
        "{sign}{int}.{:04}",
        frac.to_u32().expect("fraction below 10^4")
    )
}

/// Parses a decimal literal such as `.6665`, `0.16` or `1` exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::InvalidArgument(format!("not a decimal: {s:?}")));
    }
    let num: BigInt = digits.parse().expect("digits only");
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(Rational::new(num, den))
}

/// Serde adapter storing big numbers as their `Display` string, e.g. `"2/3"`.
pub mod string_form {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(
        v: &T,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<T, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("cannot parse {s:?}")))
    }
}

/// Counts of ramified primes: `t` in total, `s` of them `≡ 7 mod 8`, the
/// remaining `t − s` `≡ 3 mod 8`. All are inert in `Q(i)` by hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub ell: u64,
    pub t: u32,
    pub s: u32,
}

impl RamificationProfile {
    pub fn new(ell: u64, t: u32, s: u32) -> Result<Self> {
        PrimeField::new(ell)?;
        if t == 0 {
            return Err(Error::InvalidProfile("t must be at least 1".into()));
        }
        if s > t {
            return Err(Error::InvalidProfile(format!("s = {s} exceeds t = {t}")));
        }
        Ok(Self { ell, t, s })
    }

    /// Maximum rank `2^n·t − 1`, attained when no unit symbol is nontrivial.
    pub fn max_rank(&self, n: u32) -> u64 {
        (1u64 << n) * self.t as u64 - 1
    }
}

/// An exact probability distribution on nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankDistribution {
    probs: BTreeMap<u64, Rational>,
}

impl RankDistribution {
    pub fn point(value: u64) -> Self {
        let mut probs = BTreeMap::new();
        probs.insert(value, Rational::one());
        Self { probs }
    }

    /// Builds from `(value, probability)` pairs, merging duplicates and
    /// dropping zero masses.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut probs: BTreeMap<u64, Rational> = BTreeMap::new();
        for (k, p) in pairs {
            *probs.entry(k).or_insert_with(Rational::zero) += p;
        }
        probs.retain(|_, p| !p.is_zero());
        Self { probs }
    }

    /// Empirical distribution `count / total`.
    pub fn from_counts(counts: &BTreeMap<u64, u64>) -> Self {
        let total: u64 = counts.values().sum();
        Self::from_pairs(
            counts
                .iter()
                .map(|(&k, &c)| (k, Rational::new(BigInt::from(c), BigInt::from(total)))),
        )
    }

    pub fn get(&self, value: u64) -> Rational {
        self.probs
            .get(&value)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<u64> {
        self.probs.keys().copied().collect()
    }

    pub fn total(&self) -> Rational {
        self.probs.values().fold(Rational::zero(), |acc, p| acc + p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.probs.iter().map(|(&k, p)| (k, p))
    }

    /// Distribution of `X + Y` for independent `X`, `Y`.
    pub fn convolve(&self, other: &Self) -> Self {
        Self::from_pairs(
            self.iter()
                .flat_map(|(a, pa)| other.iter().map(move |(b, pb)| (a + b, pa * pb))),
        )
    }

    /// Distribution of `c − X`.
    pub fn reflect(&self, c: u64) -> Self {
        Self::from_pairs(self.iter().map(|(k, p)| (c - k, p.clone())))
    }
}

/// One row of a serialized distribution; `num`/`den` are decimal strings so
/// arbitrarily large values survive JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub rank: u64,
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl DistributionEntry {
    pub fn new(rank: u64, p: &Rational) -> Self {
        Self {
            rank,
            num: p.numer().to_string(),
            den: p.denom().to_string(),
            decimal: decimal4(p),
        }
    }

    pub fn value(&self) -> Result<Rational> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| Error::InvalidArgument(format!("not an integer: {s:?}")))
        };
        Ok(Rational::new(parse(&self.num)?, parse(&self.den)?))
    }
}

/// Serialized form of a distribution for one profile and level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub profile: RamificationProfile,
    pub n: u32,
    pub entries: Vec<DistributionEntry>,
}

impl DistributionReport {
    pub fn new(profile: RamificationProfile, n: u32, dist: &RankDistribution) -> Self {
        Self {
            profile,
            n,
            entries: dist
                .iter()
                .map(|(k, p)| DistributionEntry::new(k, p))
                .collect(),
        }
    }

    pub fn distribution(&self) -> Result<RankDistribution> {
        let mut pairs = Vec::new();
        for e in &self.entries {
            pairs.push((e.rank, e.value()?));
        }
        Ok(RankDistribution::from_pairs(pairs))
    }
}

/// Distribution of the rank contributed by the units new at level `j`.
pub fn level_contribution(j: u32, profile: &RamificationProfile) -> Result<RankDistribution> {
    if j < 1 {
        return Err(Error::InvalidLevel(j));
    }
    let (size, p_zero) = if j == 1 {
        (1u64, inverse_power(profile.ell, profile.s as u64))
    } else {
        let symbols = (1u64 << (j - 2)) * profile.t as u64;
        (1u64 << (j - 1), inverse_power(profile.ell, symbols))
    };
    let p_full = Rational::one() - &p_zero;
    Ok(RankDistribution::from_pairs([(0, p_zero), (size, p_full)]))
}

/// Exact distribution of `rank A_n^Δ`.
pub fn ambiguous_rank_distribution(n: u32, profile: &RamificationProfile) -> RankDistribution {
    let r_n = (1..=n).fold(RankDistribution::point(0), |acc, j| {
        acc.convolve(&level_contribution(j, profile).expect("j >= 1"))
    });
    r_n.reflect(profile.max_rank(n))
}

/// Probability that every level's symbol matrix has full rank.
pub fn full_rank_probability(n: u32, profile: &RamificationProfile) -> Result<Rational> {
    if n < 1 {
        return Err(Error::InvalidLevel(n));
    }
    let mut p = Rational::one() - inverse_power(profile.ell, profile.s as u64);
    for j in 2..=n {
        let symbols = (1u64 << (j - 2)) * profile.t as u64;
        p *= Rational::one() - inverse_power(profile.ell, symbols);
    }
    Ok(p)
}

/// Inputs to Chevalley's ambiguous class number formula for a cyclic
/// extension `L/K` of degree `ℓ`, restricted to `ℓ`-parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChevalleyInput {
    pub ell: u64,
    #[serde(with = "string_form")]
    pub h_k: BigUint,
    #[serde(with = "string_form")]
    pub e_product: BigUint,
    pub degree: u64,
    #[serde(with = "string_form")]
    pub unit_index: BigUint,
}

impl ChevalleyInput {
    /// `h_K = h`, `∏e_P = ℓ^{e_exp}`, degree `ℓ`, `E(L/K) = ℓ^{unit_exp}`.
    pub fn from_exponents(ell: u64, h_k: u64, e_exp: u32, unit_exp: u32) -> Self {
        let l = BigUint::from(ell);
        Self {
            ell,
            h_k: BigUint::from(h_k),
            e_product: l.pow(e_exp),
            degree: ell,
            unit_index: l.pow(unit_exp),
        }
    }
}

fn is_power_of(value: &BigUint, base: u64) -> bool {
    let b = BigUint::from(base);
    let mut v = value.clone();
    if v.is_zero() {
        return false;
    }
    while v > BigUint::one() {
        let (q, r) = v.div_rem(&b);
        if !r.is_zero() {
            return false;
        }
        v = q;
    }
    true
}

/// `|C_L^Δ| = h_K · ∏e_P / (degree · E(L/K))`.
pub fn chevalley_order(input: &ChevalleyInput) -> Result<BigUint> {
    if !is_prime(input.ell) {
        return Err(Error::NonIntegralChevalley(format!(
            "{} is not prime",
            input.ell
        )));
    }
    for (name, v) in [
        ("h_K", &input.h_k),
        ("e_product", &input.e_product),
        ("unit_index", &input.unit_index),
    ] {
        if !is_power_of(v, input.ell) {
            return Err(Error::NonIntegralChevalley(format!(
                "{name} = {v} is not a power of {}",
                input.ell
            )));
        }
    }
    if input.degree == 0 {
        return Err(Error::NonIntegralChevalley("degree is zero".into()));
    }
    let num = &input.h_k * &input.e_product;
    let den = BigUint::from(input.degree) * &input.unit_index;
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonIntegralChevalley(format!(
            "{num}/{den} is not an integer"
        )));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    #[serde(with = "string_form")]
    pub partial_sum: Rational,
    #[serde(with = "string_form")]
    pub remainder_bound: Rational,
}

/// `Σ_{j=N}^{N+terms-1} ℓ^{-2^{j-1}·t}` together with `2·ℓ^{-2^{N+terms-1}·t}`,
/// which dominates the omitted tail.
pub fn stabilization_tail_bound(start: u32, ell: u64, t: u32, terms: u32) -> Result<TailBound> {
    if start < 2 {
        return Err(Error::LevelTooSmall { n: start, min: 2 });
    }
    if terms < 1 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    PrimeField::new(ell)?;
    let end = start + terms;
    if end > 40 {
        return Err(Error::LevelTooLarge(end));
    }
    let exponent = |j: u32| (1u64 << (j - 1)) * t as u64;
    let partial_sum = (start..end).fold(Rational::zero(), |acc, j| {
        acc + inverse_power(ell, exponent(j))
    });
    let remainder_bound = inverse_power(ell, exponent(end)) * rational(2, 1);
    Ok(TailBound {
        partial_sum,
        remainder_bound,
    })
}

/// Exponents `e_0, e_1, …` of `ℓ` in successive class numbers, with `s`
/// ramified primes inert in the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaSequence {
    pub e: Vec<u64>,
    pub ell: u64,
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum IwasawaVerdict {
    /// `μ` is only known to lie in `[mu_min, mu_max]`; when they coincide the
    /// sequence also matched `e_n = e_0 + μ(ℓ^n − 1)`.
    Compatible {
        mu_min: u64,
        mu_max: u64,
    },
    Incompatible {
        reason: String,
    },
}

/// Checks `e` against `s − 1 ≤ μ ≤ (e_n − e_0)/(ℓ^n − 1)`.
///
/// Incompatibility is reported when the bounds cross, or when they pin `μ`,
/// `e_1 = e_0 + μ(ℓ − 1)` holds, and a later `e_n` misses the forced value
/// `e_0 + μ(ℓ^n − 1)`.
pub fn iwasawa_compatibility(seq: &IwasawaSequence) -> Result<IwasawaVerdict> {
    if seq.e.len() < 2 {
        return Err(Error::InvalidArgument("need at least e_0 and e_1".into()));
    }
    if !is_prime(seq.ell) {
        return Err(Error::InvalidArgument(format!("{} is not prime", seq.ell)));
    }
    let e0 = seq.e[0] as i128;
    let ell = seq.ell as i128;
    let mut mu_max: Option<i128> = None;
    let mut witness = 0usize;
    let mut ell_n: i128 = 1;
    for (n, &en) in seq.e.iter().enumerate().skip(1) {
        ell_n = ell_n
            .checked_mul(ell)
            .ok_or_else(|| Error::InvalidArgument("sequence too long".into()))?;
        let bound = Integer::div_floor(&(en as i128 - e0), &(ell_n - 1));
        if mu_max.is_none_or(|m| bound < m) {
            mu_max = Some(bound);
            witness = n;
        }
    }
    let mu_max = mu_max.expect("at least one n >= 1");
    let mu_min = (seq.s as i128 - 1).max(0);
    if mu_min > mu_max {
        return Ok(IwasawaVerdict::Incompatible {
            reason: format!(
                "mu >= {mu_min} from s = {} but mu <= {mu_max} from e_{witness}",
                seq.s
            ),
        });
    }
    if mu_min == mu_max {
        let mu = mu_min;
        if seq.e[1] as i128 == e0 + mu * (ell - 1) {
            let mut ell_n: i128 = 1;
            for (n, &en) in seq.e.iter().enumerate().skip(1) {
                ell_n *= ell;
                let forced = e0 + mu * (ell_n - 1);
                if en as i128 != forced {
                    return Ok(IwasawaVerdict::Incompatible {
                        reason: format!("mu = {mu} is forced, so e_{n} must be {forced}, got {en}"),
                    });
                }
            }
        }
    }
    Ok(IwasawaVerdict::Compatible {
        mu_min: mu_min as u64,
        mu_max: mu_max as u64,
    })
}

/// Simulates `rank A_n^Δ` by drawing uniform symbol exponents and taking
/// actual matrix ranks.
///
/// Level 1 draws `s` scalars; level `j ≥ 2` draws one assignment per ramified
/// prime (`s` fixed-prime orbits, `t − s` shifted) and ranks the stacked
/// symbol matrices. Samples are split into fixed chunks with derived seeds,
/// so the histogram is independent of the thread count.
pub fn monte_carlo_distribution(
    n: u32,
    profile: &RamificationProfile,
    samples: u64,
    seed: u64,
) -> Result<RankDistribution> {
    Ok(RankDistribution::from_counts(&monte_carlo_counts(
        n, profile, samples, seed,
    )?))
}

/// Raw rank histogram behind [`monte_carlo_distribution`].
pub fn monte_carlo_counts(
    n: u32,
    profile: &RamificationProfile,
    samples: u64,
    seed: u64,
) -> Result<BTreeMap<u64, u64>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let field = PrimeField::new(profile.ell)?;
    let mut shapes = Vec::new();
    for j in 2..=n {
        shapes.push((
            derive_shape(j, PrimeCase::Fixed)?,
            derive_shape(j, PrimeCase::Shifted)?,
        ));
    }
    let max_rank = profile.max_rank(n);

    let chunks: Vec<_> = sampling::chunks(samples).collect();
    let partials: Vec<Result<BTreeMap<u64, u64>>> = chunks
        .par_iter()
        .map(|&(chunk, _, count)| {
            let mut rng = sampling::chunk_rng(seed, chunk);
            let mut hist = BTreeMap::new();
            for _ in 0..count {
                let mut r = 0u64;
                if n >= 1 {
                    let level1 = SymbolAssignment::random(field, profile.s as usize, &mut rng);
                    r += u64::from(!level1.is_zero());
                }
                for (fixed, shifted) in &shapes {
                    let len = fixed.param_len();
                    let draws: Vec<(bool, SymbolAssignment)> = (0..profile.t)
                        .map(|k| {
                            (
                                k < profile.s,
                                SymbolAssignment::random(field, len, &mut rng),
                            )
                        })
                        .collect();
                    let blocks: Vec<_> = draws
                        .iter()
                        .map(|(is_fixed, a)| (if *is_fixed { fixed } else { shifted }, a))
                        .collect();
                    r += stacked_rank(field, &blocks)? as u64;
                }
                *hist.entry(max_rank - r).or_insert(0) += 1;
            }
            Ok(hist)
        })
        .collect();

    let mut merged = BTreeMap::new();
    for part in partials {
        for (k, c) in part? {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    Ok(merged)
}
