//! Formal dihedral action on norm residue symbols `(u_j / 𝔭_i)`.
//!
//! Units are `u_j = σ^j u` for `0 ≤ j < 2^{n-1}`, primes are `𝔭_i = σ^i 𝔭`
//! for `0 ≤ i < 2^n`. The relations used are
//!
//! * `σ^{2^{n-1}} u = u^{-1}`,
//! * `τ u_j = u_{2^{n-1} - j}^{-1}`,
//! * `τ 𝔭 = σ^k 𝔭` with `k = 0` (fixed prime) or `k = 1` (shifted prime),
//! * `τ σ^i = σ^{-i} τ`, with both `σ` and `τ` fixing the root of unity `ω`.
//!
//! Every symbol reduces under `σ` to one of the `2^{n-1}` base symbols
//! `(u_j / 𝔭)`, and `τ` identifies base symbols in pairs up to sign. The
//! surviving classes are the `2^{n-2}` free exponents `a_0, …, a_{2^{n-2}-1}`.
//! Unit groups themselves are never represented; they live only as these
//! parameters.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `τ` acts on the chosen prime above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeCase {
    /// `τ𝔭 = 𝔭`; happens for `p ≡ 7 mod 8`.
    Fixed,
    /// `τ𝔭 = σ𝔭`; happens for `p ≡ 3 mod 8`.
    Shifted,
}

impl PrimeCase {
    pub const BOTH: [PrimeCase; 2] = [PrimeCase::Fixed, PrimeCase::Shifted];

    /// The exponent `k` in `τ𝔭 = σ^k 𝔭`.
    pub fn shift(&self) -> u64 {
        match self {
            PrimeCase::Fixed => 0,
            PrimeCase::Shifted => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PrimeCase::Fixed => "fixed",
            PrimeCase::Shifted => "shifted",
        }
    }
}

impl fmt::Display for PrimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether some prime `σ^j 𝔭` is fixed by `τ` when `τ𝔭 = σ^k 𝔭`.
///
/// `τσ^j𝔭 = σ^{k-j}𝔭`, so a fixed prime needs `2j ≡ k mod 2^n`, which is
/// solvable exactly when `k` is even.
pub fn fixed_prime_exists(k: u64, n: u32) -> bool {
    debug_assert!(k < 1 << n);
    k.is_multiple_of(2)
}

/// All `j ∈ [0, 2^n)` with `τσ^j𝔭 = σ^j𝔭`, by direct search.
pub fn fixed_prime_indices(k: u64, n: u32) -> Vec<u64> {
    let order = 1u64 << n;
    (0..order)
        .filter(|&j| (k + order - j) % order == j)
        .collect()
}

/// Splitting type of an odd rational prime `p` from its class mod 8.
///
/// Returns `None` for `p ≡ 1, 5 mod 8`, which split in `Q(i)`.
pub fn prime_case_rule(p_mod_8: u64) -> Result<Option<PrimeCase>> {
    match p_mod_8 {
        3 => Ok(Some(PrimeCase::Shifted)),
        7 => Ok(Some(PrimeCase::Fixed)),
        1 | 5 => Ok(None),
        other => Err(Error::InvalidResidue(other)),
    }
}

/// The dihedral relations at level `n` for one orbit of primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralAction {
    n: u32,
    case: PrimeCase,
}

impl DihedralAction {
    pub fn new(n: u32, case: PrimeCase) -> Result<Self> {
        if n < 2 {
            return Err(Error::LevelTooSmall { n, min: 2 });
        }
        if n > 20 {
            return Err(Error::LevelTooLarge(n));
        }
        Ok(Self { n, case })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn case(&self) -> PrimeCase {
        self.case
    }

    /// `2^{n-1}` relative-unit generators.
    pub fn unit_count(&self) -> usize {
        1 << (self.n - 1)
    }

    /// `2^n` primes above `p`.
    pub fn prime_count(&self) -> usize {
        1 << self.n
    }

    /// Reduces `(u_j / 𝔭_i)` to `±(u_b / 𝔭)` with `b ∈ [0, 2^{n-1})`.
    ///
    /// Applies `σ^{-i}` and then folds `u_{b + 2^{n-1}} = u_b^{-1}`. Returns
    /// `(b, negated)`.
    pub fn reduce(&self, unit: i64, prime: i64) -> (usize, bool) {
        let order = self.prime_count() as i64;
        let half = self.unit_count();
        let k = (unit - prime).rem_euclid(order) as usize;
        if k >= half {
            (k - half, true)
        } else {
            (k, false)
        }
    }

    /// `τ (u_j / 𝔭) = (τu_j / τ𝔭) = (u_{2^{n-1}-j}^{-1} / σ^k 𝔭)`, reduced.
    pub fn tau_image(&self, base: usize) -> (usize, bool) {
        let half = self.unit_count() as i64;
        let (b, neg) = self.reduce(half - base as i64, self.case.shift() as i64);
        (b, !neg)
    }

    /// Applies `σ^s` to the symbol `(u_j / 𝔭_i)`, giving `(u_{j+s} / 𝔭_{i+s})`.
    pub fn sigma(&self, unit: i64, prime: i64, s: i64) -> (i64, i64) {
        let order = self.prime_count() as i64;
        (unit + s, (prime + s).rem_euclid(order))
    }
}

/// One entry of a symbol matrix: zero or `±a_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolEntry {
    Zero,
    Param { index: usize, negated: bool },
}

impl SymbolEntry {
    pub fn negate(self) -> Self {
        match self {
            SymbolEntry::Zero => SymbolEntry::Zero,
            SymbolEntry::Param { index, negated } => SymbolEntry::Param {
                index,
                negated: !negated,
            },
        }
    }

    pub fn pos(index: usize) -> Self {
        SymbolEntry::Param {
            index,
            negated: false,
        }
    }

    pub fn neg(index: usize) -> Self {
        SymbolEntry::Param {
            index,
            negated: true,
        }
    }
}

impl fmt::Display for SymbolEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolEntry::Zero => f.write_str("0"),
            SymbolEntry::Param {
                index,
                negated: false,
            } => write!(f, "a{index}"),
            SymbolEntry::Param {
                index,
                negated: true,
            } => write!(f, "-a{index}"),
        }
    }
}

/// The `2^n × 2^{n-1}` matrix of symbol exponents, entries referring to the
/// free parameters `a_0, …, a_{2^{n-2}-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolShape {
    n: u32,
    case: PrimeCase,
    rows: usize,
    cols: usize,
    entries: Vec<SymbolEntry>,
}

impl SymbolShape {
    pub fn from_entries(
        n: u32,
        case: PrimeCase,
        rows: usize,
        cols: usize,
        entries: Vec<SymbolEntry>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            n,
            case,
            rows,
            cols,
            entries,
        })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn case(&self) -> PrimeCase {
        self.case
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of free parameters, `2^{n-2}`.
    pub fn param_len(&self) -> usize {
        1 << (self.n - 2)
    }

    pub fn get(&self, r: usize, c: usize) -> SymbolEntry {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[SymbolEntry] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[SymbolEntry] {
        &self.entries
    }

    /// Distinct parameter indices that occur, sorted.
    pub fn params_used(&self) -> Vec<usize> {
        let mut seen: Vec<usize> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                SymbolEntry::Param { index, .. } => Some(*index),
                SymbolEntry::Zero => None,
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }
}

impl fmt::Display for SymbolShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|e| format!("{e:>4}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Signed union-find over the base symbols.
struct SignedClasses {
    parent: Vec<usize>,
    // true when b_i = -b_parent
    flip: Vec<bool>,
    zero: Vec<bool>,
}

impl SignedClasses {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            flip: vec![false; len],
            zero: vec![false; len],
        }
    }

    fn find(&mut self, i: usize) -> (usize, bool) {
        let p = self.parent[i];
        if p == i {
            return (i, false);
        }
        let (root, f) = self.find(p);
        self.parent[i] = root;
        self.flip[i] ^= f;
        (root, self.flip[i])
    }

    /// Records `b_a = (-1)^negated · b_b`.
    fn relate(&mut self, a: usize, b: usize, negated: bool) {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        let rel = fa ^ fb ^ negated;
        if ra == rb {
            if rel {
                self.zero[ra] = true;
            }
            return;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        self.flip[drop] = rel;
        self.zero[keep] |= self.zero[drop];
    }
}

/// Derives the symbol matrix for one prime orbit at level `n` from the
/// dihedral relations.
///
/// The first row comes from identifying base symbols through `τ`; the
/// remaining rows come from transporting each base symbol with `σ`.
pub fn derive_shape(n: u32, case: PrimeCase) -> Result<SymbolShape> {
    let action = DihedralAction::new(n, case)?;
    let half = action.unit_count();

    let mut classes = SignedClasses::new(half);
    for j in 0..half {
        let (image, negated) = action.tau_image(j);
        classes.relate(j, image, negated);
    }

    // Parameters are numbered by the least base symbol in each nonzero class,
    // with that base symbol carrying the + sign.
    let mut param_of_root = vec![None; half];
    let mut next = 0usize;
    let mut base_entry = Vec::with_capacity(half);
    for j in 0..half {
        let (root, flip) = classes.find(j);
        if classes.zero[root] {
            base_entry.push(SymbolEntry::Zero);
            continue;
        }
        let index = *param_of_root[root].get_or_insert_with(|| {
            next += 1;
            next - 1
        });
        // root is the least member, so it is visited first and gets flip = false
        base_entry.push(SymbolEntry::Param {
            index,
            negated: flip,
        });
    }
    if next != action.unit_count() / 2 {
        return Err(Error::InvalidArgument(format!(
            "relations left {next} free symbols, expected {}",
            half / 2
        )));
    }

    let rows = action.prime_count();
    let mut entries = Vec::with_capacity(rows * half);
    for i in 0..rows {
        for j in 0..half {
            let (b, negated) = action.reduce(j as i64, i as i64);
            let e = base_entry[b];
            entries.push(if negated { e.negate() } else { e });
        }
    }
    SymbolShape::from_entries(n, case, rows, half, entries)
}
