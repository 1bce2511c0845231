//! Concrete symbol matrices over `F_ℓ`, exhaustive and sampled rank scans,
//! and the reduced `B` matrices whose nonsingularity forces every nonzero
//! symbol matrix to full rank when `ℓ ≡ 3, 5 mod 8`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{EllClass, PrimeField};
use crate::galois::{derive_shape, PrimeCase, SymbolEntry, SymbolShape};
use crate::sampling;
use crate::skewcirc::{rank_elimination, DenseMatrixFp};

/// Default cap on rank computations in an exhaustive scan.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Exponents `a_0, …, a_{2^{n-2}-1}` of one prime orbit's symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolAssignment {
    field: PrimeField,
    values: Vec<u64>,
}

impl SymbolAssignment {
    pub fn new(field: PrimeField, values: Vec<u64>) -> Self {
        let p = field.modulus();
        Self {
            field,
            values: values.into_iter().map(|v| v % p).collect(),
        }
    }

    pub fn zero(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            values: vec![0; len],
        }
    }

    /// The `index`-th vector in lexicographic order, `a_0` most significant.
    pub fn from_index(field: PrimeField, len: usize, mut index: u64) -> Self {
        let p = field.modulus();
        let mut values = vec![0; len];
        for slot in values.iter_mut().rev() {
            *slot = index % p;
            index /= p;
        }
        Self { field, values }
    }

    pub fn random<R: Rng>(field: PrimeField, len: usize, rng: &mut R) -> Self {
        let p = field.modulus();
        Self {
            field,
            values: (0..len).map(|_| rng.random_range(0..p)).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// Substitutes concrete exponents into a symbol shape.
pub fn instantiate(shape: &SymbolShape, a: &SymbolAssignment) -> Result<DenseMatrixFp> {
    if a.len() != shape.param_len() {
        return Err(Error::LengthMismatch {
            expected: shape.param_len(),
            got: a.len(),
        });
    }
    let f = a.field();
    let mut out = DenseMatrixFp::zeros(f, shape.rows(), shape.cols());
    for r in 0..shape.rows() {
        for (c, entry) in shape.row(r).iter().enumerate() {
            let v = match *entry {
                SymbolEntry::Zero => 0,
                SymbolEntry::Param { index, negated } => {
                    let v = a.values[index];
                    if negated {
                        f.neg(v)
                    } else {
                        v
                    }
                }
            };
            out.set(r, c, v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub assignment: Vec<u64>,
    pub rank: usize,
}

/// Rank census of all (or sampled) symbol assignments for one `(ℓ, n, case)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub ell: u64,
    pub n: u32,
    pub case: PrimeCase,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub total: u64,
    pub rank_zero: u64,
    pub full_rank: u64,
    pub violations: Vec<Violation>,
}

impl DichotomyReport {
    /// Whether `ℓ ≡ 3, 5 mod 8`, where an empty violation list is required.
    pub fn in_theorem_scope(&self) -> bool {
        EllClass::of(self.ell).is_ok()
    }

    pub fn full_rank_target(&self) -> usize {
        1 << (self.n - 1)
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    rank_zero: u64,
    full_rank: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn record(&mut self, a: &SymbolAssignment, rank: usize, full: usize) {
        self.total += 1;
        if rank == 0 {
            self.rank_zero += 1;
        } else if rank == full {
            self.full_rank += 1;
        } else {
            self.violations.push(Violation {
                assignment: a.values.clone(),
                rank,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.rank_zero += other.rank_zero;
        self.full_rank += other.full_rank;
        self.violations.extend(other.violations);
        self
    }
}

pub fn dichotomy_scan(
    ell: u64,
    n: u32,
    case: PrimeCase,
    mode: ScanMode,
) -> Result<DichotomyReport> {
    dichotomy_scan_with_budget(ell, n, case, mode, DEFAULT_BUDGET)
}

/// Ranks every assignment (exhaustive) or `count` uniform ones (sampled).
///
/// Exhaustive mode fails with [`Error::BudgetExceeded`] instead of falling
/// back to sampling. Violations are sorted, so the report does not depend on
/// thread scheduling.
pub fn dichotomy_scan_with_budget(
    ell: u64,
    n: u32,
    case: PrimeCase,
    mode: ScanMode,
    budget: u64,
) -> Result<DichotomyReport> {
    let field = PrimeField::new(ell)?;
    let shape = derive_shape(n, case)?;
    let len = shape.param_len();
    let full = shape.cols();

    let (total, seed) = match mode {
        ScanMode::Exhaustive => {
            let needed = (ell as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
            if needed > budget as u128 {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            (needed as u64, None)
        }
        ScanMode::Sampled { count, seed } => (count, Some(seed)),
    };

    let chunks: Vec<_> = sampling::chunks(total).collect();
    let tally = chunks
        .par_iter()
        .map(|&(chunk, start, count)| {
            let mut t = Tally::default();
            let mut rng = seed.map(|s| sampling::chunk_rng(s, chunk));
            for i in start..start + count {
                let a = match rng.as_mut() {
                    None => SymbolAssignment::from_index(field, len, i),
                    Some(r) => SymbolAssignment::random(field, len, r),
                };
                let m = instantiate(&shape, &a).expect("length matches shape");
                t.record(&a, rank_elimination(&m), full);
            }
            t
        })
        .reduce(Tally::default, Tally::merge);

    let mut violations = tally.violations;
    violations.sort();
    Ok(DichotomyReport {
        ell,
        n,
        case,
        mode: match mode {
            ScanMode::Exhaustive => "exhaustive".into(),
            ScanMode::Sampled { .. } => "sampled".into(),
        },
        seed,
        total: tally.total,
        rank_zero: tally.rank_zero,
        full_rank: tally.full_rank,
        violations,
    })
}

/// Rank of the stacked symbol matrices of several prime orbits.
///
/// All orbits share the same `2^{n-1}` unit columns, so the result is
/// `2^{n-1}` as soon as one block is nonzero (when the dichotomy holds).
pub fn multi_prime_rank(
    ell: u64,
    n: u32,
    per_prime: &[(PrimeCase, SymbolAssignment)],
) -> Result<usize> {
    let field = PrimeField::new(ell)?;
    let shapes = [
        derive_shape(n, PrimeCase::Fixed)?,
        derive_shape(n, PrimeCase::Shifted)?,
    ];
    let blocks: Vec<_> = per_prime
        .iter()
        .map(|(case, a)| {
            let shape = match case {
                PrimeCase::Fixed => &shapes[0],
                PrimeCase::Shifted => &shapes[1],
            };
            (shape, a)
        })
        .collect();
    stacked_rank(field, &blocks)
}

/// Rank of the vertical stack of instantiated shapes; zero for no blocks.
pub fn stacked_rank(
    field: PrimeField,
    blocks: &[(&SymbolShape, &SymbolAssignment)],
) -> Result<usize> {
    let mut stacked: Option<DenseMatrixFp> = None;
    for (shape, a) in blocks {
        if a.field() != field {
            return Err(Error::InvalidArgument(format!(
                "assignment over F_{} stacked with F_{}",
                a.field().modulus(),
                field.modulus()
            )));
        }
        let block = instantiate(shape, a)?;
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    Ok(stacked.as_ref().map_or(0, rank_elimination))
}

/// One of the four `(p mod 8, ℓ mod 8)` combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BCase {
    pub prime: PrimeCase,
    pub ell_class: EllClass,
}

impl BCase {
    pub const ALL: [BCase; 4] = [
        BCase {
            prime: PrimeCase::Fixed,
            ell_class: EllClass::Three,
        },
        BCase {
            prime: PrimeCase::Shifted,
            ell_class: EllClass::Three,
        },
        BCase {
            prime: PrimeCase::Fixed,
            ell_class: EllClass::Five,
        },
        BCase {
            prime: PrimeCase::Shifted,
            ell_class: EllClass::Five,
        },
    ];

    pub fn for_ell(ell: u64, prime: PrimeCase) -> Result<Self> {
        Ok(Self {
            prime,
            ell_class: EllClass::of(ell)?,
        })
    }

    pub fn label(&self) -> String {
        let p = match self.prime {
            PrimeCase::Fixed => 7,
            PrimeCase::Shifted => 3,
        };
        let l = match self.ell_class {
            EllClass::Three => 3,
            EllClass::Five => 5,
        };
        format!("p≡{p},ℓ≡{l} (mod 8)")
    }
}

/// The reduced coefficient matrix of the top-half eigenvalue: column `k`
/// holds the coefficients of `ζ^0, …, ζ^{2^{n-2}-1}` contributed by `a_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatrix {
    pub case: BCase,
    pub matrix: DenseMatrixFp,
}

struct BlockWriter<'a> {
    m: &'a mut DenseMatrixFp,
}

impl BlockWriter<'_> {
    /// Adds `c·I` on the block with row offset `r0`, column offset `c0`.
    fn identity(&mut self, r0: usize, c0: usize, size: usize, c: u64) {
        for k in 0..size {
            self.add(r0 + k, c0 + k, c);
        }
    }

    /// Adds `c·J` (anti-identity) on the block.
    fn anti(&mut self, r0: usize, c0: usize, size: usize, c: u64) {
        for k in 0..size {
            self.add(r0 + k, c0 + size - 1 - k, c);
        }
    }

    fn add(&mut self, r: usize, c: usize, v: u64) {
        let f = self.m.field();
        let cur = self.m.get(r, c);
        self.m.set(r, c, f.add(cur, v));
    }
}

/// Builds `B` from its block layout.
///
/// `r` is `√−2` (`ℓ ≡ 3`) or `√−1` (`ℓ ≡ 5`) as chosen by
/// [`crate::ff::sqrt_mod`], so `ζ^{2^{n-2}} = r·ζ^{2^{n-3}} + 1` or
/// `ζ^{2^{n-2}} = r` respectively. For the fixed case the index blocks are
/// `{0}`, `[1, h)`, `{h}`, `[h+1, 2h)` with `h = 2^{n-3}`; at `n = 3` the
/// interval blocks are empty and only the scalar corners remain.
pub fn build_b(ell: u64, n: u32, case: BCase) -> Result<BMatrix> {
    let field = PrimeField::new(ell)?;
    let actual = EllClass::of(ell)?;
    if actual != case.ell_class {
        return Err(Error::WrongCongruence {
            ell,
            class: ell % 8,
        });
    }
    if n < 3 {
        return Err(Error::LevelTooSmall { n, min: 3 });
    }
    if n > 16 {
        return Err(Error::LevelTooLarge(n));
    }
    let r = crate::ff::sqrt_mod(case.ell_class.radicand(field))
        .expect("radicand is a residue")
        .value();
    let neg_r = field.neg(r);
    let minus_one = field.neg(1);
    let h = 1usize << (n - 3);
    let size = 2 * h;
    let mut matrix = DenseMatrixFp::zeros(field, size, size);
    let mut w = BlockWriter { m: &mut matrix };

    match (case.prime, case.ell_class) {
        (PrimeCase::Fixed, EllClass::Three) => {
            let inner = h - 1;
            w.add(0, 0, 1);
            w.add(0, h, neg_r);
            w.identity(1, 1, inner, 1);
            w.anti(1, 1, inner, neg_r);
            w.anti(1, h + 1, inner, minus_one);
            w.add(h, h, 2);
            w.anti(h + 1, 1, inner, 1);
            w.identity(h + 1, h + 1, inner, 1);
            w.anti(h + 1, h + 1, inner, neg_r);
        }
        (PrimeCase::Fixed, EllClass::Five) => {
            let inner = h - 1;
            w.add(0, 0, 1);
            w.identity(1, 1, inner, 1);
            w.anti(1, h + 1, inner, neg_r);
            w.add(h, h, field.sub(1, r));
            w.anti(h + 1, 1, inner, neg_r);
            w.identity(h + 1, h + 1, inner, 1);
        }
        (PrimeCase::Shifted, EllClass::Three) => {
            w.identity(0, 0, h, 1);
            w.anti(0, 0, h, neg_r);
            w.anti(0, h, h, minus_one);
            w.anti(h, 0, h, 1);
            w.identity(h, h, h, 1);
            w.anti(h, h, h, neg_r);
        }
        (PrimeCase::Shifted, EllClass::Five) => {
            w.identity(0, 0, h, 1);
            w.anti(0, h, h, neg_r);
            w.anti(h, 0, h, neg_r);
            w.identity(h, h, h, 1);
        }
    }
    Ok(BMatrix { case, matrix })
}

/// Whether `B` has full rank `2^{n-2}`.
pub fn verify_b_full_rank(ell: u64, n: u32, case: BCase) -> Result<bool> {
    let b = build_b(ell, n, case)?;
    Ok(rank_elimination(&b.matrix) == b.matrix.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewcirc::determinant;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let shape = derive_shape(2, PrimeCase::Fixed).unwrap();
        let m = instantiate(&shape, &SymbolAssignment::zero(f(3), 1)).unwrap();
        assert!(m.is_zero());
        assert_eq!((m.rows(), m.cols()), (4, 2));

        let m = instantiate(&shape, &SymbolAssignment::new(f(3), vec![2])).unwrap();
        assert_eq!(
            m,
            DenseMatrixFp::from_rows(f(3), &[vec![2, 0], vec![0, 2], vec![1, 0], vec![0, 1]])
        );

        let shape = derive_shape(3, PrimeCase::Shifted).unwrap();
        let m = instantiate(&shape, &SymbolAssignment::new(f(5), vec![1, 3])).unwrap();
        assert_eq!(m.row(0), &[1, 3, 2, 4]);

        let err = instantiate(&shape, &SymbolAssignment::new(f(5), vec![1])).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn lexicographic_index() {
        let a = SymbolAssignment::from_index(f(5), 2, 7);
        assert_eq!(a.values(), &[1, 2]);
        let a = SymbolAssignment::from_index(f(3), 3, 0);
        assert!(a.is_zero());
    }

    #[test]
    fn scan_examples() {
        let r = dichotomy_scan(3, 2, PrimeCase::Fixed, ScanMode::Exhaustive).unwrap();
        assert_eq!((r.total, r.rank_zero, r.full_rank), (3, 1, 2));
        assert!(r.violations.is_empty());

        let r = dichotomy_scan(5, 3, PrimeCase::Shifted, ScanMode::Exhaustive).unwrap();
        assert_eq!((r.total, r.rank_zero, r.full_rank), (25, 1, 24));
        assert!(r.violations.is_empty());

        let r = dichotomy_scan(7, 3, PrimeCase::Fixed, ScanMode::Exhaustive).unwrap();
        assert!(!r.violations.is_empty());
        assert!(r.violations.iter().all(|v| v.rank > 0 && v.rank < 4));
        assert_eq!(
            r.total,
            r.rank_zero + r.full_rank + r.violations.len() as u64
        );
    }

    #[test]
    fn budget_guard() {
        let err = dichotomy_scan_with_budget(37, 4, PrimeCase::Fixed, ScanMode::Exhaustive, 1000)
            .unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                needed: 37u128.pow(4),
                budget: 1000
            }
        );
        // sampled mode ignores the budget
        let r = dichotomy_scan_with_budget(
            37,
            4,
            PrimeCase::Fixed,
            ScanMode::Sampled { count: 10, seed: 1 },
            1,
        )
        .unwrap();
        assert_eq!(r.total, 10);
    }

    #[test]
    fn sampled_is_reproducible() {
        let mode = ScanMode::Sampled {
            count: 9000,
            seed: 7,
        };
        let a = dichotomy_scan(17, 4, PrimeCase::Shifted, mode).unwrap();
        let b = dichotomy_scan(17, 4, PrimeCase::Shifted, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn multi_prime_examples() {
        let f3 = f(3);
        let zero = SymbolAssignment::zero(f3, 1);
        let one = SymbolAssignment::new(f3, vec![1]);
        let two = SymbolAssignment::new(f3, vec![2]);
        let fx = PrimeCase::Fixed;
        let sh = PrimeCase::Shifted;
        assert_eq!(
            multi_prime_rank(3, 2, &[(fx, zero.clone()), (sh, zero.clone())]).unwrap(),
            0
        );
        assert_eq!(
            multi_prime_rank(3, 2, &[(fx, zero.clone()), (sh, one.clone())]).unwrap(),
            2
        );
        assert_eq!(multi_prime_rank(3, 2, &[(fx, two), (sh, one)]).unwrap(), 2);
        assert_eq!(multi_prime_rank(3, 2, &[]).unwrap(), 0);
        let bad = SymbolAssignment::zero(f3, 2);
        assert!(matches!(
            multi_prime_rank(3, 2, &[(fx, bad)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn b_examples() {
        let case = BCase::for_ell(5, PrimeCase::Fixed).unwrap();
        let b = build_b(5, 3, case).unwrap();
        assert_eq!(
            b.matrix,
            DenseMatrixFp::from_rows(f(5), &[vec![1, 0], vec![0, 4]])
        );

        let case = BCase::for_ell(3, PrimeCase::Fixed).unwrap();
        let b = build_b(3, 3, case).unwrap();
        // [[1, -√−2], [0, 2]] with √−2 = 1
        assert_eq!(
            b.matrix,
            DenseMatrixFp::from_rows(f(3), &[vec![1, 2], vec![0, 2]])
        );

        // [[I − J, −J], [J, I − J]], √−2 = 1, blocks of size 2
        let case = BCase::for_ell(3, PrimeCase::Shifted).unwrap();
        let b = build_b(3, 4, case).unwrap();
        let expect = DenseMatrixFp::from_rows(
            f(3),
            &[
                vec![1, -1, 0, -1],
                vec![-1, 1, -1, 0],
                vec![0, 1, 1, -1],
                vec![1, 0, -1, 1],
            ],
        );
        assert_eq!(b.matrix, expect);

        // [[I, −2J], [−2J, I]], √−1 = 2
        let case = BCase::for_ell(5, PrimeCase::Shifted).unwrap();
        let b = build_b(5, 4, case).unwrap();
        let expect = DenseMatrixFp::from_rows(
            f(5),
            &[
                vec![1, 0, 0, -2],
                vec![0, 1, -2, 0],
                vec![0, -2, 1, 0],
                vec![-2, 0, 0, 1],
            ],
        );
        assert_eq!(b.matrix, expect);
    }

    #[test]
    fn b_rejections() {
        let case = BCase::for_ell(3, PrimeCase::Fixed).unwrap();
        assert!(matches!(
            build_b(11, 2, case),
            Err(Error::LevelTooSmall { .. })
        ));
        assert!(matches!(
            build_b(5, 4, case),
            Err(Error::WrongCongruence { .. })
        ));
        assert!(matches!(
            build_b(7, 4, case),
            Err(Error::WrongCongruence { .. })
        ));
        assert!(BCase::for_ell(17, PrimeCase::Fixed).is_err());
    }

    #[test]
    fn b_full_rank_examples() {
        let c3 = BCase::for_ell(3, PrimeCase::Shifted).unwrap();
        assert!(verify_b_full_rank(3, 4, c3).unwrap());
        let c5 = BCase::for_ell(5, PrimeCase::Shifted).unwrap();
        assert!(verify_b_full_rank(5, 4, c5).unwrap());
        for prime in PrimeCase::BOTH {
            let case = BCase::for_ell(11, prime).unwrap();
            assert!(verify_b_full_rank(11, 5, case).unwrap());
        }
        for case in BCase::ALL {
            let ell = if case.ell_class == EllClass::Three {
                11
            } else {
                13
            };
            assert_ne!(determinant(&build_b(ell, 5, case).unwrap().matrix), 0);
        }
    }

    fn top_half_polynomial(shape: &SymbolShape, a: &SymbolAssignment) -> crate::ff::Poly {
        let m = instantiate(shape, a).unwrap();
        crate::ff::Poly::new(a.field(), m.row(0).to_vec())
    }

    #[test]
    fn b_matches_eigenvalue_reduction() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for ell in [3u64, 5, 11, 13, 19, 29] {
            let field = f(ell);
            for n in 3..=6 {
                let (_, second) = crate::ff::lemma_factor_split(ell, n).unwrap();
                for prime in PrimeCase::BOTH {
                    let shape = derive_shape(n, prime).unwrap();
                    let b = build_b(ell, n, BCase::for_ell(ell, prime).unwrap()).unwrap();
                    for _ in 0..20 {
                        let a = SymbolAssignment::random(field, shape.param_len(), &mut rng);
                        let reduced = top_half_polynomial(&shape, &a).rem(&second);
                        let mut expect = reduced.coeffs().to_vec();
                        expect.resize(shape.param_len(), 0);
                        assert_eq!(
                            b.matrix.apply(a.values()),
                            expect,
                            "ell={ell} n={n} {prime}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nonzero_top_half_is_invertible() {
        use crate::skewcirc::{rank_via_gcd, SkewCirculant};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for ell in [3u64, 5, 11, 13] {
            for n in 3..=5 {
                for prime in PrimeCase::BOTH {
                    let shape = derive_shape(n, prime).unwrap();
                    for _ in 0..30 {
                        let a = SymbolAssignment::random(f(ell), shape.param_len(), &mut rng);
                        if a.is_zero() {
                            continue;
                        }
                        let row = instantiate(&shape, &a).unwrap().row(0).to_vec();
                        let sc = SkewCirculant::new(f(ell), row).unwrap();
                        assert_eq!(rank_via_gcd(&sc), 1 << (n - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn full_rank_count_matches_nonzero_count() {
        for (ell, n) in [(3u64, 3u32), (5, 3), (3, 4), (11, 3)] {
            for prime in PrimeCase::BOTH {
                let r = dichotomy_scan(ell, n, prime, ScanMode::Exhaustive).unwrap();
                let params = 1u32 << (n - 2);
                assert_eq!(r.full_rank, ell.pow(params) - 1);
            }
        }
    }

    #[test]
    fn b_determinants_nonzero_small_grid() {
        for ell in (3..200).filter(|&p| crate::ff::is_prime(p) && matches!(p % 8, 3 | 5)) {
            for n in 3..=7 {
                for prime in PrimeCase::BOTH {
                    let case = BCase::for_ell(ell, prime).unwrap();
                    assert!(
                        verify_b_full_rank(ell, n, case).unwrap(),
                        "ell={ell} n={n} {prime}"
                    );
                }
            }
        }
    }

    #[test]
    fn seventeen_is_outside_scope() {
        let r = dichotomy_scan(17, 3, PrimeCase::Fixed, ScanMode::Exhaustive).unwrap();
        assert!(!r.in_theorem_scope());
        assert_eq!(r.total, 17u64.pow(2));
    }
}
