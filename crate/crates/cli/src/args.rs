//! Parsers for list and range flags.

use normsym::ff::is_prime;

/// Parses `3`, `3,5,11`, `3..997` (odd primes in the inclusive range) or a
/// comma-separated mix. Order is preserved and duplicates dropped.
pub fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    let mut out: Vec<u64> = Vec::new();
    for item in s.split(',').map(str::trim) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo = parse_u64(lo)?;
            let hi = parse_u64(hi)?;
            if lo > hi {
                return Err(format!("empty range {item:?}"));
            }
            out.extend((lo..=hi).filter(|&p| p > 2 && is_prime(p)));
        } else {
            let p = parse_u64(item)?;
            if p == 2 || !is_prime(p) {
                return Err(format!("{p} is not an odd prime"));
            }
            out.push(p);
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|p| seen.insert(*p));
    if out.is_empty() {
        return Err(format!("{s:?} contains no odd primes"));
    }
    Ok(out)
}

/// Parses `k` or the inclusive range `a..b`.
pub fn parse_levels(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse_u32(lo)?, parse_u32(hi)?),
        None => {
            let k = parse_u32(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo..=hi).collect())
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',').map(|v| parse_u64(v.trim())).collect()
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

fn parse_u32(s: &str) -> Result<u32, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(parse_primes("3").unwrap(), vec![3]);
        assert_eq!(parse_primes("3,5, 11").unwrap(), vec![3, 5, 11]);
        assert_eq!(parse_primes("2..13").unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("5,3..7").unwrap(), vec![5, 3, 7]);
        assert_eq!(parse_primes("3..997").unwrap().len(), 167);
        assert!(parse_primes("9").is_err());
        assert!(parse_primes("2").is_err());
        assert!(parse_primes("8..10").is_err());
        assert!(parse_primes("7..3").is_err());
        assert!(parse_primes("x").is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(parse_levels("4").unwrap(), vec![4]);
        assert_eq!(parse_levels("2..4").unwrap(), vec![2, 3, 4]);
        assert!(parse_levels("4..2").is_err());
        assert!(parse_levels("-1").is_err());
    }
}
