//! Words over `Z/q`, rotation, periods, necklaces and Lyndon words.
//!
//! A necklace is a rotation class of words. Its canonical representative is
//! the lexicographically least rotation; for aperiodic classes that
//! representative is a Lyndon word. The number of Lyndon words of a given
//! length and trace has a closed form ([`count_lyndon`]) which is checked
//! against exhaustive enumeration ([`count_lyndon_bruteforce`]).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of words [`enumerate_words`] will materialize.
const MAX_MATERIALIZED: u64 = 1 << 32;

/// A finite word over the alphabet `{0, ..., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<u32>,
    q: u32,
}

impl Word {
    pub fn new(symbols: Vec<u32>, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameters(format!("alphabet size {q} < 2")));
        }
        if symbols.is_empty() {
            return Err(Error::InvalidParameters("empty word".into()));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidParameters(format!(
                "symbol {s} out of range for q = {q}"
            )));
        }
        Ok(Self { symbols, q })
    }

    /// Callers guarantee the invariants.
    pub(crate) fn from_raw(symbols: Vec<u32>, q: u32) -> Self {
        debug_assert!(!symbols.is_empty() && symbols.iter().all(|&s| s < q));
        Self { symbols, q }
    }

    /// Parses `"011011"` for `q <= 10` or `"3,11,0"` in general.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let text = text.trim();
        let bad = |m: String| Error::Parse { line: 1, message: m };
        let symbols = if text.contains(',') {
            text.split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| bad(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| bad(format!("bad symbol {c:?}"))))
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(symbols, q)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self` repeated `k` times.
    pub fn power(&self, k: usize) -> Word {
        Word::from_raw(self.symbols.repeat(k), self.q)
    }

    /// Left rotation by `k` positions.
    pub fn rotate_by(&self, k: usize) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.rotate_left(k % self.len());
        Word::from_raw(symbols, self.q)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A rotation class of words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Necklace {
    /// Lexicographically least rotation.
    pub canonical: Word,
    pub period: usize,
    pub lyndon_subword: Word,
}

impl Necklace {
    pub fn of(word: &Word) -> Necklace {
        let canonical = least_rotation(word);
        let period = period(&canonical);
        let lyndon_subword = Word::from_raw(canonical.symbols[..period].to_vec(), word.q);
        Necklace {
            canonical,
            period,
            lyndon_subword,
        }
    }

    pub fn is_aperiodic(&self) -> bool {
        self.period == self.canonical.len()
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

pub(crate) fn check_params(n: usize, q: u32, t: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameters("length n must be at least 1".into()));
    }
    if q < 2 {
        return Err(Error::InvalidParameters(format!("alphabet size q = {q} < 2")));
    }
    if t >= q {
        return Err(Error::InvalidParameters(format!(
            "trace t = {t} is not a residue mod q = {q}"
        )));
    }
    Ok(())
}

/// Sum of the symbols mod q.
pub fn trace(w: &Word) -> u32 {
    trace_of(&w.symbols, w.q)
}

pub(crate) fn trace_of(symbols: &[u32], q: u32) -> u32 {
    (symbols.iter().map(|&s| u64::from(s)).sum::<u64>() % u64::from(q)) as u32
}

/// `a_1 a_2 ... a_n -> a_2 ... a_n a_1`.
pub fn rotate(w: &Word) -> Word {
    w.rotate_by(1)
}

/// Least `d >= 1` with `rotate^d(w) = w`; always divides `len(w)`.
pub fn period(w: &Word) -> usize {
    period_of(&w.symbols)
}

pub(crate) fn period_of(s: &[u32]) -> usize {
    let n = s.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (0..n - d).all(|i| s[i] == s[i + d]))
        .unwrap_or(n)
}

pub fn least_rotation(w: &Word) -> Word {
    (1..w.len())
        .map(|k| w.rotate_by(k))
        .fold(w.clone(), |best, r| if r < best { r } else { best })
}

/// The length-`period(w)` prefix of the least rotation of `w`.
pub fn lyndon_subword(w: &Word) -> Word {
    Necklace::of(w).lyndon_subword
}

/// True iff `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &Word) -> bool {
    is_lyndon_slice(&w.symbols)
}

pub(crate) fn is_lyndon_slice(s: &[u32]) -> bool {
    // Duval-style scan: a word is Lyndon iff it is strictly below all of
    // its proper suffixes.
    let n = s.len();
    let (mut i, mut j) = (0, 1);
    while j < n {
        match s[i].cmp(&s[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                i = 0;
                j += 1;
            }
            std::cmp::Ordering::Greater => return false,
        }
    }
    i == 0
}

/// `q^(n-1)`, the size of each trace class, if it fits in a `u64`.
pub fn trace_class_size(n: usize, q: u32) -> Option<u64> {
    u64::from(q).checked_pow(u32::try_from(n - 1).ok()?)
}

/// Position of a word in the lexicographic listing of its trace class.
///
/// The last symbol is determined by the others, so the rank is the base-q
/// value of the first `n - 1` symbols.
pub fn trace_rank(symbols: &[u32], q: u32) -> u64 {
    symbols[..symbols.len() - 1]
        .iter()
        .fold(0u64, |acc, &s| acc * u64::from(q) + u64::from(s))
}

/// Inverse of [`trace_rank`].
pub fn unrank(rank: u64, n: usize, q: u32, t: u32) -> Vec<u32> {
    let mut symbols = vec![0u32; n];
    let mut r = rank;
    for slot in symbols[..n - 1].iter_mut().rev() {
        *slot = (r % u64::from(q)) as u32;
        r /= u64::from(q);
    }
    let head = trace_of(&symbols[..n - 1], q);
    symbols[n - 1] = (t + q - head) % q;
    symbols
}

/// Streams the words of length `n` and trace `t` in lexicographic order.
#[derive(Debug, Clone)]
pub struct TraceWords {
    q: u32,
    t: u32,
    prefix: Vec<u32>,
    done: bool,
}

impl TraceWords {
    pub fn new(n: usize, q: u32, t: u32) -> Result<Self> {
        check_params(n, q, t)?;
        Ok(Self {
            q,
            t,
            prefix: vec![0; n - 1],
            done: false,
        })
    }
}

impl Iterator for TraceWords {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut word = self.prefix.clone();
        let head = trace_of(&word, self.q);
        word.push((self.t + self.q - head) % self.q);
        // odometer step
        let mut i = self.prefix.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.prefix[i] += 1;
            if self.prefix[i] < self.q {
                break;
            }
            self.prefix[i] = 0;
        }
        Some(word)
    }
}

/// All words of length `n` over `Z/q` with trace `t`, lexicographically.
pub fn enumerate_words(n: usize, q: u32, t: u32) -> Result<Vec<Word>> {
    check_params(n, q, t)?;
    match trace_class_size(n, q) {
        Some(size) if size <= MAX_MATERIALIZED => {}
        _ => {
            return Err(Error::LimitExceeded {
                what: "word enumeration",
                needed: format!("{q}^{}", n - 1),
                limit: MAX_MATERIALIZED,
            })
        }
    }
    Ok(TraceWords::new(n, q, t)?
        .map(|s| Word::from_raw(s, q))
        .collect())
}

/// One necklace per rotation class of `A^n_t`, sorted by canonical word.
pub fn enumerate_necklaces(n: usize, q: u32, t: u32) -> Result<Vec<Necklace>> {
    let mut seen = BTreeSet::new();
    for w in enumerate_words(n, q, t)? {
        seen.insert(least_rotation(&w));
    }
    Ok(seen.iter().map(Necklace::of).collect())
}

pub fn moebius(d: u64) -> i8 {
    assert!(d >= 1, "moebius is defined on positive integers");
    let mut m = d;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Number of Lyndon words of length `n` and trace `t` over `Z/q`:
///
/// `L_q(n,t) = 1/(qn) * sum_{d | n, gcd(d,q) | t} gcd(d,q) mu(d) q^(n/d)`.
pub fn count_lyndon(n: usize, q: u32, t: u32) -> Result<BigUint> {
    check_params(n, q, t)?;
    let qb = BigInt::from(q);
    let mut total = BigInt::zero();
    for d in divisors(n) {
        let g = (d as u64).gcd(&u64::from(q));
        if u64::from(t) % g != 0 {
            continue;
        }
        let mu = moebius(d as u64);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(g) * num_traits::pow(qb.clone(), n / d);
        total += term * BigInt::from(mu);
    }
    let denom = BigInt::from(u64::from(q) * n as u64);
    let (quot, rem) = total.div_rem(&denom);
    if !rem.is_zero() || quot.is_negative() {
        return Err(Error::Internal(format!(
            "Lyndon count sum {total} is not a nonnegative multiple of {denom}"
        )));
    }
    Ok(quot.magnitude().clone())
}

/// Total number of Lyndon words of length `n` over `q` letters,
/// `1/n * sum_{d | n} mu(d) q^(n/d)`.
pub fn count_lyndon_total(n: usize, q: u32) -> Result<BigUint> {
    check_params(n, q, 0)?;
    let mut total = BigInt::zero();
    for d in divisors(n) {
        total += BigInt::from(moebius(d as u64)) * num_traits::pow(BigInt::from(q), n / d);
    }
    let (quot, rem) = total.div_rem(&BigInt::from(n));
    if !rem.is_zero() {
        return Err(Error::Internal(format!("{total} not divisible by {n}")));
    }
    Ok(quot.magnitude().clone())
}

/// Counts Lyndon words in `A^n_t` by scanning the whole class.
pub fn count_lyndon_bruteforce(n: usize, q: u32, t: u32, work_limit: u64) -> Result<u64> {
    check_params(n, q, t)?;
    match trace_class_size(n, q) {
        Some(size) if size <= work_limit => {}
        _ => {
            return Err(Error::LimitExceeded {
                what: "brute-force Lyndon count",
                needed: format!("{q}^{} words", n - 1),
                limit: work_limit,
            })
        }
    }
    Ok(TraceWords::new(n, q, t)?
        .filter(|w| is_lyndon_slice(w))
        .count() as u64)
}

/// Convenience for reporting `BigUint` values that are known to be small.
pub fn small(value: &BigUint) -> Option<u64> {
    value.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, q: u32) -> Word {
        Word::parse(s, q).unwrap()
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&w("011011", 2)), 0);
        assert_eq!(trace(&w("000000", 2)), 0);
        assert_eq!(trace(&w("123", 4)), 2);
    }

    #[test]
    fn rotate_examples() {
        assert_eq!(rotate(&w("011011", 2)), w("110110", 2));
        assert_eq!(rotate(&w("000000", 2)), w("000000", 2));
        assert_eq!(rotate(&w("0001", 2)), w("0010", 2));
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&w("011011", 2)), 3);
        assert_eq!(period(&w("000000", 2)), 1);
        assert_eq!(period(&w("010101", 2)), 2);
    }

    #[test]
    fn lyndon_subword_examples() {
        assert_eq!(lyndon_subword(&w("011011", 2)), w("011", 2));
        assert_eq!(lyndon_subword(&w("110110", 2)), w("011", 2));
        assert_eq!(lyndon_subword(&w("001101", 2)), w("001101", 2));
    }

    #[test]
    fn is_lyndon_examples() {
        assert!(is_lyndon(&w("000011", 2)));
        assert!(is_lyndon(&w("000001", 2)));
        assert!(!is_lyndon(&w("011011", 2)));
        assert!(is_lyndon(&w("0", 2)));
        assert!(!is_lyndon(&w("10", 2)));
        assert!(!is_lyndon(&w("00", 2)));
    }

    #[test]
    fn enumerate_words_examples() {
        assert_eq!(enumerate_words(1, 2, 0).unwrap(), vec![w("0", 2)]);
        assert_eq!(enumerate_words(6, 2, 0).unwrap().len(), 32);
        assert_eq!(
            enumerate_words(2, 3, 1).unwrap(),
            vec![w("01", 3), w("10", 3), w("22", 3)]
        );
    }

    #[test]
    fn enumerate_rejects_bad_parameters() {
        assert!(matches!(enumerate_words(0, 2, 0), Err(Error::InvalidParameters(_))));
        assert!(matches!(enumerate_words(3, 1, 0), Err(Error::InvalidParameters(_))));
        assert!(matches!(enumerate_words(3, 2, 2), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn single_letter_necklace() {
        for q in 2..6 {
            for t in 0..q {
                let ns = enumerate_necklaces(1, q, t).unwrap();
                assert_eq!(ns.len(), 1);
                assert_eq!(ns[0].canonical.symbols(), &[t]);
                assert_eq!(ns[0].period, 1);
            }
        }
    }

    #[test]
    fn rank_round_trip() {
        for (rank, word) in enumerate_words(4, 3, 2).unwrap().iter().enumerate() {
            assert_eq!(trace_rank(word.symbols(), 3), rank as u64);
            assert_eq!(unrank(rank as u64, 4, 3, 2), word.symbols());
        }
    }

    #[test]
    fn moebius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(moebius(i as u64 + 1), m, "mu({})", i + 1);
        }
    }

    #[test]
    fn count_lyndon_examples() {
        assert_eq!(count_lyndon(6, 2, 1).unwrap(), BigUint::from(5u32));
        assert_eq!(count_lyndon(6, 2, 0).unwrap(), BigUint::from(4u32));
        for q in 2..8 {
            for t in 0..q {
                assert_eq!(count_lyndon(1, q, t).unwrap(), BigUint::from(1u32));
            }
        }
    }

    #[test]
    fn count_lyndon_handles_large_lengths() {
        // q^(n-1) is far beyond u64 here; the division must still be exact.
        let big = count_lyndon(64, 7, 3).unwrap();
        assert!(big.bits() > 64);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(count_lyndon_bruteforce(6, 2, 1, 1 << 20).unwrap(), 5);
        assert_eq!(count_lyndon_bruteforce(6, 2, 0, 1 << 20).unwrap(), 4);
        assert_eq!(count_lyndon_bruteforce(2, 2, 0, 1 << 20).unwrap(), 0);
        assert!(matches!(
            count_lyndon_bruteforce(20, 2, 0, 1000),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn necklace_display() {
        let n = Necklace::of(&w("110110", 2));
        assert_eq!(n.to_string(), "[011011]");
        assert_eq!(n.period, 3);
        let wide = Word::new(vec![10, 3], 12).unwrap();
        assert_eq!(wide.to_string(), "10,3");
        assert_eq!(Word::parse("10,3", 12).unwrap(), wide);
    }
}
