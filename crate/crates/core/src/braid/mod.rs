//! Exact arithmetic in the braid groups `B_N` and `B_∞`.
//!
//! Words are plain signed generator sequences and are never reduced behind
//! the caller's back; [`normal_form`] is the explicit canonicalisation step
//! and [`equal`] decides equality through it.

mod garside;
mod perm;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use garside::{normal_form, GarsideNormalForm};
pub use perm::Permutation;

use crate::error::{Error, Result};

/// A braid word: `+i` is `σ_i`, `-i` is `σ_i^{-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct BraidWord(Vec<i32>);

impl BraidWord {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if let Some(pos) = letters.iter().position(|&l| l == 0) {
            return Err(Error::invalid(format!("letter {pos} is zero")));
        }
        Ok(BraidWord(letters))
    }

    pub(crate) fn from_valid(letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        BraidWord(letters)
    }

    pub fn identity() -> Self {
        BraidWord(Vec::new())
    }

    /// The single generator `σ_i^{±1}`.
    pub fn generator(i: i32) -> Self {
        assert!(i != 0, "generator index must be nonzero");
        BraidWord(vec![i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Smallest generator index used, 0 for the empty word.
    pub fn min_index(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).min().unwrap_or(0)
    }

    /// Strand count of the smallest `B_N` containing the word (at least 2).
    pub fn strands(&self) -> usize {
        self.max_index().max(1) + 1
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        BraidWord(letters)
    }

    pub fn invert(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// The shift endomorphism `∂^p`: `σ_i ↦ σ_{i+p}`.
    pub fn shift(&self, p: usize) -> BraidWord {
        let p = p as i32;
        BraidWord(self.0.iter().map(|&l| if l > 0 { l + p } else { l - p }).collect())
    }

    /// True when every letter index lies in `lo..=hi`.
    pub fn within(&self, lo: usize, hi: usize) -> bool {
        self.0.iter().all(|l| (lo..=hi).contains(&(l.unsigned_abs() as usize)))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Space-separated signed integers; the empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut pos = 0;
        for token in s.split(' ') {
            if token.is_empty() {
                if !s.is_empty() {
                    return Err(Error::parse(pos, "empty letter (stray space)"));
                }
                pos += 1;
                continue;
            }
            let l: i32 = token
                .parse()
                .map_err(|_| Error::parse(pos, format!("bad letter {token:?}")))?;
            if l == 0 {
                return Err(Error::parse(pos, "zero letter"));
            }
            // Reject "+3", "03", "-03" so the text form is unique.
            if token != l.to_string() {
                return Err(Error::parse(pos, format!("non-canonical letter {token:?}")));
            }
            letters.push(l);
            pos += token.len() + 1;
        }
        Ok(BraidWord(letters))
    }
}

/// `δ_n = σ_{n-1} ⋯ σ_2 σ_1`.
pub fn delta(n: usize) -> Result<BraidWord> {
    if n < 2 {
        return Err(Error::invalid(format!("delta needs n >= 2, got {n}")));
    }
    Ok(BraidWord((1..n as i32).rev().collect()))
}

/// `τ_{p,q} = δ_{p+1} ∂(δ_{p+1}) ⋯ ∂^{q-1}(δ_{p+1})`.
///
/// `q = 0` gives the identity, which is what the boundary case `N = 2p`
/// of the parabolic transport identities needs.
pub fn tau(p: usize, q: usize) -> BraidWord {
    assert!(p >= 1, "tau needs p >= 1");
    let d = delta(p + 1).expect("p + 1 >= 2");
    let mut letters = Vec::with_capacity(p * q);
    for k in 0..q {
        letters.extend_from_slice(d.shift(k).letters());
    }
    BraidWord(letters)
}

/// The Garside element `Δ_n` as a positive word.
pub fn half_twist(n: usize) -> BraidWord {
    let mut letters = Vec::new();
    for k in (1..n as i32).rev() {
        letters.extend(1..=k);
    }
    BraidWord(letters)
}

/// Decides `x = y` in `B_N` with `N` just large enough for both words.
pub fn equal(x: &BraidWord, y: &BraidWord) -> bool {
    let n = x.strands().max(y.strands());
    let diff = x.concat(&y.invert());
    normal_form(&diff, n)
        .map(|nf| nf.is_identity())
        .expect("strand count covers both words")
}

/// True when `x` is trivial.
pub fn is_trivial(x: &BraidWord) -> bool {
    normal_form(x, x.strands())
        .map(|nf| nf.is_identity())
        .expect("strand count covers the word")
}

/// Commutator check `[x, y] = 1`.
pub fn commute(x: &BraidWord, y: &BraidWord) -> bool {
    equal(&x.concat(y), &y.concat(x))
}

/// Image under `B_n → S_n`, `σ_i ↦ (i i+1)`.
pub fn permutation_of(x: &BraidWord, n: usize) -> Result<Permutation> {
    check_range(x, n)?;
    let mut images: Vec<u32> = (1..=n as u32).collect();
    // Right-multiplying by a transposition swaps positions in the image list.
    for &l in x.letters() {
        let i = l.unsigned_abs() as usize;
        images.swap(i - 1, i);
    }
    Permutation::from_images(images)
}

fn check_range(x: &BraidWord, n: usize) -> Result<()> {
    match x.letters().iter().find(|l| l.unsigned_abs() as usize >= n) {
        Some(l) => Err(Error::IndexOutOfRange {
            index: l.unsigned_abs(),
            strands: n,
        }),
        None => Ok(()),
    }
}

/// `η_d`: erases the last `d` strands of `x ∈ B_n`.
///
/// Requires the permutation of `x` to stabilise `{n-d+1, ..., n}`; on the
/// pure braid group this is the pull-out homomorphism `P_n → P_{n-d}`.
pub fn erase_last_strands(x: &BraidWord, n: usize, d: usize) -> Result<BraidWord> {
    if d == 0 || d >= n {
        return Err(Error::invalid(format!("cannot erase {d} of {n} strands")));
    }
    check_range(x, n)?;
    let kept = n - d;
    // occupant[pos] = strand currently at position pos (0-based)
    let mut occupant: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for &l in x.letters() {
        let i = l.unsigned_abs() as usize;
        let (u, v) = (occupant[i - 1], occupant[i]);
        if u < kept && v < kept {
            let index = occupant[..i].iter().filter(|&&s| s < kept).count() as i32;
            out.push(if l > 0 { index } else { -index });
        }
        occupant.swap(i - 1, i);
    }
    if occupant[kept..].iter().any(|&s| s < kept) {
        return Err(Error::precondition("braid does not stabilise the erased strands"));
    }
    Ok(BraidWord(out))
}

/// Pure braid generator `A_{i,j} = (σ_{j-1}⋯σ_{i+1}) σ_i² (σ_{i+1}⋯σ_{j-1})^{-1}`.
pub fn pure_gen(i: usize, j: usize) -> Result<BraidWord> {
    if i == 0 || i >= j {
        return Err(Error::invalid(format!(
            "pure generator needs 1 <= i < j, got ({i},{j})"
        )));
    }
    let (i, j) = (i as i32, j as i32);
    let mut letters: Vec<i32> = (i + 1..j).rev().collect();
    letters.extend([i, i]);
    letters.extend((i + 1..j).map(|k| -k));
    Ok(BraidWord(letters))
}

/// Deterministic word with letters uniform over `{±1, ..., ±max_index}`.
pub fn random_word(seed: u64, length: usize, max_index: usize) -> BraidWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_word_with(&mut rng, length, max_index)
}

pub fn random_word_with<R: Rng + ?Sized>(rng: &mut R, length: usize, max_index: usize) -> BraidWord {
    assert!(max_index >= 1, "max_index must be at least 1");
    let m = max_index as i32;
    BraidWord(
        (0..length)
            .map(|_| {
                let k = rng.gen_range(0..2 * m);
                if k < m {
                    k + 1
                } else {
                    -(k - m + 1)
                }
            })
            .collect(),
    )
}

/// Parameters of the partial multi-LD braid platform: shift `p`, parabolic
/// bounds `q1 < q2`, and ambient strand count `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BraidParams {
    pub p: usize,
    pub q1: usize,
    pub q2: usize,
    pub n: usize,
}

impl BraidParams {
    pub fn new(p: usize, q1: usize, q2: usize, n: usize) -> Result<Self> {
        let params = BraidParams { p, q1, q2, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let BraidParams { p, q1, q2, n } = *self;
        if !(1 < q1 && q1 < q2 && q2 < p) {
            return Err(Error::invalid(format!(
                "need 1 < q1 < q2 < p, got q1={q1} q2={q2} p={p}"
            )));
        }
        if q1 < 3 || p - q2 < 3 {
            return Err(Error::invalid(format!(
                "need q1 >= 3 and p - q2 >= 3, got q1={q1} p-q2={}",
                p - q2
            )));
        }
        if n < 2 * p {
            return Err(Error::invalid(format!("need N >= 2p, got N={n} p={p}")));
        }
        Ok(())
    }
}
