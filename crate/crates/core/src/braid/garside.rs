//! Left-greedy Garside normal form in `B_N`.
//!
//! A braid is written as `Δ^inf · A_1 ⋯ A_r` where every `A_k` is a proper,
//! non-trivial permutation braid and each adjacent pair is left-weighted:
//! the starting set of `A_{k+1}` lies inside the finishing set of `A_k`.
//! The form is unique, so it doubles as the equality oracle.

use super::perm::Permutation;
use super::BraidWord;
use crate::error::{Error, Result};

/// A positive permutation braid on `n` strands, 0-based internally.
///
/// `fwd[i]` is the bottom position reached by the strand starting at top
/// position `i`; `back` is its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Simple {
    fwd: Vec<u16>,
    back: Vec<u16>,
}

impl Simple {
    fn identity(n: usize) -> Self {
        let id: Vec<u16> = (0..n as u16).collect();
        Simple {
            fwd: id.clone(),
            back: id,
        }
    }

    fn delta(n: usize) -> Self {
        let rev: Vec<u16> = (0..n as u16).rev().collect();
        Simple {
            fwd: rev.clone(),
            back: rev,
        }
    }

    fn generator(n: usize, i: usize) -> Self {
        let mut s = Self::identity(n);
        s.push_right(i);
        s
    }

    /// `Δ · σ_i^{-1}`, the simple element completing `σ_i` to `Δ` on the right.
    #[cfg(test)]
    fn delta_without(n: usize, i: usize) -> Self {
        let mut s = Self::delta(n);
        // Right multiplication by σ_i^{±1} acts identically on permutations.
        s.push_right(i);
        s
    }

    fn from_fwd(fwd: Vec<u16>) -> Self {
        let mut back = vec![0; fwd.len()];
        for (i, &j) in fwd.iter().enumerate() {
            back[j as usize] = i as u16;
        }
        Simple { fwd, back }
    }

    fn strands(&self) -> usize {
        self.fwd.len()
    }

    fn is_identity(&self) -> bool {
        self.fwd.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    fn is_delta(&self) -> bool {
        let n = self.strands();
        self.fwd.iter().enumerate().all(|(i, &j)| i + j as usize == n - 1)
    }

    /// `i` (1-based generator index) is in the starting set.
    fn starts_with(&self, i: usize) -> bool {
        self.fwd[i - 1] > self.fwd[i]
    }

    /// `i` (1-based generator index) is in the finishing set.
    fn ends_with(&self, i: usize) -> bool {
        self.back[i - 1] > self.back[i]
    }

    /// `self · σ_i`; caller guarantees `i` is not in the finishing set.
    fn push_right(&mut self, i: usize) {
        let (s1, s2) = (self.back[i - 1], self.back[i]);
        self.back.swap(i - 1, i);
        self.fwd[s1 as usize] = i as u16;
        self.fwd[s2 as usize] = (i - 1) as u16;
    }

    /// `σ_i^{-1} · self`; caller guarantees `i` is in the starting set.
    fn pop_left(&mut self, i: usize) {
        self.fwd.swap(i - 1, i);
        self.back[self.fwd[i - 1] as usize] = (i - 1) as u16;
        self.back[self.fwd[i] as usize] = i as u16;
    }

    /// Conjugation by `Δ` (`σ_i ↦ σ_{n-i}`).
    fn flipped(&self) -> Self {
        let n = self.strands();
        let fwd = (0..n).map(|i| (n - 1 - self.fwd[n - 1 - i] as usize) as u16).collect();
        Simple::from_fwd(fwd)
    }

    /// Right complement `A^{-1} Δ`.
    fn complement(&self) -> Self {
        let n = self.strands() as u16;
        Simple::from_fwd(self.back.iter().map(|&t| n - 1 - t).collect())
    }

    /// Left complement `Δ A^{-1}`.
    fn left_complement(&self) -> Self {
        self.complement().flipped()
    }

    /// Canonical positive word: repeatedly strip the least starting generator.
    fn letters(&self, out: &mut Vec<i32>) {
        let mut s = self.clone();
        let n = s.strands();
        let mut i = 1;
        while i < n {
            if s.starts_with(i) {
                out.push(i as i32);
                s.pop_left(i);
                i = i.saturating_sub(1).max(1);
            } else {
                i += 1;
            }
        }
        debug_assert!(s.is_identity());
    }

    /// Permutation image under `σ_i ↦ (i i+1)`.
    fn permutation(&self) -> Permutation {
        Permutation::from_images(self.back.iter().map(|&t| t as u32 + 1).collect())
            .expect("simple braids carry a bijection")
    }

    fn from_permutation(p: &Permutation) -> Self {
        Simple::from_fwd(p.inverse().images().iter().map(|&v| (v - 1) as u16).collect())
    }
}

/// Makes `(a, b)` left-weighted by sliding generators from `b` into `a`.
/// Returns whether anything moved.
fn left_weight(a: &mut Simple, b: &mut Simple) -> bool {
    let n = a.strands();
    let mut pending: Vec<usize> = (1..n).collect();
    let mut moved = false;
    while let Some(i) = pending.pop() {
        if b.starts_with(i) && !a.ends_with(i) {
            a.push_right(i);
            b.pop_left(i);
            moved = true;
            if i > 1 {
                pending.push(i - 1);
            }
            if i + 1 < n {
                pending.push(i + 1);
            }
        }
    }
    moved
}

/// Appends `x` to a left-weighted factor list and restores left-weightedness
/// with a single backward pass.
fn append_factor(factors: &mut Vec<Simple>, x: Simple) {
    if x.is_identity() {
        return;
    }
    factors.push(x);
    let mut j = factors.len() - 1;
    while j > 0 {
        let (head, tail) = factors.split_at_mut(j);
        let moved = left_weight(&mut head[j - 1], &mut tail[0]);
        if tail[0].is_identity() {
            debug_assert_eq!(j, factors.len() - 1, "identity factors only appear last");
            factors.remove(j);
        }
        if !moved {
            break;
        }
        j -= 1;
    }
}

/// `Δ^q · B_1 ⋯ B_s` for a positive word given by generator indices.
fn positive_normal_form(gens: &[usize], n: usize) -> (i64, Vec<Simple>) {
    let mut factors = Vec::new();
    for &i in gens {
        append_factor(&mut factors, Simple::generator(n, i));
    }
    let q = factors.iter().take_while(|s| s.is_delta()).count();
    factors.drain(..q);
    (q as i64, factors)
}

/// Canonical record `Δ^inf · factors` of a braid in `B_N`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GarsideNormalForm {
    strands: usize,
    inf: i64,
    factors: Vec<Permutation>,
}

impl GarsideNormalForm {
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Power of the half twist `Δ_N`.
    pub fn inf(&self) -> i64 {
        self.inf
    }

    /// Permutation images of the non-`Δ` factors, left to right.
    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// A word spelling this normal form.
    ///
    /// Non-negative `inf` spells `Δ^inf` followed by the factors. Negative
    /// `inf` absorbs as many `Δ^{-1}` as possible into the leading factors
    /// (`Δ^{-1}A = ∂(A)^{-1}`), producing a compact `D^{-1}·P` word. Both are
    /// functions of the normal form alone, hence canonical.
    pub fn to_word(&self) -> BraidWord {
        let n = self.strands;
        let simples: Vec<Simple> = self.factors.iter().map(Simple::from_permutation).collect();
        let delta = Simple::delta(n);
        let mut letters = Vec::new();
        if self.inf >= 0 {
            for _ in 0..self.inf {
                delta.letters(&mut letters);
            }
            for s in &simples {
                s.letters(&mut letters);
            }
        } else {
            let k = (-self.inf) as usize;
            let m = k.min(simples.len());
            // Denominator D = ∂(A_m) ∂(τ A_{m-1}) ⋯ ∂(τ^{m-1} A_1) · Δ^{k-m}.
            let mut denom = Vec::new();
            for (j, s) in simples[..m].iter().enumerate().rev() {
                let twisted = if (m - 1 - j) % 2 == 1 { s.flipped() } else { s.clone() };
                twisted.complement().letters(&mut denom);
            }
            for _ in m..k {
                delta.letters(&mut denom);
            }
            letters.extend(denom.iter().rev().map(|&l| -l));
            for s in &simples[m..] {
                s.letters(&mut letters);
            }
        }
        BraidWord::from_valid(letters)
    }

    /// Stable text key: `N;inf;f1|f2|...` with each factor as its image list.
    pub fn canonical_string(&self) -> String {
        let factors: Vec<String> = self
            .factors
            .iter()
            .map(|p| p.images().iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("{};{};{}", self.strands, self.inf, factors.join("|"))
    }
}

/// Garside normal form of `word` in `B_n`.
pub fn normal_form(word: &BraidWord, n: usize) -> Result<GarsideNormalForm> {
    if n == 0 {
        return Err(Error::invalid("a braid group needs at least one strand"));
    }
    for &l in word.letters() {
        if l.unsigned_abs() as usize >= n {
            return Err(Error::IndexOutOfRange {
                index: l.unsigned_abs(),
                strands: n,
            });
        }
    }
    // Factors are kept as τ^flip of the true factors so that `Δ^{-1}`, which
    // conjugates everything to its left, costs nothing. A run of negative
    // letters is inverted as a block: `(Δ^q B_1 ⋯ B_s)^{-1}` contributes one
    // left complement per factor instead of one near-`Δ` factor per letter.
    let mut inf: i64 = 0;
    let mut flip = false;
    let mut factors: Vec<Simple> = Vec::new();
    let letters = word.letters();
    let mut k = 0;
    while k < letters.len() {
        if letters[k] > 0 {
            let i = letters[k] as usize;
            let g = if flip { n - i } else { i };
            append_factor(&mut factors, Simple::generator(n, g));
            k += 1;
            continue;
        }
        let end = k + letters[k..].iter().take_while(|&&l| l < 0).count();
        let run: Vec<usize> = letters[k..end]
            .iter()
            .rev()
            .map(|l| l.unsigned_abs() as usize)
            .collect();
        let (q, blocks) = positive_normal_form(&run, n);
        for b in blocks.iter().rev() {
            // B^{-1} = Δ^{-1} · (Δ B^{-1})
            inf -= 1;
            flip = !flip;
            let c = b.left_complement();
            append_factor(&mut factors, if flip { c.flipped() } else { c });
        }
        inf -= q;
        if q % 2 == 1 {
            flip = !flip;
        }
        // Δ factors collect at the front and never move again.
        let leading = factors.iter().take_while(|s| s.is_delta()).count();
        if leading > 0 {
            inf += leading as i64;
            factors.drain(..leading);
        }
        k = end;
    }
    let leading = factors.iter().take_while(|s| s.is_delta()).count();
    inf += leading as i64;
    factors.drain(..leading);
    let factors = factors
        .iter()
        .map(|s| if flip { s.flipped() } else { s.clone() })
        .map(|s| s.permutation())
        .collect();
    Ok(GarsideNormalForm {
        strands: n,
        inf,
        factors,
    })
}
