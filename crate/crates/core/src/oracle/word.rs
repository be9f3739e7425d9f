//! Words in `a, b, a^-1, b^-1` and a collector that rewrites them into
//! normal form syllable by syllable.

use std::fmt;

use crate::hall::{binom2, FreeElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

pub type Word = Vec<Letter>;

/// Parses `a`, `b` and their inverses written `A`, `B` (or `a⁻¹`, `b⁻¹`).
pub fn parse_word(s: &str) -> Option<Word> {
    let s = s.replace("a⁻¹", "A").replace("b⁻¹", "B");
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        })
        .collect()
}

pub struct DisplayWord<'a>(pub &'a [Letter]);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

fn commutator_word(x: &[Letter], y: &[Letter]) -> Word {
    let mut w = inverse_word(x);
    w.extend(inverse_word(y));
    w.extend_from_slice(x);
    w.extend_from_slice(y);
    w
}

fn power_word(w: &[Letter], n: i64) -> Word {
    let base = if n < 0 { inverse_word(w) } else { w.to_vec() };
    base.iter()
        .copied()
        .cycle()
        .take(base.len() * n.unsigned_abs() as usize)
        .collect()
}

/// Spells out the normal form of `x` as a word in `a, b` and inverses, with
/// the basic commutators expanded by definition.
pub fn word_of(x: &FreeElt) -> Word {
    let a = [Letter::A];
    let b = [Letter::B];
    let c = commutator_word(&a, &b);
    let d = commutator_word(&c, &a);
    let e = commutator_word(&c, &b);
    let mut w = power_word(&a, x.r);
    w.extend(power_word(&b, x.s));
    w.extend(power_word(&c, x.t));
    w.extend(power_word(&d, x.u));
    w.extend(power_word(&e, x.v));
    w
}

/// Collects a word into normal form.
///
/// The collected prefix `a^r b^s [a,b]^t` plus the central exponents `u, v`
/// is kept as state. Each incoming letter is moved into position with the
/// single-syllable rules
///
/// ```text
/// [a,b]^t b^δ = b^δ [a,b]^t [a,b,b]^(tδ)
/// [a,b]^t a^δ = a^δ [a,b]^t [a,b,a]^(tδ)
/// b^s a^δ     = a^δ b^s [b^s, a^δ],
///   [b^s, a^δ] = [a,b]^(-sδ) [a,b,a]^(-s·C(δ,2)) [a,b,b]^(-δ·C(s,2))
/// ```
///
/// with `δ = ±1`, dropping everything of weight four.
pub fn collect_word(w: &[Letter]) -> FreeElt {
    let (mut r, mut s, mut t, mut u, mut v) = (0i64, 0i64, 0i64, 0i64, 0i64);
    for &l in w {
        match l {
            Letter::B | Letter::BInv => {
                let delta = if l == Letter::B { 1 } else { -1 };
                // push b^δ left across [a,b]^t
                v += t * delta;
                s += delta;
            }
            Letter::A | Letter::AInv => {
                let delta = if l == Letter::A { 1 } else { -1 };
                // across [a,b]^t
                u += t * delta;
                // across b^s; the new [a,b] power merges with [a,b]^t
                t -= s * delta;
                u -= s * binom2(delta);
                v -= delta * binom2(s);
                r += delta;
            }
        }
    }
    FreeElt::new(r, s, t, u, v)
}
