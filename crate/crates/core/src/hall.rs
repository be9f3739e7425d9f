//! Exact arithmetic in the free nilpotent group of class three on two
//! generators `a`, `b`.
//!
//! Every element has a unique normal form
//!
//! ```text
//! a^r b^s [a,b]^t [a,b,a]^u [a,b,b]^v
//! ```
//!
//! with `[x,y] = x^-1 y^-1 x y` and left-normed `[x,y,z] = [[x,y],z]`. The
//! weight-three commutators `[a,b,a]` and `[a,b,b]` are central, and every
//! commutator of weight four is trivial.

use std::fmt;

/// `m(m-1)/2`, defined for every integer `m`.
pub fn binom2(m: i64) -> i64 {
    // m(m-1) is always even
    m * (m - 1) / 2
}

fn binom3(m: i64) -> i64 {
    m * (m - 1) * (m - 2) / 6
}

/// An element of the free class-3 group on `a`, `b`, stored by its normal-form
/// exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeElt {
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub u: i64,
    pub v: i64,
}

impl FreeElt {
    pub const IDENTITY: FreeElt = FreeElt::new(0, 0, 0, 0, 0);
    /// The generator `a`.
    pub const A: FreeElt = FreeElt::new(1, 0, 0, 0, 0);
    /// The generator `b`.
    pub const B: FreeElt = FreeElt::new(0, 1, 0, 0, 0);
    /// `[a,b]`.
    pub const C: FreeElt = FreeElt::new(0, 0, 1, 0, 0);
    /// `[a,b,a]`.
    pub const D: FreeElt = FreeElt::new(0, 0, 0, 1, 0);
    /// `[a,b,b]`.
    pub const E: FreeElt = FreeElt::new(0, 0, 0, 0, 1);

    pub const fn new(r: i64, s: i64, t: i64, u: i64, v: i64) -> Self {
        FreeElt { r, s, t, u, v }
    }

    /// `[a,b]^t [a,b,a]^u [a,b,b]^v`.
    pub const fn commutator_block(t: i64, u: i64, v: i64) -> Self {
        FreeElt::new(0, 0, t, u, v)
    }

    pub fn coords(&self) -> [i64; 5] {
        [self.r, self.s, self.t, self.u, self.v]
    }

    /// The `([a,b], [a,b,a], [a,b,b])` exponents.
    pub fn comm_part(&self) -> [i64; 3] {
        [self.t, self.u, self.v]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// True when the element lies in the derived subgroup (`r = s = 0`).
    pub fn in_derived_subgroup(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    /// Normal form of the product `self * other`.
    pub fn mul(&self, other: &FreeElt) -> FreeElt {
        let (r1, s1, t1) = (self.r, self.s, self.t);
        let (r2, s2) = (other.r, other.s);
        // Move a^r2 left across [a,b]^t1 and b^s1, then b^s2 across the
        // accumulated [a,b] power.
        let t_mid = t1 - r2 * s1;
        FreeElt {
            r: r1 + r2,
            s: s1 + s2,
            t: t_mid + other.t,
            u: self.u + other.u + t1 * r2 - s1 * binom2(r2),
            v: self.v + other.v - r2 * binom2(s1) + t_mid * s2,
        }
    }

    /// `self^n` for any integer `n`.
    ///
    /// The normal-form exponents of `x^n` are integer-valued polynomials of
    /// degree at most three in `n`, so they are recovered exactly from
    /// `x^0 .. x^3` by Newton interpolation.
    pub fn pow(&self, n: i64) -> FreeElt {
        let f0 = [0i64; 5];
        let x1 = *self;
        let x2 = x1.mul(&x1);
        let x3 = x2.mul(&x1);
        let (f1, f2, f3) = (x1.coords(), x2.coords(), x3.coords());
        let (c1, c2, c3) = (n, binom2(n), binom3(n));
        let mut out = [0i64; 5];
        for i in 0..5 {
            let d1 = f1[i] - f0[i];
            let d2 = f2[i] - 2 * f1[i] + f0[i];
            let d3 = f3[i] - 3 * f2[i] + 3 * f1[i] - f0[i];
            out[i] = f0[i] + c1 * d1 + c2 * d2 + c3 * d3;
        }
        FreeElt::new(out[0], out[1], out[2], out[3], out[4])
    }

    pub fn inverse(&self) -> FreeElt {
        self.pow(-1)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &FreeElt) -> FreeElt {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// `self^by = by^-1 self by`.
    pub fn conjugate(&self, by: &FreeElt) -> FreeElt {
        by.inverse().mul(self).mul(by)
    }
}

impl fmt::Display for FreeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_normal_form(f, &self.coords())
    }
}

/// Writes `a^r b^s [a,b]^t [a,b,a]^u [a,b,b]^v`, omitting zero exponents.
pub(crate) fn write_normal_form(f: &mut dyn fmt::Write, c: &[i64; 5]) -> fmt::Result {
    const NAMES: [&str; 5] = ["a", "b", "[a,b]", "[a,b,a]", "[a,b,b]"];
    let mut first = true;
    for (name, &e) in NAMES.iter().zip(c) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char(' ')?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    if first {
        f.write_char('e')?;
    }
    Ok(())
}
