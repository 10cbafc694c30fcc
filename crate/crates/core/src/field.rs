//! Imaginary quadratic fields `K = ℚ(√d)` and their elements `a + b·ω`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat, int, squarefree_core, Rat};
use crate::error::{Error, Result};

/// `K = ℚ(√d)` with `d < 0` squarefree and integral generator `ω`
/// (`ω = (1+√d)/2` when `d ≡ 1 mod 4`, else `ω = √d`).
///
/// `ω` satisfies `ω² = t·ω − n` with `t = tr ω`, `n = N(ω)`. The embedding
/// into `ℂ` sends `ω` to the root with positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
    t: i64,
    n: i64,
}

impl QuadField {
    /// Accepts either the squarefree `d` or a fundamental discriminant
    /// (e.g. `-4` for `ℚ(i)`).
    pub fn new(field_disc: i64) -> Result<Self> {
        if field_disc >= 0 {
            return Err(Error::Parse(format!("field_disc must be negative, got {field_disc}")));
        }
        let d = squarefree_core(field_disc);
        let ok = field_disc == d || (field_disc == 4 * d && d.rem_euclid(4) != 1);
        if !ok {
            return Err(Error::Parse(format!(
                "field_disc {field_disc} is neither squarefree nor a fundamental discriminant"
            )));
        }
        let (t, n) = if d.rem_euclid(4) == 1 { (1, (1 - d) / 4) } else { (0, -d) };
        Ok(QuadField { d, t, n })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn omega_trace(&self) -> i64 {
        self.t
    }

    pub fn omega_norm(&self) -> i64 {
        self.n
    }

    /// Discriminant of `O_K`.
    pub fn discriminant(&self) -> i64 {
        if self.t == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn omega(&self) -> KElem {
        KElem::new(Rat::zero(), Rat::one())
    }

    pub fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        let bd = &x.b * &y.b;
        KElem {
            a: &x.a * &y.a - &bd * int(self.n),
            b: &x.a * &y.b + &x.b * &y.a + bd * int(self.t),
        }
    }

    pub fn conj(&self, x: &KElem) -> KElem {
        KElem { a: &x.a + &x.b * int(self.t), b: -x.b.clone() }
    }

    pub fn trace(&self, x: &KElem) -> Rat {
        &x.a * int(2) + &x.b * int(self.t)
    }

    pub fn norm(&self, x: &KElem) -> Rat {
        &x.a * &x.a + &x.a * &x.b * int(self.t) + &x.b * &x.b * int(self.n)
    }

    pub fn inv(&self, x: &KElem) -> Option<KElem> {
        let nm = self.norm(x);
        if nm.is_zero() {
            return None;
        }
        let c = self.conj(x);
        Some(KElem { a: c.a / &nm, b: c.b / nm })
    }

    pub fn is_integral(&self, x: &KElem) -> bool {
        x.a.is_integer() && x.b.is_integer()
    }

    /// Real and imaginary parts of `ω` under the fixed embedding, as
    /// `(t/2, √(4n − t²)/2)`; the second is returned squared.
    pub fn omega_embedding(&self) -> (Rat, Rat) {
        (Rat::new(self.t.into(), 2.into()), Rat::new((4 * self.n - self.t * self.t).into(), 4.into()))
    }

    /// Writes a unit of `O_K` as `e(k/w)`; returns `(k, w)`.
    pub fn unit_angle(&self, u: &KElem) -> Option<(u32, u32)> {
        let (gen, w) = match self.d {
            -1 => (self.omega(), 4u32),
            // ω = (1+√−3)/2 = e(1/6)
            -3 => (self.omega(), 6u32),
            _ => (KElem::from_rat(-Rat::one()), 2u32),
        };
        let mut p = KElem::one();
        for k in 0..w {
            if &p == u {
                return Some((k, w));
            }
            p = self.mul(&p, &gen);
        }
        None
    }

    pub fn is_unit(&self, u: &KElem) -> bool {
        self.is_integral(u) && self.norm(u) == Rat::one()
    }
}

/// Element `a + b·ω` of an imaginary quadratic field (the field is carried
/// separately). Case 1 values use `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElem {
    pub a: Rat,
    pub b: Rat,
}

impl KElem {
    pub fn new(a: Rat, b: Rat) -> Self {
        KElem { a, b }
    }

    pub fn from_rat(a: Rat) -> Self {
        KElem { a, b: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, o: &KElem) -> KElem {
        KElem { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        KElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> KElem {
        KElem { a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn scale(&self, s: &Rat) -> KElem {
        KElem { a: &self.a * s, b: &self.b * s }
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rat(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}w", fmt_rat(&self.b))
        } else {
            let sign = if self.b.is_negative() { "" } else { "+" };
            write!(f, "{}{}{}w", fmt_rat(&self.a), sign, fmt_rat(&self.b))
        }
    }
}

/// Parses the textual form produced by `Display` (`a`, `bw`, `a+bw`).
pub fn parse_kelem(s: &str) -> Result<KElem> {
    let s = s.trim();
    let parse = crate::arith::parse_rat;
    if let Some(stripped) = s.strip_suffix('w') {
        // split at the last sign that is not the leading one
        let cut = stripped
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !stripped[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        match cut {
            Some(i) => Ok(KElem::new(parse(&stripped[..i])?, parse(stripped[i..].trim_start_matches('+'))?)),
            None => Ok(KElem::new(Rat::zero(), parse(stripped)?)),
        }
    } else {
        Ok(KElem::from_rat(parse(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn gaussian_and_eisenstein_arithmetic() {
        let gi = QuadField::new(-1).unwrap();
        let i = gi.omega();
        assert_eq!(gi.mul(&i, &i), KElem::from_rat(int(-1)));
        assert_eq!(gi.unit_angle(&i), Some((1, 4)));
        let eis = QuadField::new(-3).unwrap();
        let w = eis.omega();
        // ω² = ω − 1
        assert_eq!(eis.mul(&w, &w), KElem::new(int(-1), int(1)));
        assert_eq!(eis.norm(&w), int(1));
        assert_eq!(eis.unit_angle(&eis.mul(&w, &w)), Some((2, 6)));
        assert_eq!(QuadField::new(-4).unwrap(), gi);
        assert!(QuadField::new(-12).is_err());
        let x = KElem::new(rat(1, 2), int(3));
        assert_eq!(eis.mul(&x, &eis.inv(&x).unwrap()), KElem::one());
    }

    #[test]
    fn kelem_text_roundtrip() {
        for s in ["3", "-1/2", "2w", "1-3/4w", "-1/3+2w"] {
            assert_eq!(parse_kelem(s).unwrap().to_string(), s);
        }
    }
}
