//! Admissible exponents, tested in exact rational arithmetic.

use crate::error::{Error, Result};
use num_rational::Rational64 as Q;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// An exponent in [1, ∞], stored through its reciprocal so that ∞ is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    inv: (i64, i64),
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent { inv: (0, 1) };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::config(format!("exponent {num}/{den} must be positive")));
        }
        let inv = Q::new(den, num);
        Ok(Exponent { inv: (*inv.numer(), *inv.denom()) })
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::new(n, 1)
    }

    /// 1/q exactly (0 for q = ∞).
    pub fn reciprocal(&self) -> Q {
        Q::new(self.inv.0, self.inv.1)
    }

    pub fn is_infinite(&self) -> bool {
        self.inv.0 == 0
    }

    pub fn value(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.inv.1 as f64 / self.inv.0 as f64
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            return write!(f, "inf");
        }
        let q = self.reciprocal().recip();
        if *q.denom() == 1 {
            write!(f, "{}", q.numer())
        } else {
            write!(f, "{}/{}", q.numer(), q.denom())
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, integers and fractions `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::INFINITY);
        }
        let bad = || Error::config(format!("cannot parse exponent {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => Exponent::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Exponent::integer(s.parse().map_err(|_| bad())?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Schrodinger,
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub q: Exponent,
    pub r: Exponent,
    pub family: Family,
    /// Regularity, wave pairs only.
    pub s: Option<(i64, i64)>,
}

impl AdmissiblePair {
    pub fn schrodinger(q: Exponent, r: Exponent) -> Self {
        AdmissiblePair { q, r, family: Family::Schrodinger, s: None }
    }

    pub fn wave(q: Exponent, r: Exponent, s_num: i64, s_den: i64) -> Self {
        let s = Q::new(s_num, s_den);
        AdmissiblePair { q, r, family: Family::Wave, s: Some((*s.numer(), *s.denom())) }
    }

    pub fn s_value(&self) -> f64 {
        self.s.map_or(0.0, |(a, b)| a as f64 / b as f64)
    }
}

/// Verdict plus the failed relation when the pair is not admissible.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleCheck {
    pub admissible: bool,
    pub reason: Option<String>,
}

/// Schrödinger in R⁴: 2/q = 4(1/2 − 1/r). Wave: 2/q ≤ 3(1/2 − 1/r) and
/// s = 4(1/2 − 1/r) − 1/q. Both need q, r ∈ [2, ∞].
pub fn admissible_pair_check(pair: &AdmissiblePair) -> AdmissibleCheck {
    let half = Q::new(1, 2);
    let (iq, ir) = (pair.q.reciprocal(), pair.r.reciprocal());
    let fail = |m: String| AdmissibleCheck { admissible: false, reason: Some(m) };
    if iq > half || ir > half {
        return fail(format!("exponents (q, r) = ({}, {}) outside [2, ∞]", pair.q, pair.r));
    }
    let gap = half - ir;
    match pair.family {
        Family::Schrodinger => {
            let lhs = Q::from_integer(2) * iq;
            let rhs = Q::from_integer(4) * gap;
            if lhs != rhs {
                return fail(format!("2/q = {lhs} but 4(1/2 − 1/r) = {rhs}"));
            }
        }
        Family::Wave => {
            let lhs = Q::from_integer(2) * iq;
            let rhs = Q::from_integer(3) * gap;
            if lhs > rhs {
                return fail(format!("2/q = {lhs} exceeds 3(1/2 − 1/r) = {rhs}"));
            }
            let want = Q::from_integer(4) * gap - iq;
            match pair.s.map(|(a, b)| Q::new(a, b)) {
                Some(s) if s == want => {}
                Some(s) => return fail(format!("s = {s} but 4(1/2 − 1/r) − 1/q = {want}")),
                None => return fail("wave pair needs a regularity s".into()),
            }
        }
    }
    AdmissibleCheck { admissible: true, reason: None }
}

/// The pairs the scans use: (∞, 2), (4, 8/3) and the endpoint (2, 4) for
/// Schrödinger, and (4, 4) with s = 3/4 for the wave equation.
pub fn canonical_pairs() -> Vec<AdmissiblePair> {
    let e = |s: &str| s.parse::<Exponent>().unwrap();
    vec![
        AdmissiblePair::schrodinger(Exponent::INFINITY, e("2")),
        AdmissiblePair::schrodinger(e("4"), e("8/3")),
        AdmissiblePair::schrodinger(e("2"), e("4")),
        AdmissiblePair::wave(e("4"), e("4"), 3, 4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!(admissible_pair_check(&AdmissiblePair::schrodinger(e("2"), e("4"))).admissible);
        assert!(admissible_pair_check(&AdmissiblePair::schrodinger(e("inf"), e("2"))).admissible);
        assert!(admissible_pair_check(&AdmissiblePair::schrodinger(e("4"), e("8/3"))).admissible);
        assert!(admissible_pair_check(&AdmissiblePair::wave(e("4"), e("4"), 3, 4)).admissible);
        for p in canonical_pairs() {
            assert!(admissible_pair_check(&p).admissible, "{p:?}");
        }
    }

    #[test]
    fn rejections() {
        let c = admissible_pair_check(&AdmissiblePair::schrodinger(e("3"), e("4")));
        assert!(!c.admissible && c.reason.unwrap().contains("2/q"));
        assert!(!admissible_pair_check(&AdmissiblePair::schrodinger(e("1"), e("4"))).admissible);
        assert!(!admissible_pair_check(&AdmissiblePair::wave(e("4"), e("4"), 1, 2)).admissible);
        // 2/2 = 1 > 3/4: outside the wave range
        assert!(!admissible_pair_check(&AdmissiblePair::wave(e("2"), e("4"), 1, 2)).admissible);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(e("8/3").to_string(), "8/3");
        assert_eq!(e("16/6"), e("8/3"));
        assert_eq!(e("inf").to_string(), "inf");
        assert!((e("8/3").value() - 8.0 / 3.0).abs() < 1e-15);
        assert!("0".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }

    proptest! {
        // Every r ∈ [2, ∞] has exactly one Schrödinger partner q, 1/q = 2(1/2 − 1/r);
        // it lies in [2, ∞] once 1/r ≥ 1/4.
        #[test]
        fn schrodinger_partner(a in 1i64..40, b in 1i64..40) {
            let ir = Q::new(a.min(b), 2 * a.max(b));
            prop_assume!(ir >= Q::new(1, 4));
            let r = Exponent::new(*ir.denom(), *ir.numer()).unwrap();
            let iq = Q::from_integer(2) * (Q::new(1, 2) - ir);
            let q = if *iq.numer() == 0 { Exponent::INFINITY } else { Exponent::new(*iq.denom(), *iq.numer()).unwrap() };
            prop_assert!(admissible_pair_check(&AdmissiblePair::schrodinger(q, r)).admissible);
        }
    }
}
