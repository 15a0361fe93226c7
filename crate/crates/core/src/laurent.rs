//! Sparse Laurent polynomials in one variable `t` with arbitrary-precision
//! integer coefficients.
//!
//! Besides ring arithmetic this module provides the bar involution
//! `t -> t^-1` and the coefficient-splitting rules used by the self-dual
//! solvers: given an antisymmetric `g` (that is `g + bar(g) = 0`), find `W`
//! with `W - bar(W) = g` subject to a side condition.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z[t, t^-1]`.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// map and structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

/// Side condition used to pick the unique solution of `W - bar(W) = g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitRule {
    /// Support in strictly positive exponents (Kazhdan-Lusztig degree condition).
    PositivePart,
    /// Non-negative coefficients and never both `t^i` and `t^-i` (tilting weights).
    NonCancel,
    /// Support in strictly negative exponents (stalks of intersection cohomology).
    NegativePart,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `t`
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// `coeff * t^exp`
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c.into());
        }
        p
    }

    /// `t - t^-1`, the quadratic-relation parameter of the Hecke algebra.
    pub fn t_minus_t_inv() -> Self {
        Self::from_terms([(1, 1), (-1, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// The bar involution `t -> t^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitution `t -> -t`.
    pub fn negate_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() })).collect(),
        }
    }

    /// `(-t)^k` for `k >= 0`.
    pub fn neg_t_pow(k: i64) -> Self {
        Self::monomial(if k.rem_euclid(2) == 0 { 1 } else { -1 }, k)
    }

    /// Multiplication by `(-1)^k`.
    pub fn signed(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// No exponent `i >= 0` with both `t^i` and `t^-i` present; in particular
    /// no constant term.
    pub fn is_noncancelling(&self) -> bool {
        !self.terms.contains_key(&0) && self.terms.keys().filter(|&&e| e > 0).all(|e| !self.terms.contains_key(&-e))
    }

    /// Support contained in `{1, 2, 3, ...}`.
    pub fn is_in_tzt(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 1)
    }

    /// `p + bar(p) == 0`
    pub fn is_antisymmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| *e != 0 && self.terms.get(&-e).is_some_and(|d| (c + d).is_zero()))
    }

    /// Solves `W - bar(W) = self` for `W` under `rule`.
    ///
    /// Fails with [`Error::SelfDualityViolated`] unless `self` is antisymmetric.
    pub fn split(&self, rule: SplitRule) -> Result<Self> {
        if !self.is_antisymmetric() {
            return Err(Error::SelfDualityViolated(format!("split of non-antisymmetric polynomial {self}")));
        }
        let positive = self.terms.range(1..);
        let terms = match rule {
            SplitRule::PositivePart => positive.map(|(e, c)| (*e, c.clone())).collect(),
            SplitRule::NegativePart => self.terms.range(..0).map(|(e, c)| (*e, c.clone())).collect(),
            SplitRule::NonCancel => {
                positive.map(|(e, c)| if c.is_positive() { (*e, c.clone()) } else { (-e, -c) }).collect()
            }
        };
        Ok(Self { terms })
    }

    /// Renders with the variable `var`, highest exponent first, e.g.
    /// `t^3 - 2t + t^-1`.
    pub fn display_in(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_owned();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                e => format!("{var}^{e}"),
            };
            if mono.is_empty() || !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('t'))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, &-c);
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter().rev() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in raw {
            let e: i64 = e.parse().map_err(|_| D::Error::custom(format!("bad exponent {e:?}")))?;
            let c: BigInt = c.parse().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            if p.terms.contains_key(&e) {
                return Err(D::Error::custom(format!("duplicate exponent {e}")));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn small_products() {
        let t = LaurentPoly::t();
        let one = LaurentPoly::one();
        assert_eq!(&(&t + &one) * &(&t - &one), p(&[(2, 1), (0, -1)]));
        let q = LaurentPoly::t_minus_t_inv();
        assert_eq!(&q * &q, p(&[(2, 1), (0, -2), (-2, 1)]));
        let x = p(&[(3, 4), (-1, -2)]);
        assert!((&x + &-&x).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p(&[(3, 1), (1, 1)]).bar(), p(&[(-3, 1), (-1, 1)]));
        assert_eq!(LaurentPoly::from(5).bar(), LaurentPoly::from(5));
        let a = LaurentPoly::t_minus_t_inv();
        assert_eq!(a.bar(), -&a);
    }

    #[test]
    fn predicates() {
        let x = p(&[(3, 1), (1, 1)]);
        assert!(x.is_noncancelling() && x.is_in_tzt());
        assert!(!p(&[(1, 1), (-1, 1)]).is_noncancelling());
        let a = LaurentPoly::t_minus_t_inv();
        assert!(a.is_antisymmetric());
        assert!(!a.is_nonneg());
        assert!(!LaurentPoly::one().is_noncancelling());
        assert!(LaurentPoly::zero().is_antisymmetric());
        assert!(!p(&[(1, 1), (-1, -2)]).is_antisymmetric());
    }

    #[test]
    fn split_examples() {
        for rule in [SplitRule::PositivePart, SplitRule::NonCancel] {
            assert!(LaurentPoly::zero().split(rule).unwrap().is_zero());
            let g = p(&[(3, 1), (1, 1), (-1, -1), (-3, -1)]);
            assert_eq!(g.split(rule).unwrap(), p(&[(3, 1), (1, 1)]));
            assert!(matches!(p(&[(1, 1), (-1, 1)]).split(rule), Err(Error::SelfDualityViolated(_))));
        }
        let g = p(&[(2, -3), (-2, 3), (1, 1), (-1, -1)]);
        assert_eq!(g.split(SplitRule::NonCancel).unwrap(), p(&[(-2, 3), (1, 1)]));
        assert_eq!(g.split(SplitRule::PositivePart).unwrap(), p(&[(2, -3), (1, 1)]));
        assert_eq!(g.split(SplitRule::NegativePart).unwrap(), p(&[(-2, 3), (-1, -1)]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(3, 1), (1, 1)]).to_string(), "t^3 + t");
        assert_eq!(p(&[(2, -1), (0, 2), (-1, -3)]).to_string(), "-t^2 + 2 - 3t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p(&[(1, 1), (0, 1)]).display_in('q'), "q + 1");
    }

    #[test]
    fn json_shape() {
        let x = p(&[(3, 1), (1, 1)]);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"3":"1","1":"1"}"#);
        let big: LaurentPoly = serde_json::from_str(r#"{"-2":"123456789012345678901234567890"}"#).unwrap();
        assert_eq!(big.coeff(-2).to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"x":"1"}"#).is_err());
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"1":"0.5"}"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, -5i64..=5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    fn arb_antisymmetric() -> impl Strategy<Value = LaurentPoly> {
        arb_poly().prop_map(|x| &x - &x.bar())
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn bar_is_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!(a.bar().bar(), a.clone());
        }

        #[test]
        fn split_inverts_antisymmetrization(g in arb_antisymmetric()) {
            for rule in [SplitRule::PositivePart, SplitRule::NonCancel, SplitRule::NegativePart] {
                let w = g.split(rule).unwrap();
                prop_assert_eq!(&w - &w.bar(), g.clone());
            }
            let nc = g.split(SplitRule::NonCancel).unwrap();
            prop_assert!(nc.is_nonneg() && nc.is_noncancelling());
            prop_assert!(g.split(SplitRule::PositivePart).unwrap().is_in_tzt());
            if g.terms().all(|(e, c)| e < 0 || !c.is_negative()) {
                prop_assert_eq!(nc, g.split(SplitRule::PositivePart).unwrap());
            }
        }

        #[test]
        fn json_roundtrip(a in arb_poly()) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), a);
        }
    }
}
