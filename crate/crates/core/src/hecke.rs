//! Classes in the Grothendieck group of a stratified flag variety, written
//! in the standard basis `[Delta_w]`, and the machinery acting on them:
//! R-polynomials, the duality map, the triangular self-dual solver and
//! Kazhdan-Lusztig polynomials.
//!
//! Normalization: `[nabla_y] = sum_{x <= y} r_{x,y}(t) [Delta_x]` with
//! `[nabla_s] = [Delta_s] + (t - t^-1)[Delta_e]`, which is the bar
//! involution `H_s -> H_s + (t - t^-1)` of the Hecke algebra in the
//! normalization `H_s^2 = 1 + (t^-1 - t) H_s`. In that normalization the
//! Kazhdan-Lusztig basis is `C_y = sum_x h_{x,y} H_x` with
//! `h_{x,y}(t) = t^{l(y)-l(x)} P_{x,y}(t^-2)`.
//!
//! The "thick" side refers to the opposite stratification (closure order
//! reversed), used for the dual IC classes. Its transition coefficients are
//! the transposed R-polynomials: `[nabla^_y] = sum_{x >= y} r_{y,x} [Delta^_x]`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use parking_lot::RwLock;
use serde_json::{Map, Value};

use crate::coxeter::{CoxeterSystem, Element, OrderIdeal, Side};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, SplitRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Standard,
    Costandard,
}

/// A class `sum_w V_w [Delta_w]` (or in the costandard basis). Zero
/// coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    basis: Basis,
    entries: BTreeMap<Element, LaurentPoly>,
}

impl Default for WeightVector {
    fn default() -> Self {
        Self::new(Basis::Standard)
    }
}

impl WeightVector {
    pub fn new(basis: Basis) -> Self {
        Self { basis, entries: BTreeMap::new() }
    }

    /// The basis vector `[Delta_w]`.
    pub fn unit(w: Element) -> Self {
        let mut v = Self::new(Basis::Standard);
        v.set(w, LaurentPoly::one());
        v
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn get(&self, w: Element) -> LaurentPoly {
        self.entries.get(&w).cloned().unwrap_or_default()
    }

    pub fn get_ref(&self, w: Element) -> Option<&LaurentPoly> {
        self.entries.get(&w)
    }

    pub fn set(&mut self, w: Element, p: LaurentPoly) {
        if p.is_zero() {
            self.entries.remove(&w);
        } else {
            self.entries.insert(w, p);
        }
    }

    pub fn add_to(&mut self, w: Element, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let mut cur = self.entries.remove(&w).unwrap_or_default();
        cur += p;
        self.set(w, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, &LaurentPoly)> {
        self.entries.iter().map(|(w, p)| (*w, p))
    }

    pub fn support(&self) -> Vec<Element> {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map(&self, mut f: impl FnMut(Element, &LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = Self::new(self.basis);
        for (w, p) in &self.entries {
            out.set(*w, f(*w, p));
        }
        out
    }

    /// Coefficientwise bar involution.
    pub fn bar(&self) -> Self {
        self.map(|_, p| p.bar())
    }

    /// JSON object `word -> laurent object`, keys in (length, ShortLex) order.
    pub fn to_json(&self, sys: &CoxeterSystem) -> Value {
        let mut keys = self.support();
        sys.sort_elements(&mut keys);
        let mut map = Map::new();
        for w in keys {
            map.insert(sys.format_word(w), serde_json::to_value(&self.entries[&w]).expect("serializable"));
        }
        Value::Object(map)
    }

    pub fn from_json(sys: &CoxeterSystem, value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Malformed("weight vector must be an object".into()))?;
        let mut v = Self::new(Basis::Standard);
        for (word, poly) in obj {
            let w = sys.parse_word(word)?;
            if sys.format_word(w) != *word {
                return Err(Error::Malformed(format!("non-normal word {word:?}")));
            }
            let p: LaurentPoly = serde_json::from_value(poly.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
            v.set(w, p);
        }
        Ok(v)
    }
}

/// Kazhdan-Lusztig engine over a shared Coxeter system.
///
/// R-polynomials and KL columns are memoized; the caches are safe to share
/// between threads. Cache writes are idempotent, so concurrent solves of
/// distinct columns are deterministic.
pub struct Hecke {
    sys: Arc<CoxeterSystem>,
    r_cache: RwLock<HashMap<(Element, Element), LaurentPoly>>,
    h_columns: RwLock<HashMap<Element, Arc<WeightVector>>>,
}

impl Hecke {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Self { sys, r_cache: RwLock::new(HashMap::new()), h_columns: RwLock::new(HashMap::new()) }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> Arc<CoxeterSystem> {
        self.sys.clone()
    }

    /// `r_{x,y}` with `[nabla_y] = sum_x r_{x,y} [Delta_x]`.
    pub fn r_poly(&self, x: Element, y: Element) -> LaurentPoly {
        let sys = &*self.sys;
        if x == y {
            return LaurentPoly::one();
        }
        if !sys.bruhat_leq(x, y) {
            return LaurentPoly::zero();
        }
        if let Some(p) = self.r_cache.read().get(&(x, y)) {
            return p.clone();
        }
        let s = sys.first_left_descent(y).expect("x < y forces y != e");
        let sy = sys.mul_gen(y, s, Side::Left);
        let sx = sys.mul_gen(x, s, Side::Left);
        let r = if sys.is_descent(x, s, Side::Left) {
            self.r_poly(sx, sy)
        } else {
            &self.r_poly(sx, sy) + &(&LaurentPoly::t_minus_t_inv() * &self.r_poly(x, sy))
        };
        self.r_cache.write().entry((x, y)).or_insert(r).clone()
    }

    /// The duality map `sum c_y [Delta_y] -> sum bar(c_y) [nabla_y]`,
    /// re-expanded in the standard basis.
    pub fn dual_class(&self, v: &WeightVector) -> WeightVector {
        let mut out = WeightVector::new(Basis::Standard);
        for (y, c) in v.iter() {
            let cb = c.bar();
            for x in self.sys.enumerate_ideal(y).iter() {
                let r = self.r_poly(x, y);
                out.add_to(x, &(&cb * &r));
            }
        }
        out
    }

    /// Duality map of the opposite stratification restricted to `ideal`:
    /// `result_x = sum_{y <= x} bar(c_y) r_{y,x}` for `x` in `ideal`.
    pub fn thick_dual_class(&self, v: &WeightVector, ideal: &OrderIdeal) -> WeightVector {
        let mut out = WeightVector::new(Basis::Standard);
        for (y, c) in v.iter() {
            let cb = c.bar();
            for x in ideal.iter() {
                if self.sys.bruhat_leq(y, x) {
                    out.add_to(x, &(&cb * &self.r_poly(y, x)));
                }
            }
        }
        out
    }

    /// Unique self-dual class with top coefficient `V_alpha = 1`, support in
    /// `[e, alpha]`, and lower coefficients obeying `rule`.
    ///
    /// Coefficients are found top-down in decreasing (length, ShortLex)
    /// order: `V_b - bar(V_b) = sum_{b < c <= alpha} bar(V_c) r_{b,c}`.
    pub fn selfdual_solve(&self, alpha: Element, ideal: &OrderIdeal, rule: SplitRule) -> Result<WeightVector> {
        let sys = &*self.sys;
        if !ideal.contains(alpha) {
            return Err(Error::Inconsistent(format!("{} is not in the ideal", sys.format_word(alpha))));
        }
        let mut v = WeightVector::unit(alpha);
        let mut solved: Vec<(Element, LaurentPoly)> = vec![(alpha, LaurentPoly::one())];
        for beta in ideal.iter().rev() {
            if beta == alpha || !sys.bruhat_leq(beta, alpha) {
                continue;
            }
            let mut g = LaurentPoly::zero();
            for (gamma, bar_v) in &solved {
                let r = self.r_poly(beta, *gamma);
                if !r.is_zero() {
                    g += &(bar_v * &r);
                }
            }
            let w = g.split(rule).map_err(|_| {
                Error::SelfDualityViolated(format!(
                    "equation at {} for top {} has non-antisymmetric right side {g}",
                    sys.format_word(beta),
                    sys.format_word(alpha)
                ))
            })?;
            if !w.is_zero() {
                solved.push((beta, w.bar()));
                v.set(beta, w);
            }
        }
        Ok(v)
    }

    /// Self-dual solve on the opposite stratification: top `alpha`, support
    /// in `{x in ideal : x >= alpha}`, processed in increasing order.
    pub fn thick_selfdual_solve(&self, alpha: Element, ideal: &OrderIdeal, rule: SplitRule) -> Result<WeightVector> {
        let sys = &*self.sys;
        if !ideal.contains(alpha) {
            return Err(Error::Inconsistent(format!("{} is not in the ideal", sys.format_word(alpha))));
        }
        let mut v = WeightVector::unit(alpha);
        let mut solved: Vec<(Element, LaurentPoly)> = vec![(alpha, LaurentPoly::one())];
        for gamma in ideal.iter() {
            if gamma == alpha || !sys.bruhat_leq(alpha, gamma) {
                continue;
            }
            let mut g = LaurentPoly::zero();
            for (beta, bar_v) in &solved {
                let r = self.r_poly(*beta, gamma);
                if !r.is_zero() {
                    g += &(bar_v * &r);
                }
            }
            let w = g.split(rule).map_err(|_| {
                Error::SelfDualityViolated(format!(
                    "dual equation at {} for top {} has non-antisymmetric right side {g}",
                    sys.format_word(gamma),
                    sys.format_word(alpha)
                ))
            })?;
            if !w.is_zero() {
                solved.push((gamma, w.bar()));
                v.set(gamma, w);
            }
        }
        Ok(v)
    }

    /// Column `{x : h_{x,y}}` of the Kazhdan-Lusztig basis element `C_y`.
    pub fn kl_column(&self, y: Element) -> Arc<WeightVector> {
        if let Some(c) = self.h_columns.read().get(&y) {
            return c.clone();
        }
        let ideal = self.sys.enumerate_ideal(y);
        let col = self
            .selfdual_solve(y, &ideal, SplitRule::PositivePart)
            .expect("the positive-part solve over a principal ideal is always consistent");
        self.h_columns.write().entry(y).or_insert_with(|| Arc::new(col)).clone()
    }

    /// `h_{x,y} = t^{l(y)-l(x)} P_{x,y}(t^-2)`.
    pub fn kl_h(&self, x: Element, y: Element) -> LaurentPoly {
        self.kl_column(y).get(x)
    }

    /// The Kazhdan-Lusztig polynomial `P_{x,y}` as a polynomial in `q`
    /// (exponents are powers of `q`).
    pub fn kl_p(&self, x: Element, y: Element) -> Result<LaurentPoly> {
        let sys = &*self.sys;
        let h = self.kl_h(x, y);
        let d = sys.length(y) as i64 - sys.length(x) as i64;
        let mut terms = Vec::with_capacity(h.num_terms());
        for (e, c) in h.terms() {
            let k = d - e;
            if k < 0 || k % 2 != 0 {
                return Err(Error::Inconsistent(format!(
                    "h({}, {}) = {h} has exponent {e} of the wrong parity",
                    sys.format_word(x),
                    sys.format_word(y)
                )));
            }
            terms.push((k / 2, c.clone()));
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    /// Coefficient of `t` in `h_{x,y}`.
    pub fn mu(&self, x: Element, y: Element) -> BigInt {
        self.kl_h(x, y).coeff(1)
    }

    /// Class of `IC_w` in the standard basis:
    /// `V_v = (-1)^{l(w)-l(v)} h_{v,w}(t^-1)`.
    pub fn ic_weight_vector(&self, w: Element, ideal: &OrderIdeal) -> WeightVector {
        let lw = self.sys.length(w) as i64;
        let col = self.kl_column(w);
        let mut v = WeightVector::new(Basis::Standard);
        for (x, h) in col.iter() {
            if ideal.contains(x) {
                v.set(x, h.bar().signed(lw - self.sys.length(x) as i64));
            }
        }
        v
    }

    /// Class of the IC sheaf of the stratum labelled `alpha` on the opposite
    /// stratification truncated to `ideal`, in its standard basis.
    pub fn dual_ic_vector(&self, alpha: Element, ideal: &OrderIdeal) -> Result<WeightVector> {
        self.thick_selfdual_solve(alpha, ideal, SplitRule::NegativePart)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(label: &str) -> Hecke {
        Hecke::new(Arc::new(CoxeterSystem::from_label(label).unwrap()))
    }

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn r_examples() {
        let h = setup("A2");
        let sys = h.system();
        let (e, s1, s1s2) = (sys.identity(), sys.parse_word("1").unwrap(), sys.parse_word("1,2").unwrap());
        assert!(h.r_poly(s1s2, s1s2).is_one());
        assert_eq!(h.r_poly(e, s1), LaurentPoly::t_minus_t_inv());
        let q = LaurentPoly::t_minus_t_inv();
        assert_eq!(h.r_poly(e, s1s2), &q * &q);
        assert!(h.r_poly(s1s2, s1).is_zero());
    }

    #[test]
    fn dual_class_examples() {
        let h = setup("A1");
        let sys = h.system();
        let (e, s) = (sys.identity(), sys.parse_word("1").unwrap());
        assert_eq!(h.dual_class(&WeightVector::unit(e)), WeightVector::unit(e));
        let d = h.dual_class(&WeightVector::unit(s));
        assert!(d.get(s).is_one());
        assert_eq!(d.get(e), LaurentPoly::t_minus_t_inv());
    }

    #[test]
    fn solver_examples() {
        let h = setup("A1");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        let (e, s) = (sys.identity(), sys.parse_word("1").unwrap());
        assert_eq!(h.selfdual_solve(e, &all, SplitRule::NonCancel).unwrap(), WeightVector::unit(e));
        let v = h.selfdual_solve(s, &all, SplitRule::NonCancel).unwrap();
        assert_eq!(v.get(e), LaurentPoly::t());

        let h = setup("A2");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        let w = |s: &str| sys.parse_word(s).unwrap();
        for rule in [SplitRule::NonCancel, SplitRule::PositivePart] {
            let v = h.selfdual_solve(w("1,2"), &all, rule).unwrap();
            assert_eq!(v.len(), 4);
            assert!(v.get(w("1,2")).is_one());
            assert_eq!(v.get(w("1")), LaurentPoly::t());
            assert_eq!(v.get(w("2")), LaurentPoly::t());
            assert_eq!(v.get(w("e")), p(&[(2, 1)]));
            assert_eq!(h.dual_class(&v), v);
        }
        assert!(h.selfdual_solve(w("1"), &sys.enumerate_ideal(w("2")), SplitRule::NonCancel).is_err());
    }

    #[test]
    fn kl_examples() {
        let h = setup("A3");
        let sys = h.system();
        let w = |s: &str| sys.parse_word(s).unwrap();
        let (x, y) = (w("2"), w("2,1,3,2"));
        assert!(h.kl_h(y, y).is_one());
        assert_eq!(h.kl_h(w("e"), w("3")), LaurentPoly::t());
        assert_eq!(h.kl_h(x, y), p(&[(3, 1), (1, 1)]));
        assert_eq!(h.kl_p(x, y).unwrap(), p(&[(0, 1), (1, 1)]));
        assert_eq!(h.mu(x, y), BigInt::from(1));
        assert!(h.kl_p(y, y).unwrap().is_one());
        assert!(h.kl_h(y, x).is_zero());
    }

    #[test]
    fn rank_two_kl_polynomials_are_trivial() {
        for label in ["A2", "B2", "G2"] {
            let h = setup(label);
            let sys = h.system();
            let all = sys.enumerate_all().unwrap();
            for y in all.iter() {
                for x in all.iter().filter(|&x| sys.bruhat_leq(x, y)) {
                    assert!(h.kl_p(x, y).unwrap().is_one(), "{label}");
                }
            }
        }
    }

    #[test]
    fn ic_examples() {
        let h = setup("A1");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        let (e, s) = (sys.identity(), sys.parse_word("1").unwrap());
        assert_eq!(h.ic_weight_vector(e, &all), WeightVector::unit(e));
        let v = h.ic_weight_vector(s, &all);
        assert_eq!(v.get(e), p(&[(-1, -1)]));
        assert!(v.get(s).is_one());

        let h = setup("A2");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        for w in all.iter() {
            let v = h.ic_weight_vector(w, &all);
            assert_eq!(h.dual_class(&v), v);
            assert_eq!(h.selfdual_solve(w, &all, SplitRule::NegativePart).unwrap(), v);
        }
    }

    #[test]
    fn dual_ic_in_a1() {
        let h = setup("A1");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        let (e, s) = (sys.identity(), sys.parse_word("1").unwrap());
        let v = h.dual_ic_vector(e, &all).unwrap();
        assert_eq!(v.get(s), p(&[(-1, -1)]));
        assert!(v.get(e).is_one());
        assert_eq!(h.thick_dual_class(&v, &all), v);
    }

    #[test]
    fn weight_vector_json() {
        let h = setup("A2");
        let sys = h.system();
        let all = sys.enumerate_all().unwrap();
        let v = h.selfdual_solve(sys.parse_word("1,2,1").unwrap(), &all, SplitRule::NonCancel).unwrap();
        let j = v.to_json(sys);
        let keys: Vec<_> = j.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["e", "1", "2", "1,2", "2,1", "1,2,1"]);
        assert_eq!(j["e"], serde_json::json!({"3": "1"}));
        assert_eq!(WeightVector::from_json(sys, &j).unwrap(), v);
        assert!(WeightVector::from_json(sys, &serde_json::json!({"2,1,2": {"0": "1"}})).is_err());
    }
}
