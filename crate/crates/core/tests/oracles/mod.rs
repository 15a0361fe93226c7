//! Reference implementations independent of the library algorithms they
//! check.
//!
//! * `PermHecke` builds the Kazhdan-Lusztig basis of the Hecke algebra of
//!   `S_n` by brute force on permutations, multiplying out
//!   `C_s C_w = C_{sw} + sum_z mu(z,w) C_z`; no r-polynomials and no
//!   reflection representation are involved.
//! * `subword_lower_set` lists everything below `y` in Bruhat order as the
//!   set of products of subwords of a reduced word of `y`; only group
//!   multiplication is borrowed from the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use tilting_core::{CoxeterSystem, Element, LaurentPoly};

/// Laurent polynomial in `v` with `i64` coefficients, zero terms removed.
pub type Poly = BTreeMap<i64, i64>;

fn add_into(acc: &mut Poly, p: &Poly, shift: i64, scale: i64) {
    for (&e, &c) in p {
        let slot = acc.entry(e + shift).or_insert(0);
        *slot += c * scale;
        if *slot == 0 {
            acc.remove(&(e + shift));
        }
    }
}

pub fn to_laurent(p: &Poly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().map(|(&e, &c)| (e, c)))
}

/// Permutation in one-line notation on `0..n`.
pub type Perm = Vec<u8>;

pub fn inversions(p: &Perm) -> usize {
    let mut n = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                n += 1;
            }
        }
    }
    n
}

/// `s_i o p`: swaps the values `i` and `i + 1`.
pub fn left_mul(i: usize, p: &Perm) -> Perm {
    p.iter()
        .map(|&x| match x as usize {
            v if v == i => (i + 1) as u8,
            v if v == i + 1 => i as u8,
            _ => x,
        })
        .collect()
}

/// `s_{a_1} ... s_{a_k}` as a permutation.
pub fn perm_of_word(n: usize, word: &[usize]) -> Perm {
    let mut p: Perm = (0..n as u8).collect();
    for &a in word.iter().rev() {
        p = left_mul(a, &p);
    }
    p
}

/// Element of the Hecke algebra in the standard basis `H_x`.
type HeckeElem = HashMap<Perm, Poly>;

pub struct PermHecke {
    pub n: usize,
    /// `C_w = sum_x h[w][x] H_x`.
    pub h: HashMap<Perm, HeckeElem>,
}

impl PermHecke {
    pub fn new(n: usize) -> Self {
        let id: Perm = (0..n as u8).collect();
        let mut by_len: Vec<Vec<Perm>> = vec![vec![id.clone()]];
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        loop {
            let mut next = Vec::new();
            for p in by_len.last().unwrap() {
                for i in 0..n - 1 {
                    let q = left_mul(i, p);
                    if inversions(&q) > inversions(p) && seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            by_len.push(next);
        }

        let mut h: HashMap<Perm, HeckeElem> = HashMap::new();
        h.insert(id.clone(), HashMap::from([(id.clone(), Poly::from([(0, 1)]))]));
        for layer in by_len.iter().skip(1) {
            for w in layer {
                let s = (0..n - 1).find(|&i| inversions(&left_mul(i, w)) < inversions(w)).unwrap();
                let sw = left_mul(s, w);
                let mut prod = Self::mul_cs(s, &h[&sw]);
                for (z, col) in &h {
                    if inversions(z) >= inversions(&sw) || inversions(&left_mul(s, z)) > inversions(z) {
                        continue;
                    }
                    let mu = h[&sw].get(z).and_then(|p| p.get(&1)).copied().unwrap_or(0);
                    if mu != 0 {
                        for (x, p) in col {
                            let slot = prod.entry(x.clone()).or_default();
                            add_into(slot, p, 0, -mu);
                        }
                    }
                }
                prod.retain(|_, p| !p.is_empty());
                h.insert(w.clone(), prod);
            }
        }
        PermHecke { n, h }
    }

    /// `(H_s + v) * X` with `H_s H_x = H_{sx}` if `sx > x`, else
    /// `H_{sx} + (v^-1 - v) H_x`.
    fn mul_cs(s: usize, x: &HeckeElem) -> HeckeElem {
        let mut out: HeckeElem = HashMap::new();
        for (p, c) in x {
            let sp = left_mul(s, p);
            add_into(out.entry(sp.clone()).or_default(), c, 0, 1);
            if inversions(&sp) < inversions(p) {
                add_into(out.entry(p.clone()).or_default(), c, -1, 1);
                add_into(out.entry(p.clone()).or_default(), c, 1, -1);
            }
            add_into(out.entry(p.clone()).or_default(), c, 1, 1);
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// `h_{x,w}` in the normalisation `h_{e,s} = v`.
    pub fn h(&self, x: &Perm, w: &Perm) -> Poly {
        self.h[w].get(x).cloned().unwrap_or_default()
    }

    /// `P_{x,w}(q)` recovered from `h_{x,w} = v^{l(w)-l(x)} P(v^-2)`.
    pub fn p(&self, x: &Perm, w: &Perm) -> Poly {
        let d = inversions(w) as i64 - inversions(x) as i64;
        self.h(x, w).into_iter().map(|(e, c)| ((d - e) / 2, c)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Perm> {
        self.h.keys()
    }
}

/// Elements below `y` in Bruhat order, by the subword property.
pub fn subword_lower_set(sys: &CoxeterSystem, y: Element) -> HashSet<Element> {
    let word = sys.word(y);
    let mut out = HashSet::new();
    for mask in 0u64..(1 << word.len()) {
        let sub: Vec<usize> = word.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &i)| i).collect();
        out.insert(sys.from_word(&sub).unwrap());
    }
    out
}
