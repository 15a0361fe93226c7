use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use super::cartan::{is_finite_type, CoxeterDescriptor};
use crate::error::{Error, Result};

/// Interned group element. Two elements of the same system are equal iff
/// their identifiers are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u32);

impl Element {
    pub fn id(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug)]
struct ElementData {
    /// Column `j` is `w(alpha_j)` in the simple-root basis, row-major.
    matrix: Box<[i64]>,
    inverse: Box<[i64]>,
    /// ShortLex-minimal reduced word, internal indices.
    word: Box<[u8]>,
    left_descents: u64,
    right_descents: u64,
}

#[derive(Debug)]
struct Entry {
    data: Arc<ElementData>,
    left: Box<[Option<Element>]>,
    right: Box<[Option<Element>]>,
}

#[derive(Debug, Default)]
struct Registry {
    index: HashMap<Box<[i64]>, Element>,
    entries: Vec<Entry>,
}

/// A Coxeter system realized in the reflection representation of a
/// generalized Cartan matrix: `s_i(alpha_j) = alpha_j - c_ij alpha_i`.
///
/// Elements are interned by their (exact integer) representation matrix.
/// Each element caches its ShortLex-minimal reduced word, its length and
/// both descent sets. The registry can be shared between threads; lookups
/// take a read lock and insertions are serialized behind the write lock.
pub struct CoxeterSystem {
    descriptor: CoxeterDescriptor,
    cartan: Vec<Vec<i64>>,
    rank: usize,
    finite: bool,
    generators: Vec<Box<[i64]>>,
    registry: RwLock<Registry>,
    bruhat_memo: RwLock<HashMap<(Element, Element), bool>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("descriptor", &self.descriptor)
            .field("cartan", &self.cartan)
            .field("registered", &self.registry.read().entries.len())
            .finish()
    }
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Box<[i64]> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out.into_boxed_slice()
}

fn identity_matrix(n: usize) -> Box<[i64]> {
    let mut m = vec![0i64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m.into_boxed_slice()
}

/// Bit `j` set iff column `j` of `m` is a negative root.
fn negative_columns(m: &[i64], n: usize) -> u64 {
    let mut mask = 0u64;
    for j in 0..n {
        if (0..n).any(|i| m[i * n + j] < 0) {
            mask |= 1 << j;
        }
    }
    mask
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

impl CoxeterSystem {
    pub fn new(descriptor: CoxeterDescriptor) -> Result<Self> {
        let cartan = descriptor.cartan_matrix()?;
        let rank = cartan.len();
        let finite = is_finite_type(&cartan);
        let generators = (0..rank)
            .map(|i| {
                let mut s = identity_matrix(rank);
                for j in 0..rank {
                    s[i * rank + j] -= cartan[i][j];
                }
                s
            })
            .collect();
        let sys = Self {
            descriptor,
            cartan,
            rank,
            finite,
            generators,
            registry: RwLock::new(Registry::default()),
            bruhat_memo: RwLock::new(HashMap::new()),
        };
        {
            let mut reg = sys.registry.write();
            let id = identity_matrix(rank);
            sys.intern_locked(&mut reg, id.clone(), id);
        }
        Ok(sys)
    }

    /// Shorthand for parsing a type label and building the system.
    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(label.parse()?)
    }

    pub fn descriptor(&self) -> &CoxeterDescriptor {
        &self.descriptor
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Label of internal generator index 0 in words (1 for finite types).
    pub fn first_generator(&self) -> usize {
        self.descriptor.first_generator()
    }

    pub fn num_registered(&self) -> usize {
        self.registry.read().entries.len()
    }

    pub fn identity(&self) -> Element {
        Element(0)
    }

    fn data(&self, w: Element) -> Arc<ElementData> {
        self.registry.read().entries[w.0 as usize].data.clone()
    }

    fn check_gen(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange { index: i as i64, rank: self.rank })
        }
    }

    pub fn generator(&self, i: usize) -> Result<Element> {
        self.check_gen(i)?;
        Ok(self.mul_gen(self.identity(), i, Side::Right))
    }

    fn intern_locked(&self, reg: &mut Registry, matrix: Box<[i64]>, inverse: Box<[i64]>) -> Element {
        if let Some(&e) = reg.index.get(&matrix) {
            return e;
        }
        let n = self.rank;
        let left_descents = negative_columns(&inverse, n);
        let right_descents = negative_columns(&matrix, n);
        let word: Box<[u8]> = if left_descents == 0 {
            Box::new([])
        } else {
            // The ShortLex-minimal word starts with the least left descent.
            let d = left_descents.trailing_zeros() as usize;
            let sm = mat_mul(&self.generators[d], &matrix, n);
            let si = mat_mul(&inverse, &self.generators[d], n);
            let rest = self.intern_locked(reg, sm, si);
            let mut w = Vec::with_capacity(reg.entries[rest.0 as usize].data.word.len() + 1);
            w.push(d as u8);
            w.extend_from_slice(&reg.entries[rest.0 as usize].data.word);
            w.into_boxed_slice()
        };
        let e = Element(reg.entries.len() as u32);
        reg.index.insert(matrix.clone(), e);
        reg.entries.push(Entry {
            data: Arc::new(ElementData { matrix, inverse, word, left_descents, right_descents }),
            left: vec![None; n].into_boxed_slice(),
            right: vec![None; n].into_boxed_slice(),
        });
        e
    }

    /// `w * s_i` or `s_i * w`; `i` must be a valid generator index.
    pub(crate) fn mul_gen(&self, w: Element, i: usize, side: Side) -> Element {
        {
            let reg = self.registry.read();
            let entry = &reg.entries[w.0 as usize];
            let cached = match side {
                Side::Left => entry.left[i],
                Side::Right => entry.right[i],
            };
            if let Some(x) = cached {
                return x;
            }
        }
        let d = self.data(w);
        let n = self.rank;
        let s = &self.generators[i];
        let (m, inv) = match side {
            Side::Right => (mat_mul(&d.matrix, s, n), mat_mul(s, &d.inverse, n)),
            Side::Left => (mat_mul(s, &d.matrix, n), mat_mul(&d.inverse, s, n)),
        };
        let mut reg = self.registry.write();
        let x = self.intern_locked(&mut reg, m, inv);
        let fwd = &mut reg.entries[w.0 as usize];
        match side {
            Side::Left => fwd.left[i] = Some(x),
            Side::Right => fwd.right[i] = Some(x),
        }
        let back = &mut reg.entries[x.0 as usize];
        match side {
            Side::Left => back.left[i] = Some(w),
            Side::Right => back.right[i] = Some(w),
        }
        x
    }

    /// Interned product with a simple reflection.
    pub fn multiply_gen(&self, w: Element, i: usize, side: Side) -> Result<Element> {
        self.check_gen(i)?;
        Ok(self.mul_gen(w, i, side))
    }

    pub fn length(&self, w: Element) -> usize {
        self.registry.read().entries[w.0 as usize].data.word.len()
    }

    /// ShortLex-minimal reduced word in internal indices.
    pub fn word(&self, w: Element) -> Vec<usize> {
        self.data(w).word.iter().map(|&i| i as usize).collect()
    }

    pub fn descent_mask(&self, w: Element, side: Side) -> u64 {
        let reg = self.registry.read();
        let d = &reg.entries[w.0 as usize].data;
        match side {
            Side::Left => d.left_descents,
            Side::Right => d.right_descents,
        }
    }

    pub fn descents(&self, w: Element, side: Side) -> Vec<usize> {
        mask_to_vec(self.descent_mask(w, side))
    }

    pub fn is_descent(&self, w: Element, i: usize, side: Side) -> bool {
        self.descent_mask(w, side) & (1 << i) != 0
    }

    /// Least-index left descent, `None` for the identity.
    pub fn first_left_descent(&self, w: Element) -> Option<usize> {
        let m = self.descent_mask(w, Side::Left);
        (m != 0).then(|| m.trailing_zeros() as usize)
    }

    /// Representation matrix; column `j` holds `w(alpha_j)`.
    pub fn matrix(&self, w: Element) -> Vec<Vec<i64>> {
        let d = self.data(w);
        d.matrix.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// Simple-root coordinates of `w(alpha_j)`.
    pub fn root_image(&self, w: Element, j: usize) -> Vec<i64> {
        let d = self.data(w);
        (0..self.rank).map(|i| d.matrix[i * self.rank + j]).collect()
    }

    /// Product of the simple reflections along `word` (internal indices).
    /// The word need not be reduced.
    pub fn from_word(&self, word: &[usize]) -> Result<Element> {
        let mut w = self.identity();
        for &i in word {
            self.check_gen(i)?;
            w = self.mul_gen(w, i, Side::Right);
        }
        Ok(w)
    }

    pub fn multiply(&self, a: Element, b: Element) -> Element {
        self.word(b).into_iter().fold(a, |w, i| self.mul_gen(w, i, Side::Right))
    }

    pub fn inverse(&self, w: Element) -> Element {
        self.word(w).into_iter().fold(self.identity(), |x, i| self.mul_gen(x, i, Side::Left))
    }

    /// Parses the wire format: comma-separated generator labels or `e`.
    pub fn parse_word(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(self.identity());
        }
        let offset = self.first_generator() as i64;
        let mut word = Vec::new();
        for tok in s.split(',') {
            let label: i64 = tok.trim().parse().map_err(|_| Error::InvalidWord(s.to_owned()))?;
            let i = label - offset;
            if i < 0 || i as usize >= self.rank {
                return Err(Error::GeneratorOutOfRange { index: label, rank: self.rank });
            }
            word.push(i as usize);
        }
        self.from_word(&word)
    }

    /// Wire format of the ShortLex-minimal word, e.g. `1,2,1`; identity is `e`.
    pub fn format_word(&self, w: Element) -> String {
        let d = self.data(w);
        if d.word.is_empty() {
            return "e".to_owned();
        }
        let offset = self.first_generator();
        d.word.iter().map(|&i| (i as usize + offset).to_string()).collect::<Vec<_>>().join(",")
    }

    /// Compact display form, e.g. `s1s2s1`.
    pub fn display(&self, w: Element) -> String {
        let d = self.data(w);
        if d.word.is_empty() {
            return "e".to_owned();
        }
        let offset = self.first_generator();
        d.word.iter().map(|&i| format!("s{}", i as usize + offset)).collect()
    }

    /// Order by length, then ShortLex word.
    pub fn cmp_elements(&self, a: Element, b: Element) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (da, db) = (self.data(a), self.data(b));
        da.word.len().cmp(&db.word.len()).then_with(|| da.word.cmp(&db.word))
    }

    pub fn sort_elements(&self, elements: &mut [Element]) {
        let mut keyed: Vec<_> = elements.iter().map(|&e| (self.data(e).word.clone(), e)).collect();
        keyed.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for (slot, (_, e)) in elements.iter_mut().zip(keyed) {
            *slot = e;
        }
    }

    /// Bruhat order, by the descent recursion: with `s` the least left
    /// descent of `y`, `x <= y` iff `sx <= sy` (when `sx < x`) or `x <= sy`.
    pub fn bruhat_leq(&self, x: Element, y: Element) -> bool {
        if x == self.identity() || x == y {
            return true;
        }
        let (lx, ly) = (self.length(x), self.length(y));
        if lx >= ly {
            return false;
        }
        if let Some(&b) = self.bruhat_memo.read().get(&(x, y)) {
            return b;
        }
        let s = self.first_left_descent(y).expect("y is not the identity");
        let sy = self.mul_gen(y, s, Side::Left);
        let result = if self.is_descent(x, s, Side::Left) {
            self.bruhat_leq(self.mul_gen(x, s, Side::Left), sy)
        } else {
            self.bruhat_leq(x, sy)
        };
        self.bruhat_memo.write().insert((x, y), result);
        result
    }

    /// All elements of length at most `max_len`.
    pub fn enumerate_ball(&self, max_len: usize) -> OrderIdeal {
        let mut seen: HashSet<Element> = HashSet::from([self.identity()]);
        let mut all = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for &w in &frontier {
                for i in 0..self.rank {
                    if self.is_descent(w, i, Side::Right) {
                        continue;
                    }
                    let x = self.mul_gen(w, i, Side::Right);
                    if seen.insert(x) {
                        next.push(x);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend_from_slice(&next);
            frontier = next;
        }
        OrderIdeal::new(self, all)
    }

    /// The whole group; rejected for infinite systems.
    pub fn enumerate_all(&self) -> Result<OrderIdeal> {
        if !self.finite {
            return Err(Error::InfiniteTruncation(self.descriptor.label()));
        }
        Ok(self.enumerate_ball(usize::MAX))
    }

    /// The principal order ideal `{x : x <= u}`.
    pub fn enumerate_ideal(&self, u: Element) -> OrderIdeal {
        let mut seen: HashSet<Element> = HashSet::from([self.identity()]);
        let mut all = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for i in 0..self.rank {
                    if self.is_descent(w, i, Side::Right) {
                        continue;
                    }
                    let x = self.mul_gen(w, i, Side::Right);
                    if !seen.contains(&x) && self.bruhat_leq(x, u) {
                        seen.insert(x);
                        next.push(x);
                    }
                }
            }
            all.extend_from_slice(&next);
            frontier = next;
        }
        OrderIdeal::new(self, all)
    }

    pub fn longest_element(&self) -> Result<Element> {
        if !self.finite {
            return Err(Error::NoLongestElement(self.descriptor.label()));
        }
        let full = if self.rank == 64 { u64::MAX } else { (1u64 << self.rank) - 1 };
        let mut w = self.identity();
        loop {
            let mask = self.descent_mask(w, Side::Right);
            if mask == full {
                return Ok(w);
            }
            let i = (!mask).trailing_zeros() as usize;
            w = self.mul_gen(w, i, Side::Right);
        }
    }
}

/// A finite set of elements sorted by (length, ShortLex word).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderIdeal {
    elements: Vec<Element>,
    position: HashMap<Element, usize>,
}

impl OrderIdeal {
    /// Sorts and deduplicates `elements`; downward closure is not checked
    /// here, see [`OrderIdeal::is_downward_closed`].
    pub fn new(sys: &CoxeterSystem, mut elements: Vec<Element>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        sys.sort_elements(&mut elements);
        let position = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self { elements, position }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Element> + '_ {
        self.elements.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: Element) -> bool {
        self.position.contains_key(&w)
    }

    pub fn position(&self, w: Element) -> Option<usize> {
        self.position.get(&w).copied()
    }

    /// Every element's lower covers `w s` (for right descents `s`) are
    /// members, which makes the set closed under Bruhat order.
    pub fn is_downward_closed(&self, sys: &CoxeterSystem) -> bool {
        self.elements.iter().all(|&w| {
            sys.descents(w, Side::Right).into_iter().all(|i| self.contains(sys.mul_gen(w, i, Side::Right)))
                && sys.descents(w, Side::Left).into_iter().all(|i| self.contains(sys.mul_gen(w, i, Side::Left)))
        })
    }

    /// Maximal elements of the ideal.
    pub fn maximal(&self, sys: &CoxeterSystem) -> Vec<Element> {
        self.elements
            .iter()
            .copied()
            .filter(|&w| {
                (0..sys.rank())
                    .all(|i| sys.is_descent(w, i, Side::Right) || !self.contains(sys.mul_gen(w, i, Side::Right)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(label: &str) -> CoxeterSystem {
        CoxeterSystem::from_label(label).unwrap()
    }

    #[test]
    fn build_examples() {
        let a2 = sys("A2");
        assert_eq!(a2.rank(), 2);
        assert_eq!(a2.cartan(), &[vec![2, -1], vec![-1, 2]]);
        let a1 = sys("affine A1");
        assert_eq!(a1.rank(), 2);
        assert!(!a1.is_finite());
        assert_eq!(a1.num_registered(), 1);
    }

    #[test]
    fn multiply_examples() {
        let a2 = sys("A2");
        let s1 = a2.multiply_gen(a2.identity(), 0, Side::Right).unwrap();
        assert_eq!(a2.format_word(s1), "1");
        assert_eq!(a2.length(s1), 1);
        assert_eq!(a2.multiply_gen(s1, 0, Side::Right).unwrap(), a2.identity());
        assert!(a2.multiply_gen(s1, 2, Side::Right).is_err());

        let a1 = sys("affine A1");
        let s0s1 = a1.parse_word("0,1").unwrap();
        let x = a1.multiply_gen(s0s1, 0, Side::Right).unwrap();
        assert_eq!(a1.format_word(x), "0,1,0");
        assert_eq!(a1.length(x), 3);
    }

    #[test]
    fn descent_examples() {
        let a2 = sys("A2");
        assert!(a2.descents(a2.identity(), Side::Left).is_empty());
        let s1s2 = a2.parse_word("1,2").unwrap();
        assert_eq!(a2.descents(s1s2, Side::Left), vec![0]);
        assert_eq!(a2.descents(s1s2, Side::Right), vec![1]);
    }

    #[test]
    fn normal_forms() {
        let a2 = sys("A2");
        let w0 = a2.parse_word("2,1,2").unwrap();
        assert_eq!(a2.format_word(w0), "1,2,1");
        assert_eq!(a2.parse_word("1,1,2,2").unwrap(), a2.identity());
        let a3 = sys("A3");
        assert_eq!(a3.format_word(a3.parse_word("2,3,1,2").unwrap()), "2,1,3,2");
        assert!(matches!(a3.parse_word("4"), Err(Error::GeneratorOutOfRange { .. })));
        assert!(matches!(a3.parse_word("0"), Err(Error::GeneratorOutOfRange { .. })));
        assert!(matches!(a3.parse_word("1,x"), Err(Error::InvalidWord(_))));
        assert_eq!(a3.display(a3.parse_word("2,1").unwrap()), "s2s1");
    }

    #[test]
    fn bruhat_examples() {
        let a2 = sys("A2");
        let all = a2.enumerate_all().unwrap();
        for w in all.iter() {
            assert!(a2.bruhat_leq(a2.identity(), w));
        }
        let (s1, s2) = (a2.parse_word("1").unwrap(), a2.parse_word("2").unwrap());
        assert!(!a2.bruhat_leq(s1, s2));
        let a1 = sys("affine A1");
        assert!(a1.bruhat_leq(a1.parse_word("0").unwrap(), a1.parse_word("1,0,1").unwrap()));
    }

    #[test]
    fn enumeration_examples() {
        let a2 = sys("A2");
        let e = a2.enumerate_ideal(a2.identity());
        assert_eq!(e.elements(), &[a2.identity()]);
        let w0 = a2.parse_word("1,2,1").unwrap();
        let words: Vec<_> = a2.enumerate_ideal(w0).iter().map(|w| a2.format_word(w)).collect();
        assert_eq!(words, ["e", "1", "2", "1,2", "2,1", "1,2,1"]);
        let a1 = sys("affine A1");
        assert_eq!(a1.enumerate_ball(3).len(), 7);
        assert!(matches!(a1.enumerate_all(), Err(Error::InfiniteTruncation(_))));
    }

    #[test]
    fn longest_examples() {
        let a1 = sys("A1");
        assert_eq!(a1.format_word(a1.longest_element().unwrap()), "1");
        let a2 = sys("A2");
        let w0 = a2.longest_element().unwrap();
        assert_eq!((a2.format_word(w0), a2.length(w0)), ("1,2,1".to_owned(), 3));
        assert!(matches!(sys("affine A1").longest_element(), Err(Error::NoLongestElement(_))));
        assert_eq!(sys("B3").enumerate_all().unwrap().len(), 48);
        let e6 = sys("E6");
        assert_eq!(e6.length(e6.longest_element().unwrap()), 36);
    }

    #[test]
    fn explicit_matrix_uses_zero_based_labels() {
        let s = CoxeterSystem::new(CoxeterDescriptor::Cartan(vec![vec![2, -1], vec![-1, 2]])).unwrap();
        assert!(s.is_finite());
        assert_eq!(s.format_word(s.longest_element().unwrap()), "0,1,0");
    }
}
