use std::collections::HashMap;

use super::system::{CoxeterSystem, Element, OrderIdeal, Side};
use crate::error::{Error, Result};

/// Which cosets of `W_J` are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CosetSide {
    /// `w W_J`; the minimal representative has no right descent in `J`.
    Left,
    /// `W_J w`; the minimal representative has no left descent in `J`.
    Right,
}

impl CosetSide {
    /// Side on which `W_J` multiplies.
    fn acting_side(self) -> Side {
        match self {
            CosetSide::Left => Side::Right,
            CosetSide::Right => Side::Left,
        }
    }
}

/// Partition of an order ideal into parabolic cosets of `W_J`, each labelled
/// by its minimal-length representative.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    subset: Vec<usize>,
    mask: u64,
    side: CosetSide,
    rep_of: HashMap<Element, Element>,
    reps: Vec<Element>,
}

impl ParabolicData {
    /// Cosets `w W_J` (the side used for `G/B -> G/P`).
    pub fn partition(sys: &CoxeterSystem, ideal: &OrderIdeal, subset: &[usize]) -> Result<Self> {
        coset_partition(sys, ideal, subset, CosetSide::Left)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn side(&self) -> CosetSide {
        self.side
    }

    /// Minimal representatives in (length, ShortLex) order.
    pub fn representatives(&self) -> &[Element] {
        &self.reps
    }

    /// Coset label of `w`, if `w` lies in the partitioned ideal.
    pub fn rep(&self, w: Element) -> Option<Element> {
        self.rep_of.get(&w).copied()
    }

    pub fn is_minimal(&self, w: Element) -> bool {
        self.rep(w) == Some(w)
    }

    pub fn in_subset(&self, i: usize) -> bool {
        self.mask & (1 << i) != 0
    }

    /// The `W_J` factor `u` of `w = rep(w) u` (or `w = u rep(w)` for right cosets).
    pub fn parabolic_part(&self, sys: &CoxeterSystem, w: Element) -> Option<Element> {
        let r = self.rep(w)?;
        let rinv = sys.inverse(r);
        Some(match self.side {
            CosetSide::Left => sys.multiply(rinv, w),
            CosetSide::Right => sys.multiply(w, rinv),
        })
    }
}

/// Strips descents in `J` on the coset side until none remain.
fn minimal_rep(sys: &CoxeterSystem, mut w: Element, mask: u64, side: Side) -> Element {
    loop {
        let d = sys.descent_mask(w, side) & mask;
        if d == 0 {
            return w;
        }
        w = sys.mul_gen(w, d.trailing_zeros() as usize, side);
    }
}

/// Assigns each element of `ideal` to its coset of `W_J`.
pub fn coset_partition(
    sys: &CoxeterSystem,
    ideal: &OrderIdeal,
    subset: &[usize],
    side: CosetSide,
) -> Result<ParabolicData> {
    let mut mask = 0u64;
    for &i in subset {
        if i >= sys.rank() {
            return Err(Error::GeneratorOutOfRange { index: i as i64, rank: sys.rank() });
        }
        mask |= 1 << i;
    }
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    let mut rep_of = HashMap::with_capacity(ideal.len());
    let mut reps = Vec::new();
    for w in ideal.iter() {
        let r = minimal_rep(sys, w, mask, side.acting_side());
        if r == w {
            reps.push(w);
        }
        rep_of.insert(w, r);
    }
    Ok(ParabolicData { subset, mask, side, rep_of, reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_examples() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let all = sys.enumerate_all().unwrap();
        let p = ParabolicData::partition(&sys, &all, &[0]).unwrap();
        let reps: Vec<_> = p.representatives().iter().map(|&w| sys.format_word(w)).collect();
        assert_eq!(reps, ["e", "2", "1,2"]);
        let p = ParabolicData::partition(&sys, &all, &[0, 1]).unwrap();
        assert_eq!(p.representatives(), &[sys.identity()]);
        let p = ParabolicData::partition(&sys, &all, &[]).unwrap();
        assert_eq!(p.representatives(), all.elements());
        assert!(ParabolicData::partition(&sys, &all, &[2]).is_err());
    }

    #[test]
    fn left_side_cosets() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let all = sys.enumerate_all().unwrap();
        let p = coset_partition(&sys, &all, &[0], CosetSide::Right).unwrap();
        let reps: Vec<_> = p.representatives().iter().map(|&w| sys.format_word(w)).collect();
        assert_eq!(reps, ["e", "2", "2,1"]);
    }

    #[test]
    fn factorization_lengths_add() {
        for label in ["A3", "B3", "affine A2"] {
            let sys = CoxeterSystem::from_label(label).unwrap();
            let ideal = sys.enumerate_ball(5);
            for mask in 0u64..(1 << sys.rank()) {
                let subset: Vec<usize> = (0..sys.rank()).filter(|i| mask & (1 << i) != 0).collect();
                for side in [CosetSide::Left, CosetSide::Right] {
                    let p = coset_partition(&sys, &ideal, &subset, side).unwrap();
                    for w in ideal.iter() {
                        let r = p.rep(w).unwrap();
                        let u = p.parabolic_part(&sys, w).unwrap();
                        assert!(sys.word(u).iter().all(|&i| p.in_subset(i)));
                        assert_eq!(sys.length(w), sys.length(r) + sys.length(u));
                        let prod = match side {
                            CosetSide::Left => sys.multiply(r, u),
                            CosetSide::Right => sys.multiply(u, r),
                        };
                        assert_eq!(prod, w);
                        assert_eq!(sys.descent_mask(r, side.acting_side()) & mask, 0);
                    }
                }
            }
        }
    }
}
