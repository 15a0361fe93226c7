//! Generalized Cartan matrices for the finite and affine Weyl groups.
//!
//! Standard types use Bourbaki numbering `1..=n` for the finite nodes; the
//! affine node of an untwisted affine type is node `0`. Internally a finite
//! type stores node `k` at index `k - 1`, an affine type stores node `k` at
//! index `k`, so the label of internal index `i` is `i + first_generator()`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// Either a standard type label such as `A2` / `affine A1`, or an explicit
/// generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoxeterDescriptor {
    Standard { family: Family, rank: usize, affine: bool },
    Cartan(Vec<Vec<i64>>),
}

impl CoxeterDescriptor {
    pub fn finite(family: Family, rank: usize) -> Self {
        Self::Standard { family, rank, affine: false }
    }

    pub fn affine(family: Family, rank: usize) -> Self {
        Self::Standard { family, rank, affine: true }
    }

    /// Human-readable label; explicit matrices are labelled `cartan`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Label of the generator stored at internal index 0.
    pub fn first_generator(&self) -> usize {
        match self {
            Self::Standard { affine: false, .. } => 1,
            _ => 0,
        }
    }

    pub fn is_affine_label(&self) -> bool {
        matches!(self, Self::Standard { affine: true, .. })
    }

    /// Expands the descriptor to a validated Cartan matrix.
    pub fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let m = match self {
            Self::Cartan(m) => m.clone(),
            Self::Standard { family, rank, affine } => standard_cartan(*family, *rank, *affine)?,
        };
        validate_cartan(&m)?;
        Ok(m)
    }
}

impl fmt::Display for CoxeterDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Standard { family, rank, affine } => {
                if *affine {
                    f.write_str("affine ")?;
                }
                write!(f, "{}{}", family.letter(), rank)
            }
            Self::Cartan(_) => f.write_str("cartan"),
        }
    }
}

impl FromStr for CoxeterDescriptor {
    type Err = Error;

    /// Accepts `A2`, `affine A2`, `~A2` and `A2~` (case-insensitive family letter).
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(s.to_owned());
        let trimmed = s.trim();
        let (affine, body) = if let Some(rest) = trimmed.strip_prefix("affine") {
            (true, rest.trim())
        } else if let Some(rest) = trimmed.strip_prefix('~') {
            (true, rest.trim())
        } else if let Some(rest) = trimmed.strip_suffix('~') {
            (true, rest.trim())
        } else {
            (false, trimmed)
        };
        let mut chars = body.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(unknown()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let desc = Self::Standard { family, rank, affine };
        standard_edges(family, rank, affine).map_err(|_| unknown())?;
        Ok(desc)
    }
}

/// Edge `(i, j, c_ij, c_ji)` in node labels.
type Edge = (usize, usize, i64, i64);

fn simple(i: usize, j: usize) -> Edge {
    (i, j, -1, -1)
}

fn standard_edges(family: Family, n: usize, affine: bool) -> Result<Vec<Edge>> {
    let bad = || Error::UnknownType(format!("{}{}{}", if affine { "affine " } else { "" }, family.letter(), n));
    let chain = |upto: usize| (1..upto).map(|i| simple(i, i + 1)).collect::<Vec<_>>();
    let mut edges = match family {
        Family::A if n >= 1 => chain(n),
        Family::B if n >= 2 => {
            let mut e = chain(n - 1);
            e.push((n - 1, n, -1, -2));
            e
        }
        Family::C if n >= 2 => {
            let mut e = chain(n - 1);
            e.push((n - 1, n, -2, -1));
            e
        }
        Family::D if n >= 4 => {
            let mut e = chain(n - 1);
            e.push(simple(n - 2, n));
            e
        }
        Family::E if (6..=8).contains(&n) => {
            let mut e = vec![simple(1, 3), simple(2, 4)];
            e.extend((3..n).map(|i| simple(i, i + 1)));
            e
        }
        Family::F if n == 4 => vec![simple(1, 2), (2, 3, -1, -2), simple(3, 4)],
        Family::G if n == 2 => vec![(1, 2, -1, -3)],
        _ => return Err(bad()),
    };
    if affine {
        match family {
            Family::A if n == 1 => {
                edges.push((0, 1, -2, -2));
            }
            Family::A => {
                edges.push(simple(0, 1));
                edges.push(simple(0, n));
            }
            Family::B if n >= 3 => edges.push(simple(0, 2)),
            Family::C => edges.push((0, 1, -1, -2)),
            Family::D => edges.push(simple(0, 2)),
            Family::E if n == 6 => edges.push(simple(0, 2)),
            Family::E if n == 7 => edges.push(simple(0, 1)),
            Family::E => edges.push(simple(0, 8)),
            Family::F => edges.push(simple(0, 1)),
            Family::G => edges.push(simple(0, 2)),
            _ => return Err(bad()),
        }
    }
    Ok(edges)
}

fn standard_cartan(family: Family, n: usize, affine: bool) -> Result<Vec<Vec<i64>>> {
    let edges = standard_edges(family, n, affine)?;
    let (size, offset) = if affine { (n + 1, 0) } else { (n, 1) };
    let mut m = vec![vec![0i64; size]; size];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j, cij, cji) in edges {
        m[i - offset][j - offset] = cij;
        m[j - offset][i - offset] = cji;
    }
    Ok(m)
}

pub fn validate_cartan(m: &[Vec<i64>]) -> Result<()> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidCartan("empty matrix".into()));
    }
    if n > 64 {
        return Err(Error::InvalidCartan(format!("rank {n} exceeds 64")));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan(format!("row {i} has length {}, expected {n}", row.len())));
        }
        for (j, &c) in row.iter().enumerate() {
            if i == j {
                if c != 2 {
                    return Err(Error::InvalidCartan(format!("diagonal entry ({i},{i}) is {c}")));
                }
            } else {
                if c > 0 {
                    return Err(Error::InvalidCartan(format!("positive off-diagonal entry ({i},{j})")));
                }
                if (c == 0) != (m[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("zero pattern asymmetric at ({i},{j})")));
                }
            }
        }
    }
    Ok(())
}

/// Coxeter matrix entry `m_ij` from `c_ij * c_ji`; `None` means infinity.
pub fn coxeter_order(cij: i64, cji: i64) -> Option<u32> {
    match cij * cji {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

/// Whether the Coxeter group of `m` is finite, i.e. whether the cosine
/// form `-cos(pi / m_ij)` is positive definite.
pub fn is_finite_type(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut b = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = if i == j {
                1.0
            } else {
                match coxeter_order(m[i][j], m[j][i]) {
                    Some(k) => -(std::f64::consts::PI / k as f64).cos(),
                    None => return false,
                }
            };
        }
    }
    // Cholesky
    let mut l = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = b[i][i] - s;
                if d <= 1e-9 {
                    return false;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (b[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cartan(s: &str) -> Vec<Vec<i64>> {
        s.parse::<CoxeterDescriptor>().unwrap().cartan_matrix().unwrap()
    }

    #[test]
    fn defining_data() {
        assert_eq!(cartan("A2"), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(cartan("affine A1"), vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(cartan("~A1"), cartan("A1~"));
        assert_eq!(cartan("G2"), vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(cartan("affine A2"), vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        let b3 = cartan("B3");
        assert_eq!(b3[1][2] * b3[2][1], 2);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = CoxeterDescriptor::Cartan(vec![vec![2, -1], vec![0, 2]]);
        assert!(matches!(bad.cartan_matrix(), Err(Error::InvalidCartan(_))));
        let diag = CoxeterDescriptor::Cartan(vec![vec![1, -1], vec![-1, 2]]);
        assert!(diag.cartan_matrix().is_err());
        for s in ["X3", "E5", "D3", "F3", "affine B2", "A0", ""] {
            assert!(matches!(s.parse::<CoxeterDescriptor>(), Err(Error::UnknownType(_))), "{s}");
        }
    }

    #[test]
    fn finiteness() {
        for s in ["A1", "A4", "B3", "C3", "D4", "E6", "E8", "F4", "G2"] {
            assert!(is_finite_type(&cartan(s)), "{s}");
        }
        for s in ["affine A1", "affine A3", "affine B3", "affine C2", "affine G2", "affine E8"] {
            assert!(!is_finite_type(&cartan(s)), "{s}");
        }
    }

    #[test]
    fn affine_types_are_connected_and_one_larger() {
        for s in ["A3", "B4", "C3", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let fin = cartan(s);
            let aff = cartan(&format!("affine {s}"));
            assert_eq!(aff.len(), fin.len() + 1);
            assert!(aff[0].iter().skip(1).any(|&c| c != 0), "{s}");
        }
    }
}
