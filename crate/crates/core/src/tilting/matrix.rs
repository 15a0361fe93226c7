use serde_json::{json, Map, Value};

use crate::coxeter::{CoxeterSystem, Element, OrderIdeal};
use crate::error::{Error, Result};
use crate::hecke::WeightVector;
use crate::laurent::LaurentPoly;

/// Square array of Laurent polynomials indexed by an order ideal.
///
/// `entry(alpha, gamma)` is the coefficient along stratum `gamma` of the
/// object labelled `alpha`, so column `alpha` is a [`WeightVector`]. As a
/// matrix the rows are strata and the columns are objects:
/// `M[gamma][alpha] = entry(alpha, gamma)`, and [`WeightMatrix::compose`] is
/// the ordinary matrix product in that layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    ideal: OrderIdeal,
    columns: Vec<WeightVector>,
}

impl WeightMatrix {
    /// `columns[i]` belongs to `ideal.elements()[i]`; entries outside the
    /// ideal are dropped.
    pub fn from_columns(ideal: OrderIdeal, columns: Vec<WeightVector>) -> Self {
        assert_eq!(ideal.len(), columns.len(), "one column per ideal element");
        let columns = columns
            .into_iter()
            .map(|c| {
                let mut out = WeightVector::default();
                for (g, p) in c.iter().filter(|(g, _)| ideal.contains(*g)) {
                    out.set(g, p.clone());
                }
                out
            })
            .collect();
        Self { ideal, columns }
    }

    pub fn identity(ideal: OrderIdeal) -> Self {
        let columns = ideal.iter().map(WeightVector::unit).collect();
        Self { ideal, columns }
    }

    pub fn ideal(&self) -> &OrderIdeal {
        &self.ideal
    }

    pub fn size(&self) -> usize {
        self.ideal.len()
    }

    pub fn column(&self, alpha: Element) -> Option<&WeightVector> {
        self.ideal.position(alpha).map(|i| &self.columns[i])
    }

    pub fn columns(&self) -> impl Iterator<Item = (Element, &WeightVector)> {
        self.ideal.iter().zip(self.columns.iter())
    }

    pub fn entry(&self, alpha: Element, gamma: Element) -> LaurentPoly {
        self.column(alpha).map(|c| c.get(gamma)).unwrap_or_default()
    }

    /// Entrywise `t -> t^-1`.
    pub fn bar(&self) -> Self {
        Self { ideal: self.ideal.clone(), columns: self.columns.iter().map(WeightVector::bar).collect() }
    }

    /// `entry'(gamma, alpha) = entry(alpha, gamma)`.
    pub fn transpose(&self) -> Self {
        let mut columns = vec![WeightVector::default(); self.size()];
        for (alpha, col) in self.columns() {
            for (gamma, p) in col.iter() {
                let j = self.ideal.position(gamma).expect("entries stay inside the ideal");
                columns[j].set(alpha, p.clone());
            }
        }
        Self { ideal: self.ideal.clone(), columns }
    }

    /// Matrix product `self * rhs` in the strata-by-objects layout:
    /// `entry(delta, gamma) = sum_a self.entry(a, gamma) * rhs.entry(delta, a)`.
    pub fn compose(&self, rhs: &WeightMatrix) -> Result<WeightMatrix> {
        if self.ideal != rhs.ideal {
            return Err(Error::Inconsistent("matrices over different ideals".into()));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut out = WeightVector::default();
                for (a, ra) in rcol.iter() {
                    let lcol = self.column(a).expect("same ideal");
                    for (gamma, la) in lcol.iter() {
                        out.add_to(gamma, &(la * ra));
                    }
                }
                out
            })
            .collect();
        Ok(Self { ideal: self.ideal.clone(), columns })
    }

    pub fn is_identity(&self) -> bool {
        self.columns().all(|(a, c)| c.len() == 1 && c.get(a).is_one())
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.columns().all(|(a, c)| c.get(a).is_one())
    }

    /// `entry(alpha, gamma) != 0` only for `gamma <= alpha`.
    pub fn is_bruhat_lower(&self, sys: &CoxeterSystem) -> bool {
        self.columns().all(|(a, c)| c.iter().all(|(g, _)| sys.bruhat_leq(g, a)))
    }

    /// `entry(alpha, gamma) != 0` only for `gamma >= alpha`.
    pub fn is_bruhat_upper(&self, sys: &CoxeterSystem) -> bool {
        self.columns().all(|(a, c)| c.iter().all(|(g, _)| sys.bruhat_leq(a, g)))
    }

    /// Exact inverse of a unit-diagonal matrix that is triangular with
    /// respect to the (length, ShortLex) order of the ideal, which extends
    /// Bruhat order.
    pub fn invert_triangular(&self) -> Result<WeightMatrix> {
        let n = self.size();
        if !self.has_unit_diagonal() {
            return Err(Error::NotUnitTriangular("diagonal entry differs from 1".into()));
        }
        // rows[i][j] = M[i][j] with i the stratum position, j the object position
        let mut rows: Vec<Vec<(usize, LaurentPoly)>> = vec![Vec::new(); n];
        let (mut upper, mut lower) = (true, true);
        for (j, col) in self.columns.iter().enumerate() {
            for (g, p) in col.iter() {
                let i = self.ideal.position(g).expect("entries stay inside the ideal");
                if i < j {
                    lower = false;
                } else if i > j {
                    upper = false;
                }
                if i != j {
                    rows[i].push((j, p.clone()));
                }
            }
        }
        if !upper && !lower {
            return Err(Error::NotUnitTriangular("matrix is not triangular in any linear extension".into()));
        }
        // Solve M X = I column by column. For upper-triangular M the column
        // of X at k is found bottom-up, for lower-triangular top-down.
        let order: Vec<usize> = if upper { (0..n).rev().collect() } else { (0..n).collect() };
        let mut columns = vec![WeightVector::default(); n];
        for k in 0..n {
            let mut x: Vec<LaurentPoly> = vec![LaurentPoly::zero(); n];
            x[k] = LaurentPoly::one();
            for &i in &order {
                if i == k {
                    continue;
                }
                let mut acc = LaurentPoly::zero();
                for (j, m) in &rows[i] {
                    if !x[*j].is_zero() {
                        acc += &(m * &x[*j]);
                    }
                }
                x[i] = -acc;
            }
            let mut col = WeightVector::default();
            for (i, p) in x.into_iter().enumerate() {
                col.set(self.ideal.elements()[i], p);
            }
            columns[k] = col;
        }
        let inv = Self { ideal: self.ideal.clone(), columns };
        if !self.compose(&inv)?.is_identity() {
            return Err(Error::Inconsistent("triangular inverse failed its product check".into()));
        }
        Ok(inv)
    }

    /// `{"system": ..., "ideal": [words], "columns": {alpha: {gamma: poly}}}`.
    pub fn to_json(&self, sys: &CoxeterSystem) -> Value {
        let mut cols = Map::new();
        for (a, c) in self.columns() {
            cols.insert(sys.format_word(a), c.to_json(sys));
        }
        json!({
            "system": system_json(sys),
            "ideal": self.ideal.iter().map(|w| sys.format_word(w)).collect::<Vec<_>>(),
            "columns": Value::Object(cols),
        })
    }

    pub fn from_json(sys: &CoxeterSystem, value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_owned());
        check_system_json(sys, value.get("system").ok_or_else(|| bad("missing system"))?)?;
        let words = value.get("ideal").and_then(Value::as_array).ok_or_else(|| bad("missing ideal"))?;
        let mut elements = Vec::with_capacity(words.len());
        for w in words {
            elements.push(sys.parse_word(w.as_str().ok_or_else(|| bad("ideal entries must be strings"))?)?);
        }
        let ideal = OrderIdeal::new(sys, elements);
        if ideal.len() != words.len() {
            return Err(bad("duplicate ideal entries"));
        }
        let cols = value.get("columns").and_then(Value::as_object).ok_or_else(|| bad("missing columns"))?;
        let mut columns = vec![WeightVector::default(); ideal.len()];
        for (word, col) in cols {
            let a = sys.parse_word(word)?;
            let i = ideal.position(a).ok_or_else(|| bad("column outside the ideal"))?;
            let v = WeightVector::from_json(sys, col)?;
            if v.iter().any(|(g, _)| !ideal.contains(g)) {
                return Err(bad("entry outside the ideal"));
            }
            columns[i] = v;
        }
        Ok(Self { ideal, columns })
    }

    /// Rows `alpha,gamma,polynomial` with every field quoted.
    pub fn to_csv(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::from("alpha,gamma,polynomial\n");
        for (a, c) in self.columns() {
            let mut keys = c.support();
            sys.sort_elements(&mut keys);
            for g in keys {
                out.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(&sys.format_word(a)),
                    csv_field(&sys.format_word(g)),
                    csv_field(&c.get(g).to_string())
                ));
            }
        }
        out
    }

    pub fn to_text(&self, sys: &CoxeterSystem) -> String {
        let mut out = String::new();
        for (a, c) in self.columns() {
            out.push_str(&format!("[{}]\n", sys.display(a)));
            let mut keys = c.support();
            sys.sort_elements(&mut keys);
            for g in keys {
                out.push_str(&format!("  {}: {}\n", sys.display(g), c.get(g)));
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn system_json(sys: &CoxeterSystem) -> Value {
    json!({
        "label": sys.descriptor().label(),
        "cartan": sys.cartan(),
        "first_generator": sys.first_generator(),
    })
}

fn check_system_json(sys: &CoxeterSystem, value: &Value) -> Result<()> {
    let cartan: Vec<Vec<i64>> = serde_json::from_value(value.get("cartan").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Malformed(format!("system cartan: {e}")))?;
    let first = value.get("first_generator").and_then(Value::as_u64);
    if cartan != sys.cartan() || first != Some(sys.first_generator() as u64) {
        return Err(Error::Malformed("table belongs to a different Coxeter system".into()));
    }
    Ok(())
}
