//! The JSON pencil document and its canonical text form.

use std::fmt::Write as _;

use qpencil::{Error, Fe, Gf, Pencil, QuadraticForm};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub degree: u32,
    /// Modulus bits including the leading term, e.g. `7` for `u² + u + 1`.
    pub modulus: u64,
}

impl FieldSpec {
    pub fn of(f: Gf) -> FieldSpec {
        FieldSpec { degree: f.degree(), modulus: f.modulus() }
    }

    pub fn field(&self) -> Result<Gf, Error> {
        Gf::with_modulus(self.degree, self.modulus)
    }
}

/// A pencil as sparse coefficient triples `(i, j, c)`, `1 ≤ i ≤ j ≤ n`, for `c x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilDocument {
    pub field: FieldSpec,
    pub n: usize,
    pub q0: Vec<[u64; 3]>,
    pub q1: Vec<[u64; 3]>,
}

impl PencilDocument {
    pub fn parse(text: &str) -> Result<PencilDocument, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_pencil(p: &Pencil) -> PencilDocument {
        let triples = |q: &QuadraticForm| {
            q.triples().into_iter().map(|(i, j, c)| [i as u64 + 1, j as u64 + 1, c.0]).collect()
        };
        PencilDocument { field: FieldSpec::of(p.field()), n: p.n(), q0: triples(p.q0()), q1: triples(p.q1()) }
    }

    pub fn to_pencil(&self) -> Result<Pencil, Error> {
        let f = self.field.field()?;
        let form = |triples: &[[u64; 3]]| -> Result<QuadraticForm, Error> {
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::with_capacity(triples.len());
            for &[i, j, c] in triples {
                if i < 1 || i > j || j > self.n as u64 {
                    return Err(Error::InvalidInput(format!("index pair ({i}, {j}) outside 1 <= i <= j <= {}", self.n)));
                }
                if !seen.insert((i, j)) {
                    return Err(Error::InvalidInput(format!("index pair ({i}, {j}) listed twice")));
                }
                out.push((i as usize - 1, j as usize - 1, f.element(c)?));
            }
            QuadraticForm::from_triples(f, self.n, &out)
        };
        if self.n.is_multiple_of(2) {
            return Err(Error::EvenDimension(self.n));
        }
        Pencil::new(form(&self.q0)?, form(&self.q1)?)
    }

    /// Canonical text: one key per line, triples inline, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let triples = |t: &[[u64; 3]]| {
            let items: Vec<String> = t.iter().map(|[i, j, c]| format!("[{i}, {j}, {c}]")).collect();
            format!("[{}]", items.join(", "))
        };
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"field\": {{\"degree\": {}, \"modulus\": {}}},", self.field.degree, self.field.modulus);
        let _ = writeln!(s, "  \"n\": {},", self.n);
        let _ = writeln!(s, "  \"q0\": {},", triples(&self.q0));
        let _ = writeln!(s, "  \"q1\": {}", triples(&self.q1));
        s.push_str("}\n");
        s
    }
}

pub fn elements(v: &[Fe]) -> Vec<u64> {
    v.iter().map(|x| x.0).collect()
}
