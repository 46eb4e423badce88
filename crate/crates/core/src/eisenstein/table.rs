use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};
use crate::hermitian::{enumerate_positive, SemiIntegralHermitian};
use crate::siegel::{Limits, Route, SiegelPolynomial};

use super::coefficient::{eisenstein_coefficient, is_not_computable, CoefficientDetail};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Computed,
    NotComputable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub matrix: SemiIntegralHermitian,
    pub value: Option<ExactRational>,
    pub status: Status,
    /// Reason for `NotComputable`.
    pub note: Option<String>,
    /// `(q, F_q, route)` for the primes dividing `gamma` of the nondegenerate block.
    pub locals: Vec<(u64, SiegelPolynomial, Route)>,
}

impl Entry {
    /// Whether some `F_q` entering the value has positive degree.
    pub fn has_nontrivial_local_factor(&self) -> bool {
        self.locals.iter().any(|(_, f, _)| f.degree() >= 1)
    }
}

/// Coefficients of a degree-`m` form indexed by canonical matrix keys, bounded by `max_diag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    pub field: ImaginaryQuadraticField,
    pub weight: u32,
    pub degree: usize,
    pub max_diag: i64,
    pub entries: BTreeMap<String, Entry>,
}

/// Zero matrix, the positive scan, and zero-padded copies of the lower-degree matrices.
pub fn table_matrices(field: ImaginaryQuadraticField, m: usize, max_diag: i64) -> Result<Vec<SemiIntegralHermitian>> {
    if m == 0 {
        return Ok(vec![SemiIntegralHermitian::zero(field, 0)]);
    }
    let mut out: Vec<SemiIntegralHermitian> =
        table_matrices(field, m - 1, max_diag)?.iter().map(|h| h.embed_zero_block()).collect();
    out.extend(enumerate_positive(field, m, max_diag)?);
    Ok(out)
}

fn entry_from(h: SemiIntegralHermitian, r: Result<CoefficientDetail>) -> Result<Entry> {
    match r {
        Ok(d) => Ok(Entry {
            locals: d.locals.into_iter().map(|(q, s, _)| (q, s.poly, s.route)).collect(),
            matrix: h,
            value: Some(d.value),
            status: Status::Computed,
            note: None,
        }),
        Err(e) if is_not_computable(&e) => Ok(Entry {
            matrix: h,
            value: None,
            status: Status::NotComputable,
            note: Some(e.to_string()),
            locals: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

pub fn build_table(
    field: &ImaginaryQuadraticField,
    k: u32,
    m: usize,
    max_diag: i64,
    limits: &Limits,
) -> Result<FourierTable> {
    if m > 2 {
        return Err(Error::InvalidArgument(format!("tables are built for degree at most 2, not {m}")));
    }
    let matrices = table_matrices(*field, m, max_diag)?;
    let entries: Vec<Entry> = matrices
        .into_par_iter()
        .map(|h| {
            let r = eisenstein_coefficient(field, k, &h, limits);
            entry_from(h, r)
        })
        .collect::<Result<_>>()?;
    Ok(FourierTable {
        field: *field,
        weight: k,
        degree: m,
        max_diag,
        entries: entries.into_iter().map(|e| (e.matrix.canonical_key(), e)).collect(),
    })
}

impl FourierTable {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn value(&self, h: &SemiIntegralHermitian) -> Option<&ExactRational> {
        self.entries.get(&h.canonical_key()).and_then(|e| e.value.as_ref())
    }

    pub fn not_computable(&self) -> usize {
        self.entries.values().filter(|e| e.status == Status::NotComputable).count()
    }

    /// Multiply every computed entry by `c`.
    pub fn scaled(&self, c: &ExactRational) -> FourierTable {
        let mut t = self.clone();
        for e in t.entries.values_mut() {
            if let Some(v) = e.value.take() {
                e.value = Some(v * c);
            }
        }
        t
    }

    /// One JSON object per line, `{"key", "value", "status"}`, ordered by key.
    pub fn write_jsonl<W: Write>(&self, w: W) -> Result<()> {
        self.write_records(w, false)
    }

    /// As [`write_jsonl`](Self::write_jsonl), also recording the local polynomials and routes.
    pub fn write_jsonl_with_locals<W: Write>(&self, w: W) -> Result<()> {
        self.write_records(w, true)
    }

    fn write_records<W: Write>(&self, mut w: W, locals: bool) -> Result<()> {
        for (key, e) in &self.entries {
            let rec = ExportRecord {
                key: key.clone(),
                value: e.value.as_ref().map(|v| v.to_string()),
                status: e.status.clone(),
                note: e.note.clone(),
                locals: if locals {
                    e.locals.iter().map(|(_, f, r)| format!("{f} | {}", r.tag())).collect()
                } else {
                    Vec::new()
                },
            };
            let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// `key,numerator,denominator,status`, ordered by key.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "key,numerator,denominator,status")?;
        for (key, e) in &self.entries {
            let (num, den) = match &e.value {
                Some(v) => (v.numer().to_string(), v.denom().to_string()),
                None => (String::new(), String::new()),
            };
            let status = match e.status {
                Status::Computed => "computed",
                Status::NotComputable => "not-computable",
            };
            writeln!(w, "\"{key}\",{num},{den},{status}")?;
        }
        Ok(())
    }

    pub fn read_jsonl(field: ImaginaryQuadraticField, weight: u32, degree: usize, max_diag: i64, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let rec: ExportRecord = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
            let matrix = SemiIntegralHermitian::parse_key(field, &rec.key)?;
            if matrix.degree() != degree {
                return Err(Error::Parse(format!("entry {} does not have degree {degree}", rec.key)));
            }
            let value = rec.value.as_deref().map(str::parse).transpose()?;
            let mut locals = Vec::new();
            for l in &rec.locals {
                let (poly, route) = l.split_once(" | ").ok_or_else(|| Error::Parse(format!("bad local record {l:?}")))?;
                let poly: SiegelPolynomial = poly.parse()?;
                let route = Route::from_tag(route).ok_or_else(|| Error::Parse(format!("bad route {route:?}")))?;
                locals.push((poly.q(), poly, route));
            }
            entries.insert(rec.key, Entry { matrix, value, status: rec.status, note: rec.note, locals });
        }
        Ok(FourierTable { field, weight, degree, max_diag, entries })
    }
}

#[derive(Serialize, Deserialize)]
struct ExportRecord {
    key: String,
    value: Option<String>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    locals: Vec<String>,
}

/// `a(Phi(F), H) = a(F, diag(H, 0))` for every matrix of the degree-`(m-1)` scan.
pub fn siegel_phi(t: &FourierTable) -> Result<FourierTable> {
    if t.degree == 0 {
        return Err(Error::InvalidArgument("Phi of a degree-0 table".into()));
    }
    let mut entries = BTreeMap::new();
    for h in table_matrices(t.field, t.degree - 1, t.max_diag)? {
        let padded = h.embed_zero_block().canonical_key();
        let src = t.get(&padded).ok_or_else(|| Error::MissingEntry(padded.clone()))?;
        let mut e = src.clone();
        e.matrix = h.clone();
        entries.insert(h.canonical_key(), e);
    }
    Ok(FourierTable { field: t.field, weight: t.weight, degree: t.degree - 1, max_diag: t.max_diag, entries })
}

/// `a(Theta(F), H) = det(H) a(F, H)`.
pub fn theta_op(t: &FourierTable) -> FourierTable {
    let mut out = t.clone();
    for e in out.entries.values_mut() {
        if let Some(v) = e.value.take() {
            let det = if e.matrix.degree() == 0 { ExactRational::zero() } else { e.matrix.det() };
            e.value = Some(v * det);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::classical_coefficient;

    fn k4() -> ImaginaryQuadraticField {
        ImaginaryQuadraticField::new(4).unwrap()
    }

    #[test]
    fn degree_one_table() {
        let t = build_table(&k4(), 8, 1, 10, &Limits::default()).unwrap();
        assert_eq!(t.entries.len(), 11);
        assert_eq!(t.get("1;2").unwrap().value, Some(ExactRational::from_integer(61920)));
        assert_eq!(t.get("1;0").unwrap().value, Some(ExactRational::one()));
        for h in 1..=10 {
            assert_eq!(t.get(&format!("1;{h}")).unwrap().value, Some(classical_coefficient(8, h)));
        }
    }

    #[test]
    fn degree_two_table_and_operators() {
        let lim = Limits::default();
        let t2 = build_table(&k4(), 8, 2, 2, &lim).unwrap();
        assert_eq!(t2.get("2;0,0;0,0").unwrap().value, Some(ExactRational::one()));
        assert_eq!(t2.get("2;1,1;0,0").unwrap().value, Some(ExactRational::new(7862400, 61)));
        let phi = siegel_phi(&t2).unwrap();
        let t1 = build_table(&k4(), 8, 1, 2, &lim).unwrap();
        assert_eq!(phi.entries.keys().collect::<Vec<_>>(), t1.entries.keys().collect::<Vec<_>>());
        for (key, e) in &t1.entries {
            assert_eq!(phi.get(key).unwrap().value, e.value);
        }
        let phi2 = siegel_phi(&phi).unwrap();
        assert_eq!(phi2.entries.len(), 1);
        assert_eq!(phi2.get("0;").unwrap().value, Some(ExactRational::one()));
        let th = theta_op(&t2);
        assert_eq!(th.get("2;1,1;0,0").unwrap().value, Some(ExactRational::new(7862400, 61)));
        assert_eq!(th.get("2;0,0;0,0").unwrap().value, Some(ExactRational::zero()));
        let th1 = theta_op(&t1);
        assert_eq!(th1.get("1;2").unwrap().value, Some(ExactRational::from_integer(2 * 61920)));
    }

    #[test]
    fn phi_reports_missing_entries() {
        let mut t2 = build_table(&k4(), 8, 2, 1, &Limits::default()).unwrap();
        t2.entries.remove("2;1,0;0,0");
        assert!(matches!(siegel_phi(&t2), Err(Error::MissingEntry(_))));
    }

    #[test]
    fn jsonl_roundtrip() {
        let t = build_table(&k4(), 8, 2, 1, &Limits::default()).unwrap();
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("{\"key\":\"2;0,0;0,0\",\"value\":\"1/1\",\"status\":\"computed\""), "{first}");
        let keys: Vec<&str> = text.lines().map(|l| l.split('"').nth(3).unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let back = FourierTable::read_jsonl(k4(), 8, 2, 1, &text).unwrap();
        for (key, e) in &t.entries {
            assert_eq!(back.get(key).unwrap().value, e.value);
        }
        let mut buf = Vec::new();
        t.write_jsonl_with_locals(&mut buf).unwrap();
        let back = FourierTable::read_jsonl(k4(), 8, 2, 1, std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, t);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("key,numerator,denominator,status\n\"2;0,0;0,0\",1,1,computed\n"));
        assert!(csv.contains("\"2;1,1;0,0\",7862400,61,computed"));
    }
}
