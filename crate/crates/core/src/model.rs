//! The model-file format: a human-diffable JSON document with named objects.
//!
//! Complex scalars are [re, im] pairs; exact rationals are "p/q" strings and
//! float coefficients plain numbers. Polynomials are ascending coefficient
//! lists, rational entries {num, den}. Map keys serialize in sorted order,
//! so serialize(parse(f)) is byte-identical for canonical files. Unknown
//! fields are rejected with position information.

use crate::error::{Error, Result};
use crate::parametrize::HerglotzParams;
use crate::ratmat::coeff::{Coeff, C64, Q};
use crate::ratmat::{Poly, RatMat, RatScalar};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumRepr {
    Exact(String),
    Float(f64),
}

pub type ScalarRepr = (NumRepr, NumRepr);
pub type PolyRepr = Vec<ScalarRepr>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRepr {
    pub num: PolyRepr,
    pub den: PolyRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<EntryRepr>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassRepr {
    pub point: ScalarRepr,
    /// sigma0 / pi, so exact files stay exact.
    pub mass_over_pi: MatrixRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectRepr {
    RationalMatrix {
        #[serde(flatten)]
        matrix: MatrixRepr,
    },
    Pair {
        e_minus: MatrixRepr,
        e_plus: MatrixRepr,
    },
    DbMatrix {
        n: usize,
        a: MatrixRepr,
    },
    HerglotzParams {
        p: MatrixRepr,
        q: MatrixRepr,
        density: MatrixRepr,
        #[serde(default)]
        point_masses: Vec<MassRepr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower_den: Option<PolyRepr>,
    },
    K0Operator {
        n: usize,
        t: MatrixRepr,
        u: MatrixRepr,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: String,
    pub mode: Mode,
    pub objects: BTreeMap<String, ObjectRepr>,
}

impl ModelFile {
    pub fn new(mode: Mode) -> Self {
        ModelFile { version: "1".to_string(), mode, objects: BTreeMap::new() }
    }

    pub fn parse_str(s: &str) -> Result<ModelFile> {
        let mf: ModelFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("{e}")))?;
        if mf.version != "1" {
            return Err(Error::Parse(format!("unsupported version '{}'", mf.version)));
        }
        mf.validate()?;
        Ok(mf)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("serializable");
        out.push('\n');
        out
    }

    pub fn object(&self, name: &str) -> Result<&ObjectRepr> {
        self.objects
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown object '{name}'")))
    }

    fn validate(&self) -> Result<()> {
        for (name, obj) in &self.objects {
            let mats: Vec<&MatrixRepr> = match obj {
                ObjectRepr::RationalMatrix { matrix } => vec![matrix],
                ObjectRepr::Pair { e_minus, e_plus } => vec![e_minus, e_plus],
                ObjectRepr::DbMatrix { a, .. } => vec![a],
                ObjectRepr::HerglotzParams { p, q, density, point_masses, .. } => {
                    let mut v = vec![p, q, density];
                    v.extend(point_masses.iter().map(|m| &m.mass_over_pi));
                    v
                }
                ObjectRepr::K0Operator { t, u, .. } => vec![t, u],
            };
            for m in mats {
                if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
                    return Err(Error::Parse(format!(
                        "object '{name}': entry grid does not match rows x cols"
                    )));
                }
                for row in &m.entries {
                    for e in row {
                        if e.den.iter().all(|s| scalar_is_zero(s)) {
                            return Err(Error::Parse(format!(
                                "object '{name}': zero denominator"
                            )));
                        }
                        for s in e.num.iter().chain(e.den.iter()) {
                            check_mode(s, self.mode, name)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn scalar_is_zero(s: &ScalarRepr) -> bool {
    let part = |n: &NumRepr| match n {
        NumRepr::Float(x) => *x == 0.0,
        NumRepr::Exact(t) => BigRational::from_str(t).map(|r| r.is_zero()).unwrap_or(false),
    };
    part(&s.0) && part(&s.1)
}

fn check_mode(s: &ScalarRepr, mode: Mode, name: &str) -> Result<()> {
    for part in [&s.0, &s.1] {
        match (mode, part) {
            (Mode::Exact, NumRepr::Float(x)) => {
                return Err(Error::Parse(format!(
                    "object '{name}': float literal {x} in an exact-mode file; write \"p/q\""
                )))
            }
            (Mode::Float, NumRepr::Exact(t)) => {
                return Err(Error::Parse(format!(
                    "object '{name}': rational literal \"{t}\" in a float-mode file"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

// --- encoding ---

pub trait ModelCoeff: Coeff {
    const MODE: Mode;
    fn encode(&self) -> ScalarRepr;
    fn decode(s: &ScalarRepr) -> Result<Self>;
}

impl ModelCoeff for Q {
    const MODE: Mode = Mode::Exact;

    fn encode(&self) -> ScalarRepr {
        (
            NumRepr::Exact(self.re.to_string()),
            NumRepr::Exact(self.im.to_string()),
        )
    }

    fn decode(s: &ScalarRepr) -> Result<Self> {
        let part = |n: &NumRepr| -> Result<BigRational> {
            match n {
                NumRepr::Exact(t) => BigRational::from_str(t)
                    .map_err(|e| Error::Parse(format!("bad rational '{t}': {e}"))),
                NumRepr::Float(x) => Err(Error::Parse(format!(
                    "float literal {x} cannot enter exact mode"
                ))),
            }
        };
        Ok(Complex::new(part(&s.0)?, part(&s.1)?))
    }
}

impl ModelCoeff for C64 {
    const MODE: Mode = Mode::Float;

    fn encode(&self) -> ScalarRepr {
        (NumRepr::Float(self.re), NumRepr::Float(self.im))
    }

    fn decode(s: &ScalarRepr) -> Result<Self> {
        let part = |n: &NumRepr| -> Result<f64> {
            match n {
                NumRepr::Float(x) => Ok(*x),
                // allow exact literals to flow into float mode (one-way)
                NumRepr::Exact(t) => {
                    let r = BigRational::from_str(t)
                        .map_err(|e| Error::Parse(format!("bad rational '{t}': {e}")))?;
                    Ok(num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN))
                }
            }
        };
        Ok(C64::new(part(&s.0)?, part(&s.1)?))
    }
}

pub fn encode_poly<C: ModelCoeff>(p: &Poly<C>) -> PolyRepr {
    if p.is_zero() {
        return vec![C::zero().encode()];
    }
    p.coeffs().iter().map(|c| c.encode()).collect()
}

pub fn decode_poly<C: ModelCoeff>(p: &PolyRepr) -> Result<Poly<C>> {
    let coeffs: Result<Vec<C>> = p.iter().map(C::decode).collect();
    Ok(Poly::new(coeffs?))
}

pub fn encode_matrix<C: ModelCoeff>(m: &RatMat<C>) -> MatrixRepr {
    let entries = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let e = m.at(r, c);
                    EntryRepr { num: encode_poly(e.num()), den: encode_poly(e.den()) }
                })
                .collect()
        })
        .collect();
    MatrixRepr { rows: m.rows(), cols: m.cols(), entries }
}

pub fn decode_matrix<C: ModelCoeff>(m: &MatrixRepr) -> Result<RatMat<C>> {
    let mut entries = Vec::with_capacity(m.rows * m.cols);
    for row in &m.entries {
        for e in row {
            let num = decode_poly::<C>(&e.num)?;
            let den = decode_poly::<C>(&e.den)?;
            entries.push(RatScalar::new(num, den)?);
        }
    }
    RatMat::from_entries(m.rows, m.cols, entries)
}

pub fn encode_herglotz<C: ModelCoeff>(h: &HerglotzParams<C>) -> ObjectRepr {
    ObjectRepr::HerglotzParams {
        p: encode_matrix(&h.p),
        q: encode_matrix(&h.q),
        density: encode_matrix(&h.density),
        point_masses: h
            .point_masses
            .iter()
            .map(|(pt, m)| MassRepr { point: pt.encode(), mass_over_pi: encode_matrix(m) })
            .collect(),
        lower_den: h.lower_den_hint.as_ref().map(encode_poly),
    }
}

pub fn decode_herglotz<C: ModelCoeff>(obj: &ObjectRepr) -> Result<HerglotzParams<C>> {
    match obj {
        ObjectRepr::HerglotzParams { p, q, density, point_masses, lower_den } => {
            Ok(HerglotzParams {
                p: decode_matrix(p)?,
                q: decode_matrix(q)?,
                density: decode_matrix(density)?,
                point_masses: point_masses
                    .iter()
                    .map(|m| Ok((C::decode(&m.point)?, decode_matrix(&m.mass_over_pi)?)))
                    .collect::<Result<Vec<_>>>()?,
                lower_den_hint: lower_den.as_ref().map(|p| decode_poly(p)).transpose()?,
            })
        }
        _ => Err(Error::Parse("expected a herglotz_params object".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::Coeff;

    fn blaschke_like() -> RatMat<Q> {
        let mut a = RatMat::<Q>::zeros(2, 2);
        a.set(0, 0, RatScalar::var());
        a.set(0, 1, RatScalar::one());
        a.set(1, 0, RatScalar::constant(-Q::from_i64(1)));
        a
    }

    #[test]
    fn canonical_roundtrip_is_byte_identical() {
        let mut mf = ModelFile::new(Mode::Exact);
        mf.objects.insert(
            "a".to_string(),
            ObjectRepr::RationalMatrix { matrix: encode_matrix(&blaschke_like()) },
        );
        let text = mf.to_json();
        let parsed = ModelFile::parse_str(&text).unwrap();
        assert_eq!(parsed.to_json(), text);
        // decoded matrix equals the original
        match parsed.object("a").unwrap() {
            ObjectRepr::RationalMatrix { matrix } => {
                let m: RatMat<Q> = decode_matrix(matrix).unwrap();
                assert!(m.equals(&blaschke_like(), 0.0));
            }
            _ => panic!("wrong type"),
        }
    }

    #[test]
    fn zero_denominator_rejected() {
        let text = r#"{
  "version": "1",
  "mode": "exact",
  "objects": {
    "bad": {
      "type": "rational_matrix",
      "rows": 1, "cols": 1,
      "entries": [[{"num": [["1","0"]], "den": [["0","0"]]}]]
    }
  }
}"#;
        let err = ModelFile::parse_str(text).unwrap_err();
        assert!(format!("{err}").contains("zero denominator"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected_with_position() {
        let text = r#"{
  "version": "1",
  "mode": "exact",
  "surprise": 1,
  "objects": {}
}"#;
        let err = ModelFile::parse_str(text).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("surprise") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn mode_mismatch_rejected() {
        let text = r#"{
  "version": "1",
  "mode": "exact",
  "objects": {
    "m": {
      "type": "rational_matrix",
      "rows": 1, "cols": 1,
      "entries": [[{"num": [[0.5, 0.0]], "den": [["1","0"]]}]]
    }
  }
}"#;
        assert!(ModelFile::parse_str(text).is_err());
    }

    #[test]
    fn float_matrix_roundtrip() {
        let m = blaschke_like().to_float();
        let repr = encode_matrix(&m);
        let back: RatMat<C64> = decode_matrix(&repr).unwrap();
        assert!(back.equals(&m, 1e-15));
    }
}
