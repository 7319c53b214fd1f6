//! JSON field records: `{"d": 5, "disc": 5, "fundamental_unit": ["0", "1"], "unit_norm": -1, "h_plus": 1}`.
//! Everything except `d` is optional and cross-checked against the computed values.

use serde::{Deserialize, Serialize};

use super::field::{make_field, QuadElem, RealQuadField};
use super::QuadError;
use crate::numtheory::ring::{format_rational, parse_rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental_unit: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_norm: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_plus: Option<u64>,
}

impl FieldRecord {
    pub fn of(field: &RealQuadField) -> Self {
        FieldRecord {
            d: field.d,
            disc: Some(field.disc),
            fundamental_unit: Some([
                format_rational(&field.fundamental_unit.a),
                format_rational(&field.fundamental_unit.b),
            ]),
            unit_norm: Some(field.fundamental_unit_norm),
            h_plus: field.h_plus,
        }
    }

    /// Build the field and reconcile it with the supplied data.
    pub fn into_field(self) -> Result<RealQuadField, QuadError> {
        let mut field = make_field(self.d)?;
        if let Some(disc) = self.disc {
            if disc != field.disc {
                return Err(QuadError::RecordMismatch(format!("disc {disc} != {}", field.disc)));
            }
        }
        if let Some([a, b]) = &self.fundamental_unit {
            let (a, b) = (
                parse_rational(a).ok_or_else(|| QuadError::Parse(format!("bad coordinate {a:?}")))?,
                parse_rational(b).ok_or_else(|| QuadError::Parse(format!("bad coordinate {b:?}")))?,
            );
            let u = QuadElem::new(a, b);
            let fu = &field.fundamental_unit;
            let candidates = [fu.clone(), fu.neg(), field.conj(fu), field.conj(fu).neg()];
            if !candidates.contains(&u) {
                return Err(QuadError::RecordMismatch(format!("unit {u} is not +-{fu} or its conjugate")));
            }
        }
        if let Some(n) = self.unit_norm {
            if n != field.fundamental_unit_norm {
                return Err(QuadError::RecordMismatch(format!("unit norm {n} != {}", field.fundamental_unit_norm)));
            }
        }
        match (self.h_plus, field.h_plus) {
            (Some(s), Some(c)) if s != c => {
                return Err(QuadError::RecordMismatch(format!("h+ {s} != computed {c}")));
            }
            (Some(s), None) => field.h_plus = Some(s),
            _ => {}
        }
        Ok(field)
    }
}

pub fn parse_field_record(s: &str) -> Result<RealQuadField, QuadError> {
    let rec: FieldRecord = serde_json::from_str(s).map_err(|e| QuadError::Parse(e.to_string()))?;
    rec.into_field()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_mismatch() {
        let f = make_field(10).unwrap();
        let rec = FieldRecord::of(&f);
        let s = serde_json::to_string(&rec).unwrap();
        let g = parse_field_record(&s).unwrap();
        assert_eq!(g.fundamental_unit, f.fundamental_unit);
        assert_eq!(g.h_plus, Some(2));
        assert!(parse_field_record(r#"{"d": 10, "h_plus": 1}"#).is_err());
        assert!(parse_field_record(r#"{"d": 12}"#).is_err());
        assert!(parse_field_record(r#"{"d": 5, "fundamental_unit": ["1", "1"]}"#).is_err());
        assert!(parse_field_record(r#"{"d": 5, "fundamental_unit": ["1", "-1"]}"#).is_ok());
        assert!(parse_field_record("not json").is_err());
    }
}
