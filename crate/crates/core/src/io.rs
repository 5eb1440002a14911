//! Versioned JSON documents: `{"schema": "spectral-chart/1", "data": …}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{ChartError, Result};

pub const SCHEMA: &str = "spectral-chart/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document<T> {
    pub schema: String,
    pub data: T,
}

impl<T> Document<T> {
    pub fn new(data: T) -> Self {
        Document { schema: SCHEMA.to_string(), data }
    }
}

/// Pretty-printed document with a trailing newline.
pub fn to_json<T: Serialize>(data: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Document::new(data)).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let doc: Document<T> = serde_json::from_str(text).map_err(|e| ChartError::Parse(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(ChartError::Parse(format!("unsupported schema {:?}, expected {SCHEMA:?}", doc.schema)));
    }
    Ok(doc.data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fix1;
    use crate::polymat::QuadraticDatum;

    #[test]
    fn envelope() {
        let s = to_json(&fix1());
        assert_eq!(from_json::<QuadraticDatum>(&s).unwrap(), fix1());
        let wrong = s.replace(SCHEMA, "spectral-chart/0");
        assert!(from_json::<QuadraticDatum>(&wrong).is_err());
        let extra = s.replacen('{', "{\"note\": 1,", 1);
        assert!(from_json::<QuadraticDatum>(&extra).is_err());
    }

    #[test]
    fn bad_scalar() {
        let s = to_json(&fix1()).replacen("\"1\"", "\"1+*i\"", 1);
        assert!(matches!(from_json::<QuadraticDatum>(&s), Err(ChartError::Parse(_))));
    }
}
