//! JSON medium definitions.
//!
//! ```json
//! {
//!   "electric": { "type": "lorentz", "omega_p": 1.0, "omega_0": 1.0, "gamma": 0.1 },
//!   "magnetic": { "type": "constant", "chi0": 0.0 }
//! }
//! ```
//!
//! `magnetic` is optional and defaults to the zero model. Accepted `type`
//! values and their parameters:
//!
//! | type                | parameters                              |
//! |---------------------|-----------------------------------------|
//! | `constant`          | `chi0 >= 0`                             |
//! | `lorentz`           | `omega_p > 0`, `omega_0 > 0`, `gamma >= 0` |
//! | `drude`             | `omega_p > 0`, `gamma > 0`              |
//! | `sharp_resonance`   | `omega_p > 0`, `omega_0 > 0`            |
//! | `tabulated_coupling`| `omega` (ascending, > 0), `g` (>= 0), equal lengths |
//!
//! Unknown fields are rejected. Errors carry the JSON path of the offending
//! field together with its line and column.

use std::path::Path;

use super::Medium;
use crate::error::{CasimirError, Result};

pub fn parse_medium_json(text: &str) -> Result<Medium> {
    let mut de = serde_json::Deserializer::from_str(text);
    let medium: Medium = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        CasimirError::MediumFile {
            field: if field == "." {
                "<root>".to_string()
            } else {
                field
            },
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| CasimirError::MediumFile {
        field: "<root>".to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    medium.validate().map_err(|e| match e {
        CasimirError::InvalidModel { field, reason } => CasimirError::MediumFile {
            line: locate_key(text, field.rsplit('.').next().unwrap_or(&field)).0,
            column: locate_key(text, field.rsplit('.').next().unwrap_or(&field)).1,
            field,
            message: reason,
        },
        other => other,
    })?;
    Ok(medium)
}

pub fn read_medium_file(path: impl AsRef<Path>) -> Result<Medium> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CasimirError::MediumFile {
        field: path.display().to_string(),
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    parse_medium_json(&text)
}

// 1-based position of the first `"key"` occurrence; (0, 0) when absent.
fn locate_key(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    for (i, line) in text.lines().enumerate() {
        if let Some(col) = line.find(&needle) {
            return (i + 1, col + 1);
        }
    }
    (0, 0)
}
