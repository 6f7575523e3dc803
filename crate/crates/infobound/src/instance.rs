//! The JSON instance format accepted by the command-line tools.
//!
//! ```json
//! {"nx": 2, "ny": 2, "pmf": [0.25, 0.25, 0.25, 0.25], "event": [1, 0, 0, 1]}
//! ```
//!
//! `pmf` is the row-major joint matrix (`nx * ny` reals); `event` is an
//! optional row-major 0/1 mask of the same shape.

use std::path::Path;

use serde::Deserialize;

use crate::dist::{EventMask, Joint};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    nx: usize,
    ny: usize,
    pmf: Vec<f64>,
    #[serde(default)]
    event: Option<Vec<u8>>,
}

/// A parsed and validated instance: a joint distribution and, optionally,
/// an event mask of matching shape.
#[derive(Debug, Clone)]
pub struct Instance {
    pub joint: Joint,
    pub event: Option<EventMask>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        let raw: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let joint = Joint::new(raw.pmf, raw.nx, raw.ny)?;
        let event = match raw.event {
            Some(bits) => Some(EventMask::from_bits(&bits, raw.nx, raw.ny)?),
            None => None,
        };
        Ok(Instance { joint, event })
    }

    pub fn load(path: &Path) -> Result<Instance> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Instance::from_json(&text)
    }

    /// The event mask, or [`Error::MissingEvent`] when the file had none.
    pub fn require_event(&self) -> Result<&EventMask> {
        self.event.as_ref().ok_or(Error::MissingEvent)
    }
}
