use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource limits for the exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Edges allowed for `3^m` orientation scans.
    pub max_edges: usize,
    pub max_vertices: usize,
    pub max_poset: usize,
    pub max_halfspaces: usize,
    pub max_dim: usize,
    pub max_circuits: usize,
    /// Lattice points visited by bounded closest-point searches.
    pub max_box: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_edges: 12,
            max_vertices: 10,
            max_poset: 10_000,
            max_halfspaces: 512,
            max_dim: 8,
            max_circuits: 4096,
            max_box: 2_000_000,
        }
    }
}

impl Caps {
    /// Applies `key=value` overrides separated by commas, e.g.
    /// `max_edges=10,max_dim=8`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad cap override {item:?}"),
            };
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            match k.trim() {
                "max_edges" => self.max_edges = v,
                "max_vertices" => self.max_vertices = v,
                "max_poset" => self.max_poset = v,
                "max_halfspaces" => self.max_halfspaces = v,
                "max_dim" => self.max_dim = v,
                "max_circuits" => self.max_circuits = v,
                "max_box" => self.max_box = v,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }
}
