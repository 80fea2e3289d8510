//! Hypercubic spin lattices and their nearest-neighbour bonds.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Sites are numbered row-major over `dims` (last extent fastest).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    dims: Vec<usize>,
    boundary: Boundary,
    bonds: Vec<(usize, usize)>,
}

impl Lattice {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn n_sites(&self) -> usize {
        self.dims.iter().product()
    }

    /// Bonds as `(i, j)` with `i < j`, sorted.
    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    /// Site index of a coordinate.
    pub fn site(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&c, &e)| acc * e + c)
    }

    /// Coordinate of a site index.
    pub fn coords(&self, mut site: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &e) in out.iter_mut().zip(&self.dims).rev() {
            *slot = site % e;
            site /= e;
        }
        out
    }
}

/// Builds the lattice with nearest-neighbour bonds. Periodic wrapping is only
/// added along extents greater than two, where it creates a new bond.
pub fn build_lattice(dims: &[usize], boundary: Boundary) -> Result<Lattice> {
    if dims.is_empty() {
        return Err(Error::argument("lattice needs at least one dimension"));
    }
    if dims.contains(&0) {
        return Err(Error::argument(format!("lattice extents must be positive, got {dims:?}")));
    }
    if dims.iter().all(|&e| e < 2) {
        return Err(Error::argument(format!("lattice {dims:?} has no bonds")));
    }
    let mut lattice = Lattice {
        dims: dims.to_vec(),
        boundary,
        bonds: Vec::new(),
    };
    let mut bonds = BTreeSet::new();
    for site in 0..lattice.n_sites() {
        let coords = lattice.coords(site);
        for (d, &extent) in dims.iter().enumerate() {
            let mut next = coords.clone();
            if coords[d] + 1 < extent {
                next[d] += 1;
            } else if boundary == Boundary::Periodic && extent > 2 {
                next[d] = 0;
            } else {
                continue;
            }
            let other = lattice.site(&next);
            bonds.insert((site.min(other), site.max(other)));
        }
    }
    lattice.bonds = bonds.into_iter().collect();
    Ok(lattice)
}
