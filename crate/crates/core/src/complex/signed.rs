//! Plain (non-equivariant) cell complexes with signed cellular actions, and
//! the passage to orbit encoding: first divide out a free cyclic action, then
//! read off the induced involution.

use std::collections::BTreeMap;

use super::{Cell, EquivariantCellComplex, GroupRingElement, Orbit};
use crate::error::ComplexError;

/// Finite cell complex over Z with named cells.
#[derive(Clone, Debug, Default)]
pub struct SignedComplex {
    pub names: Vec<String>,
    pub dims: Vec<u32>,
    pub boundary: Vec<Vec<(usize, i64)>>,
}

/// Cellular map permuting cells up to sign: cell `i` goes to `sign * cell`.
#[derive(Clone, Debug)]
pub struct SignedAction {
    pub image: Vec<(usize, i64)>,
}

impl SignedComplex {
    pub fn add(&mut self, name: String, dim: u32, boundary: Vec<(usize, i64)>) -> usize {
        self.names.push(name);
        self.dims.push(dim);
        self.boundary.push(boundary);
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Checks that an action commutes with the boundary.
    pub fn check_action(&self, g: &SignedAction) -> Result<(), ComplexError> {
        for x in 0..self.len() {
            let (gx, s) = g.image[x];
            let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in &self.boundary[x] {
                let (gy, t) = g.image[y];
                *lhs.entry(gy).or_insert(0) += c * t;
            }
            let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in &self.boundary[gx] {
                *rhs.entry(y).or_insert(0) += c * s;
            }
            lhs.retain(|_, v| *v != 0);
            rhs.retain(|_, v| *v != 0);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap(format!("action does not commute with ∂ on `{}`", self.names[x])));
            }
        }
        Ok(())
    }

    /// Quotient by the cyclic group of the given order generated by `rho`,
    /// which must act freely on cells. Returns the quotient and, for each cell, its quotient cell and
    /// the sign relating it to that cell's representative, plus the
    /// representatives themselves.
    pub fn quotient(&self, rho: &SignedAction, order: usize) -> Result<(SignedComplex, Vec<(usize, i64)>, Vec<usize>), ComplexError> {
        self.check_action(rho)?;
        let n = self.len();
        let mut class: Vec<Option<(usize, i64)>> = vec![None; n];
        let mut q = SignedComplex::default();
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x].is_some() {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            let (mut y, mut s) = (x, 1i64);
            let mut size = 0;
            loop {
                match class[y] {
                    Some((kk, ss)) if kk == k => {
                        if y == x && ss != s {
                            return Err(ComplexError::OrientationReversingFixed(self.names[x].clone()));
                        }
                        if size != order {
                            return Err(ComplexError::BadParameter(format!(
                                "cyclic action is not free on `{}`",
                                self.names[x]
                            )));
                        }
                        break;
                    }
                    _ => class[y] = Some((k, s)),
                }
                size += 1;
                let (gy, t) = rho.image[y];
                y = gy;
                s *= t;
            }
        }
        let class: Vec<(usize, i64)> = class.into_iter().map(|c| c.expect("all cells classified")).collect();
        for &r in &reps {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in &self.boundary[r] {
                let (k, s) = class[y];
                *acc.entry(k).or_insert(0) += c * s;
            }
            q.add(self.names[r].clone(), self.dims[r], acc.into_iter().filter(|(_, c)| *c != 0).collect());
        }
        Ok((q, class, reps))
    }

    /// Descends an action commuting (up to the group) with a quotient map.
    pub fn descend(&self, class: &[(usize, i64)], reps: &[usize], g: &SignedAction) -> SignedAction {
        let image = reps
            .iter()
            .map(|&r| {
                let (y, s) = g.image[r];
                let (k, t) = class[y];
                (k, s * t)
            })
            .collect();
        SignedAction { image }
    }

    /// Orbit encoding of this complex under an involution. Cells mapped to
    /// themselves with sign +1 become fixed; all other cells pair up into
    /// free orbits, with the partner re-oriented so that `τσ = +σ'`.
    pub fn to_equivariant(&self, tau: &SignedAction) -> Result<EquivariantCellComplex, ComplexError> {
        self.check_action(tau)?;
        let n = self.len();
        // For each cell: (orbit index, sign such that cell = sign * (rep or τ rep), is partner)
        let mut slot: Vec<Option<(usize, i64, bool)>> = vec![None; n];
        let mut cells = Vec::new();
        let mut reps = Vec::new();
        for x in 0..n {
            if slot[x].is_some() {
                continue;
            }
            let (y, s) = tau.image[x];
            let k = cells.len();
            if y == x {
                if s != 1 {
                    return Err(ComplexError::OrientationReversingFixed(self.names[x].clone()));
                }
                cells.push(Cell { id: self.names[x].clone(), dim: self.dims[x], orbit: Orbit::Fixed });
                slot[x] = Some((k, 1, false));
            } else {
                cells.push(Cell { id: self.names[x].clone(), dim: self.dims[x], orbit: Orbit::Free });
                slot[x] = Some((k, 1, false));
                // τx = s·y, so y = s·τx.
                slot[y] = Some((k, s, true));
            }
            reps.push(x);
        }
        let mut boundary = Vec::with_capacity(cells.len());
        for (k, &x) in reps.iter().enumerate() {
            let mut acc: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
            for &(y, c) in &self.boundary[x] {
                let (j, s, partner) = slot[y].expect("all cells assigned");
                let e = acc.entry(j).or_default();
                if partner {
                    e.b += c * s;
                } else {
                    e.a += c * s;
                }
            }
            if cells[k].orbit == Orbit::Fixed {
                for j in acc.keys() {
                    if cells[*j].orbit == Orbit::Free {
                        return Err(ComplexError::FixedBoundsFree { cell: cells[k].id.clone(), face: cells[*j].id.clone() });
                    }
                }
            }
            boundary.push(acc.into_iter().filter(|(_, g)| !g.is_zero()).collect());
        }
        EquivariantCellComplex::from_indexed(cells, boundary)
    }
}
