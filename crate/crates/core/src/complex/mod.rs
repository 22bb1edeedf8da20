//! Finite Z/2-CW complexes in orbit encoding.
//!
//! Only one representative of each free orbit is stored; its partner is
//! implicit. Boundaries carry coefficients `a + bτ` in the group ring
//! `Z[Z/2]`, so `∂σ = Σ (a + bτ)ρ` and `∂(τσ) = τ∂σ`.

mod catalog;
mod json;
mod signed;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ComplexError;

pub use catalog::{catalog, lens_clutched, lens_with_subdivision, CatalogParams, CATALOG_NAMES};
pub use signed::{SignedAction, SignedComplex};

/// Element `a + bτ` of the integral group ring of Z/2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupRingElement {
    pub a: i64,
    pub b: i64,
}

impl GroupRingElement {
    pub const fn new(a: i64, b: i64) -> Self {
        GroupRingElement { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Augmentation `a + b`, the coefficient seen by a fixed face.
    pub fn augmentation(&self) -> i64 {
        self.a + self.b
    }

    pub fn mul(&self, o: &Self) -> Self {
        GroupRingElement::new(self.a * o.a + self.b * o.b, self.a * o.b + self.b * o.a)
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupRingElement::new(self.a + o.a, self.b + o.b)
    }

    /// Multiplication by τ swaps the two coefficients.
    pub fn tau(&self) -> Self {
        GroupRingElement::new(self.b, self.a)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}τ"),
            (a, b) if b < 0 => write!(f, "{a} - {}τ", -b),
            (a, b) => write!(f, "{a} + {b}τ"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orbit {
    Free,
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: String,
    pub dim: u32,
    pub orbit: Orbit,
}

/// A Z/2-CW complex with orbit-encoded cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantCellComplex {
    cells: Vec<Cell>,
    boundary: Vec<Vec<(usize, GroupRingElement)>>,
    index: HashMap<String, usize>,
}

/// A set of orbit cells of some complex, closed under boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubcomplexRef {
    members: Vec<bool>,
}

impl SubcomplexRef {
    pub fn empty(n: usize) -> Self {
        SubcomplexRef { members: vec![false; n] }
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.members[cell]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let members = self.members.iter().zip(&other.members).map(|(a, b)| *a || *b).collect();
        SubcomplexRef { members }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let members = self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect();
        SubcomplexRef { members }
    }

    pub fn ambient_len(&self) -> usize {
        self.members.len()
    }
}

/// The non-equivariant cell structure underlying an orbit-encoded complex:
/// every free orbit contributes its representative and its partner.
#[derive(Clone, Debug)]
pub struct Underlying {
    /// Orbit cell each underlying cell belongs to.
    pub orbit_of: Vec<usize>,
    /// Whether the underlying cell is the τ-partner of the representative.
    pub is_partner: Vec<bool>,
    pub dims: Vec<u32>,
    /// The involution as a permutation of underlying cells.
    pub tau: Vec<usize>,
    /// Sparse integral boundary of each underlying cell.
    pub boundary: Vec<Vec<(usize, i64)>>,
    /// Underlying index of each orbit representative.
    pub rep: Vec<usize>,
}

impl Underlying {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Underlying indices of the cells of a subcomplex.
    pub fn members(&self, sub: &SubcomplexRef) -> Vec<bool> {
        self.orbit_of.iter().map(|&o| sub.contains(o)).collect()
    }
}

impl EquivariantCellComplex {
    /// Builds a complex from cells and boundary terms keyed by cell id.
    pub fn new(cells: Vec<Cell>, boundary: Vec<Vec<(String, GroupRingElement)>>) -> Result<Self, ComplexError> {
        assert_eq!(cells.len(), boundary.len(), "one boundary list per cell");
        let mut index = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateCell(c.id.clone()));
            }
        }
        let mut bd = Vec::with_capacity(cells.len());
        for terms in boundary {
            let mut acc: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
            for (id, g) in terms {
                let j = *index.get(&id).ok_or(ComplexError::UnknownCell(id))?;
                let e = acc.entry(j).or_default();
                *e = e.add(&g);
            }
            bd.push(acc.into_iter().filter(|(_, g)| !g.is_zero()).collect());
        }
        let x = EquivariantCellComplex { cells, boundary: bd, index };
        x.validate()?;
        Ok(x)
    }

    /// Builds from index-based boundaries; used by the constructions here.
    pub(crate) fn from_indexed(cells: Vec<Cell>, boundary: Vec<Vec<(usize, GroupRingElement)>>) -> Result<Self, ComplexError> {
        let named = boundary
            .into_iter()
            .map(|t| t.into_iter().map(|(j, g)| (cells[j].id.clone(), g)).collect())
            .collect();
        Self::new(cells.clone(), named)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn boundary_of(&self, cell: usize) -> &[(usize, GroupRingElement)] {
        &self.boundary[cell]
    }

    pub fn dimension(&self) -> Option<u32> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Orbit-cell counts keyed by `(dim, orbit)`.
    pub fn cell_counts(&self) -> BTreeMap<(u32, Orbit), usize> {
        let mut m = BTreeMap::new();
        for c in &self.cells {
            *m.entry((c.dim, c.orbit)).or_insert(0) += 1;
        }
        m
    }

    /// Euler characteristic of the underlying space.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| {
                let n = if c.orbit == Orbit::Free { 2 } else { 1 };
                if c.dim % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Structural checks: face dimensions, fixed cells bounding only fixed
    /// cells, and `∂∂ = 0` on the underlying complex.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for (i, c) in self.cells.iter().enumerate() {
            for (j, _) in &self.boundary[i] {
                let f = &self.cells[*j];
                if f.dim + 1 != c.dim {
                    return Err(ComplexError::BadBoundaryDimension {
                        cell: c.id.clone(),
                        dim: c.dim,
                        face: f.id.clone(),
                        face_dim: f.dim,
                    });
                }
                if c.orbit == Orbit::Fixed && f.orbit == Orbit::Free {
                    return Err(ComplexError::FixedBoundsFree { cell: c.id.clone(), face: f.id.clone() });
                }
            }
        }
        let u = self.underlying();
        for (x, terms) in u.boundary.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in terms {
                for &(z, d) in &u.boundary[y] {
                    *acc.entry(z).or_insert(0) += c * d;
                }
            }
            if let Some((&z, &v)) = acc.iter().find(|(_, v)| **v != 0) {
                return Err(ComplexError::BoundarySquaredNonzero {
                    cell: self.underlying_name(&u, x),
                    face: self.underlying_name(&u, z),
                    coefficient: v.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Display name of an underlying cell: the orbit id, prefixed by `τ` for
    /// partners.
    pub fn underlying_name(&self, u: &Underlying, x: usize) -> String {
        let id = &self.cells[u.orbit_of[x]].id;
        if u.is_partner[x] {
            format!("τ{id}")
        } else {
            id.clone()
        }
    }

    /// Expands the orbit encoding into the underlying cell structure.
    pub fn underlying(&self) -> Underlying {
        let mut orbit_of = Vec::new();
        let mut is_partner = Vec::new();
        let mut dims = Vec::new();
        let mut rep = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            rep.push(orbit_of.len());
            orbit_of.push(i);
            is_partner.push(false);
            dims.push(c.dim);
            if c.orbit == Orbit::Free {
                orbit_of.push(i);
                is_partner.push(true);
                dims.push(c.dim);
            }
        }
        let n = orbit_of.len();
        let tau: Vec<usize> = (0..n)
            .map(|x| {
                let i = orbit_of[x];
                match self.cells[i].orbit {
                    Orbit::Fixed => x,
                    Orbit::Free if is_partner[x] => rep[i],
                    Orbit::Free => rep[i] + 1,
                }
            })
            .collect();
        let mut boundary = vec![Vec::new(); n];
        for (i, terms) in self.boundary.iter().enumerate() {
            let r = rep[i];
            let mut own: BTreeMap<usize, i64> = BTreeMap::new();
            for (j, g) in terms {
                match self.cells[*j].orbit {
                    Orbit::Fixed => *own.entry(rep[*j]).or_insert(0) += g.augmentation(),
                    Orbit::Free => {
                        *own.entry(rep[*j]).or_insert(0) += g.a;
                        *own.entry(rep[*j] + 1).or_insert(0) += g.b;
                    }
                }
            }
            let own: Vec<(usize, i64)> = own.into_iter().filter(|(_, c)| *c != 0).collect();
            if self.cells[i].orbit == Orbit::Free {
                boundary[r + 1] = own.iter().map(|&(y, c)| (tau[y], c)).collect();
                boundary[r + 1].sort_unstable();
            }
            boundary[r] = own;
        }
        Underlying { orbit_of, is_partner, dims, tau, boundary, rep }
    }

    /// The fixed-point subcomplex.
    pub fn fixed_subcomplex(&self) -> SubcomplexRef {
        SubcomplexRef { members: self.cells.iter().map(|c| c.orbit == Orbit::Fixed).collect() }
    }

    pub fn empty_subcomplex(&self) -> SubcomplexRef {
        SubcomplexRef::empty(self.cells.len())
    }

    pub fn full_subcomplex(&self) -> SubcomplexRef {
        SubcomplexRef { members: vec![true; self.cells.len()] }
    }

    /// Subcomplex from cell ids; fails unless closed under boundary.
    pub fn subcomplex<S: AsRef<str>>(&self, ids: &[S]) -> Result<SubcomplexRef, ComplexError> {
        let mut members = vec![false; self.cells.len()];
        for id in ids {
            let i = self.cell_index(id.as_ref()).ok_or_else(|| ComplexError::UnknownCell(id.as_ref().to_string()))?;
            members[i] = true;
        }
        let s = SubcomplexRef { members };
        self.check_closed(&s)?;
        Ok(s)
    }

    /// Subcomplex from orbit indices; fails unless closed under boundary.
    pub fn subcomplex_from_indices(&self, idx: &[usize]) -> Result<SubcomplexRef, ComplexError> {
        let mut members = vec![false; self.cells.len()];
        for &i in idx {
            members[i] = true;
        }
        let s = SubcomplexRef { members };
        self.check_closed(&s)?;
        Ok(s)
    }

    /// Smallest subcomplex containing the given cells.
    pub fn closure(&self, idx: &[usize]) -> SubcomplexRef {
        let mut members = vec![false; self.cells.len()];
        let mut stack: Vec<usize> = idx.to_vec();
        while let Some(i) = stack.pop() {
            if !members[i] {
                members[i] = true;
                stack.extend(self.boundary[i].iter().map(|(j, _)| *j));
            }
        }
        SubcomplexRef { members }
    }

    fn check_closed(&self, s: &SubcomplexRef) -> Result<(), ComplexError> {
        for i in s.indices() {
            for (j, _) in &self.boundary[i] {
                if !s.contains(*j) {
                    return Err(ComplexError::Parse(format!(
                        "subcomplex not closed: `{}` has face `{}` outside it",
                        self.cells[i].id, self.cells[*j].id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extracts a subcomplex as a complex in its own right.
    pub fn extract(&self, s: &SubcomplexRef) -> EquivariantCellComplex {
        let idx = s.indices();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let cells: Vec<Cell> = idx.iter().map(|&i| self.cells[i].clone()).collect();
        let boundary = idx
            .iter()
            .map(|&i| self.boundary[i].iter().map(|(j, g)| (pos[j], *g)).collect())
            .collect();
        Self::from_indexed(cells, boundary).expect("subcomplex of a valid complex is valid")
    }

    /// Connected components of a subcomplex (via its 0- and 1-cells of the
    /// underlying space).
    pub fn component_count(&self, s: &SubcomplexRef) -> usize {
        let u = self.underlying();
        let mem = u.members(s);
        let n = u.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for x in 0..n {
            if !mem[x] || u.dims[x] == 0 {
                continue;
            }
            for &(y, _) in &u.boundary[x] {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
        // Higher cells attach to lower ones through their boundary; a cell
        // with empty boundary is its own component only in dimension 0.
        let mut roots = BTreeSet::new();
        for x in 0..n {
            if mem[x] && u.dims[x] == 0 {
                roots.insert(find(&mut parent, x));
            }
        }
        roots.len()
    }

    /// Product complex with the diagonal involution.
    ///
    /// Free-orbit representatives are `σ × d` (σ a free representative of the
    /// first factor, `d` any underlying cell of the second) and `f × ρ` (`f`
    /// fixed, ρ a free representative). Signs follow `∂(x×y) = ∂x×y +
    /// (-1)^{|x|} x×∂y`.
    pub fn product(&self, other: &EquivariantCellComplex) -> EquivariantCellComplex {
        let ux = self.underlying();
        let uy = other.underlying();
        let nx = ux.len();
        let ny = uy.len();
        // For each underlying pair: (orbit index in the product, is partner).
        let mut slot: Vec<Option<(usize, bool)>> = vec![None; nx * ny];
        let mut cells = Vec::new();
        let mut pairs = Vec::new();
        let name_y = |y: usize| other.underlying_name(&uy, y);
        for x in 0..nx {
            if ux.is_partner[x] {
                continue;
            }
            let cx = &self.cells[ux.orbit_of[x]];
            for y in 0..ny {
                let cy = &other.cells[uy.orbit_of[y]];
                let orbit = match (cx.orbit, cy.orbit) {
                    (Orbit::Fixed, Orbit::Fixed) => Orbit::Fixed,
                    (Orbit::Fixed, Orbit::Free) if uy.is_partner[y] => continue,
                    _ => Orbit::Free,
                };
                let k = cells.len();
                cells.push(Cell { id: format!("{}×{}", cx.id, name_y(y)), dim: cx.dim + cy.dim, orbit });
                pairs.push((x, y));
                slot[x * ny + y] = Some((k, false));
                if orbit == Orbit::Free {
                    slot[ux.tau[x] * ny + uy.tau[y]] = Some((k, true));
                }
            }
        }
        let mut boundary = Vec::with_capacity(cells.len());
        for &(x, y) in &pairs {
            let mut terms: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
            let mut push = |xx: usize, yy: usize, c: i64| {
                let (k, partner) = slot[xx * ny + yy].expect("every underlying pair has an orbit");
                let e = terms.entry(k).or_default();
                if partner {
                    e.b += c;
                } else {
                    e.a += c;
                }
            };
            for &(x2, c) in &ux.boundary[x] {
                push(x2, y, c);
            }
            let sign = if ux.dims[x] % 2 == 0 { 1 } else { -1 };
            for &(y2, c) in &uy.boundary[y] {
                push(x, y2, sign * c);
            }
            boundary.push(
                terms
                    .into_iter()
                    .map(|(k, g)| {
                        // Fixed faces: fold the τ-part into the coefficient.
                        if cells[k].orbit == Orbit::Fixed {
                            (k, GroupRingElement::new(g.augmentation(), 0))
                        } else {
                            (k, g)
                        }
                    })
                    .filter(|(_, g)| !g.is_zero())
                    .collect(),
            );
        }
        Self::from_indexed(cells, boundary).expect("product of valid complexes is valid")
    }

    /// Glues `other` onto `self` by identifying cells pairwise. Each pair maps
    /// a cell of `self` to a cell of `other` with the same dimension and orbit
    /// type; the identified cells must form subcomplexes whose boundaries
    /// correspond. Cells of `other` that clash with ids of `self` get the
    /// prefix `B.`.
    pub fn glue(&self, other: &EquivariantCellComplex, along: &[(String, String)]) -> Result<EquivariantCellComplex, ComplexError> {
        let mut map_y: HashMap<usize, usize> = HashMap::new();
        let mut seen_x = BTreeSet::new();
        for (xi, yi) in along {
            let x = self.cell_index(xi).ok_or_else(|| ComplexError::UnknownCell(xi.clone()))?;
            let y = other.cell_index(yi).ok_or_else(|| ComplexError::UnknownCell(yi.clone()))?;
            let (cx, cy) = (&self.cells[x], &other.cells[y]);
            if cx.dim != cy.dim || cx.orbit != cy.orbit {
                return Err(ComplexError::Glue(format!("`{xi}` and `{yi}` differ in dimension or orbit type")));
            }
            if map_y.insert(y, x).is_some() || !seen_x.insert(x) {
                return Err(ComplexError::Glue(format!("cell used twice in identification: `{xi}` / `{yi}`")));
            }
        }
        // Identified cells must be subcomplexes with matching boundaries.
        for (&y, &x) in &map_y {
            let mut by: Vec<(usize, GroupRingElement)> = Vec::new();
            for (f, g) in &other.boundary[y] {
                let fx = *map_y.get(f).ok_or_else(|| {
                    ComplexError::Glue(format!("face `{}` of an identified cell is not identified", other.cells[*f].id))
                })?;
                by.push((fx, *g));
            }
            by.sort_unstable_by_key(|t| t.0);
            if by != self.boundary[x] {
                return Err(ComplexError::Glue(format!(
                    "boundaries of `{}` and `{}` do not correspond",
                    self.cells[x].id, other.cells[y].id
                )));
            }
        }
        let mut cells = self.cells.clone();
        let mut boundary = self.boundary.clone();
        let mut pos: HashMap<usize, usize> = map_y.clone();
        for (y, c) in other.cells.iter().enumerate() {
            if map_y.contains_key(&y) {
                continue;
            }
            let mut c = c.clone();
            if self.index.contains_key(&c.id) {
                c.id = format!("B.{}", c.id);
            }
            pos.insert(y, cells.len());
            cells.push(c);
            boundary.push(Vec::new());
        }
        for (y, terms) in other.boundary.iter().enumerate() {
            if map_y.contains_key(&y) {
                continue;
            }
            boundary[pos[&y]] = terms.iter().map(|(f, g)| (pos[f], *g)).collect();
        }
        Self::from_indexed(cells, boundary)
    }

    pub fn to_json(&self) -> String {
        json::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        json::from_json(text)
    }
}

/// Equivariant cellular chain map, given on orbit representatives:
/// `f(σ) = Σ g_k ρ_k` with `f(τσ) = τ f(σ)`.
#[derive(Clone, Debug)]
pub struct EquivariantChainMap {
    pub source: EquivariantCellComplex,
    pub target: EquivariantCellComplex,
    pub images: Vec<Vec<(usize, GroupRingElement)>>,
}

impl EquivariantChainMap {
    pub fn new(
        source: EquivariantCellComplex,
        target: EquivariantCellComplex,
        images: Vec<Vec<(usize, GroupRingElement)>>,
    ) -> Result<Self, ComplexError> {
        let f = EquivariantChainMap { source, target, images };
        f.check()?;
        Ok(f)
    }

    pub fn identity(x: &EquivariantCellComplex) -> Self {
        let images = (0..x.len()).map(|i| vec![(i, GroupRingElement::new(1, 0))]).collect();
        EquivariantChainMap { source: x.clone(), target: x.clone(), images }
    }

    /// Inclusion of a subcomplex, with the subcomplex extracted as the source.
    pub fn inclusion(x: &EquivariantCellComplex, s: &SubcomplexRef) -> Self {
        let idx = s.indices();
        let images = idx.iter().map(|&i| vec![(i, GroupRingElement::new(1, 0))]).collect();
        EquivariantChainMap { source: x.extract(s), target: x.clone(), images }
    }

    /// Integral matrix of the map on underlying cells, as sparse columns
    /// indexed by source underlying cells.
    pub fn underlying_matrix(&self) -> Vec<Vec<(usize, i64)>> {
        let us = self.source.underlying();
        let ut = self.target.underlying();
        let mut cols = vec![Vec::new(); us.len()];
        for (i, img) in self.images.iter().enumerate() {
            let mut own: BTreeMap<usize, i64> = BTreeMap::new();
            for (j, g) in img {
                match self.target.cells[*j].orbit {
                    Orbit::Fixed => *own.entry(ut.rep[*j]).or_insert(0) += g.augmentation(),
                    Orbit::Free => {
                        *own.entry(ut.rep[*j]).or_insert(0) += g.a;
                        *own.entry(ut.rep[*j] + 1).or_insert(0) += g.b;
                    }
                }
            }
            let own: Vec<(usize, i64)> = own.into_iter().filter(|(_, c)| *c != 0).collect();
            let r = us.rep[i];
            if self.source.cells[i].orbit == Orbit::Free {
                let mut tw: Vec<(usize, i64)> = own.iter().map(|&(y, c)| (ut.tau[y], c)).collect();
                tw.sort_unstable();
                cols[r + 1] = tw;
            }
            cols[r] = own;
        }
        cols
    }

    fn check(&self) -> Result<(), ComplexError> {
        if self.images.len() != self.source.len() {
            return Err(ComplexError::NotChainMap("one image per source cell required".into()));
        }
        for (i, img) in self.images.iter().enumerate() {
            let ci = &self.source.cells[i];
            for (j, _) in img {
                let cj = self.target.cells.get(*j).ok_or_else(|| ComplexError::NotChainMap("image cell out of range".into()))?;
                if cj.dim != ci.dim {
                    return Err(ComplexError::NotChainMap(format!("`{}` sent to a cell of another dimension", ci.id)));
                }
            }
        }
        let us = self.source.underlying();
        let ut = self.target.underlying();
        let m = self.underlying_matrix();
        // Equivariance on underlying cells: f(τx) = τ f(x).
        for x in 0..us.len() {
            let mut a: Vec<(usize, i64)> = m[x].iter().map(|&(y, c)| (ut.tau[y], c)).collect();
            a.sort_unstable();
            if a != m[us.tau[x]] {
                return Err(ComplexError::NotChainMap(format!("not equivariant on `{}`", self.source.underlying_name(&us, x))));
            }
        }
        // f∂ = ∂f.
        for x in 0..us.len() {
            let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in &us.boundary[x] {
                for &(z, d) in &m[y] {
                    *lhs.entry(z).or_insert(0) += c * d;
                }
            }
            let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
            for &(y, c) in &m[x] {
                for &(z, d) in &ut.boundary[y] {
                    *rhs.entry(z).or_insert(0) += c * d;
                }
            }
            lhs.retain(|_, v| *v != 0);
            rhs.retain(|_, v| *v != 0);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap(format!("does not commute with ∂ on `{}`", self.source.underlying_name(&us, x))));
            }
        }
        Ok(())
    }
}

/// The circle with trivial involution subdivided into `n` vertices and `n`
/// edges, with the degree-`n` map onto the one-vertex circle.
pub fn subdivide_circle_map(n: usize) -> Result<EquivariantChainMap, ComplexError> {
    if n == 0 {
        return Err(ComplexError::BadParameter("subdivision needs n ≥ 1".into()));
    }
    let one = GroupRingElement::new(1, 0);
    let mut cells = Vec::new();
    let mut boundary = Vec::new();
    for k in 0..n {
        cells.push(Cell { id: format!("v{k}"), dim: 0, orbit: Orbit::Fixed });
        boundary.push(vec![]);
    }
    for k in 0..n {
        cells.push(Cell { id: format!("e{k}"), dim: 1, orbit: Orbit::Fixed });
        let b = if n == 1 {
            vec![]
        } else {
            vec![((k + 1) % n, one), (k, GroupRingElement::new(-1, 0))]
        };
        boundary.push(b);
    }
    let source = EquivariantCellComplex::from_indexed(cells, boundary)?;
    let target = catalog("circle_trivial", &CatalogParams::default())?;
    let images = (0..2 * n).map(|i| vec![(usize::from(i >= n), one)]).collect();
    EquivariantChainMap::new(source, target, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> CatalogParams {
        CatalogParams::default()
    }

    #[test]
    fn torus_cell_counts() {
        let s11 = catalog("s11", &p()).unwrap();
        let t = s11.product(&s11);
        let c = t.cell_counts();
        assert_eq!(c[&(0, Orbit::Fixed)], 4);
        assert_eq!(c[&(1, Orbit::Free)], 4);
        assert_eq!(c[&(2, Orbit::Free)], 2);
        assert_eq!(c.len(), 3);
        assert_eq!(t.euler_characteristic(), 0);
    }

    #[test]
    fn boundary_squared_is_reported() {
        let cells = vec![
            Cell { id: "v".into(), dim: 0, orbit: Orbit::Fixed },
            Cell { id: "e".into(), dim: 1, orbit: Orbit::Fixed },
            Cell { id: "d".into(), dim: 2, orbit: Orbit::Fixed },
        ];
        // ∂e = 0 but ∂d = e is fine; make ∂e = v so ∂∂d = v ≠ 0.
        let bd = vec![vec![], vec![("v".to_string(), GroupRingElement::new(1, 0))], vec![("e".to_string(), GroupRingElement::new(1, 0))]];
        match EquivariantCellComplex::new(cells, bd) {
            Err(ComplexError::BoundarySquaredNonzero { cell, face, .. }) => {
                assert_eq!((cell.as_str(), face.as_str()), ("d", "v"));
            }
            other => panic!("expected ∂² error, got {other:?}"),
        }
    }

    #[test]
    fn glue_two_disks_gives_sphere() {
        let d = catalog("disk_conj", &p()).unwrap();
        let along: Vec<(String, String)> = ["e0+", "e0-", "l"].iter().map(|s| (s.to_string(), s.to_string())).collect();
        let s = d.glue(&d, &along).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        let disjoint = d.glue(&d, &[]).unwrap();
        assert_eq!(disjoint.len(), 2 * d.len());
        assert_eq!(disjoint.euler_characteristic(), 2);
    }

    #[test]
    fn glue_rejects_mismatched_boundaries() {
        let d = catalog("disk_conj", &p()).unwrap();
        let along = vec![("e0+".to_string(), "e0-".to_string()), ("e0-".to_string(), "e0+".to_string()), ("l".to_string(), "l".to_string())];
        assert!(d.glue(&d, &along).is_err());
    }

    #[test]
    fn subdivision_is_a_chain_map() {
        for n in 1..5 {
            let f = subdivide_circle_map(n).unwrap();
            assert_eq!(f.source.len(), 2 * n);
        }
    }

    #[test]
    fn fixed_components() {
        let s11 = catalog("s11", &p()).unwrap();
        assert_eq!(s11.component_count(&s11.fixed_subcomplex()), 2);
        let cp1 = catalog("cp1_conj", &p()).unwrap();
        assert_eq!(cp1.component_count(&cp1.fixed_subcomplex()), 1);
    }
}
