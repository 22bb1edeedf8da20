//! Borel equivariant cohomology `H^*_{Z/2}(X; Z(m))` computed from the
//! cellular cochains of the truncated Borel construction `X ×_{Z/2} S^N`.
//!
//! `S^N` carries the antipodal cell structure with
//! `∂e_k = (1 + (-1)^k τ) e_{k-1}`. An equivariant cochain is determined by its
//! values on `c × e_j` for every underlying cell `c`, which gives
//!
//! ```text
//! (δφ)(c×e_j) = Σ ∂[c,c'] φ(c'×e_j)
//!             + (-1)^{|c|} ( φ(c×e_{j-1}) + (-1)^{j+m} φ(τc×e_{j-1}) )
//! ```
//!
//! The twist `m` enters only through the sign `(-1)^{j+m}`. The truncation is
//! exact below degree `N`; reports use `N = max_deg + 2` and re-check with
//! `N + 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian::{is_exact_at, present, FgAbelianGroup, GroupHom, QuotientGroup};
use crate::complex::{EquivariantCellComplex, EquivariantChainMap, Orbit, SubcomplexRef, Underlying};
use crate::error::CohomologyError;
use crate::linalg::{smith_normal_form, IntMatrix};

/// Local coefficient system on `BZ/2`: `Z(0)` is trivial, `Z(1)` is the sign
/// representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Z0,
    Z1,
}

impl Coefficients {
    pub fn twist(self) -> usize {
        match self {
            Coefficients::Z0 => 0,
            Coefficients::Z1 => 1,
        }
    }

    pub fn from_twist(m: usize) -> Self {
        if m % 2 == 0 {
            Coefficients::Z0
        } else {
            Coefficients::Z1
        }
    }

    pub fn flip(self) -> Self {
        Self::from_twist(self.twist() + 1)
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Z0 => write!(f, "Z(0)"),
            Coefficients::Z1 => write!(f, "Z(1)"),
        }
    }
}

/// Cochain complex of free abelian groups; `d[n]: C^n → C^{n+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub ranks: Vec<usize>,
    pub d: Vec<IntMatrix>,
}

/// One cohomology group with cocycle representatives for its canonical
/// generators and a map from cocycles to canonical coordinates.
#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub group: FgAbelianGroup,
    /// Columns: cocycles representing the canonical generators.
    pub generators: IntMatrix,
    /// Canonical coordinates of a cocycle are `classify * z`, reduced.
    pub classify: IntMatrix,
}

impl DegreeCohomology {
    pub fn class_of(&self, z: &[BigInt]) -> Vec<BigInt> {
        let mut c = self.classify.mul_vec(z);
        self.group.reduce(&mut c);
        c
    }
}

impl CochainComplex {
    fn differential(&self, n: usize) -> IntMatrix {
        match self.d.get(n) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.ranks.get(n + 1).copied().unwrap_or(0), self.ranks[n]),
        }
    }

    /// `H^n`, requiring `d[n]` (or `C^{n+1} = 0`) to be present.
    pub fn cohomology(&self, n: usize) -> DegreeCohomology {
        let rn = self.ranks[n];
        let dn = self.differential(n);
        let snf = smith_normal_form(&dn);
        let r = snf.rank();
        let kidx: Vec<usize> = (r..rn).collect();
        let kernel = snf.v.select_cols(&kidx);
        let kcoords = snf.v_inv.select_rows(&kidx);
        let dprev = if n == 0 { IntMatrix::zeros(rn, 0) } else { self.differential(n - 1) };
        let b = kcoords.mul(&dprev);
        let p = present(kidx.len(), &b);
        DegreeCohomology {
            generators: kernel.mul(&p.from_canonical),
            classify: p.to_canonical.mul(&kcoords),
            group: p.group,
        }
    }

    /// Direct sum of two complexes (block-diagonal differentials).
    pub fn direct_sum(&self, other: &CochainComplex) -> CochainComplex {
        let len = self.ranks.len().min(other.ranks.len());
        let ranks: Vec<usize> = (0..len).map(|n| self.ranks[n] + other.ranks[n]).collect();
        let d = (0..len.saturating_sub(1))
            .map(|n| block_diag(&self.differential(n), &other.differential(n)))
            .collect();
        CochainComplex { ranks, d }
    }
}

fn block_diag(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let top = a.hstack(&IntMatrix::zeros(a.rows(), b.cols()));
    let bottom = IntMatrix::zeros(b.rows(), a.cols()).hstack(b);
    top.vstack(&bottom)
}

/// Induced map on cohomology of a cochain-level linear map sending cocycles
/// to cocycles.
pub fn induced_on_cohomology(src: &DegreeCohomology, dst: &DegreeCohomology, map: &IntMatrix) -> GroupHom {
    let images: Vec<Vec<BigInt>> = (0..src.group.ngens())
        .map(|i| dst.class_of(&map.mul_vec(&src.generators.column(i))))
        .collect();
    GroupHom::from_images(src.group.clone(), dst.group.clone(), &images)
        .expect("cochain map induces a well-defined homomorphism")
}

/// Borel cochains supported on a τ-invariant set of underlying cells that is
/// either a subcomplex or the complement of one.
#[derive(Clone, Debug)]
pub struct BorelComplex {
    pub coefficients: Coefficients,
    pub truncation: usize,
    /// Per degree: basis cochains dual to `c × e_j`, as `(underlying cell, j)`.
    pub basis: Vec<Vec<(usize, usize)>>,
    pos: Vec<HashMap<(usize, usize), usize>>,
    pub cochains: CochainComplex,
}

impl BorelComplex {
    /// Builds degrees `0..=top+1` and differentials `0..=top`.
    pub fn new(u: &Underlying, member: &[bool], coeff: Coefficients, truncation: usize, top: usize) -> Self {
        let nmax = top + 1;
        let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nmax + 1];
        for (c, &dim) in u.dims.iter().enumerate() {
            if !member[c] {
                continue;
            }
            let dim = dim as usize;
            for j in 0..=truncation {
                if dim + j <= nmax {
                    basis[dim + j].push((c, j));
                }
            }
        }
        for b in basis.iter_mut() {
            b.sort_unstable_by_key(|&(c, j)| (j, c));
        }
        let pos: Vec<HashMap<(usize, usize), usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(k, &x)| (x, k)).collect())
            .collect();
        let m = coeff.twist();
        let mut d = Vec::with_capacity(nmax);
        for n in 0..nmax {
            let mut mat = IntMatrix::zeros(basis[n + 1].len(), basis[n].len());
            for (row, &(c, j)) in basis[n + 1].iter().enumerate() {
                for &(cf, coef) in &u.boundary[c] {
                    if let Some(&col) = pos[n].get(&(cf, j)) {
                        mat.add_to(row, col, &BigInt::from(coef));
                    }
                }
                if j >= 1 {
                    let s_c: i64 = if u.dims[c] % 2 == 0 { 1 } else { -1 };
                    let s_t: i64 = if (j + m) % 2 == 0 { 1 } else { -1 };
                    if let Some(&col) = pos[n].get(&(c, j - 1)) {
                        mat.add_to(row, col, &BigInt::from(s_c));
                    }
                    if let Some(&col) = pos[n].get(&(u.tau[c], j - 1)) {
                        mat.add_to(row, col, &BigInt::from(s_c * s_t));
                    }
                }
            }
            d.push(mat);
        }
        let ranks = basis.iter().map(Vec::len).collect();
        BorelComplex { coefficients: coeff, truncation, basis, pos, cochains: CochainComplex { ranks, d } }
    }

    /// The coordinate map `C^n(self) → C^n(other)` that keeps common basis
    /// cochains: restriction to a subcomplex, or extension by zero.
    pub fn common_map(&self, other: &BorelComplex, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(other.basis[n].len(), self.basis[n].len());
        for (col, key) in self.basis[n].iter().enumerate() {
            if let Some(&row) = other.pos[n].get(key) {
                m.set(row, col, BigInt::from(1));
            }
        }
        m
    }

    pub fn cohomology(&self, n: usize) -> DegreeCohomology {
        self.cochains.cohomology(n)
    }

    pub fn top(&self) -> usize {
        self.cochains.ranks.len() - 2
    }
}

/// Cohomology groups of a space in degrees `0..=max_deg`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub space: String,
    pub coefficients: Coefficients,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_to: Option<String>,
    pub truncation: usize,
    pub stable: bool,
    pub groups: Vec<FgAbelianGroup>,
}

/// Cohomology engine for a fixed complex, caching the underlying cells.
#[derive(Clone, Debug)]
pub struct Engine {
    pub space: EquivariantCellComplex,
    pub under: Underlying,
}

impl Engine {
    pub fn new(space: &EquivariantCellComplex) -> Self {
        Engine { space: space.clone(), under: space.underlying() }
    }

    fn members(&self, sub: &SubcomplexRef) -> Vec<bool> {
        self.under.members(sub)
    }

    /// Borel complex of the whole space.
    pub fn absolute(&self, coeff: Coefficients, truncation: usize, top: usize) -> BorelComplex {
        BorelComplex::new(&self.under, &vec![true; self.under.len()], coeff, truncation, top)
    }

    /// Borel complex of a subcomplex.
    pub fn on(&self, sub: &SubcomplexRef, coeff: Coefficients, truncation: usize, top: usize) -> BorelComplex {
        BorelComplex::new(&self.under, &self.members(sub), coeff, truncation, top)
    }

    /// Relative Borel complex: cochains vanishing on the subcomplex.
    pub fn relative(&self, sub: &SubcomplexRef, coeff: Coefficients, truncation: usize, top: usize) -> BorelComplex {
        let member: Vec<bool> = self.members(sub).iter().map(|b| !b).collect();
        BorelComplex::new(&self.under, &member, coeff, truncation, top)
    }

    fn groups(&self, member: &[bool], coeff: Coefficients, max_deg: usize) -> Result<(Vec<FgAbelianGroup>, usize), CohomologyError> {
        let n = max_deg + 2;
        let low = BorelComplex::new(&self.under, member, coeff, n, max_deg);
        let high = BorelComplex::new(&self.under, member, coeff, n + 1, max_deg);
        let mut out = Vec::with_capacity(max_deg + 1);
        for k in 0..=max_deg {
            let a = low.cohomology(k).group;
            let b = high.cohomology(k).group;
            if a != b {
                return Err(CohomologyError::Unstable { degree: k, low: a.to_string(), high: b.to_string(), n, n1: n + 1 });
            }
            out.push(a);
        }
        Ok((out, n))
    }
}

fn space_label(x: &EquivariantCellComplex) -> String {
    format!("{} orbit cells", x.len())
}

/// `H^k_{Z/2}(X; coeff)` for `k ≤ max_deg`, cross-checked at truncation `N+1`.
pub fn equivariant_cohomology(x: &EquivariantCellComplex, coeff: Coefficients, max_deg: usize) -> Result<CohomologyReport, CohomologyError> {
    let e = Engine::new(x);
    let (groups, n) = e.groups(&vec![true; e.under.len()], coeff, max_deg)?;
    Ok(CohomologyReport { space: space_label(x), coefficients: coeff, relative_to: None, truncation: n, stable: true, groups })
}

/// `H^k_{Z/2}(X | Y; coeff)` for a subcomplex `Y`.
pub fn relative_cohomology(
    x: &EquivariantCellComplex,
    y: &SubcomplexRef,
    coeff: Coefficients,
    max_deg: usize,
) -> Result<CohomologyReport, CohomologyError> {
    let e = Engine::new(x);
    let member: Vec<bool> = e.members(y).iter().map(|b| !b).collect();
    let (groups, n) = e.groups(&member, coeff, max_deg)?;
    Ok(CohomologyReport {
        space: space_label(x),
        coefficients: coeff,
        relative_to: Some(format!("{} cells", y.len())),
        truncation: n,
        stable: true,
        groups,
    })
}

/// Reduced cohomology: relative to a fixed 0-cell basepoint.
pub fn reduced_cohomology(
    x: &EquivariantCellComplex,
    basepoint: &str,
    coeff: Coefficients,
    max_deg: usize,
) -> Result<CohomologyReport, CohomologyError> {
    let i = x.cell_index(basepoint).ok_or_else(|| crate::error::ComplexError::UnknownCell(basepoint.to_string()))?;
    let c = &x.cells()[i];
    if c.dim != 0 || c.orbit != Orbit::Fixed {
        return Err(crate::error::ComplexError::BadParameter(format!("basepoint `{basepoint}` must be a fixed 0-cell")).into());
    }
    let mut r = relative_cohomology(x, &x.subcomplex(&[basepoint])?, coeff, max_deg)?;
    r.relative_to = Some(format!("basepoint {basepoint}"));
    Ok(r)
}

/// Map `H^k(target) → H^k(source)` induced by an equivariant chain map.
pub fn induced_map(f: &EquivariantChainMap, coeff: Coefficients, k: usize) -> Result<GroupHom, CohomologyError> {
    let n = k + 2;
    let es = Engine::new(&f.source);
    let et = Engine::new(&f.target);
    let bs = es.absolute(coeff, n, k);
    let bt = et.absolute(coeff, n, k);
    let cols = f.underlying_matrix();
    // Pullback: (f*φ)(c×e_j) = Σ_{c'} F[c', c] φ(c'×e_j).
    let mut m = IntMatrix::zeros(bs.basis[k].len(), bt.basis[k].len());
    for (row, &(c, j)) in bs.basis[k].iter().enumerate() {
        for &(cp, coef) in &cols[c] {
            if let Some(&col) = bt.pos[k].get(&(cp, j)) {
                m.add_to(row, col, &BigInt::from(coef));
            }
        }
    }
    Ok(induced_on_cohomology(&bt.cohomology(k), &bs.cohomology(k), &m))
}

/// A long exact sequence with an exactness certificate at every term.
#[derive(Clone, Debug)]
pub struct ExactSequenceReport {
    pub labels: Vec<String>,
    pub groups: Vec<FgAbelianGroup>,
    /// `maps[i]: groups[i] → groups[i+1]`.
    pub maps: Vec<GroupHom>,
    /// Exactness at each term; the first entry checks injectivity of the
    /// first map (the sequence starts with 0).
    pub exact: Vec<bool>,
}

impl ExactSequenceReport {
    pub fn all_exact(&self) -> bool {
        self.exact.iter().all(|&b| b)
    }

    fn certify(labels: Vec<String>, groups: Vec<FgAbelianGroup>, maps: Vec<GroupHom>) -> Result<Self, CohomologyError> {
        let mut exact = Vec::with_capacity(groups.len());
        exact.push(maps.first().is_none_or(|f| f.is_injective()));
        for i in 1..maps.len() {
            exact.push(is_exact_at(&maps[i - 1], &maps[i])?);
        }
        Ok(ExactSequenceReport { labels, groups, maps, exact })
    }

    /// Finds the map whose source label matches.
    pub fn map_from(&self, label: &str) -> Option<&GroupHom> {
        self.labels.iter().position(|l| l == label).and_then(|i| self.maps.get(i))
    }
}

/// `… → H^k(X|Y) → H^k(X) → H^k(Y) → H^{k+1}(X|Y) → …` for `k ≤ max_deg`,
/// ending at `H^{max_deg+1}(X|Y)`.
pub fn les_of_pair(
    x: &EquivariantCellComplex,
    y: &SubcomplexRef,
    coeff: Coefficients,
    max_deg: usize,
) -> Result<ExactSequenceReport, CohomologyError> {
    let e = Engine::new(x);
    let n = max_deg + 2;
    let top = max_deg + 1;
    let bx = e.absolute(coeff, n, top);
    let by = e.on(y, coeff, n, top);
    let br = e.relative(y, coeff, n, top);
    let hx: Vec<_> = (0..=top).map(|k| bx.cohomology(k)).collect();
    let hy: Vec<_> = (0..=top).map(|k| by.cohomology(k)).collect();
    let hr: Vec<_> = (0..=top).map(|k| br.cohomology(k)).collect();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    let mut maps = Vec::new();
    for k in 0..=max_deg {
        labels.push(format!("H^{k}(X|Y)"));
        groups.push(hr[k].group.clone());
        maps.push(induced_on_cohomology(&hr[k], &hx[k], &br.common_map(&bx, k)));
        labels.push(format!("H^{k}(X)"));
        groups.push(hx[k].group.clone());
        maps.push(induced_on_cohomology(&hx[k], &hy[k], &bx.common_map(&by, k)));
        labels.push(format!("H^{k}(Y)"));
        groups.push(hy[k].group.clone());
        // Connecting map: extend by zero, apply δ, keep the relative part.
        let conn = bx.common_map(&br, k + 1).mul(&bx.cochains.d[k]).mul(&by.common_map(&bx, k));
        maps.push(induced_on_cohomology(&hy[k], &hr[k + 1], &conn));
    }
    labels.push(format!("H^{}(X|Y)", max_deg + 1));
    groups.push(hr[max_deg + 1].group.clone());
    ExactSequenceReport::certify(labels, groups, maps)
}

/// Mayer–Vietoris sequence for a cover of `X` by two subcomplexes, with
/// exactness certificates, up to `H^{max_deg+1}(X)`.
pub fn mayer_vietoris_check(
    x: &EquivariantCellComplex,
    u1: &SubcomplexRef,
    u2: &SubcomplexRef,
    coeff: Coefficients,
    max_deg: usize,
) -> Result<ExactSequenceReport, CohomologyError> {
    if u1.union(u2).len() != x.len() {
        return Err(CohomologyError::Internal("the two subcomplexes do not cover the space".into()));
    }
    let e = Engine::new(x);
    let n = max_deg + 2;
    let top = max_deg + 1;
    let v = u1.intersection(u2);
    let bx = e.absolute(coeff, n, top);
    let b1 = e.on(u1, coeff, n, top);
    let b2 = e.on(u2, coeff, n, top);
    let bv = e.on(&v, coeff, n, top);
    let sum = b1.cochains.direct_sum(&b2.cochains);
    let hx: Vec<_> = (0..=top).map(|k| bx.cohomology(k)).collect();
    let hs: Vec<_> = (0..=top).map(|k| sum.cohomology(k)).collect();
    let hv: Vec<_> = (0..=top).map(|k| bv.cohomology(k)).collect();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    let mut maps = Vec::new();
    for k in 0..=max_deg {
        labels.push(format!("H^{k}(X)"));
        groups.push(hx[k].group.clone());
        let restrict = bx.common_map(&b1, k).vstack(&bx.common_map(&b2, k));
        maps.push(induced_on_cohomology(&hx[k], &hs[k], &restrict));
        labels.push(format!("H^{k}(U1) ⊕ H^{k}(U2)"));
        groups.push(hs[k].group.clone());
        let r1 = b1.common_map(&bv, k);
        let r2 = b2.common_map(&bv, k);
        let mut neg2 = r2.clone();
        for i in 0..neg2.rows() {
            for j in 0..neg2.cols() {
                let val = -neg2.get(i, j).clone();
                neg2.set(i, j, val);
            }
        }
        maps.push(induced_on_cohomology(&hs[k], &hv[k], &r1.hstack(&neg2)));
        labels.push(format!("H^{k}(U1 ∩ U2)"));
        groups.push(hv[k].group.clone());
        // Δ: extend by zero into U1, apply δ, extend by zero into X.
        let delta = b1.common_map(&bx, k + 1).mul(&b1.cochains.d[k]).mul(&bv.common_map(&b1, k));
        maps.push(induced_on_cohomology(&hv[k], &hx[k + 1], &delta));
    }
    labels.push(format!("H^{}(X)", max_deg + 1));
    groups.push(hx[max_deg + 1].group.clone());
    ExactSequenceReport::certify(labels, groups, maps)
}

/// Restriction `H^k(X) → H^k(X^τ)`.
pub fn restriction_to_fixed(x: &EquivariantCellComplex, coeff: Coefficients, k: usize) -> GroupHom {
    let e = Engine::new(x);
    let f = x.fixed_subcomplex();
    let bx = e.absolute(coeff, k + 2, k);
    let bf = e.on(&f, coeff, k + 2, k);
    induced_on_cohomology(&bx.cohomology(k), &bf.cohomology(k), &bx.common_map(&bf, k))
}

/// `Coker(H^k(X) → H^k(X^τ))`.
pub fn cokernel_of_restriction(x: &EquivariantCellComplex, coeff: Coefficients, k: usize) -> QuotientGroup {
    restriction_to_fixed(x, coeff, k).cokernel()
}

/// Non-equivariant integral cellular cohomology of the underlying space.
pub fn ordinary_cohomology(x: &EquivariantCellComplex, max_deg: usize) -> Vec<FgAbelianGroup> {
    let u = x.underlying();
    let cells: Vec<Vec<usize>> = (0..=max_deg + 1)
        .map(|d| (0..u.len()).filter(|&c| u.dims[c] as usize == d).collect())
        .collect();
    cellular_cohomology(&cells, |c| u.boundary[c].clone(), max_deg)
}

/// Integral cohomology of the orbit space `X/τ`.
pub fn orbit_cohomology(x: &EquivariantCellComplex, max_deg: usize) -> Vec<FgAbelianGroup> {
    let cells: Vec<Vec<usize>> = (0..=max_deg + 1)
        .map(|d| (0..x.len()).filter(|&c| x.cells()[c].dim as usize == d).collect())
        .collect();
    cellular_cohomology(
        &cells,
        |c| x.boundary_of(c).iter().map(|(j, g)| (*j, g.augmentation())).collect(),
        max_deg,
    )
}

fn cellular_cohomology<F: Fn(usize) -> Vec<(usize, i64)>>(cells: &[Vec<usize>], boundary: F, max_deg: usize) -> Vec<FgAbelianGroup> {
    let pos: Vec<HashMap<usize, usize>> = cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(k, &c)| (c, k)).collect())
        .collect();
    let mut d = Vec::new();
    for n in 0..=max_deg {
        // δ^n = transpose of ∂_{n+1}.
        let mut m = IntMatrix::zeros(cells[n + 1].len(), cells[n].len());
        for (row, &c) in cells[n + 1].iter().enumerate() {
            for (f, coef) in boundary(c) {
                if let Some(&col) = pos[n].get(&f) {
                    m.add_to(row, col, &BigInt::from(coef));
                }
            }
        }
        d.push(m);
    }
    let cx = CochainComplex { ranks: cells.iter().map(Vec::len).collect(), d };
    (0..=max_deg).map(|k| cx.cohomology(k).group).collect()
}

/// True if every entry of a cochain vector is zero.
pub fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
