//! Named example spaces.

use super::signed::{SignedAction, SignedComplex};
use super::{Cell, EquivariantCellComplex, GroupRingElement, Orbit, SubcomplexRef};
use crate::error::ComplexError;

pub const CATALOG_NAMES: &[&str] = &[
    "point",
    "free_pair",
    "antipodal_sphere",
    "sphere_pq",
    "circle_trivial",
    "s11",
    "torus_t020",
    "disk_conj",
    "cp1_conj",
    "wedge_free",
    "lens",
    "lens_clutched",
];

/// Parameters for parametrised catalog entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct CatalogParams {
    /// `lens`, `lens_clutched`: the lens space is `S^3 / Z_{2q}`;
    /// `sphere_pq`: number of reflected coordinates.
    pub q: Option<u32>,
    /// `wedge_free`: number of free 2-cell orbits; `antipodal_sphere`: dimension.
    pub n: Option<u32>,
    /// `sphere_pq`: number of fixed coordinates.
    pub p: Option<u32>,
    /// `lens`: subdivision factor of the two core circles (default 1).
    pub s: Option<u32>,
}

const ONE: GroupRingElement = GroupRingElement::new(1, 0);
const MINUS: GroupRingElement = GroupRingElement::new(-1, 0);

fn cell(id: &str, dim: u32, orbit: Orbit) -> Cell {
    Cell { id: id.to_string(), dim, orbit }
}

fn build(cells: Vec<Cell>, bd: Vec<Vec<(&str, GroupRingElement)>>) -> Result<EquivariantCellComplex, ComplexError> {
    let bd = bd.into_iter().map(|t| t.into_iter().map(|(s, g)| (s.to_string(), g)).collect()).collect();
    EquivariantCellComplex::new(cells, bd)
}

fn need(v: Option<u32>, what: &str, lo: u32, hi: u32) -> Result<u32, ComplexError> {
    let x = v.ok_or_else(|| ComplexError::BadParameter(format!("missing parameter {what}")))?;
    if x < lo || x > hi {
        return Err(ComplexError::BadParameter(format!("{what} = {x} outside [{lo}, {hi}]")));
    }
    Ok(x)
}

/// Builds a catalog space by name.
pub fn catalog(name: &str, p: &CatalogParams) -> Result<EquivariantCellComplex, ComplexError> {
    use Orbit::*;
    match name {
        "point" => build(vec![cell("pt", 0, Fixed)], vec![vec![]]),
        "free_pair" => build(vec![cell("x", 0, Free)], vec![vec![]]),
        "antipodal_sphere" => antipodal_sphere(need(p.n, "n", 0, 32)?),
        "sphere_pq" => {
            let pp = need(p.p, "p", 0, 4)?;
            let qq = need(p.q, "q", 0, 4)?;
            if pp + qq == 0 || pp + qq > 4 {
                return Err(ComplexError::BadParameter(format!("sphere_pq needs 1 ≤ p + q ≤ 4, got {}", pp + qq)));
            }
            sphere_pq(pp, qq)
        }
        "circle_trivial" => build(vec![cell("v", 0, Fixed), cell("e", 1, Fixed)], vec![vec![], vec![]]),
        "s11" => build(
            vec![cell("e0+", 0, Fixed), cell("e0-", 0, Fixed), cell("l", 1, Free)],
            vec![vec![], vec![], vec![("e0+", ONE), ("e0-", MINUS)]],
        ),
        "torus_t020" => {
            let s = catalog("s11", p)?;
            Ok(s.product(&s))
        }
        "disk_conj" => build(
            vec![
                cell("e0+", 0, Fixed),
                cell("e0-", 0, Fixed),
                cell("d", 1, Fixed),
                cell("l", 1, Free),
                cell("h", 2, Free),
            ],
            vec![
                vec![],
                vec![],
                vec![("e0+", ONE), ("e0-", MINUS)],
                vec![("e0+", ONE), ("e0-", MINUS)],
                vec![("l", ONE), ("d", MINUS)],
            ],
        ),
        "cp1_conj" => build(
            vec![cell("v", 0, Fixed), cell("e", 1, Fixed), cell("h", 2, Free)],
            vec![vec![], vec![], vec![("e", ONE)]],
        ),
        "wedge_free" => {
            let n = need(p.n, "n", 1, 64)?;
            let mut cells = vec![cell("*", 0, Fixed)];
            let mut bd = vec![vec![]];
            for k in 1..=n {
                cells.push(Cell { id: format!("s{k}"), dim: 2, orbit: Free });
                bd.push(vec![]);
            }
            build(cells, bd)
        }
        "lens" => lens_with_subdivision(need(p.q, "q", 1, 64)?, p.s.map_or(Ok(1), |s| need(Some(s), "s", 1, 8))?),
        "lens_clutched" => Ok(lens_clutched(need(p.q, "q", 1, 32)?)?.0),
        other => Err(ComplexError::UnknownSpace(other.to_string())),
    }
}

/// `S^N` with the antipodal map: one free orbit per dimension and
/// `∂e_k = (1 + (-1)^k τ) e_{k-1}`.
fn antipodal_sphere(n: u32) -> Result<EquivariantCellComplex, ComplexError> {
    let mut cells = Vec::new();
    let mut bd = Vec::new();
    for k in 0..=n {
        cells.push(Cell { id: format!("e{k}"), dim: k, orbit: Orbit::Free });
        if k == 0 {
            bd.push(vec![]);
        } else {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            bd.push(vec![(k as usize - 1, GroupRingElement::new(1, sign))]);
        }
    }
    EquivariantCellComplex::from_indexed(cells, bd)
}

/// The unit sphere in `R^{p+q}` with the last `q` coordinates negated: a
/// fixed `S^{p-1}` with one free hemisphere orbit per reflected coordinate.
fn sphere_pq(p: u32, q: u32) -> Result<EquivariantCellComplex, ComplexError> {
    let mut cells = Vec::new();
    let mut bd: Vec<Vec<(usize, GroupRingElement)>> = Vec::new();
    // Fundamental cycle of the sphere built so far, in group-ring terms.
    let mut fundamental: Vec<(usize, GroupRingElement)> = Vec::new();
    match p {
        0 => {}
        1 => {
            cells.push(cell("f+", 0, Orbit::Fixed));
            cells.push(cell("f-", 0, Orbit::Fixed));
            bd.push(vec![]);
            bd.push(vec![]);
            fundamental = vec![(0, ONE), (1, MINUS)];
        }
        _ => {
            cells.push(cell("v", 0, Orbit::Fixed));
            cells.push(Cell { id: "f".into(), dim: p - 1, orbit: Orbit::Fixed });
            bd.push(vec![]);
            bd.push(vec![]);
            fundamental = vec![(1, ONE)];
        }
    }
    for i in 1..=q {
        let k = cells.len();
        cells.push(Cell { id: format!("h{i}"), dim: p + i - 1, orbit: Orbit::Free });
        bd.push(fundamental.clone());
        // τ acts on the previous fundamental class by (-1)^{i-1}.
        let sign = if i % 2 == 0 { 1 } else { -1 };
        fundamental = vec![(k, GroupRingElement::new(1, sign))];
    }
    EquivariantCellComplex::from_indexed(cells, bd)
}

/// Indices into a circle with `m` vertices `0..m` and edges `m..2m`, edge
/// `k` running from vertex `k` to vertex `k+1`.
struct Circle {
    m: usize,
}

impl Circle {
    fn len(&self) -> usize {
        2 * self.m
    }
    fn is_vertex(&self, c: usize) -> bool {
        c < self.m
    }
    fn dim(&self, c: usize) -> u32 {
        u32::from(!self.is_vertex(c))
    }
    /// Boundary of an edge: (head, tail).
    fn ends(&self, c: usize) -> (usize, usize) {
        let k = c - self.m;
        ((k + 1) % self.m, k)
    }
    /// Rotation by `shift` vertex positions.
    fn rotate(&self, c: usize, shift: usize) -> (usize, i64) {
        if self.is_vertex(c) {
            ((c + shift) % self.m, 1)
        } else {
            (self.m + (c - self.m + shift) % self.m, 1)
        }
    }
    /// Complex conjugation: vertex k to -k, edge k to -(edge -k-1).
    fn conj(&self, c: usize) -> (usize, i64) {
        if self.is_vertex(c) {
            ((self.m - c) % self.m, 1)
        } else {
            let k = c - self.m;
            (self.m + (2 * self.m - k - 1) % self.m, -1)
        }
    }
    fn name(&self, c: usize, v: &str, e: &str) -> String {
        if self.is_vertex(c) {
            format!("{v}{c}")
        } else {
            format!("{e}{}", c - self.m)
        }
    }
}

/// `L_{2q} = S^3 / Z_{2q}` with the conjugation involution, built from the
/// join of two circles of `4qs` vertices each, acted on diagonally by the
/// rotation of order `2q`.
pub fn lens_with_subdivision(q: u32, s: u32) -> Result<EquivariantCellComplex, ComplexError> {
    let p = 2 * q as usize;
    let m = 2 * p * s as usize;
    let c = Circle { m };
    let n = c.len();
    let a_off = 0;
    let b_off = n;
    let j_off = 2 * n;
    let join = |a: usize, b: usize| j_off + a * n + b;
    let mut x = SignedComplex::default();
    for (off, v, e) in [(a_off, "v", "e"), (b_off, "w", "f")] {
        for k in 0..n {
            let bd = if c.is_vertex(k) {
                vec![]
            } else {
                let (h, t) = c.ends(k);
                vec![(off + h, 1), (off + t, -1)]
            };
            x.add(c.name(k, v, e), c.dim(k), bd);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let mut bd: Vec<(usize, i64)> = Vec::new();
            // ∂(a*b) = ∂a*b + (-1)^{|a|+1} a*∂b, with ∂(vertex) the empty cell.
            if c.is_vertex(a) {
                bd.push((b_off + b, 1));
            } else {
                let (h, t) = c.ends(a);
                bd.push((join(h, b), 1));
                bd.push((join(t, b), -1));
            }
            let sign = if c.dim(a) % 2 == 0 { -1 } else { 1 };
            if c.is_vertex(b) {
                bd.push((a_off + a, sign));
            } else {
                let (h, t) = c.ends(b);
                bd.push((join(a, h), sign));
                bd.push((join(a, t), -sign));
            }
            let name = format!("{}*{}", c.name(a, "v", "e"), c.name(b, "w", "f"));
            x.add(name, c.dim(a) + c.dim(b) + 1, bd);
        }
    }
    let shift = 2 * s as usize;
    let act = |g: &dyn Fn(usize) -> (usize, i64)| -> SignedAction {
        let mut image = Vec::with_capacity(x.len());
        for k in 0..n {
            let (y, t) = g(k);
            image.push((a_off + y, t));
        }
        for k in 0..n {
            let (y, t) = g(k);
            image.push((b_off + y, t));
        }
        for a in 0..n {
            for b in 0..n {
                let (ya, ta) = g(a);
                let (yb, tb) = g(b);
                image.push((join(ya, yb), ta * tb));
            }
        }
        SignedAction { image }
    };
    let rho = act(&|k| c.rotate(k, shift));
    let conj = act(&|k| c.conj(k));
    let (quot, class, reps) = x.quotient(&rho, p)?;
    let tau = x.descend(&class, &reps, &conj);
    quot.to_equivariant(&tau)
}

/// `L_{2q}` as two solid tori glued along their common boundary torus. Each
/// solid torus is the mapping cylinder of the projection of the torus onto
/// one of its core circles. Returns the complex and the two pieces.
pub fn lens_clutched(q: u32) -> Result<(EquivariantCellComplex, SubcomplexRef, SubcomplexRef), ComplexError> {
    let p = 2 * q as usize;
    let m = 2 * p;
    let c = Circle { m };
    let n = c.len();
    // Local layout shared by both pieces: torus cells first, then the core
    // circle, then the cylinder cells.
    let t_idx = |a: usize, b: usize| a * n + b;
    let core_off = n * n;
    let cyl_off = core_off + n;
    let piece = |first: bool| -> Result<EquivariantCellComplex, ComplexError> {
        let mut x = SignedComplex::default();
        for a in 0..n {
            for b in 0..n {
                let mut bd = Vec::new();
                if !c.is_vertex(a) {
                    let (h, t) = c.ends(a);
                    bd.push((t_idx(h, b), 1));
                    bd.push((t_idx(t, b), -1));
                }
                let sign = if c.dim(a) % 2 == 0 { 1 } else { -1 };
                if !c.is_vertex(b) {
                    let (h, t) = c.ends(b);
                    bd.push((t_idx(a, h), sign));
                    bd.push((t_idx(a, t), -sign));
                }
                let name = format!("{}x{}", c.name(a, "v", "e"), c.name(b, "w", "f"));
                x.add(name, c.dim(a) + c.dim(b), bd);
            }
        }
        let (v, e) = if first { ("v", "e") } else { ("w", "f") };
        for k in 0..n {
            let bd = if c.is_vertex(k) {
                vec![]
            } else {
                let (h, t) = c.ends(k);
                vec![(core_off + h, 1), (core_off + t, -1)]
            };
            x.add(c.name(k, v, e), c.dim(k), bd);
        }
        // Projection of the torus onto the core circle.
        let proj = |a: usize, b: usize| -> Option<usize> {
            if first {
                c.is_vertex(b).then_some(a)
            } else {
                c.is_vertex(a).then_some(b)
            }
        };
        let label = if first { "CA" } else { "CB" };
        for a in 0..n {
            for b in 0..n {
                // ∂C(x) = C(∂x) + (-1)^{|x|} (x - π(x))
                let dim = c.dim(a) + c.dim(b);
                let mut bd = Vec::new();
                if !c.is_vertex(a) {
                    let (h, t) = c.ends(a);
                    bd.push((cyl_off + t_idx(h, b), 1));
                    bd.push((cyl_off + t_idx(t, b), -1));
                }
                let sign = if c.dim(a) % 2 == 0 { 1 } else { -1 };
                if !c.is_vertex(b) {
                    let (h, t) = c.ends(b);
                    bd.push((cyl_off + t_idx(a, h), sign));
                    bd.push((cyl_off + t_idx(a, t), -sign));
                }
                let s2 = if dim % 2 == 0 { 1 } else { -1 };
                bd.push((t_idx(a, b), s2));
                if let Some(k) = proj(a, b) {
                    bd.push((core_off + k, -s2));
                }
                let name = format!("{label}({}x{})", c.name(a, "v", "e"), c.name(b, "w", "f"));
                x.add(name, dim + 1, bd);
            }
        }
        let act = |g: &dyn Fn(usize) -> (usize, i64)| -> SignedAction {
            let mut image = vec![(0, 0); x.len()];
            for a in 0..n {
                for b in 0..n {
                    let (ya, ta) = g(a);
                    let (yb, tb) = g(b);
                    image[t_idx(a, b)] = (t_idx(ya, yb), ta * tb);
                    image[cyl_off + t_idx(a, b)] = (cyl_off + t_idx(ya, yb), ta * tb);
                }
            }
            for k in 0..n {
                let (y, t) = g(k);
                image[core_off + k] = (core_off + y, t);
            }
            SignedAction { image }
        };
        let rho = act(&|k| c.rotate(k, 2));
        let conj = act(&|k| c.conj(k));
        let (quot, class, reps) = x.quotient(&rho, p)?;
        let tau = x.descend(&class, &reps, &conj);
        quot.to_equivariant(&tau)
    };
    let ua = piece(true)?;
    let ub = piece(false)?;
    let torus_ids: Vec<(String, String)> = ua
        .cells()
        .iter()
        .filter(|cl| !cl.id.starts_with("CA(") && cl.id.contains('x'))
        .map(|cl| (cl.id.clone(), cl.id.clone()))
        .collect();
    let whole = ua.glue(&ub, &torus_ids)?;
    let na = ua.len();
    let piece_a = whole.subcomplex_from_indices(&(0..na).collect::<Vec<_>>())?;
    let torus: Vec<usize> = torus_ids.iter().map(|(id, _)| whole.cell_index(id).expect("glued")).collect();
    let mut b_idx: Vec<usize> = torus;
    b_idx.extend(na..whole.len());
    let piece_b = whole.subcomplex_from_indices(&b_idx)?;
    Ok((whole, piece_a, piece_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: Option<u32>, n: Option<u32>, p: Option<u32>) -> CatalogParams {
        CatalogParams { q, n, p, s: None }
    }

    #[test]
    fn euler_characteristics() {
        let cases: Vec<(&str, CatalogParams, i64)> = vec![
            ("point", params(None, None, None), 1),
            ("free_pair", params(None, None, None), 2),
            ("circle_trivial", params(None, None, None), 0),
            ("s11", params(None, None, None), 0),
            ("disk_conj", params(None, None, None), 1),
            ("cp1_conj", params(None, None, None), 2),
            ("torus_t020", params(None, None, None), 0),
            ("antipodal_sphere", params(None, Some(2), None), 2),
            ("antipodal_sphere", params(None, Some(3), None), 0),
            ("sphere_pq", params(Some(1), None, Some(2)), 2),
            ("sphere_pq", params(Some(3), None, Some(0)), 2),
            ("wedge_free", params(None, Some(3), None), 7),
        ];
        for (name, p, chi) in cases {
            let x = catalog(name, &p).unwrap();
            assert_eq!(x.euler_characteristic(), chi, "{name}");
        }
    }

    #[test]
    fn lens_cell_counts_and_fixed_set() {
        for q in 1..=3 {
            let x = lens_with_subdivision(q, 1).unwrap();
            assert_eq!(x.euler_characteristic(), 0);
            let u = x.underlying();
            assert_eq!(u.len(), 8 + 32 * q as usize);
            let fixed = x.fixed_subcomplex();
            assert_eq!(x.component_count(&fixed), 2);
            let counts = x.extract(&fixed).cell_counts();
            assert_eq!(counts[&(0, Orbit::Fixed)], 4);
            assert_eq!(counts[&(1, Orbit::Fixed)], 4);
        }
    }

    #[test]
    fn clutched_lens_pieces() {
        let (x, a, b) = lens_clutched(1).unwrap();
        assert_eq!(x.euler_characteristic(), 0);
        assert_eq!(a.union(&b).len(), x.len());
        let t = x.extract(&a.intersection(&b));
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(x.component_count(&x.fixed_subcomplex()), 2);
    }

    #[test]
    fn bad_parameters() {
        assert!(catalog("lens", &params(Some(0), None, None)).is_err());
        assert!(catalog("sphere_pq", &params(Some(3), None, Some(2))).is_err());
        assert!(catalog("nope", &CatalogParams::default()).is_err());
    }
}
