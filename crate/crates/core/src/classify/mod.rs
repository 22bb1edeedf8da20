//! Classification of rank-2 "Quaternionic" bundles through clutching data,
//! the FKMM target group, and comparison verdicts.
//!
//! Homotopy classes of equivariant maps into `Û(2)` (unitary group with the
//! quaternionic involution) and `Ũ(1)` (complex conjugation) are modelled by
//! finitely generated abelian groups with an explicit coordinate reading.
//! Clutching two pieces along a common boundary gives the double coset
//! `[X_1, G] \ [T, G] / [X_2, G]`, which for abelian class groups is the
//! cokernel of the two restriction maps taken together.

mod ring;
mod stable;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{present, FgAbelianGroup, GroupHom};
use crate::borel::{induced_on_cohomology, relative_cohomology, Coefficients, Engine};
use crate::complex::{catalog, CatalogParams, EquivariantCellComplex, Orbit};
use crate::error::{ClassifyError, GroupError};
use crate::linalg::IntMatrix;

pub use ring::{cp1_ring_multiply, degree_basis, degree_group, multiplication_map, Cp1RingElement, Monomial};
pub use stable::{real_stable_rank_reduce, stable_rank_reduce, Reduction};

/// Largest representative box scanned by [`DoubleCoset::representatives`].
pub const REPRESENTATIVE_CAP: u64 = 1 << 20;

/// A set of equivariant homotopy classes with its group structure and the
/// meaning of each canonical coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapClassGroup {
    pub label: String,
    pub group: FgAbelianGroup,
    pub coordinates: Vec<String>,
}

impl MapClassGroup {
    fn new(label: &str, group: FgAbelianGroup, coordinates: &[&str]) -> Self {
        MapClassGroup { label: label.into(), group, coordinates: coordinates.iter().map(|s| s.to_string()).collect() }
    }

    /// `[S^{1,1}, Û(2)] ≅ Z`, read as half of `deg ∘ det`.
    pub fn circle_u2() -> Self {
        Self::new("[S^{1,1}, Û(2)]", FgAbelianGroup::free(1), &["deg det / 2"])
    }

    /// `[T^{0,2,0}, Û(2)] ≅ Z^2`, half-degrees of `det` on the two circle
    /// factors.
    pub fn torus_u2() -> Self {
        Self::new("[T^{0,2,0}, Û(2)]", FgAbelianGroup::free(2), &["deg det|z / 2", "deg det|λ / 2"])
    }

    /// `[S^{1,1}, Ũ(1)] ≅ Z_2 ⊕ Z`: value at the fixed point `+1`, degree.
    pub fn circle_u1() -> Self {
        Self::new("[S^{1,1}, Ũ(1)]", FgAbelianGroup::from_small(1, &[2]), &["sign at +1", "deg"])
    }

    /// `[T^{0,2,0}, Ũ(1)] ≅ Z_2 ⊕ Z^2`: value at `(1, 1)`, degrees on the two
    /// circle factors.
    pub fn torus_u1() -> Self {
        Self::new("[T^{0,2,0}, Ũ(1)]", FgAbelianGroup::from_small(2, &[2]), &["sign at (1,1)", "deg z", "deg λ"])
    }

    /// `[Z_2 × S^1, Û(2)] ≅ Z`: degree of `det` on one of the two circles.
    pub fn free_circle_u2() -> Self {
        Self::new("[Z_2 × S^1, Û(2)]", FgAbelianGroup::free(1), &["deg det"])
    }

    /// The five class groups used by the lens and wedge classifications.
    pub fn catalog() -> Vec<MapClassGroup> {
        vec![Self::circle_u2(), Self::torus_u2(), Self::circle_u1(), Self::torus_u1(), Self::free_circle_u2()]
    }
}

/// Orbit set of `ambient` under translation by the images of `left` and
/// `right`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pub ambient: FgAbelianGroup,
    pub group: FgAbelianGroup,
    pub projection: GroupHom,
}

impl DoubleCoset {
    /// Class of an ambient element, in canonical coordinates of `group`.
    pub fn class_of(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.projection.apply(v)
    }

    /// One representative per class: the lexicographically smallest ambient
    /// vector with non-negative coordinates. `None` for infinitely many
    /// classes or a scan above [`REPRESENTATIVE_CAP`].
    pub fn representatives(&self) -> Option<Vec<Vec<BigInt>>> {
        let total = self.group.order()?.to_u64()?;
        let exponent = self.group.torsion().last().cloned().unwrap_or_else(|| BigInt::from(1));
        // Every class has a representative with free coordinates below the
        // exponent: exponent·e_i lies in the combined image.
        let bounds: Vec<u64> = self
            .ambient
            .orders()
            .iter()
            .map(|o| if o.is_zero() { exponent.to_u64() } else { o.to_u64() })
            .collect::<Option<_>>()?;
        let size = bounds.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b))?;
        if size > REPRESENTATIVE_CAP {
            return None;
        }
        let mut found: std::collections::BTreeMap<Vec<BigInt>, Vec<BigInt>> = Default::default();
        let mut v = vec![0u64; bounds.len()];
        'scan: loop {
            let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            found.entry(self.class_of(&big)).or_insert(big);
            if found.len() as u64 == total {
                break;
            }
            // Lexicographic increment: last coordinate fastest.
            for i in (0..v.len()).rev() {
                v[i] += 1;
                if v[i] < bounds[i] {
                    continue 'scan;
                }
                v[i] = 0;
            }
            break;
        }
        let mut reps: Vec<Vec<BigInt>> = found.into_values().collect();
        reps.sort();
        Some(reps)
    }
}

/// `left(L) \ ambient / right(R)`. Both maps must land in `ambient`.
pub fn double_coset_set(left: &GroupHom, ambient: &FgAbelianGroup, right: &GroupHom) -> Result<DoubleCoset, GroupError> {
    if left.target() != ambient || right.target() != ambient {
        return Err(GroupError::NotComposable);
    }
    let relations = left.matrix().hstack(right.matrix()).hstack(&ambient.order_matrix());
    let p = present(ambient.ngens(), &relations);
    let projection = GroupHom::new(ambient.clone(), p.group.clone(), p.to_canonical)?;
    Ok(DoubleCoset { ambient: ambient.clone(), group: p.group, projection })
}

/// Clutching data: class groups of the two pieces and of their common
/// boundary, with restriction to the boundary on the left and pullback along
/// the clutching map on the right.
#[derive(Clone, Debug)]
pub struct ClutchingPresentation {
    pub boundary: MapClassGroup,
    pub left: MapClassGroup,
    pub left_map: GroupHom,
    pub right: MapClassGroup,
    pub right_map: GroupHom,
}

impl ClutchingPresentation {
    /// Action convention: `φ ↦ ψ_1^{-1} · φ · f^*ψ_2`.
    pub fn classes(&self) -> Result<DoubleCoset, GroupError> {
        double_coset_set(&self.left_map, &self.boundary.group, &self.right_map)
    }
}

fn hom(source: &FgAbelianGroup, target: &FgAbelianGroup, rows: &[&[i64]]) -> GroupHom {
    let m = IntMatrix::from_rows_with_cols(rows, source.ngens());
    GroupHom::new(source.clone(), target.clone(), m).expect("clutching homomorphism is well defined")
}

fn check_q(q: u32) -> Result<i64, ClassifyError> {
    if q == 0 || q > 64 {
        return Err(ClassifyError::OutOfRange(format!("q = {q} outside [1, 64]")));
    }
    Ok(q as i64)
}

/// Rank-2 clutching for the lens space `L_{2q} = X_1 ∪_f X_2` with
/// `f(z, λ) = (z, z^{2q} λ)`, on half-degree coordinates `(z, λ)`.
pub fn rank2_lens_presentation(q: u32) -> Result<ClutchingPresentation, ClassifyError> {
    let q = check_q(q)?;
    let boundary = MapClassGroup::torus_u2();
    let left = MapClassGroup::circle_u2();
    let right = MapClassGroup::circle_u2();
    // ψ_1 depends on λ only; f^*ψ_2(z, λ) = ψ_2(z^{2q} λ) picks up 2q in z.
    let left_map = hom(&left.group, &boundary.group, &[&[0], &[1]]);
    let right_map = hom(&right.group, &boundary.group, &[&[2 * q], &[1]]);
    Ok(ClutchingPresentation { boundary, left, left_map, right, right_map })
}

/// Line-bundle clutching for the lens space with `Ũ(1)` classes on
/// coordinates `(sign, deg z, deg λ)`.
pub fn pic_r_lens_presentation(q: u32) -> Result<ClutchingPresentation, ClassifyError> {
    let q = check_q(q)?;
    let boundary = MapClassGroup::torus_u1();
    let left = MapClassGroup::circle_u1();
    let right = MapClassGroup::circle_u1();
    let left_map = hom(&left.group, &boundary.group, &[&[1, 0], &[0, 0], &[0, 1]]);
    let right_map = hom(&right.group, &boundary.group, &[&[1, 0], &[0, 2 * q], &[0, 1]]);
    Ok(ClutchingPresentation { boundary, left, left_map, right, right_map })
}

/// `Vec^2_Q(L_{2q}) ≅ Z_{2q}`.
pub fn classify_rank2_lens(q: u32) -> Result<FgAbelianGroup, ClassifyError> {
    Ok(rank2_lens_presentation(q)?.classes()?.group)
}

/// `Pic_R(L_{2q}) ≅ Z_{2q}` from clutching.
pub fn pic_r_lens(q: u32) -> Result<FgAbelianGroup, ClassifyError> {
    Ok(pic_r_lens_presentation(q)?.classes()?.group)
}

/// `Vec^2_Q` of the wedge of `n` free 2-cell orbits at a fixed point: one
/// clutching class in `[Z_2 × S^1, Û(2)]` per lobe, with contractible pieces
/// acting trivially.
pub fn classify_wedge(n: u32) -> Result<FgAbelianGroup, ClassifyError> {
    if n == 0 || n > 64 {
        return Err(ClassifyError::OutOfRange(format!("n = {n} outside [1, 64]")));
    }
    let lobe = MapClassGroup::free_circle_u2().group;
    let mut ambient = FgAbelianGroup::trivial();
    for _ in 0..n {
        ambient = ambient.direct_sum(&lobe);
    }
    let zero = GroupHom::zero(&FgAbelianGroup::trivial(), &ambient);
    Ok(double_coset_set(&zero, &ambient, &zero)?.group)
}

/// `H^2_{Z/2}(X | X^τ; Z(1))`, where the FKMM invariant lives.
pub fn fkmm_target(x: &EquivariantCellComplex) -> Result<FgAbelianGroup, ClassifyError> {
    let r = relative_cohomology(x, &x.fixed_subcomplex(), Coefficients::Z1, 2)?;
    Ok(r.groups[2].clone())
}

/// Signs of a canonical section at the fixed points, in fixed-cell order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignVector {
    pub points: Vec<String>,
    pub signs: Vec<i8>,
}

impl SignVector {
    /// Signs listed in the order of the fixed 0-cells of `x`.
    pub fn new(x: &EquivariantCellComplex, signs: &[i8]) -> Result<Self, ClassifyError> {
        let points: Vec<String> = x.cells().iter().filter(|c| c.orbit == Orbit::Fixed).map(|c| c.id.clone()).collect();
        if points.len() != signs.len() {
            return Err(ClassifyError::SignLength { expected: points.len(), found: signs.len() });
        }
        if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
            return Err(ClassifyError::OutOfRange(format!("sign {s} is not ±1")));
        }
        Ok(SignVector { points, signs: signs.to_vec() })
    }

    pub fn all_plus(x: &EquivariantCellComplex) -> Result<Self, ClassifyError> {
        let n = x.cells().iter().filter(|c| c.orbit == Orbit::Fixed).count();
        Self::new(x, &vec![1; n])
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .zip(&self.signs)
            .map(|(p, s)| format!("{p}:{}", if *s > 0 { '+' } else { '-' }))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Class of a sign vector in `Map(X^τ, {±1}) / [X, Ũ(1)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FkmmClass {
    pub quotient: FgAbelianGroup,
    #[serde(serialize_with = "serialize_coordinates")]
    pub class: Vec<BigInt>,
    pub representative: SignVector,
    pub is_identity: bool,
}

fn serialize_coordinates<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Largest fixed set for which representatives are searched exhaustively.
pub const MAX_FIXED_POINTS: usize = 20;

/// Reduces a sign vector modulo restrictions of equivariant maps
/// `X → Ũ(1)`, read through `H^1_{Z/2}(X; Z(1)) → H^1_{Z/2}(X^τ; Z(1))`.
pub fn fkmm_space_invariant(x: &EquivariantCellComplex, s: &SignVector) -> Result<FkmmClass, ClassifyError> {
    let fixed = x.fixed_subcomplex();
    let idx = fixed.indices();
    if idx.is_empty() {
        return Err(ClassifyError::NotFkmmSpace("fixed-point set is empty".into()));
    }
    if idx.iter().any(|&i| x.cells()[i].dim != 0) {
        return Err(ClassifyError::NotFkmmSpace("fixed-point set is not a finite set of points".into()));
    }
    if idx.len() > MAX_FIXED_POINTS {
        return Err(ClassifyError::OutOfRange(format!("more than {MAX_FIXED_POINTS} fixed points")));
    }
    let expected = SignVector::all_plus(x)?;
    if s.points != expected.points {
        return Err(ClassifyError::SignLength { expected: expected.points.len(), found: s.points.len() });
    }
    let e = Engine::new(x);
    let bx = e.absolute(Coefficients::Z1, 3, 2);
    if !bx.cohomology(2).group.is_trivial() {
        return Err(ClassifyError::NotFkmmSpace("H^2_{Z/2}(X; Z(1)) is nonzero".into()));
    }
    let bf = e.on(&fixed, Coefficients::Z1, 3, 2);
    let hx = bx.cohomology(1);
    let hf = bf.cohomology(1);
    let restriction = induced_on_cohomology(&hx, &hf, &bx.common_map(&bf, 1));
    let coker = restriction.cokernel();

    // The constant map -1 at a fixed point is the cochain dual to (x, e_1).
    let cocycle = |signs: &[i8]| -> Vec<BigInt> {
        bf.basis[1]
            .iter()
            .map(|&(c, j)| {
                let k = e.under.orbit_of[c];
                let minus = j == 1 && idx.iter().position(|&i| i == k).is_some_and(|p| signs[p] < 0);
                BigInt::from(minus as i64)
            })
            .collect()
    };
    let class_of = |signs: &[i8]| coker.projection.apply(&hf.class_of(&cocycle(signs)));
    let class = class_of(&s.signs);
    let n = idx.len();
    let mut rep = s.signs.clone();
    // Lexicographic order with +1 before -1 is binary counting, -1 as 1.
    for mask in 0u64..(1u64 << n) {
        let signs: Vec<i8> = (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect();
        if class_of(&signs) == class {
            rep = signs;
            break;
        }
    }
    Ok(FkmmClass {
        is_identity: coker.group.is_zero_element(&class),
        quotient: coker.group,
        class,
        representative: SignVector { points: s.points.clone(), signs: rep },
    })
}

/// Spaces with an implemented rank-2 classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum ClassifiedSpace {
    Lens { q: u32 },
    Wedge { n: u32 },
    /// A catalog space of dimension at most 1; unset parameters default to 1.
    LowDimensional { name: String, p: Option<u32>, q: Option<u32>, n: Option<u32> },
}

impl ClassifiedSpace {
    pub fn complex(&self) -> Result<EquivariantCellComplex, ClassifyError> {
        Ok(match self {
            ClassifiedSpace::Lens { q } => catalog("lens", &CatalogParams { q: Some(*q), ..Default::default() })?,
            ClassifiedSpace::Wedge { n } => catalog("wedge_free", &CatalogParams { n: Some(*n), ..Default::default() })?,
            ClassifiedSpace::LowDimensional { name, p, q, n } => {
                let params = CatalogParams { q: q.or(Some(1)), n: n.or(Some(1)), p: p.or(Some(1)), s: None };
                let x = catalog(name, &params)?;
                if x.dimension().is_some_and(|d| d > 1) {
                    return Err(ClassifyError::OutOfRange(format!("`{name}` has dimension above 1")));
                }
                x
            }
        })
    }

    /// `Vec^2_Q` of the space.
    pub fn classification(&self) -> Result<FgAbelianGroup, ClassifyError> {
        match self {
            ClassifiedSpace::Lens { q } => classify_rank2_lens(*q),
            ClassifiedSpace::Wedge { n } => classify_wedge(*n),
            ClassifiedSpace::LowDimensional { .. } => {
                self.complex()?;
                Ok(FgAbelianGroup::trivial())
            }
        }
    }
}

impl fmt::Display for ClassifiedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifiedSpace::Lens { q } => write!(f, "lens(q={q})"),
            ClassifiedSpace::Wedge { n } => write!(f, "wedge_free(n={n})"),
            ClassifiedSpace::LowDimensional { name, p, q, n } => {
                let set: Vec<String> = [("p", p), ("q", q), ("n", n)]
                    .iter()
                    .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
                    .collect();
                if set.is_empty() {
                    write!(f, "{name}")
                } else {
                    write!(f, "{name}({})", set.join(", "))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BijectiveConsistent,
    NotSurjective,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::BijectiveConsistent => "bijective-consistent",
            Verdict::NotSurjective => "not-surjective",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Comparison of the classification with the FKMM target group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub space: ClassifiedSpace,
    pub classification: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub verdict: Verdict,
    /// `|target| / |classification|` when both are finite and it divides.
    pub order_ratio: Option<String>,
}

/// Decides from cardinalities alone: isomorphic groups are consistent with a
/// bijection, a smaller finite classification cannot surject.
pub fn surjectivity_report(space: &ClassifiedSpace) -> Result<SurjectivityReport, ClassifyError> {
    let classification = space.classification()?;
    let target = fkmm_target(&space.complex()?)?;
    let (verdict, order_ratio) = match (classification.order(), target.order()) {
        (Some(a), Some(b)) => {
            let ratio = if (&b % &a).is_zero() { Some((&b / &a).to_string()) } else { None };
            let v = if a < b {
                Verdict::NotSurjective
            } else if classification == target {
                Verdict::BijectiveConsistent
            } else {
                Verdict::Inconclusive
            };
            (v, ratio)
        }
        (None, Some(_)) => (Verdict::Inconclusive, None),
        (_, None) if classification == target => (Verdict::BijectiveConsistent, None),
        _ => (Verdict::Inconclusive, None),
    };
    Ok(SurjectivityReport { space: space.clone(), classification, target, verdict, order_ratio })
}

/// Action of `Pic_R` on a classification set by tensor product, through a
/// fixed identification homomorphism.
#[derive(Clone, Debug)]
pub struct TorsorAction {
    pub pic_r: FgAbelianGroup,
    pub classes: FgAbelianGroup,
    pub identification: GroupHom,
}

impl TorsorAction {
    /// Lens space: `E_k = L_k ⊗ E_0`, with the identity `Z_{2q} → Z_{2q}`.
    pub fn lens(q: u32) -> Result<Self, ClassifyError> {
        let pic_r = pic_r_lens(q)?;
        let classes = classify_rank2_lens(q)?;
        let identification = GroupHom::new(pic_r.clone(), classes.clone(), IntMatrix::identity(pic_r.ngens()))?;
        Ok(TorsorAction { pic_r, classes, identification })
    }

    pub fn translate(&self, c: &[BigInt], base: &[BigInt]) -> Result<Vec<BigInt>, ClassifyError> {
        if c.len() != self.pic_r.ngens() || base.len() != self.classes.ngens() {
            return Err(ClassifyError::Group(GroupError::NotComposable));
        }
        let shift = self.identification.apply(c);
        let sum: Vec<BigInt> = shift.iter().zip(base).map(|(a, b)| a + b).collect();
        Ok(self.classes.reduced(&sum))
    }
}

/// Translates `base` by `c` under the lens-space torsor action.
pub fn torsor_translate(q: u32, c: &[BigInt], base: &[BigInt]) -> Result<Vec<BigInt>, ClassifyError> {
    TorsorAction::lens(q)?.translate(c, base)
}

/// Candidate groups for one lens-space cohomology group from the Gysin
/// sequence of `L_{2q} → CP^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GysinEntry {
    pub degree: u32,
    pub coefficients: Coefficients,
    pub candidates: Vec<FgAbelianGroup>,
}

/// `H^{k-2}(CP^1; Z(m-1)) --e--> H^k(CP^1; Z(m)) → H^k(L; Z(m)) → H^{k-1}(CP^1; Z(m-1)) --e--> H^{k+1}(CP^1; Z(m))`
/// with `e = 2qc`, narrowed for `k ≤ 3`.
pub fn gysin_constrain(q: u32) -> Result<Vec<GysinEntry>, ClassifyError> {
    use crate::abelian::{exact_sequence_constrain, MapSpec, SequenceTemplate, Slot};
    let q = check_q(q)?;
    let euler = Cp1RingElement::c().scale(2 * q);
    let mut out = Vec::new();
    for coeff in [Coefficients::Z1, Coefficients::Z0] {
        let prev = coeff.flip();
        for k in 0..=3u32 {
            let g = |deg: i64, c: Coefficients| if deg < 0 { FgAbelianGroup::trivial() } else { degree_group(deg as u32, c) };
            let cup = |deg: i64| {
                if deg < 0 {
                    GroupHom::zero(&FgAbelianGroup::trivial(), &degree_group((deg + 2) as u32, coeff))
                } else {
                    multiplication_map(&euler, 2, 1, deg as u32, prev)
                }
            };
            let k = k as i64;
            let t = SequenceTemplate {
                slots: vec![
                    Slot::Known(g(k - 2, prev)),
                    Slot::Known(g(k, coeff)),
                    Slot::Unknown,
                    Slot::Known(g(k - 1, prev)),
                    Slot::Known(g(k + 1, coeff)),
                ],
                maps: vec![MapSpec::Known(cup(k - 2)), MapSpec::Unknown, MapSpec::Unknown, MapSpec::Known(cup(k - 1))],
            };
            let narrowed = exact_sequence_constrain(&t)?;
            let candidates = narrowed
                .into_iter()
                .find(|(i, _)| *i == 2)
                .map(|(_, s)| s.into_iter().collect())
                .unwrap_or_default();
            out.push(GysinEntry { degree: k as u32, coefficients: coeff, candidates });
        }
    }
    Ok(out)
}
