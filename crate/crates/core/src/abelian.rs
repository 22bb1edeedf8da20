//! Finitely generated abelian groups in invariant-factor form, homomorphisms
//! between them as integer matrices, and the derived constructions needed by
//! the cohomology engine: kernels, images, cokernels, `Ext`, extension
//! enumeration and exact-sequence constraint propagation.
//!
//! Canonical coordinates list the torsion generators first (in increasing
//! divisibility order) and the free generators after them. Rendering is
//! rank-first: `Z^2 ⊕ Z_2 ⊕ Z_4`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::linalg::{kernel_basis, smith_normal_form, IntMatrix};

/// Cap on `|sub| * |quotient|` for [`extension_candidates`].
pub const EXTENSION_CAP: u64 = 1_000_000;

/// `Z^rank ⊕ Z_{t_1} ⊕ … ⊕ Z_{t_k}` with `1 < t_1 | t_2 | … | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "GroupRepr", try_from = "GroupRepr")]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// Wire form: torsion coefficients as JSON integers, or decimal strings
/// beyond `u64`.
#[derive(Serialize, Deserialize)]
struct GroupRepr {
    rank: usize,
    torsion: Vec<Coefficient>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Small(u64),
    Big(String),
}

impl From<FgAbelianGroup> for GroupRepr {
    fn from(g: FgAbelianGroup) -> Self {
        let torsion = g
            .torsion
            .iter()
            .map(|t| t.to_u64().map_or_else(|| Coefficient::Big(t.to_string()), Coefficient::Small))
            .collect();
        GroupRepr { rank: g.rank, torsion }
    }
}

impl TryFrom<GroupRepr> for FgAbelianGroup {
    type Error = String;

    fn try_from(r: GroupRepr) -> Result<Self, String> {
        if r.torsion.len() > MAX_PARSED_FACTORS {
            return Err("too many torsion coefficients".into());
        }
        let mut t = Vec::with_capacity(r.torsion.len());
        for c in r.torsion {
            t.push(match c {
                Coefficient::Small(n) => BigInt::from(n),
                Coefficient::Big(s) => s.parse::<BigInt>().map_err(|e| e.to_string())?,
            });
        }
        Ok(FgAbelianGroup::new(r.rank, &t))
    }
}

impl FgAbelianGroup {
    /// Canonicalizes an arbitrary direct sum `Z^rank ⊕ ⊕ Z_{c_i}`. Entries
    /// equal to 0 count as extra free summands, entries ±1 are dropped.
    pub fn new(rank: usize, cyclic: &[BigInt]) -> Self {
        let mut rank = rank;
        let mut d: Vec<BigInt> = Vec::with_capacity(cyclic.len());
        for c in cyclic {
            if c.is_zero() {
                rank += 1;
            } else if !c.abs().is_one() {
                d.push(c.abs());
            }
        }
        // Each (gcd, lcm) exchange sorts the p-adic valuations of every prime
        // at once, so a selection pass leaves d_1 | d_2 | ... | d_k.
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if !(&d[j] % &d[i]).is_zero() {
                    let g = d[i].gcd(&d[j]);
                    let l = &d[i] / &g * &d[j];
                    d[i] = g;
                    d[j] = l;
                }
            }
        }
        d.retain(|x| !x.is_one());
        FgAbelianGroup { rank, torsion: d }
    }

    pub fn from_small(rank: usize, cyclic: &[i64]) -> Self {
        let c: Vec<BigInt> = cyclic.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(rank, &c)
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: vec![] }
    }

    /// `Z_n`; `n = 0` gives `Z`, `n = ±1` the trivial group.
    pub fn cyclic(n: i64) -> Self {
        Self::from_small(0, &[n])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of each canonical generator, 0 for free ones.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut o = self.torsion.clone();
        o.extend(std::iter::repeat_n(BigInt::zero(), self.rank));
        o
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut c = self.torsion.clone();
        c.extend(other.torsion.iter().cloned());
        Self::new(self.rank + other.rank, &c)
    }

    pub fn torsion_subgroup(&self) -> Self {
        FgAbelianGroup { rank: 0, torsion: self.torsion.clone() }
    }

    /// Relation matrix, one row per torsion generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(self.torsion.len(), n);
        for (i, t) in self.torsion.iter().enumerate() {
            m.set(i, i, t.clone());
        }
        m
    }

    /// Diagonal matrix of generator orders (columns generate the relations).
    pub fn order_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        IntMatrix::diagonal(n, n, &self.orders())
    }

    /// Reduces torsion coordinates into `[0, t)`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (x, t) in v.iter_mut().zip(&self.torsion) {
            *x = x.mod_floor(t);
        }
    }

    pub fn reduced(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduced(v).iter().all(Zero::is_zero)
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>, GroupError> {
        let order = self
            .order()
            .ok_or_else(|| GroupError::Infinite(self.to_string()))?;
        if order > BigInt::from(EXTENSION_CAP) {
            return Err(GroupError::TooLarge { size: order.to_string(), cap: EXTENSION_CAP });
        }
        let mut out = vec![vec![]];
        for t in &self.torsion {
            let t = t.to_i64().expect("bounded by cap");
            let mut next = Vec::with_capacity(out.len() * t as usize);
            for prefix in &out {
                for x in 0..t {
                    let mut p: Vec<BigInt> = prefix.clone();
                    p.push(BigInt::from(x));
                    next.push(p);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// Canonical-form equality.
pub fn is_isomorphic(a: &FgAbelianGroup, b: &FgAbelianGroup) -> bool {
    a == b
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z_{t}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Most cyclic summands a group string may describe.
pub const MAX_PARSED_FACTORS: usize = 1024;

impl FromStr for FgAbelianGroup {
    type Err = GroupError;

    /// Accepts `0`, `Z`, `Z^3`, `Z_4`, `Z_{12}`, `Z2`, `Z_2^3`, joined by
    /// `⊕`, `+` or `(+)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| GroupError::Parse(format!("{m} in `{s}`"));
        let norm = s.replace("(+)", "+").replace('⊕', "+");
        let mut rank = 0usize;
        let mut cyc: Vec<BigInt> = Vec::new();
        for raw in norm.split('+') {
            let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(err("empty summand"));
            }
            if term == "0" {
                continue;
            }
            let rest = term.strip_prefix('Z').ok_or_else(|| err("summand must start with Z"))?;
            let (base, power) = match rest.rfind('^') {
                Some(k) => {
                    let p: usize = rest[k + 1..].parse().map_err(|_| err("bad exponent"))?;
                    if p > MAX_PARSED_FACTORS {
                        return Err(err("exponent too large"));
                    }
                    (&rest[..k], p)
                }
                None => (rest, 1),
            };
            let digits = base.strip_prefix('_').unwrap_or(base);
            let digits = digits
                .strip_prefix('{')
                .map(|d| d.strip_suffix('}').ok_or_else(|| err("unbalanced brace")))
                .transpose()?
                .unwrap_or(digits);
            if digits.is_empty() {
                rank += power;
                continue;
            }
            if !digits.chars().all(|c| c.is_ascii_digit()) || digits.len() > 200 {
                return Err(err("bad cyclic order"));
            }
            let n: BigInt = digits.parse().map_err(|_| err("bad cyclic order"))?;
            if n.is_zero() {
                rank += power;
            } else {
                cyc.extend(std::iter::repeat_n(n, power));
            }
            if rank + cyc.len() > MAX_PARSED_FACTORS {
                return Err(err("too many summands"));
            }
        }
        Ok(FgAbelianGroup::new(rank, &cyc))
    }
}

/// Quotient `Z^l / colspace(M)` in canonical form with coordinate changes.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbelianGroup,
    /// `ngens × l`: ambient coordinates to canonical coordinates.
    pub to_canonical: IntMatrix,
    /// `l × ngens`: canonical generators as ambient vectors.
    pub from_canonical: IntMatrix,
}

impl Presentation {
    /// Canonical coordinates of an ambient vector, reduced.
    pub fn canonical(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut c = self.to_canonical.mul_vec(v);
        self.group.reduce(&mut c);
        c
    }
}

/// Presents `Z^l / colspace(m)`; `m` has `l` rows.
pub fn present(l: usize, m: &IntMatrix) -> Presentation {
    assert_eq!(m.rows(), l, "relation matrix row count");
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in snf.invariants.iter().enumerate() {
        if !d.is_one() {
            torsion_idx.push(i);
            torsion.push(d.clone());
        }
    }
    let mut idx = torsion_idx;
    idx.extend(r..l);
    let group = FgAbelianGroup { rank: l - r, torsion };
    Presentation {
        group,
        to_canonical: snf.u.select_rows(&idx),
        from_canonical: snf.u_inv.select_cols(&idx),
    }
}

/// Group with `generators` generators and the given relation rows.
pub fn from_presentation(generators: usize, relations: &IntMatrix) -> Result<Presentation, GroupError> {
    if relations.cols() != generators {
        return Err(GroupError::ShapeMismatch {
            expected: (relations.rows(), generators),
            found: relations.shape(),
        });
    }
    Ok(present(generators, &relations.transpose()))
}

/// Basis (as columns) of the lattice spanned by the columns of `g`.
pub fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    let cols: Vec<Vec<BigInt>> = snf
        .invariants
        .iter()
        .enumerate()
        .map(|(i, d)| snf.u_inv.column(i).into_iter().map(|x| x * d).collect())
        .collect();
    IntMatrix::from_columns(&cols, g.rows())
}

/// Homomorphism between canonical groups as an integer matrix acting on
/// canonical coordinates (`target.ngens × source.ngens`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

/// Subgroup with its inclusion map.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgAbelianGroup,
    pub inclusion: GroupHom,
}

/// Quotient group with its projection map.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FgAbelianGroup,
    pub projection: GroupHom,
    /// Canonical generators of the quotient lifted to the ambient group.
    pub lifts: IntMatrix,
}

impl GroupHom {
    /// Checks shape and well-definedness, and reduces torsion rows.
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self, GroupError> {
        let expected = (target.ngens(), source.ngens());
        if matrix.shape() != expected {
            return Err(GroupError::ShapeMismatch { expected, found: matrix.shape() });
        }
        let t_orders = target.orders();
        for (j, d) in source.orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (i, t) in t_orders.iter().enumerate() {
                let img = matrix.get(i, j) * d;
                let ok = if t.is_zero() { img.is_zero() } else { (img % t).is_zero() };
                if !ok {
                    return Err(GroupError::NotWellDefined { generator: j, order: d.to_string() });
                }
            }
        }
        let mut matrix = matrix;
        for (i, t) in target.torsion.iter().enumerate() {
            for j in 0..matrix.cols() {
                let x = matrix.get(i, j).mod_floor(t);
                matrix.set(i, j, x);
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    /// Builds a map from the images of the canonical source generators.
    pub fn from_images(source: FgAbelianGroup, target: FgAbelianGroup, images: &[Vec<BigInt>]) -> Result<Self, GroupError> {
        let m = IntMatrix::from_columns(images, target.ngens());
        Self::new(source, target, m)
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut w = self.matrix.mul_vec(v);
        self.target.reduce(&mut w);
        w
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target != other.source {
            return Err(GroupError::NotComposable);
        }
        GroupHom::new(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix))
    }

    /// Difference `self - other` of parallel maps.
    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.source != other.source || self.target != other.target {
            return Err(GroupError::NotComposable);
        }
        let (r, c) = self.matrix.shape();
        let mut m = self.matrix.clone();
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, self.matrix.get(i, j) - other.matrix.get(i, j));
            }
        }
        GroupHom::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Lattice in source coordinates mapping to zero (contains the source
    /// relations), as a column basis.
    fn kernel_lattice(&self) -> IntMatrix {
        let ns = self.source.ngens();
        let aug = self.matrix.hstack(&self.target.order_matrix());
        let k = kernel_basis(&aug);
        let idx: Vec<usize> = (0..ns).collect();
        let proj = k.select_rows(&idx);
        lattice_basis(&proj.hstack(&self.source.order_matrix()))
    }

    pub fn kernel(&self) -> Subgroup {
        let ns = self.source.ngens();
        let basis = self.kernel_lattice();
        // Kernel = lattice / source relations, presented on the lattice basis.
        let rel_aug = basis.hstack(&self.source.order_matrix());
        let k = kernel_basis(&rel_aug);
        let b = basis.cols();
        let rels = k.select_rows(&(0..b).collect::<Vec<_>>());
        let p = present(b, &rels);
        let incl = basis.mul(&p.from_canonical);
        let inclusion = GroupHom::new(p.group.clone(), self.source.clone(), incl)
            .expect("kernel inclusion is well defined");
        debug_assert_eq!(inclusion.matrix.rows(), ns);
        Subgroup { group: p.group, inclusion }
    }

    pub fn image(&self) -> Subgroup {
        let ns = self.source.ngens();
        let p = present(ns, &self.kernel_lattice());
        let incl = self.matrix.mul(&p.from_canonical);
        let inclusion = GroupHom::new(p.group.clone(), self.target.clone(), incl)
            .expect("image inclusion is well defined");
        Subgroup { group: p.group, inclusion }
    }

    pub fn cokernel(&self) -> QuotientGroup {
        let nt = self.target.ngens();
        let rel = self.matrix.hstack(&self.target.order_matrix());
        let p = present(nt, &rel);
        let projection = GroupHom::new(self.target.clone(), p.group.clone(), p.to_canonical.clone())
            .expect("cokernel projection is well defined");
        QuotientGroup { group: p.group, projection, lifts: p.from_canonical }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// True when `v` (target coordinates) lies in the image.
    pub fn image_contains(&self, v: &[BigInt]) -> bool {
        let q = self.cokernel();
        q.group.is_zero_element(&q.projection.apply(v))
    }
}

/// Lattice-level exactness test at the middle of `a --f--> b --g--> c`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> Result<bool, GroupError> {
    if f.target != g.source {
        return Err(GroupError::NotComposable);
    }
    if !f.then(g)?.is_zero() {
        return Ok(false);
    }
    let k = g.kernel();
    for j in 0..k.group.ngens() {
        let v = k.inclusion.matrix.column(j);
        if !f.image_contains(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ext¹(b, a)`.
pub fn ext_group(b: &FgAbelianGroup, a: &FgAbelianGroup) -> FgAbelianGroup {
    let mut cyc = Vec::new();
    for n in &b.torsion {
        for _ in 0..a.rank {
            cyc.push(n.clone());
        }
        for t in &a.torsion {
            cyc.push(n.gcd(t));
        }
    }
    FgAbelianGroup::new(0, &cyc)
}

/// Isomorphism classes of `E` with `0 → sub → E → quotient → 0`, for finite
/// inputs with `|sub| · |quotient| ≤ 10⁶`.
pub fn extension_candidates(quotient: &FgAbelianGroup, sub: &FgAbelianGroup) -> Result<BTreeSet<FgAbelianGroup>, GroupError> {
    for g in [quotient, sub] {
        if !g.is_finite() {
            return Err(GroupError::Infinite(g.to_string()));
        }
    }
    let size = quotient.order().unwrap() * sub.order().unwrap();
    if size > BigInt::from(EXTENSION_CAP) {
        return Err(GroupError::TooLarge { size: size.to_string(), cap: EXTENSION_CAP });
    }
    extension_middles(quotient, sub)
}

/// Extension enumeration that also accepts free parts: free summands of the
/// quotient split off, and cocycles for a torsion quotient range over the
/// finite groups `sub / n·sub`.
pub fn extension_middles(quotient: &FgAbelianGroup, sub: &FgAbelianGroup) -> Result<BTreeSet<FgAbelianGroup>, GroupError> {
    let count: BigInt = quotient
        .torsion
        .iter()
        .map(|n| {
            let mut c = n.pow(sub.rank as u32);
            for t in &sub.torsion {
                c *= n.gcd(t);
            }
            c
        })
        .product();
    if count > BigInt::from(EXTENSION_CAP) {
        return Err(GroupError::TooLarge { size: count.to_string(), cap: EXTENSION_CAP });
    }
    let s_orders = sub.orders();
    let ns = sub.ngens();
    // Per quotient factor n_i, the coordinate ranges of sub / n_i sub.
    let ranges: Vec<Vec<i64>> = quotient
        .torsion
        .iter()
        .map(|n| {
            s_orders
                .iter()
                .map(|t| {
                    let m = if t.is_zero() { n.clone() } else { n.gcd(t) };
                    m.to_i64().expect("bounded by cap")
                })
                .collect()
        })
        .collect();
    let k = quotient.torsion.len();
    let mut out = BTreeSet::new();
    let mut choice: Vec<Vec<i64>> = ranges.iter().map(|r| vec![0; r.len()]).collect();
    loop {
        // E = Z^{ns + k} / <sub relations, n_i f_i - s_i>
        let l = ns + k;
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for (j, t) in sub.torsion.iter().enumerate() {
            let mut c = vec![BigInt::zero(); l];
            c[j] = t.clone();
            cols.push(c);
        }
        for (i, n) in quotient.torsion.iter().enumerate() {
            let mut c = vec![BigInt::zero(); l];
            for (j, s) in choice[i].iter().enumerate() {
                c[j] = BigInt::from(-s);
            }
            c[ns + i] = n.clone();
            cols.push(c);
        }
        let m = IntMatrix::from_columns(&cols, l);
        let e = present(l, &m).group;
        out.insert(FgAbelianGroup::new(e.rank + quotient.rank, &e.torsion));
        if !advance(&mut choice, &ranges) {
            break;
        }
    }
    Ok(out)
}

fn advance(choice: &mut [Vec<i64>], ranges: &[Vec<i64>]) -> bool {
    for (c, r) in choice.iter_mut().zip(ranges).rev() {
        for (x, m) in c.iter_mut().zip(r).rev() {
            *x += 1;
            if *x < *m {
                return true;
            }
            *x = 0;
        }
    }
    false
}

fn factor_small(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Isomorphism types of subgroups (equivalently quotients) of a finite group,
/// via dominance of the per-prime exponent partitions.
pub fn subgroup_types(g: &FgAbelianGroup) -> Result<BTreeSet<FgAbelianGroup>, GroupError> {
    if !g.is_finite() {
        return Err(GroupError::Infinite(g.to_string()));
    }
    let mut primes: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for t in &g.torsion {
        let t = t.to_u64().ok_or_else(|| GroupError::TooLarge { size: t.to_string(), cap: u64::MAX })?;
        for (p, e) in factor_small(t) {
            primes.entry(p).or_default().push(e);
        }
    }
    let mut acc: Vec<Vec<BigInt>> = vec![vec![]];
    for (p, mut lambda) in primes {
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts = Vec::new();
        sub_partitions(&lambda, 0, u32::MAX, &mut vec![], &mut parts);
        let mut next = Vec::new();
        for prefix in &acc {
            for mu in &parts {
                let mut c = prefix.clone();
                c.extend(mu.iter().filter(|&&e| e > 0).map(|&e| BigInt::from(p).pow(e)));
                next.push(c);
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|c| FgAbelianGroup::new(0, &c)).collect())
}

fn sub_partitions(lambda: &[u32], i: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == lambda.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=lambda[i].min(cap) {
        cur.push(e);
        sub_partitions(lambda, i + 1, e, cur, out);
        cur.pop();
    }
}

/// A slot in an exact-sequence template.
#[derive(Clone, Debug)]
pub enum Slot {
    Known(FgAbelianGroup),
    Unknown,
}

/// What is known about a map in an exact-sequence template.
#[derive(Clone, Debug)]
pub enum MapSpec {
    Known(GroupHom),
    Zero,
    Injective,
    Surjective,
    Isomorphism,
    Unknown,
}

/// Alternating groups and maps: `slots[i] --maps[i]--> slots[i+1]`, exact at
/// every interior slot.
#[derive(Clone, Debug)]
pub struct SequenceTemplate {
    pub slots: Vec<Slot>,
    pub maps: Vec<MapSpec>,
}

impl SequenceTemplate {
    /// `0 → sub → ? → quotient → 0`
    pub fn short(sub: FgAbelianGroup, quotient: FgAbelianGroup) -> Self {
        SequenceTemplate {
            slots: vec![
                Slot::Known(FgAbelianGroup::trivial()),
                Slot::Known(sub),
                Slot::Unknown,
                Slot::Known(quotient),
                Slot::Known(FgAbelianGroup::trivial()),
            ],
            maps: vec![MapSpec::Unknown; 4],
        }
    }
}

/// Candidate sets for each unknown slot, keyed by slot index.
pub fn exact_sequence_constrain(t: &SequenceTemplate) -> Result<Vec<(usize, BTreeSet<FgAbelianGroup>)>, GroupError> {
    let n = t.slots.len();
    if t.maps.len() + 1 != n {
        return Err(GroupError::MalformedTemplate(format!(
            "{} slots need {} maps, found {}",
            n,
            n.saturating_sub(1),
            t.maps.len()
        )));
    }
    let known = |i: usize| match t.slots.get(i) {
        Some(Slot::Known(g)) => Some(g),
        _ => None,
    };
    for (i, m) in t.maps.iter().enumerate() {
        if let MapSpec::Known(h) = m {
            match (known(i), known(i + 1)) {
                (Some(a), Some(b)) if a == h.source() && b == h.target() => {}
                _ => {
                    return Err(GroupError::MalformedTemplate(format!(
                        "map {i} does not match its neighbouring slots"
                    )))
                }
            }
        }
    }
    let unknown: Vec<usize> = (0..n).filter(|&i| known(i).is_none()).collect();
    for &i in &unknown {
        if i == 0 || i + 1 == n {
            return Err(GroupError::MalformedTemplate("unknown slot at an end of the sequence".into()));
        }
        if known(i - 1).is_none() || known(i + 1).is_none() {
            return Err(GroupError::MalformedTemplate("adjacent unknown slots".into()));
        }
    }
    // Exactness at interior nodes where both maps are explicit.
    let mut consistent = true;
    for i in 1..n.saturating_sub(1) {
        if let (MapSpec::Known(f), MapSpec::Known(g)) = (&t.maps[i - 1], &t.maps[i]) {
            consistent &= is_exact_at(f, g)?;
        }
    }
    let mut out = Vec::new();
    for &i in &unknown {
        if !consistent {
            out.push((i, BTreeSet::new()));
            continue;
        }
        let subs = image_into_unknown(t, i)?;
        let quots = image_out_of_unknown(t, i)?;
        let mut cands = BTreeSet::new();
        for q in &quots {
            for s in &subs {
                cands.extend(extension_middles(q, s)?);
            }
        }
        out.push((i, cands));
    }
    Ok(out)
}

fn slot_group(t: &SequenceTemplate, i: usize) -> Option<&FgAbelianGroup> {
    match t.slots.get(i) {
        Some(Slot::Known(g)) => Some(g),
        _ => None,
    }
}

/// Possible images of `slots[i-1] → slots[i]` (the unknown at `i`).
fn image_into_unknown(t: &SequenceTemplate, i: usize) -> Result<BTreeSet<FgAbelianGroup>, GroupError> {
    let p = slot_group(t, i - 1).expect("checked");
    let single = |g: FgAbelianGroup| Ok(BTreeSet::from([g]));
    if p.is_trivial() || matches!(t.maps[i - 1], MapSpec::Zero) {
        return single(FgAbelianGroup::trivial());
    }
    if matches!(t.maps[i], MapSpec::Injective | MapSpec::Isomorphism) {
        return single(FgAbelianGroup::trivial());
    }
    if matches!(t.maps[i - 1], MapSpec::Injective | MapSpec::Isomorphism) {
        return single(p.clone());
    }
    // ker(slots[i-1] → U) = im(slots[i-2] → slots[i-1]) by exactness.
    if i >= 2 {
        let prev = slot_group(t, i - 2);
        match (&t.maps[i - 2], prev) {
            (MapSpec::Known(h), _) => return single(h.cokernel().group),
            (MapSpec::Zero, _) => return single(p.clone()),
            (_, Some(g)) if g.is_trivial() => return single(p.clone()),
            (MapSpec::Surjective | MapSpec::Isomorphism, _) => return single(FgAbelianGroup::trivial()),
            _ => {}
        }
    }
    subgroup_types(p)
}

/// Possible images of `slots[i] → slots[i+1]`.
fn image_out_of_unknown(t: &SequenceTemplate, i: usize) -> Result<BTreeSet<FgAbelianGroup>, GroupError> {
    let nx = slot_group(t, i + 1).expect("checked");
    let single = |g: FgAbelianGroup| Ok(BTreeSet::from([g]));
    if nx.is_trivial() || matches!(t.maps[i], MapSpec::Zero) {
        return single(FgAbelianGroup::trivial());
    }
    if matches!(t.maps[i - 1], MapSpec::Surjective | MapSpec::Isomorphism) {
        return single(FgAbelianGroup::trivial());
    }
    if matches!(t.maps[i], MapSpec::Surjective | MapSpec::Isomorphism) {
        return single(nx.clone());
    }
    // im(U → slots[i+1]) = ker(slots[i+1] → slots[i+2]).
    if i + 2 < t.slots.len() {
        let next = slot_group(t, i + 2);
        match (&t.maps[i + 1], next) {
            (MapSpec::Known(h), _) => return single(h.kernel().group),
            (MapSpec::Zero, _) => return single(nx.clone()),
            (_, Some(g)) if g.is_trivial() => return single(nx.clone()),
            (MapSpec::Injective | MapSpec::Isomorphism, _) => return single(FgAbelianGroup::trivial()),
            _ => {}
        }
    }
    subgroup_types(nx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn presentation_examples() {
        let p = from_presentation(1, &IntMatrix::from_rows(&[[2]])).unwrap();
        assert_eq!(p.group, g("Z_2"));
        let p = from_presentation(2, &IntMatrix::from_rows(&[[2, 0], [0, 4]])).unwrap();
        assert_eq!(p.group, g("Z_2 ⊕ Z_4"));
        let p = from_presentation(1, &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(p.group, g("Z"));
    }

    #[test]
    fn display_and_parse() {
        let x = FgAbelianGroup::from_small(2, &[4, 2, 3]);
        assert_eq!(x.to_string(), "Z^2 ⊕ Z_2 ⊕ Z_12");
        assert_eq!(g("Z_{2} + Z_12 (+) Z^2"), x);
        assert_eq!(g("Z2^2"), FgAbelianGroup::from_small(0, &[2, 2]));
        assert_eq!(g("0").to_string(), "0");
        assert!("Q".parse::<FgAbelianGroup>().is_err());
        assert!("Z_{3".parse::<FgAbelianGroup>().is_err());
    }

    #[test]
    fn hom_examples() {
        let z2 = g("Z_2");
        let z22 = g("Z_2^2");
        let diag = GroupHom::new(z2.clone(), z22.clone(), IntMatrix::from_rows(&[[1], [1]])).unwrap();
        assert_eq!(diag.cokernel().group, z2);
        assert!(diag.is_injective());
        let zero = GroupHom::zero(&g("Z"), &z2);
        assert_eq!(zero.cokernel().group, z2);
        assert_eq!(zero.kernel().group, g("Z"));
        let id = GroupHom::identity(&g("Z_6"));
        assert!(id.cokernel().group.is_trivial());
        assert!(GroupHom::new(z2.clone(), g("Z"), IntMatrix::from_rows(&[[1]])).is_err());
    }

    #[test]
    fn kernel_and_image_of_multiplication() {
        // x2 : Z_4 -> Z_4 has kernel Z_2, image Z_2.
        let z4 = g("Z_4");
        let h = GroupHom::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[[2]])).unwrap();
        assert_eq!(h.kernel().group, g("Z_2"));
        assert_eq!(h.image().group, g("Z_2"));
        assert_eq!(h.cokernel().group, g("Z_2"));
        assert!(is_exact_at(&h, &h).unwrap());
        // x2 : Z -> Z
        let z = g("Z");
        let h = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[[2]])).unwrap();
        assert!(h.kernel().group.is_trivial());
        assert_eq!(h.image().group, z);
        assert_eq!(h.cokernel().group, g("Z_2"));
    }

    #[test]
    fn ext_examples() {
        assert_eq!(ext_group(&g("Z_6"), &g("Z_2")), g("Z_2"));
        assert_eq!(ext_group(&g("Z"), &g("Z_5 ⊕ Z")), g("0"));
        assert_eq!(ext_group(&g("Z_6"), &g("Z_4")), g("Z_2"));
        assert_eq!(ext_group(&g("Z_3"), &g("Z")), g("Z_3"));
    }

    #[test]
    fn extension_examples() {
        for q in 1..=3i64 {
            let c = extension_candidates(&FgAbelianGroup::cyclic(2 * q), &g("Z_2")).unwrap();
            let want = BTreeSet::from([
                FgAbelianGroup::from_small(0, &[2, 2 * q]),
                FgAbelianGroup::cyclic(4 * q),
            ]);
            assert_eq!(c, want);
        }
        let gg = g("Z_2 ⊕ Z_6");
        assert_eq!(extension_candidates(&g("0"), &gg).unwrap(), BTreeSet::from([gg]));
        assert_eq!(extension_candidates(&g("Z_3"), &g("Z_2")).unwrap(), BTreeSet::from([g("Z_6")]));
        assert!(extension_candidates(&g("Z"), &g("Z_2")).is_err());
    }

    #[test]
    fn middles_with_free_parts() {
        let c = extension_middles(&g("Z_2"), &g("Z")).unwrap();
        assert_eq!(c, BTreeSet::from([g("Z"), g("Z ⊕ Z_2")]));
        let c = extension_middles(&g("Z"), &g("Z_2")).unwrap();
        assert_eq!(c, BTreeSet::from([g("Z ⊕ Z_2")]));
    }

    #[test]
    fn subgroup_type_enumeration() {
        let s = subgroup_types(&g("Z_4 ⊕ Z_2")).unwrap();
        let want: BTreeSet<_> = ["0", "Z_2", "Z_4", "Z_2^2", "Z_2 ⊕ Z_4"].iter().map(|x| g(x)).collect();
        assert_eq!(s, want);
    }

    #[test]
    fn sequence_examples() {
        let r = exact_sequence_constrain(&SequenceTemplate::short(g("Z_2"), g("Z_6"))).unwrap();
        assert_eq!(r, vec![(2, BTreeSet::from([g("Z_2 ⊕ Z_6"), g("Z_12")]))]);
        let t = SequenceTemplate {
            slots: vec![Slot::Known(g("0")), Slot::Unknown, Slot::Known(g("0"))],
            maps: vec![MapSpec::Unknown, MapSpec::Unknown],
        };
        assert_eq!(exact_sequence_constrain(&t).unwrap(), vec![(1, BTreeSet::from([g("0")]))]);
        let bad = SequenceTemplate { slots: vec![Slot::Unknown], maps: vec![MapSpec::Zero] };
        assert!(exact_sequence_constrain(&bad).is_err());
    }

    #[test]
    fn inconsistent_known_maps_give_empty_sets() {
        let z = g("Z");
        let id = GroupHom::identity(&z);
        let t = SequenceTemplate {
            slots: vec![Slot::Known(z.clone()), Slot::Known(z.clone()), Slot::Known(z.clone()), Slot::Unknown, Slot::Known(g("0"))],
            maps: vec![MapSpec::Known(id.clone()), MapSpec::Known(id), MapSpec::Unknown, MapSpec::Unknown],
        };
        let r = exact_sequence_constrain(&t).unwrap();
        assert!(r[0].1.is_empty());
    }
}
