//! Brute-force oracles shared by the integration tests. Each one recomputes
//! a quantity by a route that shares no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use z2coh::classify::ClutchingPresentation;
use z2coh::complex::{catalog, CatalogParams, EquivariantCellComplex, Orbit};
use z2coh::{FgAbelianGroup, IntMatrix};

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all `k × k` minors.
pub fn minors_gcd(a: &[Vec<BigInt>], cols: usize, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in combinations(a.len(), k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
            g = g.gcd(&det(sub));
        }
    }
    g
}

/// Invariant factors from determinantal divisors: `d_k = g_k / g_{k-1}`.
pub fn invariants_by_minors(a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=a.len().min(cols) {
        let g = minors_gcd(a, cols, k);
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Finite abelian group `Z_{n_1} ⊕ … ⊕ Z_{n_r}` with explicit elements.
#[derive(Clone, Debug)]
pub struct Finite {
    pub orders: Vec<u64>,
}

impl Finite {
    pub fn of(g: &FgAbelianGroup) -> Self {
        assert_eq!(g.rank(), 0, "finite groups only");
        Finite { orders: g.torsion().iter().map(|t| u64::try_from(t).unwrap()).collect() }
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn decode(&self, mut i: usize) -> Vec<u64> {
        let mut v = vec![0; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            let n = self.orders[k] as usize;
            v[k] = (i % n) as u64;
            i /= n;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut i = 0usize;
        for (k, &x) in v.iter().enumerate() {
            i = i * self.orders[k] as usize + (x % self.orders[k]) as usize;
        }
        i
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.orders).map(|((p, q), n)| (p + q) % n).collect();
        self.encode(&s)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let v = self.decode(a);
        v.iter().zip(&self.orders).fold(1u64, |acc, (&x, &n)| acc.lcm(&(n / x.gcd(&n))))
    }

    /// All subgroups, as sorted element lists.
    pub fn subgroups(&self) -> BTreeSet<Vec<usize>> {
        let n = self.size();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![vec![0usize]];
        while let Some(h) = stack.pop() {
            if !seen.insert(h.clone()) {
                continue;
            }
            let members: HashSet<usize> = h.iter().copied().collect();
            for g in 0..n {
                if !members.contains(&g) {
                    stack.push(self.closure(&h, g));
                }
            }
        }
        seen
    }

    fn closure(&self, h: &[usize], g: usize) -> Vec<usize> {
        let mut set: HashSet<usize> = h.iter().copied().collect();
        let mut frontier: Vec<usize> = set.iter().copied().collect();
        let gens: Vec<usize> = h.iter().copied().chain(std::iter::once(g)).collect();
        while let Some(x) = frontier.pop() {
            for &y in &gens {
                let z = self.add(x, y);
                if set.insert(z) {
                    frontier.push(z);
                }
            }
        }
        let mut v: Vec<usize> = set.into_iter().collect();
        v.sort();
        v
    }
}

/// Number of elements of each order: a complete invariant of finite abelian
/// groups.
pub fn order_profile(g: &Finite) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for a in 0..g.size() {
        *m.entry(g.element_order(a)).or_default() += 1;
    }
    m
}

fn quotient_profile(g: &Finite, h: &[usize]) -> BTreeMap<u64, usize> {
    let members: HashSet<usize> = h.iter().copied().collect();
    let mut m: BTreeMap<u64, usize> = BTreeMap::new();
    for a in 0..g.size() {
        let mut k = 1u64;
        let mut x = a;
        while !members.contains(&x) {
            x = g.add(x, a);
            k += 1;
        }
        *m.entry(k).or_default() += 1;
    }
    m.values_mut().for_each(|c| *c /= h.len());
    m
}

/// Every abelian group of order `n`, as invariant-factor lists
/// `d_1 | d_2 | … | d_r`.
pub fn groups_of_order(n: u64) -> Vec<FgAbelianGroup> {
    fn go(rest: u64, last: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in 2..=rest {
            if rest % d == 0 && d % last == 0 {
                cur.push(d);
                go(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|c| FgAbelianGroup::from_small(0, &c.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect()
}

/// Middle terms `E` of `0 → sub → E → quotient → 0`, by searching every
/// group of the right order for a subgroup of type `sub` with quotient of
/// type `quotient`.
pub fn extensions_by_search(quotient: &FgAbelianGroup, sub: &FgAbelianGroup) -> BTreeSet<FgAbelianGroup> {
    let (fq, fs) = (Finite::of(quotient), Finite::of(sub));
    let (pq, ps) = (order_profile(&fq), order_profile(&fs));
    let n = (fq.size() * fs.size()) as u64;
    let mut out = BTreeSet::new();
    for e in groups_of_order(n) {
        let fe = Finite::of(&e);
        let hit = fe
            .subgroups()
            .iter()
            .filter(|h| h.len() == fs.size())
            .any(|h| order_profile_of_subset(&fe, h) == ps && quotient_profile(&fe, h) == pq);
        if hit {
            out.insert(e);
        }
    }
    out
}

fn order_profile_of_subset(g: &Finite, h: &[usize]) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for &a in h {
        *m.entry(g.element_order(a)).or_default() += 1;
    }
    m
}

/// Orbits of translation by the given generators on a finite product of
/// cyclic groups, by union-find over all elements.
pub fn orbits_by_union_find(moduli: &[u64], generators: &[Vec<i64>]) -> Vec<usize> {
    let g = Finite { orders: moduli.to_vec() };
    let n = g.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let gens: Vec<usize> = generators
        .iter()
        .map(|v| {
            let r: Vec<u64> = v.iter().zip(moduli).map(|(&x, &m)| x.rem_euclid(m as i64) as u64).collect();
            g.encode(&r)
        })
        .collect();
    for x in 0..n {
        for &t in &gens {
            let y = g.add(x, t);
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            parent[a] = b;
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Compares the double coset of a clutching presentation against union-find
/// orbits on a finite window `Z_{m_1} × … × Z_{m_r}` of the ambient group.
/// The window must be a quotient by a subgroup of the combined image.
pub fn double_coset_matches_orbits(p: &ClutchingPresentation, moduli: &[u64]) -> Result<usize, String> {
    let dc = p.classes().map_err(|e| e.to_string())?;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for map in [&p.left_map, &p.right_map] {
        for j in 0..map.matrix().cols() {
            gens.push(map.matrix().column(j).iter().map(|x| x.to_i64().unwrap()).collect());
        }
    }
    let roots = orbits_by_union_find(moduli, &gens);
    let window = Finite { orders: moduli.to_vec() };
    let mut class_of_root: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    let mut root_of_class: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    for (x, &r) in roots.iter().enumerate() {
        let v: Vec<BigInt> = window.decode(x).iter().map(|&c| BigInt::from(c)).collect();
        let c = dc.class_of(&v);
        if class_of_root.entry(r).or_insert_with(|| c.clone()) != &c {
            return Err(format!("class not constant on the orbit of {v:?}"));
        }
        if root_of_class.entry(c).or_insert(r) != &r {
            return Err(format!("two orbits share the class of {v:?}"));
        }
    }
    let orbits = class_of_root.len();
    if BigInt::from(orbits) != dc.group.order().unwrap_or_default() {
        return Err(format!("{orbits} orbits but the group is {}", dc.group));
    }
    if dc.representatives().map(|r| r.len()) != Some(orbits) {
        return Err("representative count differs from orbit count".into());
    }
    Ok(orbits)
}

pub fn space(name: &str) -> EquivariantCellComplex {
    catalog(name, &CatalogParams::default()).unwrap()
}

pub fn space_with(name: &str, q: Option<u32>, n: Option<u32>) -> EquivariantCellComplex {
    catalog(name, &CatalogParams { q, n, ..Default::default() }).unwrap()
}

/// Every catalog space at small parameters.
pub fn catalog_instances() -> Vec<(String, EquivariantCellComplex)> {
    let mut out = Vec::new();
    for name in ["point", "free_pair", "circle_trivial", "s11", "torus_t020", "disk_conj", "cp1_conj"] {
        out.push((name.to_string(), space(name)));
    }
    for n in 1..=3 {
        out.push((format!("antipodal_sphere n={n}"), space_with("antipodal_sphere", None, Some(n))));
        out.push((format!("wedge_free n={n}"), space_with("wedge_free", None, Some(n))));
    }
    for (p, q) in [(1, 1), (1, 2), (2, 1)] {
        let x = catalog("sphere_pq", &CatalogParams { p: Some(p), q: Some(q), ..Default::default() }).unwrap();
        out.push((format!("sphere_pq p={p} q={q}"), x));
    }
    for q in 1..=2 {
        out.push((format!("lens q={q}"), space_with("lens", Some(q), None)));
        out.push((format!("lens_clutched q={q}"), space_with("lens_clutched", Some(q), None)));
    }
    out
}

/// Id of the first fixed 0-cell, if any.
pub fn fixed_vertex(x: &EquivariantCellComplex) -> Option<String> {
    x.cells().iter().find(|c| c.dim == 0 && c.orbit == Orbit::Fixed).map(|c| c.id.clone())
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}
