//! The ring `H^*_{Z/2}(CP^1; Z(*)) = Z[t^{1/2}, c] / (2 t^{1/2}, c^2)`.
//!
//! `t^{1/2}` has degree 1 and twist 1, `c` has degree 2 and twist 1. A
//! monomial `t^{j/2} c^e` lives in degree `j + 2e` with twist `j + e` mod 2;
//! its coefficient is an integer for `j = 0` and lies in `Z_2` otherwise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::{FgAbelianGroup, GroupHom};
use crate::borel::Coefficients;
use crate::linalg::IntMatrix;

/// `(j, e)` for the monomial `t^{j/2} c^e`, `e ∈ {0, 1}`.
pub type Monomial = (u32, u32);

/// Element in normal form: no `c^2`, coefficients of `j ≥ 1` reduced mod 2,
/// no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cp1RingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Cp1RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn t_half() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn c() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn monomial(j: u32, e: u32, coef: i64) -> Self {
        let mut x = Self::zero();
        x.add_term((j, e), BigInt::from(coef));
        x
    }

    pub fn constant(n: i64) -> Self {
        Self::monomial(0, 0, n)
    }

    fn add_term(&mut self, m: Monomial, coef: BigInt) {
        if m.1 >= 2 {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += coef;
        if m.0 >= 1 {
            *entry = entry.mod_floor(&BigInt::from(2));
        }
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * n);
        }
        out
    }
}

/// Product in normal form.
pub fn cp1_ring_multiply(a: &Cp1RingElement, b: &Cp1RingElement) -> Cp1RingElement {
    let mut out = Cp1RingElement::zero();
    for ((j1, e1), c1) in &a.terms {
        for ((j2, e2), c2) in &b.terms {
            out.add_term((j1 + j2, e1 + e2), c1 * c2);
        }
    }
    out
}

impl fmt::Display for Cp1RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(j, e), c)| {
                let mut mono = Vec::new();
                match j {
                    0 => {}
                    1 => mono.push("t^{1/2}".to_string()),
                    _ if j % 2 == 0 => mono.push(if j == 2 { "t".to_string() } else { format!("t^{}", j / 2) }),
                    _ => mono.push(format!("t^{{{j}/2}}")),
                }
                if e == 1 {
                    mono.push("c".into());
                }
                if mono.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    mono.join("")
                } else {
                    format!("{c}{}", mono.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Monomials spanning degree `k` with the given twist, torsion ones first to
/// match canonical group coordinates.
pub fn degree_basis(k: u32, coeff: Coefficients) -> Vec<Monomial> {
    let m = coeff.twist() as u32;
    let mut out: Vec<Monomial> = (0..=1u32)
        .filter(|&e| 2 * e <= k)
        .map(|e| (k - 2 * e, e))
        .filter(|&(j, e)| (j + e) % 2 == m)
        .collect();
    out.sort_by_key(|&(j, _)| j == 0);
    out
}

/// `H^k_{Z/2}(CP^1; Z(m))` read off the ring.
pub fn degree_group(k: u32, coeff: Coefficients) -> FgAbelianGroup {
    let basis = degree_basis(k, coeff);
    let free = basis.iter().filter(|m| m.0 == 0).count();
    let two = vec![BigInt::from(2); basis.len() - free];
    FgAbelianGroup::new(free, &two)
}

/// Multiplication by `x` as a homomorphism from degree `k` with twist `coeff`
/// into degree `k + deg_x` with twist shifted by `twist_x`.
pub fn multiplication_map(x: &Cp1RingElement, deg_x: u32, twist_x: usize, k: u32, coeff: Coefficients) -> GroupHom {
    let src = degree_basis(k, coeff);
    let tcoeff = Coefficients::from_twist(coeff.twist() + twist_x);
    let dst = degree_basis(k + deg_x, tcoeff);
    let mut m = IntMatrix::zeros(dst.len(), src.len());
    for (col, &(j, e)) in src.iter().enumerate() {
        let prod = cp1_ring_multiply(&Cp1RingElement::monomial(j, e, 1), x);
        for (row, &mono) in dst.iter().enumerate() {
            m.set(row, col, prod.coefficient(mono));
        }
    }
    GroupHom::new(degree_group(k, coeff), degree_group(k + deg_x, tcoeff), m).expect("ring multiplication is a homomorphism")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let c = Cp1RingElement::c();
        let t = Cp1RingElement::t_half();
        assert!(cp1_ring_multiply(&c, &c).is_zero());
        assert!(cp1_ring_multiply(&Cp1RingElement::constant(2), &t).is_zero());
        assert_eq!(cp1_ring_multiply(&t, &t), Cp1RingElement::monomial(2, 0, 1));
        assert_eq!(cp1_ring_multiply(&t, &t).to_string(), "t");
        assert_eq!(Cp1RingElement::c().scale(4).to_string(), "4c");
    }

    #[test]
    fn groups_match_cohomology_of_cp1() {
        let z1: Vec<String> = (0..5).map(|k| degree_group(k, Coefficients::Z1).to_string()).collect();
        let z0: Vec<String> = (0..5).map(|k| degree_group(k, Coefficients::Z0).to_string()).collect();
        assert_eq!(z1, ["0", "Z_2", "Z", "Z_2", "Z_2"]);
        assert_eq!(z0, ["Z", "0", "Z_2", "Z_2", "Z_2"]);
    }
}
