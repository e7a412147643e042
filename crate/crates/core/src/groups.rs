//! Finite abelian groups, their characters and automorphisms.
//!
//! Elements are stored as indices into a fixed enumeration: the first cyclic
//! factor varies fastest, so `Z2xZ2` is enumerated `(0,0),(1,0),(0,1),(1,1)`.

use crate::numerics::{root_of_unity, CScalar};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse group '{0}': expected factors like Z4xZ2")]
    Parse(String),
    #[error("group must have at least one element of order > 0")]
    Empty,
    #[error("element index {index} out of range for group of order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("map is not a group automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid de-equivariantization frame: {0}")]
    BadFrame(String),
}

/// An element, addressed by its index in the group's enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub usize);

/// A finite abelian group `Z/o_1 x ... x Z/o_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u32>,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self, GroupError> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(GroupError::Empty);
        }
        let n: usize = orders.iter().map(|&o| o as usize).product();
        let mut g = AbelianGroup {
            orders,
            add: vec![0; n * n],
            neg: vec![0; n],
        };
        for a in 0..n {
            let ca = g.coords(GroupElement(a));
            let neg: Vec<u32> = ca
                .iter()
                .zip(&g.orders)
                .map(|(&x, &o)| (o - x) % o)
                .collect();
            g.neg[a] = g.index_of(&neg);
            for b in 0..n {
                let cb = g.coords(GroupElement(b));
                let s: Vec<u32> = ca
                    .iter()
                    .zip(&cb)
                    .zip(&g.orders)
                    .map(|((&x, &y), &o)| (x + y) % o)
                    .collect();
                g.add[a * n + b] = g.index_of(&s);
            }
        }
        Ok(g)
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: u32) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    /// Parse names such as `Z4`, `Z2xZ2`, `Z4xZ2`.
    pub fn parse(name: &str) -> Result<Self, GroupError> {
        let err = || GroupError::Parse(name.to_string());
        let orders = name
            .split(['x', 'X', '*'])
            .map(|f| {
                let f = f.trim();
                let digits = f
                    .strip_prefix('Z')
                    .or_else(|| f.strip_prefix('z'))
                    .ok_or_else(err)?;
                let digits = digits.trim_start_matches('/');
                digits.parse::<u32>().map_err(|_| err())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(orders)
    }

    pub fn name(&self) -> String {
        self.orders
            .iter()
            .map(|o| format!("Z{o}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn order(&self) -> usize {
        self.neg.len()
    }

    pub fn factor_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order()).map(GroupElement)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn coords(&self, g: GroupElement) -> Vec<u32> {
        let mut rest = g.0;
        self.orders
            .iter()
            .map(|&o| {
                let c = (rest % o as usize) as u32;
                rest /= o as usize;
                c
            })
            .collect()
    }

    pub fn index_of(&self, coords: &[u32]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (&c, &o) in coords.iter().zip(&self.orders) {
            idx += (c % o) as usize * stride;
            stride *= o as usize;
        }
        idx
    }

    pub fn element(&self, coords: &[u32]) -> GroupElement {
        GroupElement(self.index_of(coords))
    }

    pub fn check(&self, index: usize) -> Result<GroupElement, GroupError> {
        if index < self.order() {
            Ok(GroupElement(index))
        } else {
            Err(GroupError::OutOfRange {
                index,
                order: self.order(),
            })
        }
    }

    #[inline]
    pub fn add(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.add[a.0 * self.order() + b.0])
    }

    #[inline]
    pub fn neg(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.neg[a.0])
    }

    #[inline]
    pub fn sub(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn double(&self, a: GroupElement) -> GroupElement {
        self.add(a, a)
    }

    /// Elements `g` with `2g = 0`.
    pub fn two_torsion(&self) -> Vec<GroupElement> {
        self.elements()
            .filter(|&g| self.double(g) == self.zero())
            .collect()
    }

    /// All characters, enumerated by the dual coordinates in the same order as elements.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.order())
            .map(|k| Character::from_dual_index(self, k))
            .collect()
    }

    pub fn format(&self, g: GroupElement) -> String {
        let c = self.coords(g);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            format!(
                "({})",
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A character `G -> U(1)`, stored by its values.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    values: Vec<CScalar>,
    dual: Vec<u32>,
}

impl Character {
    fn from_dual_index(g: &AbelianGroup, k: usize) -> Self {
        let dual = g.coords(GroupElement(k));
        let values = g
            .elements()
            .map(|x| {
                let cx = g.coords(x);
                let mut z = CScalar::new(1.0, 0.0);
                for ((&a, &b), &o) in dual.iter().zip(&cx).zip(g.factor_orders()) {
                    z *= root_of_unity((a * b) as i64, o as u64);
                }
                z
            })
            .collect();
        Character { values, dual }
    }

    pub fn eval(&self, g: GroupElement) -> CScalar {
        self.values[g.0]
    }

    pub fn values(&self) -> &[CScalar] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.dual.iter().all(|&c| c == 0)
    }

    pub fn conj(&self, group: &AbelianGroup) -> Character {
        let dual: Vec<u32> = self
            .dual
            .iter()
            .zip(group.factor_orders())
            .map(|(&a, &o)| (o - a) % o)
            .collect();
        Character::from_dual_index(group, group.index_of(&dual))
    }

    /// Index of this character in [`AbelianGroup::characters`].
    pub fn index(&self, group: &AbelianGroup) -> usize {
        group.index_of(&self.dual)
    }
}

/// Find the character of a cyclic group taking value `value` on the generator.
pub fn cyclic_character_by_generator_value(
    group: &AbelianGroup,
    value: CScalar,
) -> Option<Character> {
    group
        .characters()
        .into_iter()
        .find(|c| (c.eval(GroupElement(1 % group.order())) - value).norm() < 1e-9)
}

/// A group automorphism given by its action on element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAutomorphism {
    images: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn new(group: &AbelianGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if images.len() != n {
            return Err(GroupError::NotAutomorphism(format!(
                "expected {n} images, got {}",
                images.len()
            )));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::NotAutomorphism("not a bijection".into()));
            }
            seen[i] = true;
        }
        for a in group.elements() {
            for b in group.elements() {
                let lhs = images[group.add(a, b).0];
                let rhs = group
                    .add(GroupElement(images[a.0]), GroupElement(images[b.0]))
                    .0;
                if lhs != rhs {
                    return Err(GroupError::NotAutomorphism(format!(
                        "image of {}+{} is not additive",
                        group.format(a),
                        group.format(b)
                    )));
                }
            }
        }
        Ok(GroupAutomorphism { images })
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        GroupAutomorphism {
            images: (0..group.order()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.images[g.0])
    }

    pub fn compose(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupAutomorphism {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        GroupAutomorphism { images: inv }
    }

    pub fn pow(&self, k: i64) -> GroupAutomorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupAutomorphism {
            images: (0..self.images.len()).collect(),
        };
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    /// Smallest `m >= 1` with `theta^m = id`.
    pub fn order(&self) -> usize {
        let mut cur = self.clone();
        let mut m = 1;
        while cur.images.iter().enumerate().any(|(i, &j)| i != j) {
            cur = self.compose(&cur);
            m += 1;
        }
        m
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Data for a de-equivariantization by an order-two element `z`.
///
/// `reps` lists one representative of each coset `{g, g+z}`; `project(g)` is the
/// representative of `g`'s coset and `winding(g)` is `0` if `g` is its own
/// representative and `1` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeequivFrame {
    pub z: GroupElement,
    pub reps: Vec<GroupElement>,
    project: Vec<usize>,
    winding: Vec<u8>,
}

impl DeequivFrame {
    /// Frame with the lexicographically least representative of each coset.
    pub fn new(group: &AbelianGroup, z: GroupElement) -> Result<Self, GroupError> {
        let reps: Vec<GroupElement> = group
            .elements()
            .filter(|&g| g.0 < group.add(g, z).0)
            .collect();
        Self::with_reps(group, z, reps)
    }

    pub fn with_reps(
        group: &AbelianGroup,
        z: GroupElement,
        reps: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if z == group.zero() || group.double(z) != group.zero() {
            return Err(GroupError::BadFrame(format!(
                "{} does not have order two",
                group.format(z)
            )));
        }
        let n = group.order();
        let mut project = vec![usize::MAX; n];
        let mut winding = vec![0u8; n];
        for &r in &reps {
            for (g, w) in [(r, 0u8), (group.add(r, z), 1u8)] {
                if project[g.0] != usize::MAX {
                    return Err(GroupError::BadFrame("representatives overlap".into()));
                }
                project[g.0] = r.0;
                winding[g.0] = w;
            }
        }
        if project.contains(&usize::MAX) {
            return Err(GroupError::BadFrame(
                "representatives do not cover the group".into(),
            ));
        }
        Ok(DeequivFrame {
            z,
            reps,
            project,
            winding,
        })
    }

    #[inline]
    pub fn project(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.project[g.0])
    }

    #[inline]
    pub fn winding(&self, g: GroupElement) -> u8 {
        self.winding[g.0]
    }

    pub fn is_rep(&self, g: GroupElement) -> bool {
        self.project[g.0] == g.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_enumerate() {
        let g = AbelianGroup::parse("Z4xZ2").unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.coords(GroupElement(5)), vec![1, 1]);
        assert_eq!(g.name(), "Z4xZ2");
        assert!(AbelianGroup::parse("Q8").is_err());
    }

    #[test]
    fn z4_characters_by_generator_value() {
        let g = AbelianGroup::cyclic(4);
        let vals: Vec<CScalar> = g
            .characters()
            .iter()
            .map(|c| c.eval(GroupElement(1)))
            .collect();
        let expect = [
            CScalar::new(1.0, 0.0),
            CScalar::new(0.0, 1.0),
            CScalar::new(-1.0, 0.0),
            CScalar::new(0.0, -1.0),
        ];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).norm() < 1e-12);
        }
    }

    #[test]
    fn two_torsion_of_z4xz2() {
        let g = AbelianGroup::parse("Z4xZ2").unwrap();
        assert_eq!(g.two_torsion().len(), 4);
    }

    #[test]
    fn frame_defaults_to_least_representatives() {
        let g = AbelianGroup::parse("Z4xZ2").unwrap();
        let f = DeequivFrame::new(&g, g.element(&[0, 1])).unwrap();
        assert_eq!(f.reps, (0..4).map(GroupElement).collect::<Vec<_>>());
        assert_eq!(f.winding(g.element(&[2, 1])), 1);
        assert_eq!(f.project(g.element(&[2, 1])), g.element(&[2, 0]));
    }

    #[test]
    fn automorphism_order_and_validation() {
        let g = AbelianGroup::parse("Z2xZ2").unwrap();
        let theta = GroupAutomorphism::new(&g, vec![0, 2, 3, 1]).unwrap();
        assert_eq!(theta.order(), 3);
        assert!(GroupAutomorphism::new(&g, vec![0, 1, 1, 3]).is_err());
        assert!(GroupAutomorphism::new(&AbelianGroup::cyclic(4), vec![0, 2, 1, 3]).is_err());
    }
}
