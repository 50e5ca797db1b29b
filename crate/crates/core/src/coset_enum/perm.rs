//! Permutations acting on the right, and the small target groups used by the
//! quotient search.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A permutation of `{0, .., n-1}` acting on the right: the product `g h`
/// sends `p` to `(p^g)^h`. Displays and serializes with points numbered
/// from 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    /// Builds from disjoint cycles written with points numbered from 1.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                if p == 0 || q == 0 || p as usize > n || q as usize > n || touched[p as usize - 1] {
                    return None;
                }
                touched[p as usize - 1] = true;
                images[p as usize - 1] = q - 1;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation(self.0.iter().map(|&p| other.0[p as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.0[p] as usize;
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    /// All powers, identity first.
    pub fn cyclic_subgroup(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree())];
        let mut cur = self.clone();
        while !cur.is_identity() {
            out.push(cur.clone());
            cur = cur.then(self);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.0[p] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<u32> = self.0.iter().map(|i| i + 1).collect();
        one_based.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let one_based = Vec::<u32>::deserialize(d)?;
        let images = one_based
            .into_iter()
            .map(|i| i.checked_sub(1))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| serde::de::Error::custom("points are numbered from 1"))?;
        Permutation::from_images(images).ok_or_else(|| serde::de::Error::custom("not a permutation"))
    }
}

pub(crate) const MAX_DEGREE: usize = 8;

/// Fixed-size permutation for the inner search loop. Points `>= degree` are fixed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct SmallPerm(pub [u8; MAX_DEGREE]);

impl SmallPerm {
    pub const IDENTITY: SmallPerm = SmallPerm([0, 1, 2, 3, 4, 5, 6, 7]);

    #[inline]
    pub fn then(self, other: SmallPerm) -> SmallPerm {
        let mut out = [0u8; MAX_DEGREE];
        for (o, &p) in out.iter_mut().zip(self.0.iter()) {
            *o = other.0[p as usize];
        }
        SmallPerm(out)
    }

    #[inline]
    pub fn inverse(self) -> SmallPerm {
        let mut out = [0u8; MAX_DEGREE];
        for (i, &p) in self.0.iter().enumerate() {
            out[p as usize] = i as u8;
        }
        SmallPerm(out)
    }

    pub fn pow(self, e: i64) -> SmallPerm {
        // every permutation of degree <= 8 has order dividing 840
        let e = e.rem_euclid(840) as u32;
        let mut base = self;
        let mut acc = SmallPerm::IDENTITY;
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(base);
            }
            base = base.then(base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(self) -> bool {
        self == SmallPerm::IDENTITY
    }

    pub fn is_even(self) -> bool {
        let mut seen = [false; MAX_DEGREE];
        let mut transpositions = 0;
        for start in 0..MAX_DEGREE {
            let mut p = start;
            let mut len = 0;
            while !seen[p] {
                seen[p] = true;
                p = self.0[p] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    pub fn to_permutation(self, degree: usize) -> Permutation {
        Permutation(self.0[..degree].iter().map(|&p| p as u32).collect())
    }
}

/// A finite target for the homomorphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetGroup {
    Symmetric(u8),
    Alternating(u8),
}

impl TargetGroup {
    pub fn degree(&self) -> usize {
        match *self {
            TargetGroup::Symmetric(d) | TargetGroup::Alternating(d) => d as usize,
        }
    }

    pub fn order(&self) -> u64 {
        let fact: u64 = (1..=self.degree() as u64).product();
        match self {
            TargetGroup::Symmetric(_) => fact,
            TargetGroup::Alternating(_) => (fact / 2).max(1),
        }
    }

    pub fn is_valid(&self) -> bool {
        (1..=MAX_DEGREE).contains(&self.degree())
    }

    pub(crate) fn elements(&self) -> Vec<SmallPerm> {
        let d = self.degree();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut pts: Vec<u8> = (0..d as u8).collect();
        permutations(&mut pts, 0, &mut |arr| {
            let mut p = SmallPerm::IDENTITY;
            p.0[..d].copy_from_slice(arr);
            out.push(p);
        });
        if matches!(self, TargetGroup::Alternating(_)) {
            out.retain(|p| p.is_even());
        }
        out.sort();
        out
    }

    /// One element from each conjugacy class, found by brute-force orbits.
    pub(crate) fn class_representatives(&self, elements: &[SmallPerm]) -> Vec<SmallPerm> {
        let mut seen = std::collections::HashSet::new();
        let mut reps = Vec::new();
        for &g in elements {
            if seen.contains(&g) {
                continue;
            }
            reps.push(g);
            for &h in elements {
                seen.insert(h.inverse().then(g).then(h));
            }
        }
        reps
    }
}

fn permutations(pts: &mut Vec<u8>, k: usize, f: &mut dyn FnMut(&[u8])) {
    if k == pts.len() {
        f(pts);
        return;
    }
    for i in k..pts.len() {
        pts.swap(k, i);
        permutations(pts, k + 1, f);
        pts.swap(k, i);
    }
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetGroup::Symmetric(d) => write!(f, "S{d}"),
            TargetGroup::Alternating(d) => write!(f, "A{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_products() {
        let a = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[2, 3]]).unwrap();
        // right action: 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
        assert_eq!(a.pow(3), a);
        assert_eq!(a.then(&b).order(), 3);
        assert!(!a.commutes_with(&b));
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(Permutation::from_cycles(3, &[&[1, 4]]).is_none());
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let p = Permutation::from_cycles(4, &[&[1, 3, 4]]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[3,2,4,1]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), p);
    }

    #[test]
    fn group_orders_and_classes() {
        for (g, order, classes) in [
            (TargetGroup::Symmetric(3), 6, 3),
            (TargetGroup::Symmetric(4), 24, 5),
            (TargetGroup::Alternating(5), 60, 5),
            (TargetGroup::Symmetric(5), 120, 7),
        ] {
            let els = g.elements();
            assert_eq!(els.len() as u64, order);
            assert_eq!(g.order(), order);
            assert_eq!(g.class_representatives(&els).len(), classes, "{g}");
        }
    }

    #[test]
    fn small_perm_powers() {
        let g = TargetGroup::Symmetric(7).elements();
        for &p in g.iter().step_by(97) {
            assert!(p.pow(840).is_identity());
            assert_eq!(p.pow(-1), p.inverse());
            assert_eq!(p.pow(5), p.then(p).then(p).then(p).then(p));
        }
    }
}
