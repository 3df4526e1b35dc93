//! Permutations, stabilizer chains, the signed-permutation model of `W(D9)`
//! and subgroup conjugacy in `S_n`.

pub mod census;
pub mod s9;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..n`; products are read left to right: `(a * b)(x) = b(a(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    /// From disjoint or overlapping cycles, applied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Self> {
        let mut p = Self::identity(n);
        for c in cycles {
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (k, &x) in c.iter().enumerate() {
                if x as usize >= n {
                    return Err(Error::InvalidPermutation(format!("point {x} out of range")));
                }
                images[x as usize] = c[(k + 1) % c.len()];
            }
            p = p.mul(&Permutation::new(images)?);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.images[x as usize]
    }

    pub fn mul(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().mul(self).mul(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().into_iter().fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    pub fn moved_point(&self) -> Option<u8> {
        self.images.iter().enumerate().find(|(i, &x)| *i != x as usize).map(|(i, _)| i as u8)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on points `1..=n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for i in 0..n {
            if seen[i] || self.images[i] as usize == i {
                continue;
            }
            write!(f, "(")?;
            let mut j = i;
            let mut first = true;
            while !seen[j] {
                seen[j] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", j + 1)?;
                first = false;
                j = self.images[j] as usize;
            }
            write!(f, ")")?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// One level of a stabilizer chain: a base point, the strong generators fixing
/// the earlier base points, and a transversal `u_b` with `point^u_b = b`.
#[derive(Debug, Clone)]
struct Level {
    point: u8,
    gens: Vec<Permutation>,
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<u8>,
}

impl Level {
    fn new(n: usize, point: u8) -> Self {
        let mut l = Level { point, gens: Vec::new(), transversal: vec![None; n], orbit: Vec::new() };
        l.recompute(n);
        l
    }

    fn recompute(&mut self, n: usize) {
        self.transversal = vec![None; n];
        self.transversal[self.point as usize] = Some(Permutation::identity(n));
        self.orbit = vec![self.point];
        let mut k = 0;
        while k < self.orbit.len() {
            let b = self.orbit[k];
            for s in &self.gens {
                let c = s.apply(b);
                if self.transversal[c as usize].is_none() {
                    let u = self.transversal[b as usize].as_ref().unwrap().mul(s);
                    self.transversal[c as usize] = Some(u);
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// A permutation group with a stabilizer chain built by Schreier-Sims.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

fn sift(levels: &[Level], start: usize, g: &Permutation) -> (Permutation, usize) {
    let mut g = g.clone();
    for (l, level) in levels.iter().enumerate().skip(start) {
        let b = g.apply(level.point);
        match &level.transversal[b as usize] {
            None => return (g, l),
            Some(u) => g = g.mul(&u.inverse()),
        }
    }
    (g, levels.len())
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Dimension { expected: degree, got: g.degree() });
            }
        }
        let mut levels: Vec<Level> = Vec::new();
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if levels.iter().all(|l| g.apply(l.point) == l.point) {
                levels.push(Level::new(degree, g.moved_point().unwrap()));
            }
        }
        for l in levels.iter_mut() {
            l.gens = Vec::new();
        }
        // level i holds the generators fixing the first i base points
        for g in generators.iter().filter(|g| !g.is_identity()) {
            for i in 0..levels.len() {
                if levels[..i].iter().all(|l| g.apply(l.point) == l.point) {
                    levels[i].gens.push(g.clone());
                }
            }
        }
        for l in levels.iter_mut() {
            l.recompute(degree);
        }
        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut restart = None;
            'outer: for &b in &levels[iu].orbit.clone() {
                for s in &levels[iu].gens.clone() {
                    let ub = levels[iu].transversal[b as usize].clone().unwrap();
                    let c = s.apply(b);
                    let uc = levels[iu].transversal[c as usize].clone().unwrap();
                    let sg = ub.mul(s).mul(&uc.inverse());
                    if sg.is_identity() {
                        continue;
                    }
                    let (h, j) = sift(&levels, iu + 1, &sg);
                    if !h.is_identity() {
                        if j == levels.len() {
                            levels.push(Level::new(degree, h.moved_point().unwrap()));
                        }
                        for l in iu + 1..=j {
                            levels[l].gens.push(h.clone());
                            levels[l].recompute(degree);
                        }
                        restart = Some(j);
                        break 'outer;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        Ok(PermGroup { degree, generators, levels })
    }

    /// `S_n` from the transposition `(1 2)` and the cycle `(1 2 ... n)`.
    pub fn symmetric(n: usize) -> Self {
        let t = Permutation::from_cycles(n, &[&[0, 1]]).unwrap();
        let c: Vec<u8> = (0..n as u8).collect();
        let c = Permutation::from_cycles(n, &[&c]).unwrap();
        PermGroup::new(n, vec![t, c]).unwrap()
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup::new(n, Vec::new()).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u8> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Product of the fundamental orbit lengths.
    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (h, j) = sift(&self.levels, 0, g);
            j == self.levels.len() && h.is_identity()
        }
    }

    /// Every element, as products of transversal elements (small groups only).
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for &b in &level.orbit {
                    next.push(g.mul(level.transversal[b as usize].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out
    }

    /// Sorted orbit lengths on `0..degree`.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let n = self.degree;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut k = 0;
            while k < orbit.len() {
                for g in &self.generators {
                    let c = g.apply(orbit[k] as u8) as usize;
                    if !seen[c] {
                        seen[c] = true;
                        orbit.push(c);
                    }
                }
                k += 1;
            }
            out.push(orbit.len());
        }
        out.sort_unstable();
        out
    }

    /// Sorted multiset of element cycle types.
    pub fn cycle_type_census(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.elements().iter().map(|g| g.cycle_type()).collect();
        v.sort();
        v
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// `g^-1 G g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PermGroup {
        PermGroup::new(self.degree, self.generators.iter().map(|a| a.conjugate_by(g)).collect()).unwrap()
    }
}

/// An element `g` of `ambient` with `g^-1 A g = B`, if one exists. Invariants
/// (order, orbit lengths, element cycle types) are compared first, then the
/// elements of the ambient group are scanned.
pub fn are_conjugate_subgroups(a: &PermGroup, b: &PermGroup, ambient: &PermGroup) -> Option<Permutation> {
    if a.order() != b.order() || a.orbit_sizes() != b.orbit_sizes() || a.cycle_type_census() != b.cycle_type_census() {
        return None;
    }
    ambient.elements().into_iter().find(|g| a.generators().iter().all(|x| b.contains(&x.conjugate_by(g))))
}

/// `W(D_n)` acting on the `2n` vectors `+-e_i`: point `2i` is `e_i`, `2i + 1` is `-e_i`.
#[derive(Debug, Clone)]
pub struct SignedPermGroup {
    n: usize,
    group: PermGroup,
}

impl SignedPermGroup {
    /// Generated by the simple reflections: swaps `e_i <-> e_{i+1}` and
    /// `e_{n-1} <-> -e_n`.
    pub fn weyl_d(n: usize) -> Self {
        let deg = 2 * n;
        let mut gens = Vec::new();
        for i in 0..n - 1 {
            let (a, b) = (2 * i as u8, 2 * (i + 1) as u8);
            gens.push(Permutation::from_cycles(deg, &[&[a, b], &[a + 1, b + 1]]).unwrap());
        }
        let (a, b) = (2 * (n - 2) as u8, 2 * (n - 1) as u8);
        gens.push(Permutation::from_cycles(deg, &[&[a, b + 1], &[a + 1, b]]).unwrap());
        SignedPermGroup { n, group: PermGroup::new(deg, gens).unwrap() }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// The underlying permutation of the indices, forgetting signs.
    pub fn forget_signs(&self, g: &Permutation) -> Permutation {
        Permutation::new((0..self.n).map(|i| g.apply(2 * i as u8) / 2).collect()).unwrap()
    }

    /// Number of sign changes of a signed permutation.
    pub fn sign_changes(&self, g: &Permutation) -> usize {
        (0..self.n).filter(|&i| g.apply(2 * i as u8) % 2 == 1).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders() {
        assert_eq!(PermGroup::symmetric(9).order(), 362880);
        assert_eq!(PermGroup::symmetric(5).elements().len(), 120);
        assert_eq!(PermGroup::trivial(9).order(), 1);
    }

    #[test]
    fn weyl_d9() {
        let w = SignedPermGroup::weyl_d(9);
        assert_eq!(w.group().order(), 256 * 362880);
        assert!(w.group().generators().iter().all(|g| w.sign_changes(g) % 2 == 0));
    }

    #[test]
    fn cycles_and_display() {
        let p = Permutation::from_cycles(9, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.cycle_type(), vec![1, 1, 1, 1, 2, 3]);
        assert_eq!(p.to_string(), "(1,2,3)(4,5)");
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn subgroup_conjugacy() {
        let s9 = PermGroup::symmetric(9);
        let g = |c: &[&[u8]]| PermGroup::new(9, vec![Permutation::from_cycles(9, c).unwrap()]).unwrap();
        let a = g(&[&[0, 1]]);
        let b = g(&[&[2, 3]]);
        let c = g(&[&[0, 1], &[2, 3]]);
        assert!(are_conjugate_subgroups(&a, &a, &s9).unwrap().is_identity());
        let x = are_conjugate_subgroups(&a, &b, &s9).unwrap();
        assert_eq!(a.conjugate_by(&x).elements().len(), 2);
        assert!(b.contains(&a.generators()[0].conjugate_by(&x)));
        assert!(are_conjugate_subgroups(&c, &a, &s9).is_none());
    }
}
