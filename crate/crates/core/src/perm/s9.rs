//! Fixed-degree permutations of nine points as byte arrays, for the scans over
//! all of `S9`. Products read left to right, as in [`super::Permutation`].

use std::collections::{BTreeMap, HashSet};

use super::Permutation;

pub const N: usize = 9;
pub type P9 = [u8; N];
pub const ID: P9 = [0, 1, 2, 3, 4, 5, 6, 7, 8];

/// Four bits per point.
pub fn key(p: &P9) -> u64 {
    p.iter().enumerate().fold(0u64, |acc, (i, &x)| acc | ((x as u64) << (4 * i)))
}

pub fn from_key(k: u64) -> P9 {
    let mut p = [0u8; N];
    for (i, x) in p.iter_mut().enumerate() {
        *x = ((k >> (4 * i)) & 15) as u8;
    }
    p
}

pub fn mul(a: &P9, b: &P9) -> P9 {
    let mut c = [0u8; N];
    for i in 0..N {
        c[i] = b[a[i] as usize];
    }
    c
}

pub fn inv(a: &P9) -> P9 {
    let mut c = [0u8; N];
    for i in 0..N {
        c[a[i] as usize] = i as u8;
    }
    c
}

/// `g^-1 a g`: sends `g(x)` to `g(a(x))`.
pub fn conj(a: &P9, g: &P9) -> P9 {
    let mut c = [0u8; N];
    for i in 0..N {
        c[g[i] as usize] = g[a[i] as usize];
    }
    c
}

/// Cycle type as counts of each cycle length, packed four bits per length.
pub fn cycle_type(a: &P9) -> u64 {
    let mut seen = [false; N];
    let mut code = 0u64;
    for i in 0..N {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = a[j] as usize;
            len += 1;
        }
        code += 1 << (4 * (len - 1));
    }
    code
}

pub fn order(a: &P9) -> u64 {
    let ct = cycle_type(a);
    (1..=N as u64).filter(|l| (ct >> (4 * (l - 1))) & 15 != 0).fold(1, num_integer::lcm)
}

/// All of `S9` in lexicographic order of image arrays.
pub fn all() -> Vec<P9> {
    let mut out = Vec::with_capacity(362_880);
    let mut p = ID;
    loop {
        out.push(p);
        // next permutation
        let Some(i) = (0..N - 1).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..N).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

pub fn to_permutation(p: &P9) -> Permutation {
    Permutation::new(p.to_vec()).expect("bijection")
}

pub fn from_permutation(p: &Permutation) -> Option<P9> {
    p.images().try_into().ok()
}

/// A finite subgroup of `S9` with its element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sub {
    pub gens: Vec<P9>,
    /// sorted keys of all elements
    pub elems: Vec<u64>,
}

impl Sub {
    pub fn trivial() -> Self {
        Sub { gens: Vec::new(), elems: vec![key(&ID)] }
    }

    pub fn generated(gens: Vec<P9>) -> Self {
        let elems = closure(&gens);
        Sub { gens, elems }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, p: &P9) -> bool {
        self.elems.binary_search(&key(p)).is_ok()
    }

    /// `g` normalizes the group.
    pub fn normalized_by(&self, g: &P9) -> bool {
        self.gens.iter().all(|a| self.contains(&conj(a, g)))
    }

    /// Element keys of `g^-1 G g`, sorted.
    pub fn conjugate_keys(&self, g: &P9) -> Vec<u64> {
        let mut v: Vec<u64> = self.elems.iter().map(|&k| key(&conj(&from_key(k), g))).collect();
        v.sort_unstable();
        v
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut seen = [false; N];
        let mut out = Vec::new();
        for i in 0..N {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut k = 0;
            while k < orbit.len() {
                for g in &self.gens {
                    let c = g[orbit[k]] as usize;
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

    /// Conjugation invariant: order, orbit lengths, and counts of cycle-type
    /// triples `(a, b, ab)` over all pairs of elements.
    pub fn invariant(&self) -> (usize, Vec<usize>, Vec<(u64, u64, u64, u32)>) {
        let el: Vec<P9> = self.elems.iter().map(|&k| from_key(k)).collect();
        let ct: Vec<u64> = el.iter().map(cycle_type).collect();
        let mut counts: BTreeMap<(u64, u64, u64), u32> = BTreeMap::new();
        for (i, a) in el.iter().enumerate() {
            for (j, b) in el.iter().enumerate() {
                *counts.entry((ct[i], ct[j], cycle_type(&mul(a, b)))).or_default() += 1;
            }
        }
        (self.order(), self.orbit_sizes(), counts.into_iter().map(|((a, b, c), n)| (a, b, c, n)).collect())
    }
}

/// Sorted element keys of the group generated by `gens`.
pub fn closure(gens: &[P9]) -> Vec<u64> {
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(key(&ID));
    let mut frontier = vec![ID];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(key(&y)) {
                frontier.push(y);
            }
        }
    }
    let mut v: Vec<u64> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

/// A generating set of the group with the given elements, chosen greedily in list order.
pub fn generating_set(elements: &[P9]) -> Vec<P9> {
    let mut gens: Vec<P9> = Vec::new();
    let mut cur: HashSet<u64> = [key(&ID)].into_iter().collect();
    for g in elements {
        if cur.contains(&key(g)) {
            continue;
        }
        gens.push(*g);
        cur = closure(&gens).into_iter().collect();
        if cur.len() == elements.len() {
            break;
        }
    }
    gens
}
