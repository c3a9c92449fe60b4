//! Finite p-groups as explicit multiplication tables.
//!
//! Element indices run from 0 to order-1 and 0 is always the identity.
//! Tables are validated on construction: full associativity check up to
//! order 243, deterministic sampling above that.

use crate::error::{Error, Result};

/// Default cap on group order; guards against accidental combinatorial blowup.
pub const DEFAULT_CAP: u32 = 2048;

/// Orders up to this bound get an exhaustive associativity check.
const FULL_ASSOC_BOUND: u32 = 243;

/// A finite p-group given by its full multiplication table.
///
/// Immutable after construction; all queries are pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    prime: u32,
    order: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
    pow_p: Vec<u32>,
    elem_order: Vec<u32>,
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl GroupTable {
    /// Builds a table from an explicit law; `law(a, b)` must return `a * b`.
    pub fn from_law<F: Fn(u32, u32) -> u32>(prime: u32, order: u32, cap: u32, law: F) -> Result<Self> {
        if !is_odd_prime(prime) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        if order > cap {
            return Err(Error::SizeCap {
                order: order as u64,
                cap: cap as u64,
            });
        }
        let n = order as usize;
        let mut table = vec![0u32; n * n];
        for a in 0..order {
            for b in 0..order {
                let c = law(a, b);
                if c >= order {
                    return Err(Error::NotAGroup(format!("law({a},{b}) = {c} out of range")));
                }
                table[a as usize * n + b as usize] = c;
            }
        }
        Self::from_table(prime, table, cap)
    }

    /// Builds and validates a table from raw row-major data.
    pub fn from_table(prime: u32, table: Vec<u32>, cap: u32) -> Result<Self> {
        if !is_odd_prime(prime) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        let n2 = table.len();
        let order = (n2 as f64).sqrt().round() as u32;
        let n = order as usize;
        if n * n != n2 || n == 0 {
            return Err(Error::NotAGroup(format!("table length {n2} is not a nonzero square")));
        }
        if order > cap {
            return Err(Error::SizeCap {
                order: order as u64,
                cap: cap as u64,
            });
        }
        // order must be a power of the prime
        let mut m = order;
        while m % prime == 0 {
            m /= prime;
        }
        if m != 1 {
            return Err(Error::NotAGroup(format!(
                "order {order} is not a power of {prime}"
            )));
        }
        for &e in &table {
            if e >= order {
                return Err(Error::NotAGroup(format!("entry {e} out of range")));
            }
        }
        // identity at index 0
        for a in 0..n {
            if table[a * n] != a as u32 || table[a] != a as u32 {
                return Err(Error::NotAGroup("index 0 is not an identity".into()));
            }
        }
        // rows and columns are permutations, and extract inverses
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = table[a * n + b] as usize;
                let c = table[b * n + a] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(Error::NotAGroup(format!("row/column {a} is not a permutation")));
                }
                seen_row[r] = true;
                seen_col[c] = true;
                if r == 0 {
                    inverse[a] = b as u32;
                }
            }
        }
        for a in 0..n {
            let b = inverse[a] as usize;
            if table[b * n + a] != 0 {
                return Err(Error::NotAGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        // associativity
        let assoc = |x: usize, y: usize, z: usize| {
            table[table[x * n + y] as usize * n + z] == table[x * n + table[y * n + z] as usize]
        };
        if order <= FULL_ASSOC_BOUND {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return Err(Error::NotAGroup(format!(
                                "associativity fails at ({x},{y},{z})"
                            )));
                        }
                    }
                }
            }
        } else {
            // deterministic LCG sweep
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..200_000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let x = (state >> 33) as usize % n;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let y = (state >> 33) as usize % n;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let z = (state >> 33) as usize % n;
                if !assoc(x, y, z) {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({x},{y},{z})"
                    )));
                }
            }
        }
        let mut g = GroupTable {
            prime,
            order,
            table,
            inverse,
            pow_p: Vec::new(),
            elem_order: Vec::new(),
        };
        g.pow_p = (0..order).map(|x| g.pow(x, prime)).collect();
        g.elem_order = (0..order)
            .map(|x| {
                let mut o = 1u32;
                let mut y = x;
                while y != 0 {
                    y = g.mul(y, x);
                    o += 1;
                }
                o
            })
            .collect();
        Ok(g)
    }

    /// The elementary abelian group (Z/pZ)^rank, elements as base-p tuples.
    pub fn elementary_abelian(p: u32, rank: u32, cap: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p as u64));
        }
        let order = p
            .checked_pow(rank)
            .filter(|&o| o <= cap)
            .ok_or(Error::SizeCap {
                order: (p as u64).pow(rank),
                cap: cap as u64,
            })?;
        Self::from_law(p, order, cap, |a, b| {
            let (mut a, mut b, mut out, mut mult) = (a, b, 0, 1);
            for _ in 0..rank {
                out += (a % p + b % p) % p * mult;
                a /= p;
                b /= p;
                mult *= p;
            }
            out
        })
    }

    /// Extraspecial group of order p^n and exponent p, n = 3 or 5.
    ///
    /// For n = 3 this is the Heisenberg law on triples (x, y, z); for n = 5
    /// the central product of two Heisenberg groups on (x1, y1, x2, y2, z).
    pub fn extraspecial(p: u32, n: u32, cap: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p as u64));
        }
        if n != 3 && n != 5 {
            return Err(Error::Unsupported(format!(
                "extraspecial exponent-p groups are built for n in {{3, 5}}, got {n}"
            )));
        }
        let order = p
            .checked_pow(n)
            .filter(|&o| o <= cap)
            .ok_or(Error::SizeCap {
                order: (p as u64).pow(n),
                cap: cap as u64,
            })?;
        let digits = n as usize;
        let dig = move |mut e: u32| {
            let mut d = [0u32; 5];
            for item in d.iter_mut().take(digits) {
                *item = e % p;
                e /= p;
            }
            d
        };
        let undig = move |d: [u32; 5]| {
            let mut e = 0;
            for i in (0..digits).rev() {
                e = e * p + d[i];
            }
            e
        };
        Self::from_law(p, order, cap, move |a, b| {
            let x = dig(a);
            let y = dig(b);
            let mut z = [0u32; 5];
            for i in 0..digits - 1 {
                z[i] = (x[i] + y[i]) % p;
            }
            let twist = if n == 3 {
                x[0] * y[1]
            } else {
                x[0] * y[1] + x[2] * y[3]
            };
            z[digits - 1] = (x[digits - 1] + y[digits - 1] + twist) % p;
            undig(z)
        })
    }

    /// Direct product; element (a, b) gets index a + |A| * b.
    pub fn direct_product(a: &GroupTable, b: &GroupTable, cap: u32) -> Result<Self> {
        if a.prime != b.prime {
            return Err(Error::Unsupported(format!(
                "direct product of groups over distinct primes {} and {}",
                a.prime, b.prime
            )));
        }
        let order = a
            .order
            .checked_mul(b.order)
            .filter(|&o| o <= cap)
            .ok_or(Error::SizeCap {
                order: a.order as u64 * b.order as u64,
                cap: cap as u64,
            })?;
        let an = a.order;
        Self::from_law(a.prime, order, cap, |x, y| {
            let (xa, xb) = (x % an, x / an);
            let (ya, yb) = (y % an, y / an);
            a.mul(xa, ya) + an * b.mul(xb, yb)
        })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// g a g^{-1}
    #[inline]
    pub fn conj(&self, g: u32, a: u32) -> u32 {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// a b a^{-1} b^{-1}
    #[inline]
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, a: u32, k: u32) -> u32 {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    #[inline]
    pub fn pow_p(&self, a: u32) -> u32 {
        self.pow_p[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u32 {
        self.elem_order[a as usize]
    }

    pub fn exponent(&self) -> u32 {
        (0..self.order).map(|x| self.element_order(x)).max().unwrap()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|x| self.element_order(x) == self.order)
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.is_abelian() && self.exponent() <= self.prime
    }

    /// Rank of an elementary abelian group; `None` otherwise.
    pub fn ea_rank(&self) -> Option<u32> {
        if !self.is_elementary_abelian() {
            return None;
        }
        let mut r = 0;
        let mut m = self.order;
        while m > 1 {
            m /= self.prime;
            r += 1;
        }
        Some(r)
    }

    /// True iff |G| = p^3, G nonabelian and of exponent p.
    pub fn is_extraspecial_exponent_p(&self) -> bool {
        self.order == self.prime.pow(3) && !self.is_abelian() && self.exponent() == self.prime
    }

    pub fn center_elements(&self) -> Vec<u32> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    pub fn derived_subgroup_elements(&self) -> Vec<u32> {
        let mut comms: Vec<u32> = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                comms.push(self.comm(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.close_subset(&comms)
    }

    /// Product-closure of a subset; returns the generated subgroup, sorted.
    pub fn close_subset(&self, seed: &[u32]) -> Vec<u32> {
        let n = self.order as usize;
        let mut member = vec![false; n];
        member[0] = true;
        let mut elems = vec![0u32];
        let mut frontier: Vec<u32> = Vec::new();
        for &s in seed {
            if !member[s as usize] {
                member[s as usize] = true;
                elems.push(s);
                frontier.push(s);
            }
        }
        while let Some(x) = frontier.pop() {
            for i in 0..elems.len() {
                let y = elems[i];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !member[z as usize] {
                        member[z as usize] = true;
                        elems.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Checks that `elems` (sorted) is closed under the law and inverses.
    pub fn is_subgroup(&self, elems: &[u32]) -> bool {
        if elems.binary_search(&0).is_err() {
            return false;
        }
        for &a in elems {
            if elems.binary_search(&self.inv(a)).is_err() {
                return false;
            }
            for &b in elems {
                if elems.binary_search(&self.mul(a, b)).is_err() {
                    return false;
                }
            }
        }
        true
    }
}

/// The quotient T/S together with the projection T -> T/S.
///
/// Cosets are indexed by their least element in ascending order, so the
/// identity coset S gets index 0. The projection vector is indexed by parent
/// elements and is `None` outside T.
pub fn quotient_group(
    g: &GroupTable,
    t_elems: &[u32],
    s_elems: &[u32],
) -> Result<(GroupTable, Vec<Option<u32>>)> {
    if !g.is_subgroup(t_elems) || !g.is_subgroup(s_elems) {
        return Err(Error::NotASubgroup);
    }
    for &s in s_elems {
        if t_elems.binary_search(&s).is_err() {
            return Err(Error::BadSection("S is not contained in T".into()));
        }
    }
    for &t in t_elems {
        for &s in s_elems {
            if s_elems.binary_search(&g.conj(t, s)).is_err() {
                return Err(Error::NotNormal);
            }
        }
    }
    let mut proj: Vec<Option<u32>> = vec![None; g.order() as usize];
    let mut coset_min: Vec<u32> = Vec::new();
    for &t in t_elems {
        if proj[t as usize].is_some() {
            continue;
        }
        let min = s_elems.iter().map(|&s| g.mul(t, s)).min().unwrap();
        let idx = coset_min.len() as u32;
        coset_min.push(min);
        for &s in s_elems {
            proj[g.mul(t, s) as usize] = Some(idx);
        }
    }
    // renumber cosets by ascending least element
    let mut order: Vec<usize> = (0..coset_min.len()).collect();
    order.sort_by_key(|&i| coset_min[i]);
    let mut renum = vec![0u32; coset_min.len()];
    for (new, &old) in order.iter().enumerate() {
        renum[old] = new as u32;
    }
    for p in proj.iter_mut().flatten() {
        *p = renum[*p as usize];
    }
    let reps: Vec<u32> = {
        let mut reps = vec![0u32; coset_min.len()];
        for (new, &old) in order.iter().enumerate() {
            reps[new] = coset_min[old];
        }
        reps
    };
    let q = GroupTable::from_law(g.prime(), reps.len() as u32, g.order(), |a, b| {
        proj[g.mul(reps[a as usize], reps[b as usize]) as usize].unwrap()
    })?;
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_abelian_basics() {
        let t = GroupTable::elementary_abelian(3, 0, DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 1);

        let g = GroupTable::elementary_abelian(3, 2, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_abelian());
        for x in 1..9 {
            assert_eq!(g.element_order(x), 3);
        }
        assert_eq!(g.ea_rank(), Some(2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            GroupTable::elementary_abelian(2, 2, DEFAULT_CAP),
            Err(Error::InvalidPrime(2))
        ));
        assert!(matches!(
            GroupTable::elementary_abelian(9, 2, DEFAULT_CAP),
            Err(Error::InvalidPrime(9))
        ));
        assert!(matches!(
            GroupTable::extraspecial(3, 4, DEFAULT_CAP),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            GroupTable::elementary_abelian(3, 8, DEFAULT_CAP),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn extraspecial_27() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 3);
        assert!(g.is_extraspecial_exponent_p());
        let z = g.center_elements();
        assert_eq!(z.len(), 3);
        assert_eq!(g.derived_subgroup_elements(), z);
    }

    #[test]
    fn extraspecial_243_quotient_by_center() {
        let g = GroupTable::extraspecial(3, 5, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 243);
        assert_eq!(g.exponent(), 3);
        let z = g.center_elements();
        assert_eq!(z.len(), 3);
        assert_eq!(g.derived_subgroup_elements(), z);
        let all: Vec<u32> = (0..g.order()).collect();
        let (q, proj) = quotient_group(&g, &all, &z).unwrap();
        assert_eq!(q.order(), 81);
        assert_eq!(q.ea_rank(), Some(4));
        // projection commutes with multiplication
        for a in (0..g.order()).step_by(7) {
            for b in (0..g.order()).step_by(11) {
                let lhs = proj[g.mul(a, b) as usize].unwrap();
                let rhs = q.mul(proj[a as usize].unwrap(), proj[b as usize].unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn extraspecial_125_maximals() {
        let g = GroupTable::extraspecial(5, 3, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 125);
        assert!(g.is_extraspecial_exponent_p());
        // index-5 subgroups are the preimages of lines in G/[G,G]; count them
        // by brute force over pairs of generators.
        let mut maximals: Vec<Vec<u32>> = Vec::new();
        for a in 1..g.order() {
            for b in 1..g.order() {
                let h = g.close_subset(&[a, b]);
                if h.len() == 25 && !maximals.contains(&h) {
                    maximals.push(h);
                }
            }
        }
        assert_eq!(maximals.len(), 6);
        for h in &maximals {
            let sub = subgroup_as_table(&g, h);
            assert_eq!(sub.ea_rank(), Some(2));
        }
    }

    fn subgroup_as_table(g: &GroupTable, elems: &[u32]) -> GroupTable {
        let idx = |e: u32| elems.binary_search(&e).unwrap() as u32;
        GroupTable::from_law(g.prime(), elems.len() as u32, g.order(), |a, b| {
            idx(g.mul(elems[a as usize], elems[b as usize]))
        })
        .unwrap()
    }

    #[test]
    fn quotient_orders_multiply() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let all: Vec<u32> = (0..27).collect();
        let z = g.center_elements();
        let (q, proj) = quotient_group(&g, &all, &z).unwrap();
        assert_eq!(q.order() * 3, 27);
        assert_eq!(q.ea_rank(), Some(2));
        assert!(proj.iter().all(|p| p.is_some()));

        let (qq, proj2) = quotient_group(&g, &all, &[0]).unwrap();
        assert_eq!(qq.order(), 27);
        assert!((0..27).all(|i| proj2[i as usize] == Some(i)));
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        // a noncentral subgroup of order 3 is not normal in G
        let z = g.center_elements();
        let r = (1..27)
            .map(|x| g.close_subset(&[x]))
            .find(|h| h.len() == 3 && *h != z)
            .unwrap();
        let all: Vec<u32> = (0..27).collect();
        assert!(matches!(quotient_group(&g, &all, &r), Err(Error::NotNormal)));
    }

    #[test]
    fn direct_product_orders() {
        let a = GroupTable::elementary_abelian(3, 1, DEFAULT_CAP).unwrap();
        let b = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let g = GroupTable::direct_product(&a, &b, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 81);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 3);
        assert_eq!(g.center_elements().len(), 9);
    }

    #[test]
    fn from_table_rejects_garbage() {
        // 2x2 table that is not a group (no identity row)
        let t = vec![1, 0, 0, 1];
        assert!(GroupTable::from_table(3, t, DEFAULT_CAP).is_err());
        // wrong length
        assert!(GroupTable::from_table(3, vec![0, 1, 2], DEFAULT_CAP).is_err());
        // order 2 is not a power of 3
        assert!(GroupTable::from_table(3, vec![0, 1, 1, 0], DEFAULT_CAP).is_err());
    }
}
