//! Complete subgroup lattices of table groups: inclusion, conjugation orbits,
//! normalizers, Möbius values, and the rank-2 section families.

use std::collections::HashMap;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::group::{quotient_group, GroupTable};

/// One subgroup, stored by its sorted element list.
#[derive(Clone, Debug)]
pub struct SubData {
    pub elems: Vec<u32>,
    pub elem_set: BitSet,
    pub order: u32,
}

/// A section family kind; `E2` is the rank-2 family driving the coordinate
/// map, `X3` the larger family of subquotients that are elementary abelian of
/// rank at most 3 or extraspecial of order p^3 and exponent p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionKind {
    E2,
    X3,
}

#[derive(Clone, Debug)]
pub struct SectionRec {
    pub t: u32,
    pub s: u32,
    /// Subgroups strictly between S and T (p+1 of them for rank-2 sections).
    pub middles: Vec<u32>,
}

/// An enumerated family of sections with conjugacy data for the full group.
#[derive(Clone, Debug)]
pub struct SectionFamily {
    pub kind: SectionKind,
    pub sections: Vec<SectionRec>,
    pub class_of: Vec<u32>,
    /// Section index of each class representative.
    pub class_reps: Vec<u32>,
}

/// Conjugacy classes of subgroups contained in an ambient subgroup H,
/// under conjugation by H only.
#[derive(Clone, Debug)]
pub struct AmbientClasses {
    pub h: u32,
    /// Per subgroup id: its H-class representative, or `u32::MAX` outside H.
    pub rep: Vec<u32>,
    /// Per subgroup id: an element x of H with x rep x^{-1} = this subgroup.
    pub transporter: Vec<u32>,
    /// Ascending list of representatives.
    pub reps: Vec<u32>,
}

/// The full subgroup lattice of a finite p-group, immutable after build.
pub struct SubgroupLattice {
    group: GroupTable,
    subs: Vec<SubData>,
    id_by_elems: HashMap<Vec<u32>, u32>,
    leq: BitMatrix,
    /// Flattened [g * nsubs + h] -> conjugate subgroup id; empty for abelian
    /// groups where conjugation is trivial.
    conj_table: Vec<u32>,
    abelian: bool,
    class_of: Vec<u32>,
    class_rep: Vec<u32>,
    transporter: Vec<u32>,
    classes: Vec<Vec<u32>>,
    normalizer: Vec<u32>,
    centralizer: Vec<u32>,
    derived_sub: Vec<u32>,
    agemo_sub: Vec<u32>,
    ea_rank: Vec<Option<u32>>,
    above: Vec<Vec<u32>>,
    below: Vec<Vec<u32>>,
    moebius: HashMap<(u32, u32), i64>,
    e2: SectionFamily,
    trivial_id: u32,
    full_id: u32,
}

impl SubgroupLattice {
    /// Enumerates every subgroup by closing cyclic subgroups and iteratively
    /// joining with cyclic generators until a fixed point.
    pub fn enumerate(group: GroupTable) -> Result<Self> {
        let n = group.order() as usize;
        // distinct cyclic subgroups with one generator each
        let mut cyclics: Vec<(Vec<u32>, u32)> = Vec::new();
        let mut seen_cyclic: HashMap<Vec<u32>, ()> = HashMap::new();
        for x in 1..group.order() {
            let c = group.close_subset(&[x]);
            if seen_cyclic.insert(c.clone(), ()).is_none() {
                cyclics.push((c, x));
            }
        }

        let mut found: HashMap<Vec<u32>, Vec<u32>> = HashMap::new(); // elems -> gens
        let trivial = vec![0u32];
        found.insert(trivial.clone(), vec![]);
        let mut work: Vec<Vec<u32>> = vec![trivial];
        while let Some(h_elems) = work.pop() {
            let h_gens = found[&h_elems].clone();
            let mut h_set = BitSet::new(n);
            for &e in &h_elems {
                h_set.insert(e as usize);
            }
            for (c_elems, c_gen) in &cyclics {
                if c_elems.iter().all(|&e| h_set.contains(e as usize)) {
                    continue;
                }
                let k = coset_closure(&group, &h_elems, &h_set, &h_gens, *c_gen);
                if !found.contains_key(&k) {
                    let mut gens = h_gens.clone();
                    gens.push(*c_gen);
                    found.insert(k.clone(), gens);
                    work.push(k);
                }
            }
        }

        let mut subs: Vec<SubData> = found
            .into_keys()
            .map(|elems| {
                let mut set = BitSet::new(n);
                for &e in &elems {
                    set.insert(e as usize);
                }
                SubData {
                    order: elems.len() as u32,
                    elem_set: set,
                    elems,
                }
            })
            .collect();
        subs.sort_by(|a, b| (a.order, &a.elems).cmp(&(b.order, &b.elems)));
        let nsubs = subs.len();
        let id_by_elems: HashMap<Vec<u32>, u32> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elems.clone(), i as u32))
            .collect();
        let trivial_id = 0u32;
        let full_id = (nsubs - 1) as u32;

        let mut leq = BitMatrix::new(nsubs);
        for a in 0..nsubs {
            for b in 0..nsubs {
                if subs[a].order <= subs[b].order && subs[a].elem_set.is_subset(&subs[b].elem_set) {
                    leq.set(a, b);
                }
            }
        }

        let abelian = group.is_abelian();
        let mut conj_table = Vec::new();
        if !abelian {
            conj_table = vec![0u32; n * nsubs];
            let mut buf: Vec<u32> = Vec::new();
            for g in 0..group.order() {
                for (h, sub) in subs.iter().enumerate() {
                    buf.clear();
                    buf.extend(sub.elems.iter().map(|&e| group.conj(g, e)));
                    buf.sort_unstable();
                    let id = id_by_elems[&buf];
                    conj_table[g as usize * nsubs + h] = id;
                }
            }
        }
        let conj = |g: u32, h: u32| -> u32 {
            if abelian {
                h
            } else {
                conj_table[g as usize * nsubs + h as usize]
            }
        };

        let mut class_of = vec![u32::MAX; nsubs];
        let mut class_rep = vec![0u32; nsubs];
        let mut transporter = vec![0u32; nsubs];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for s0 in 0..nsubs as u32 {
            if class_of[s0 as usize] != u32::MAX {
                continue;
            }
            let cid = classes.len() as u32;
            let mut members = Vec::new();
            for g in 0..group.order() {
                let s = conj(g, s0);
                if class_of[s as usize] == u32::MAX {
                    class_of[s as usize] = cid;
                    class_rep[s as usize] = s0;
                    transporter[s as usize] = g;
                    members.push(s);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }

        let mut normalizer = vec![0u32; nsubs];
        let mut centralizer = vec![0u32; nsubs];
        for h in 0..nsubs {
            let norm: Vec<u32> = (0..group.order())
                .filter(|&g| conj(g, h as u32) == h as u32)
                .collect();
            normalizer[h] = *id_by_elems
                .get(&norm)
                .ok_or_else(|| Error::Internal("normalizer set not in lattice".into()))?;
            let cent: Vec<u32> = (0..group.order())
                .filter(|&g| subs[h].elems.iter().all(|&x| group.mul(g, x) == group.mul(x, g)))
                .collect();
            centralizer[h] = *id_by_elems
                .get(&cent)
                .ok_or_else(|| Error::Internal("centralizer set not in lattice".into()))?;
        }

        let mut derived_sub = vec![0u32; nsubs];
        let mut agemo_sub = vec![0u32; nsubs];
        let mut ea_rank = vec![None; nsubs];
        let p = group.prime();
        for h in 0..nsubs {
            let elems = &subs[h].elems;
            let mut comms: Vec<u32> = Vec::new();
            if !abelian {
                for &a in elems {
                    for &b in elems {
                        comms.push(group.comm(a, b));
                    }
                }
                comms.sort_unstable();
                comms.dedup();
            }
            let d = group.close_subset(&comms);
            derived_sub[h] = id_by_elems[&d];
            let mut pows: Vec<u32> = elems.iter().map(|&x| group.pow_p(x)).collect();
            pows.sort_unstable();
            pows.dedup();
            let a = group.close_subset(&pows);
            agemo_sub[h] = id_by_elems[&a];
            if derived_sub[h] == trivial_id && agemo_sub[h] == trivial_id {
                let mut r = 0;
                let mut m = subs[h].order;
                while m > 1 {
                    m /= p;
                    r += 1;
                }
                ea_rank[h] = Some(r);
            }
        }

        let mut above: Vec<Vec<u32>> = vec![Vec::new(); nsubs];
        let mut below: Vec<Vec<u32>> = vec![Vec::new(); nsubs];
        for a in 0..nsubs {
            for b in 0..nsubs {
                if leq.get(a, b) {
                    above[a].push(b as u32);
                    below[b].push(a as u32);
                }
            }
        }

        // Möbius values for all comparable pairs, by increasing interval top.
        let mut moebius: HashMap<(u32, u32), i64> = HashMap::new();
        for a in 0..nsubs as u32 {
            for &b in &above[a as usize] {
                if b == a {
                    moebius.insert((a, a), 1);
                    continue;
                }
                let mut sum = 0i64;
                for &c in &above[a as usize] {
                    if c != b && leq.get(c as usize, b as usize) {
                        sum += moebius[&(a, c)];
                    }
                }
                moebius.insert((a, b), -sum);
            }
        }

        let mut lat = SubgroupLattice {
            group,
            subs,
            id_by_elems,
            leq,
            conj_table,
            abelian,
            class_of,
            class_rep,
            transporter,
            classes,
            normalizer,
            centralizer,
            derived_sub,
            agemo_sub,
            ea_rank,
            above,
            below,
            moebius,
            e2: SectionFamily {
                kind: SectionKind::E2,
                sections: Vec::new(),
                class_of: Vec::new(),
                class_reps: Vec::new(),
            },
            trivial_id,
            full_id,
        };
        lat.e2 = lat.build_family(SectionKind::E2)?;
        Ok(lat)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn num_subs(&self) -> usize {
        self.subs.len()
    }

    pub fn sub(&self, id: u32) -> &SubData {
        &self.subs[id as usize]
    }

    pub fn order_of(&self, id: u32) -> u32 {
        self.subs[id as usize].order
    }

    pub fn elems(&self, id: u32) -> &[u32] {
        &self.subs[id as usize].elems
    }

    pub fn trivial_id(&self) -> u32 {
        self.trivial_id
    }

    pub fn full_id(&self) -> u32 {
        self.full_id
    }

    pub fn id_of_elems(&self, elems: &[u32]) -> Option<u32> {
        self.id_by_elems.get(elems).copied()
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.leq.get(a as usize, b as usize)
    }

    pub fn above(&self, a: u32) -> &[u32] {
        &self.above[a as usize]
    }

    pub fn below(&self, a: u32) -> &[u32] {
        &self.below[a as usize]
    }

    pub fn normalizer(&self, a: u32) -> u32 {
        self.normalizer[a as usize]
    }

    pub fn centralizer(&self, a: u32) -> u32 {
        self.centralizer[a as usize]
    }

    /// x H x^{-1} as a subgroup id.
    pub fn conj_sub(&self, x: u32, h: u32) -> u32 {
        if self.abelian {
            h
        } else {
            self.conj_table[x as usize * self.subs.len() + h as usize]
        }
    }

    pub fn class_of(&self, h: u32) -> u32 {
        self.class_of[h as usize]
    }

    pub fn class_rep(&self, h: u32) -> u32 {
        self.class_rep[h as usize]
    }

    /// Element x with x rep(H) x^{-1} = H.
    pub fn transporter(&self, h: u32) -> u32 {
        self.transporter[h as usize]
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn moebius(&self, a: u32, b: u32) -> Result<i64> {
        self.moebius
            .get(&(a, b))
            .copied()
            .ok_or_else(|| Error::BadSection(format!("subgroup {a} is not below {b}")))
    }

    /// True iff some conjugate of V lies inside X0.
    pub fn subconjugate(&self, v: u32, x0: u32) -> bool {
        self.classes[self.class_of[v as usize] as usize]
            .iter()
            .any(|&w| self.leq(w, x0))
    }

    pub fn is_normal_in(&self, s: u32, t: u32) -> bool {
        self.leq(s, t) && self.leq(t, self.normalizer[s as usize])
    }

    pub fn intersection(&self, a: u32, b: u32) -> u32 {
        let mut set = self.subs[a as usize].elem_set.clone();
        set.intersect_with(&self.subs[b as usize].elem_set);
        let elems: Vec<u32> = set.iter().map(|e| e as u32).collect();
        self.id_by_elems[&elems]
    }

    /// The product subgroup AB; caller must ensure one factor normalizes the
    /// other so that the product is closed.
    pub fn product(&self, a: u32, b: u32) -> Result<u32> {
        let mut set = BitSet::new(self.group.order() as usize);
        for &x in &self.subs[a as usize].elems {
            for &y in &self.subs[b as usize].elems {
                set.insert(self.group.mul(x, y) as usize);
            }
        }
        let elems: Vec<u32> = set.iter().map(|e| e as u32).collect();
        self.id_by_elems
            .get(&elems)
            .copied()
            .ok_or(Error::NotASubgroup)
    }

    pub fn derived_of(&self, h: u32) -> u32 {
        self.derived_sub[h as usize]
    }

    pub fn agemo_of(&self, h: u32) -> u32 {
        self.agemo_sub[h as usize]
    }

    /// Elementary abelian rank of the subgroup, `None` if not elementary abelian.
    pub fn ea_rank_of(&self, h: u32) -> Option<u32> {
        self.ea_rank[h as usize]
    }

    pub fn p_rank(&self) -> u32 {
        self.ea_rank.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn quotient_order(&self, t: u32, s: u32) -> u32 {
        self.order_of(t) / self.order_of(s)
    }

    /// T/S elementary abelian (of any rank), assuming S normal in T.
    pub fn quotient_is_elab(&self, t: u32, s: u32) -> bool {
        self.leq(self.derived_sub[t as usize], s) && self.leq(self.agemo_sub[t as usize], s)
    }

    pub fn quotient_elab_rank(&self, t: u32, s: u32) -> Option<u32> {
        if !self.quotient_is_elab(t, s) {
            return None;
        }
        let mut r = 0;
        let mut m = self.quotient_order(t, s);
        while m > 1 {
            m /= self.group.prime();
            r += 1;
        }
        Some(r)
    }

    /// T/S extraspecial of order p^3 and exponent p.
    pub fn quotient_is_xp3(&self, t: u32, s: u32) -> bool {
        self.quotient_order(t, s) == self.group.prime().pow(3)
            && self.leq(self.agemo_sub[t as usize], s)
            && !self.leq(self.derived_sub[t as usize], s)
    }

    /// N_H(Q) = H n N(Q).
    pub fn normalizer_in(&self, h: u32, q: u32) -> u32 {
        self.intersection(h, self.normalizer[q as usize])
    }

    /// The quotient T/S as a fresh table group plus the projection map.
    pub fn quotient_table(&self, t: u32, s: u32) -> Result<(GroupTable, Vec<Option<u32>>)> {
        quotient_group(&self.group, self.elems(t), self.elems(s))
    }

    /// The rank-2 section family of the full group.
    pub fn e2(&self) -> &SectionFamily {
        &self.e2
    }

    /// Enumerates the X3 family on demand.
    pub fn sections_x3(&self) -> Result<SectionFamily> {
        self.build_family(SectionKind::X3)
    }

    fn build_family(&self, kind: SectionKind) -> Result<SectionFamily> {
        let p = self.group.prime();
        let mut sections: Vec<SectionRec> = Vec::new();
        for t in 0..self.subs.len() as u32 {
            for &s in &self.below[t as usize] {
                if !self.is_normal_in(s, t) {
                    continue;
                }
                let idx = self.quotient_order(t, s);
                let keep = match kind {
                    SectionKind::E2 => idx == p * p && self.quotient_is_elab(t, s),
                    SectionKind::X3 => {
                        (idx <= p.pow(3) && self.quotient_is_elab(t, s))
                            || self.quotient_is_xp3(t, s)
                    }
                };
                if !keep {
                    continue;
                }
                let middles: Vec<u32> = if kind == SectionKind::E2 {
                    let m: Vec<u32> = self.above[s as usize]
                        .iter()
                        .copied()
                        .filter(|&m| m != s && m != t && self.leq(m, t))
                        .collect();
                    debug_assert_eq!(m.len() as u32, p + 1);
                    m
                } else {
                    Vec::new()
                };
                sections.push(SectionRec { t, s, middles });
            }
        }
        sections.sort_by_key(|r| (self.order_of(r.t), self.order_of(r.s), r.t, r.s));

        let sidx: HashMap<(u32, u32), u32> = sections
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.t, r.s), i as u32))
            .collect();
        let mut class_of = vec![u32::MAX; sections.len()];
        let mut class_reps = Vec::new();
        for i in 0..sections.len() {
            if class_of[i] != u32::MAX {
                continue;
            }
            let cid = class_reps.len() as u32;
            class_reps.push(i as u32);
            for g in 0..self.group.order() {
                let t2 = self.conj_sub(g, sections[i].t);
                let s2 = self.conj_sub(g, sections[i].s);
                let j = sidx[&(t2, s2)] as usize;
                if class_of[j] == u32::MAX {
                    class_of[j] = cid;
                }
            }
        }
        Ok(SectionFamily {
            kind,
            sections,
            class_of,
            class_reps,
        })
    }

    /// Subgroup conjugacy classes relative to an ambient subgroup.
    pub fn ambient_classes(&self, h: u32) -> AmbientClasses {
        let nsubs = self.subs.len();
        let mut rep = vec![u32::MAX; nsubs];
        let mut transporter = vec![0u32; nsubs];
        let mut reps = Vec::new();
        let h_elems = self.elems(h).to_vec();
        for s0 in 0..nsubs as u32 {
            if rep[s0 as usize] != u32::MAX || !self.leq(s0, h) {
                continue;
            }
            reps.push(s0);
            for &g in &h_elems {
                let s = self.conj_sub(g, s0);
                if rep[s as usize] == u32::MAX {
                    rep[s as usize] = s0;
                    transporter[s as usize] = g;
                }
            }
        }
        AmbientClasses {
            h,
            rep,
            transporter,
            reps,
        }
    }
}

/// Closure of <H, c> by coset enumeration: BFS on right cosets of H.
fn coset_closure(
    group: &GroupTable,
    h_elems: &[u32],
    h_set: &BitSet,
    h_gens: &[u32],
    c: u32,
) -> Vec<u32> {
    let mut member = h_set.clone();
    let mut elems = h_elems.to_vec();
    let mut gens: Vec<u32> = h_gens.to_vec();
    gens.push(c);
    let mut rep_queue: Vec<u32> = vec![0];
    while let Some(w) = rep_queue.pop() {
        for &g in &gens {
            let x = group.mul(w, g);
            if !member.contains(x as usize) {
                for &h in h_elems {
                    let y = group.mul(h, x);
                    if !member.contains(y as usize) {
                        member.insert(y as usize);
                        elems.push(y);
                    }
                }
                rep_queue.push(x);
            }
        }
    }
    elems.sort_unstable();
    elems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn lat(g: GroupTable) -> SubgroupLattice {
        SubgroupLattice::enumerate(g).unwrap()
    }

    /// Independent oracle: subgroups of small groups are exactly the closures
    /// of subsets of size <= 3 (sufficient for orders up to p^3).
    fn brute_force_subgroups(g: &GroupTable) -> Vec<Vec<u32>> {
        let n = g.order();
        let mut out: Vec<Vec<u32>> = vec![vec![0]];
        let push = |v: Vec<u32>, out: &mut Vec<Vec<u32>>| {
            if !out.contains(&v) {
                out.push(v);
            }
        };
        for a in 1..n {
            push(g.close_subset(&[a]), &mut out);
            for b in a + 1..n {
                push(g.close_subset(&[a, b]), &mut out);
                for c in b + 1..n {
                    push(g.close_subset(&[a, b, c]), &mut out);
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Independent oracle: plain recursive Möbius evaluation, no memo.
    fn moebius_oracle(l: &SubgroupLattice, a: u32, b: u32) -> i64 {
        if a == b {
            return 1;
        }
        let mut sum = 0;
        for &c in l.above(a) {
            if c != b && l.leq(c, b) {
                sum += moebius_oracle(l, a, c);
            }
        }
        -sum
    }

    #[test]
    fn trivial_group() {
        let l = lat(GroupTable::elementary_abelian(3, 0, DEFAULT_CAP).unwrap());
        assert_eq!(l.num_subs(), 1);
        assert!(l.e2().sections.is_empty());
    }

    #[test]
    fn ea_3_2_subgroups() {
        let l = lat(GroupTable::elementary_abelian(3, 2, DEFAULT_CAP).unwrap());
        // 1 trivial, 4 of order 3, 1 full
        assert_eq!(l.num_subs(), 6);
        assert_eq!(
            (0..6).filter(|&i| l.order_of(i) == 3).count(),
            4
        );
        // the unique rank-2 section family
        assert_eq!(l.e2().sections.len(), 1);
        let r = &l.e2().sections[0];
        assert_eq!((r.t, r.s), (l.full_id(), l.trivial_id()));
        assert_eq!(r.middles.len(), 4);
    }

    #[test]
    fn ea_3_3_counts() {
        let l = lat(GroupTable::elementary_abelian(3, 3, DEFAULT_CAP).unwrap());
        let by_order = |o: u32| (0..l.num_subs() as u32).filter(|&i| l.order_of(i) == o).count();
        assert_eq!(by_order(3), 13);
        assert_eq!(by_order(9), 13);
        assert_eq!(l.num_subs(), 28);
        // 13 sections (P, R) and 13 sections (Q, 1)
        assert_eq!(l.e2().sections.len(), 26);
        let top = l
            .e2()
            .sections
            .iter()
            .filter(|r| r.t == l.full_id())
            .count();
        assert_eq!(top, 13);
    }

    #[test]
    fn x27_subgroups_match_brute_force() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let oracle = brute_force_subgroups(&g);
        let l = lat(g);
        let listed: Vec<Vec<u32>> = (0..l.num_subs() as u32).map(|i| l.elems(i).to_vec()).collect();
        assert_eq!(listed, oracle);
        // frozen regression value from the oracle
        assert_eq!(l.num_subs(), 19);
    }

    #[test]
    fn x27_sections() {
        let l = lat(GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap());
        // (P, Z) plus p+1 sections (Q, 1)
        assert_eq!(l.e2().sections.len(), 5);
        let with_trivial_s = l
            .e2()
            .sections
            .iter()
            .filter(|r| r.s == l.trivial_id())
            .count();
        assert_eq!(with_trivial_s, 4);
        // all five are singleton classes: maximals and (P, Z) are normal
        assert_eq!(l.e2().class_reps.len(), 5);
    }

    #[test]
    fn moebius_values() {
        let l = lat(GroupTable::elementary_abelian(3, 3, DEFAULT_CAP).unwrap());
        let one = l.trivial_id();
        let full = l.full_id();
        assert_eq!(l.moebius(one, one).unwrap(), 1);
        let cp = (0..l.num_subs() as u32).find(|&i| l.order_of(i) == 3).unwrap();
        assert_eq!(l.moebius(one, cp).unwrap(), -1);
        // mu(1, (Z/3)^3) = -27; mu(1, (Z/3)^2) = 3
        assert_eq!(l.moebius(one, full).unwrap(), -27);
        let plane = (0..l.num_subs() as u32).find(|&i| l.order_of(i) == 9).unwrap();
        assert_eq!(l.moebius(one, plane).unwrap(), 3);
        assert!(l.moebius(full, one).is_err());
    }

    #[test]
    fn moebius_matches_oracle_and_sums_vanish() {
        for g in [
            GroupTable::elementary_abelian(3, 2, DEFAULT_CAP).unwrap(),
            GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap(),
        ] {
            let l = lat(g);
            for a in 0..l.num_subs() as u32 {
                for &b in l.above(a) {
                    assert_eq!(l.moebius(a, b).unwrap(), moebius_oracle(&l, a, b));
                    if b != a {
                        let total: i64 = l
                            .above(a)
                            .iter()
                            .filter(|&&c| l.leq(c, b))
                            .map(|&c| l.moebius(a, c).unwrap())
                            .sum();
                        assert_eq!(total, 0, "interval [{a}, {b}]");
                    }
                }
            }
        }
    }

    #[test]
    fn subconjugacy_in_x27() {
        let l = lat(GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap());
        let z = (0..l.num_subs() as u32)
            .find(|&i| l.order_of(i) == 3 && l.normalizer(i) == l.full_id())
            .unwrap();
        let r = (0..l.num_subs() as u32)
            .find(|&i| l.order_of(i) == 3 && i != z)
            .unwrap();
        assert!(l.subconjugate(l.trivial_id(), r));
        // the center is never subconjugate to a noncentral subgroup
        assert!(!l.subconjugate(z, r));
        // a noncentral subgroup is subconjugate to a maximal containing it
        let q = l.above(r).iter().copied().find(|&m| l.order_of(m) == 9).unwrap();
        assert!(l.subconjugate(r, q));
        // conjugation acts on sections
        for rec in &l.e2().sections {
            for g in 0..27 {
                let t2 = l.conj_sub(g, rec.t);
                let s2 = l.conj_sub(g, rec.s);
                assert!(l
                    .e2()
                    .sections
                    .iter()
                    .any(|r2| r2.t == t2 && r2.s == s2));
            }
        }
    }

    #[test]
    fn normalizers_and_centralizers() {
        let l = lat(GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap());
        for h in 0..l.num_subs() as u32 {
            assert!(l.leq(h, l.normalizer(h)));
            assert!(l.leq(l.centralizer(h), l.normalizer(h)) || l.order_of(h) == 1);
        }
        // noncentral order-3 subgroups have normalizer of order 9
        let z = (0..l.num_subs() as u32)
            .find(|&i| l.order_of(i) == 3 && l.normalizer(i) == l.full_id())
            .unwrap();
        for i in 0..l.num_subs() as u32 {
            if l.order_of(i) == 3 && i != z {
                assert_eq!(l.order_of(l.normalizer(i)), 9);
            }
        }
    }

    #[test]
    fn x3_family_of_x27() {
        let l = lat(GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap());
        let fam = l.sections_x3().unwrap();
        assert_eq!(fam.kind, SectionKind::X3);
        // 19 trivial sections (T, T), 33 with cyclic quotient, 5 rank-2
        // quotients, and (P, 1) itself with extraspecial quotient
        assert_eq!(fam.sections.len(), 58);
        for t in 0..l.num_subs() as u32 {
            assert!(fam.sections.iter().any(|r| (r.t, r.s) == (t, t)));
        }
        assert!(fam
            .sections
            .iter()
            .any(|r| (r.t, r.s) == (l.full_id(), l.trivial_id())));
        let cyclic = fam
            .sections
            .iter()
            .filter(|r| l.quotient_order(r.t, r.s) == 3)
            .count();
        assert_eq!(cyclic, 33);
    }

    #[test]
    fn ambient_classes_respect_ambient() {
        let l = lat(GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap());
        // relative to a maximal subgroup, everything inside is abelian: all
        // classes are singletons
        let q = (0..l.num_subs() as u32).find(|&i| l.order_of(i) == 9).unwrap();
        let ac = l.ambient_classes(q);
        for s in 0..l.num_subs() as u32 {
            if l.leq(s, q) {
                assert_eq!(ac.rep[s as usize], s);
            } else {
                assert_eq!(ac.rep[s as usize], u32::MAX);
            }
        }
        // relative to the full group the classes match the global ones
        let ac = l.ambient_classes(l.full_id());
        for s in 0..l.num_subs() as u32 {
            assert_eq!(ac.rep[s as usize], l.class_rep(s));
            let x = ac.transporter[s as usize];
            assert_eq!(l.conj_sub(x, ac.rep[s as usize]), s);
        }
    }
}
