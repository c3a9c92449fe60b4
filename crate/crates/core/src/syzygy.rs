//! The torsion-free part of the Dade group, modeled through fixed-point
//! patterns of relative syzygies.
//!
//! An element over the subquotient A/B is a formal integer combination of
//! patterns. A pattern is the set of subgroups W with B <= W <= A whose
//! quotient W/B has a fixed point on the underlying set; it determines the
//! class of twice the relative syzygy. Restriction, deflation, inflation and
//! conjugation all act by plain set transport inside the ambient lattice, and
//! the coordinate map onto rank-2 sections is a Möbius sum over intervals.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;
use crate::linalg::{solve_in_lattice, IntMatrix, LatticeSolve, NoSolutionCert};

/// A section of the root group: (ambient subgroup A, normal kernel B <| A).
/// Elements attached to it live in 2D(A/B).
pub type Sec = (u32, u32);

/// Pattern members are root subgroup ids W with B <= W <= A; the empty
/// pattern is the zero object.
pub type Pattern = BitSet;

/// An element of 2D(A/B): coefficient c on pattern pi stands for c * 2Omega_X
/// for any set X with fixed-point pattern pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyElement {
    pub sec: Sec,
    terms: BTreeMap<Pattern, i64>,
}

impl SyzygyElement {
    pub fn zero(sec: Sec) -> Self {
        SyzygyElement {
            sec,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_pattern(sec: Sec, pattern: Pattern, coeff: i64) -> Self {
        let mut e = Self::zero(sec);
        e.add_term(pattern, coeff);
        e
    }

    /// Merges a term; zero coefficients and the empty pattern vanish.
    pub fn add_term(&mut self, pattern: Pattern, coeff: i64) {
        if coeff == 0 || pattern.is_empty() {
            return;
        }
        match self.terms.entry(pattern) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SyzygyElement) -> Result<SyzygyElement> {
        if self.sec != other.sec {
            return Err(Error::BadSection(
                "cannot add elements over different sections".into(),
            ));
        }
        let mut out = self.clone();
        for (p, &c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SyzygyElement) -> Result<SyzygyElement> {
        self.add(&other.scaled(-1))
    }

    pub fn scaled(&self, c: i64) -> SyzygyElement {
        if c == 0 {
            return Self::zero(self.sec);
        }
        SyzygyElement {
            sec: self.sec,
            terms: self.terms.iter().map(|(p, &x)| (p.clone(), x * c)).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pattern, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Checks B <| A inside the lattice.
pub fn check_sec(lat: &SubgroupLattice, sec: Sec) -> Result<()> {
    if lat.is_normal_in(sec.1, sec.0) {
        Ok(())
    } else {
        Err(Error::BadSection(format!(
            "({}, {}) is not a section: kernel not normal in ambient",
            sec.0, sec.1
        )))
    }
}

/// Fixed-point pattern of the coset space (A/B)/(X0/B): all W in [B, A] that
/// are A-subconjugate into X0.
pub fn pattern_of_coset_space(lat: &SubgroupLattice, sec: Sec, x0: u32) -> Result<Pattern> {
    check_sec(lat, sec)?;
    let (a, b) = sec;
    if !lat.leq(b, x0) || !lat.leq(x0, a) {
        return Err(Error::BadSection("coset base must lie between B and A".into()));
    }
    let mut members = BitSet::new(lat.num_subs());
    for &w in lat.below(x0) {
        if !lat.leq(b, w) {
            continue;
        }
        for &g in lat.elems(a) {
            members.insert(lat.conj_sub(g, w) as usize);
        }
    }
    Ok(members)
}

/// Res^{A/B}_{A'/B}: keep members inside the smaller ambient.
pub fn restrict(lat: &SubgroupLattice, e: &SyzygyElement, a2: u32) -> Result<SyzygyElement> {
    let (a, b) = e.sec;
    if !lat.leq(a2, a) || !lat.leq(b, a2) {
        return Err(Error::BadSection(
            "restriction target must lie between B and A".into(),
        ));
    }
    let mut out = SyzygyElement::zero((a2, b));
    for (p, c) in e.terms() {
        let members = BitSet::from_iter(
            lat.num_subs(),
            p.iter().filter(|&w| lat.leq(w as u32, a2)),
        );
        out.add_term(members, c);
    }
    Ok(out)
}

/// Def^{A/B}_{A/B'}: keep members containing the larger kernel.
pub fn deflate(lat: &SubgroupLattice, e: &SyzygyElement, b2: u32) -> Result<SyzygyElement> {
    let (a, b) = e.sec;
    if !lat.leq(b, b2) || !lat.is_normal_in(b2, a) {
        return Err(Error::NotNormal);
    }
    let mut out = SyzygyElement::zero((a, b2));
    for (p, c) in e.terms() {
        let members = BitSet::from_iter(
            lat.num_subs(),
            p.iter().filter(|&w| lat.leq(b2, w as u32)),
        );
        out.add_term(members, c);
    }
    Ok(out)
}

/// Inf^{A/B'}_{A/B} for B' <= B (inflation along the projection A/B' -> A/B):
/// V is a member downstairs iff VB is upstairs.
pub fn inflate(lat: &SubgroupLattice, e: &SyzygyElement, b_small: u32) -> Result<SyzygyElement> {
    let (a, b) = e.sec;
    if !lat.leq(b_small, b) || !lat.is_normal_in(b_small, a) {
        return Err(Error::NotNormal);
    }
    let candidates: Vec<u32> = lat
        .above(b_small)
        .iter()
        .copied()
        .filter(|&v| lat.leq(v, a))
        .collect();
    let vb: Vec<u32> = candidates
        .iter()
        .map(|&v| lat.product(v, b).expect("VB is a subgroup since B <| A"))
        .collect();
    let mut out = SyzygyElement::zero((a, b_small));
    for (p, c) in e.terms() {
        let mut members = BitSet::new(lat.num_subs());
        for (i, &v) in candidates.iter().enumerate() {
            if p.contains(vb[i] as usize) {
                members.insert(v as usize);
            }
        }
        out.add_term(members, c);
    }
    Ok(out)
}

/// Defres^{A/B}_{T/S}: restriction to T followed by deflation by S.
pub fn defres(lat: &SubgroupLattice, e: &SyzygyElement, t: u32, s: u32) -> Result<SyzygyElement> {
    let r = restrict(lat, e, t)?;
    deflate(lat, &r, s)
}

/// Conjugation by x, transporting (A, B) to (xAx^{-1}, xBx^{-1}).
pub fn conjugate(lat: &SubgroupLattice, e: &SyzygyElement, x: u32) -> SyzygyElement {
    let sec = (lat.conj_sub(x, e.sec.0), lat.conj_sub(x, e.sec.1));
    let mut out = SyzygyElement::zero(sec);
    for (p, c) in e.terms() {
        let members = BitSet::from_iter(
            lat.num_subs(),
            p.iter().map(|w| lat.conj_sub(x, w as u32) as usize),
        );
        out.add_term(members, c);
    }
    out
}

/// The rank-2 sections of A/B, as positions into the root family, with
/// conjugacy classes under the ambient subgroup A.
#[derive(Clone, Debug)]
pub struct RelFamily {
    pub amb: Sec,
    /// Indices into `lat.e2().sections`.
    pub idxs: Vec<u32>,
    pub class_of: Vec<u32>,
    /// Positions (into `idxs`) of class representatives, ascending.
    pub reps: Vec<u32>,
}

pub fn rel_family(lat: &SubgroupLattice, sec: Sec) -> Result<RelFamily> {
    check_sec(lat, sec)?;
    let (a, b) = sec;
    let root = lat.e2();
    let mut idxs = Vec::new();
    for (i, r) in root.sections.iter().enumerate() {
        if lat.leq(b, r.s) && lat.leq(r.t, a) {
            idxs.push(i as u32);
        }
    }
    let pos: HashMap<(u32, u32), u32> = idxs
        .iter()
        .enumerate()
        .map(|(p, &i)| {
            let r = &root.sections[i as usize];
            ((r.t, r.s), p as u32)
        })
        .collect();
    let mut class_of = vec![u32::MAX; idxs.len()];
    let mut reps = Vec::new();
    for pstart in 0..idxs.len() {
        if class_of[pstart] != u32::MAX {
            continue;
        }
        let cid = reps.len() as u32;
        reps.push(pstart as u32);
        let r = &root.sections[idxs[pstart] as usize];
        for &g in lat.elems(a) {
            let key = (lat.conj_sub(g, r.t), lat.conj_sub(g, r.s));
            let q = pos[&key] as usize;
            if class_of[q] == u32::MAX {
                class_of[q] = cid;
            }
        }
    }
    Ok(RelFamily {
        amb: sec,
        idxs,
        class_of,
        reps,
    })
}

/// Integer values on the rank-2 sections of an ambient section, aligned with
/// `rel_family(lat, amb).idxs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionVector {
    pub amb: Sec,
    pub values: Vec<i64>,
}

/// The (T, S)-coordinate of an element: the Möbius-weighted count of pattern
/// members in the interval [S, T].
pub fn coordinate_at(lat: &SubgroupLattice, e: &SyzygyElement, t: u32, s: u32) -> Result<i64> {
    if !lat.leq(e.sec.1, s) || !lat.leq(t, e.sec.0) {
        return Err(Error::BadSection("section outside the element's ambient".into()));
    }
    let mut total = 0i64;
    for (p, c) in e.terms() {
        let mut acc = 0i64;
        for &v in lat.above(s) {
            if lat.leq(v, t) && p.contains(v as usize) {
                acc += lat.moebius(s, v)?;
            }
        }
        total += c * acc;
    }
    Ok(total)
}

/// Full coordinate vector of an element over its own section family.
pub fn coordinates(lat: &SubgroupLattice, e: &SyzygyElement) -> Result<SectionVector> {
    let fam = rel_family(lat, e.sec)?;
    let mut values = Vec::with_capacity(fam.idxs.len());
    for &i in &fam.idxs {
        let r = &lat.e2().sections[i as usize];
        values.push(coordinate_at(lat, e, r.t, r.s)?);
    }
    Ok(SectionVector { amb: e.sec, values })
}

/// Equality in 2D(A/B): coordinate vectors agree (the coordinate map is
/// injective there).
pub fn coords_equal(lat: &SubgroupLattice, a: &SyzygyElement, b: &SyzygyElement) -> Result<bool> {
    if a.sec != b.sec {
        return Err(Error::BadSection("elements live over different sections".into()));
    }
    Ok(coordinates(lat, a)? == coordinates(lat, b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    /// One column per conjugacy class of subgroups: the coset-space syzygies.
    Transitive,
    /// One column per admissible pattern (downward- and conjugation-closed
    /// family containing the trivial subgroup), capped.
    AllPatterns,
}

pub const DEFAULT_PATTERN_CAP: usize = 20_000;

/// Column descriptions alongside the matrix of coordinates.
pub struct GeneratorMatrix {
    /// Rows are root-family class representatives, in family order.
    pub matrix: IntMatrix,
    /// Root-family section index of each row.
    pub row_sections: Vec<u32>,
    pub col_patterns: Vec<Pattern>,
    /// For transitive mode: the coset base of each column.
    pub col_bases: Option<Vec<u32>>,
}

/// Coordinates of the generating syzygies of 2D(G), one column per generator,
/// rows indexed by section-class representatives.
pub fn generator_matrix(
    lat: &SubgroupLattice,
    mode: GeneratorMode,
    pattern_cap: usize,
) -> Result<GeneratorMatrix> {
    let root_sec = (lat.full_id(), lat.trivial_id());
    let fam = rel_family(lat, root_sec)?;
    let (patterns, bases) = match mode {
        GeneratorMode::Transitive => {
            let mut pats = Vec::new();
            let mut bases = Vec::new();
            for class in lat.classes() {
                let x0 = class[0];
                pats.push(pattern_of_coset_space(lat, root_sec, x0)?);
                bases.push(x0);
            }
            (pats, Some(bases))
        }
        GeneratorMode::AllPatterns => (enumerate_patterns(lat, pattern_cap)?, None),
    };
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(patterns.len());
    for p in &patterns {
        let e = SyzygyElement::from_pattern(root_sec, p.clone(), 1);
        let v = coordinates(lat, &e)?;
        // values must be constant on section classes
        for (pos, &c) in fam.class_of.iter().enumerate() {
            let rep = fam.reps[c as usize] as usize;
            if v.values[pos] != v.values[rep] {
                return Err(Error::Internal(
                    "coordinates of a syzygy are not conjugation-invariant".into(),
                ));
            }
        }
        cols.push(
            fam.reps
                .iter()
                .map(|&r| BigInt::from(v.values[r as usize]))
                .collect(),
        );
    }
    let matrix = IntMatrix::from_columns(fam.reps.len(), &cols)?;
    let row_sections: Vec<u32> = fam.reps.iter().map(|&r| fam.idxs[r as usize]).collect();
    Ok(GeneratorMatrix {
        matrix,
        row_sections,
        col_patterns: patterns,
        col_bases: bases,
    })
}

/// All downward- and conjugation-closed subgroup families containing the
/// trivial subgroup, as down-sets of the class poset under subconjugacy.
pub fn enumerate_patterns(lat: &SubgroupLattice, cap: usize) -> Result<Vec<Pattern>> {
    let nclasses = lat.classes().len();
    // class i is below class j iff rep(i) is subconjugate to rep(j); class
    // ids ascend with subgroup order, so index order is a linear extension.
    let lower: Vec<Vec<usize>> = (0..nclasses)
        .map(|i| {
            let rep_i = lat.classes()[i][0];
            (0..i)
                .filter(|&j| lat.subconjugate(lat.classes()[j][0], rep_i))
                .collect()
        })
        .collect();

    fn rec(
        lat: &SubgroupLattice,
        lower: &[Vec<usize>],
        included: &mut Vec<bool>,
        idx: usize,
        cap: usize,
        out: &mut Vec<Pattern>,
    ) -> Result<()> {
        if idx == lower.len() {
            let mut members = BitSet::new(lat.num_subs());
            let mut any = false;
            for (j, &inc) in included.iter().enumerate() {
                if inc {
                    any = true;
                    for &s in &lat.classes()[j] {
                        members.insert(s as usize);
                    }
                }
            }
            if any {
                if out.len() >= cap {
                    return Err(Error::PatternCap { cap });
                }
                out.push(members);
            }
            return Ok(());
        }
        included[idx] = false;
        rec(lat, lower, included, idx + 1, cap, out)?;
        // include this class only when everything below it is present; class
        // 0 is trivial and has no lower classes, so every nonempty pattern
        // contains the trivial subgroup
        if lower[idx].iter().all(|&j| included[j]) {
            included[idx] = true;
            rec(lat, lower, included, idx + 1, cap, out)?;
            included[idx] = false;
        }
        Ok(())
    }

    let mut out: Vec<Pattern> = Vec::new();
    let mut included = vec![false; nclasses];
    rec(lat, &lower, &mut included, 0, cap, &mut out)?;
    Ok(out)
}

/// Outcome of the image-condition check.
#[derive(Clone, Debug)]
pub enum Verdict {
    Pass,
    Fail(ConditionFailure),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct ConditionFailure {
    /// 1 = conjugation invariance, 2 = rank-3 linear relation, 3 = mod-p
    /// congruence.
    pub condition: u8,
    pub t: u32,
    pub s: u32,
    pub t2: u32,
    pub s2: u32,
    pub lhs: i64,
    pub rhs: i64,
    pub modulus: Option<u32>,
}

impl std::fmt::Display for ConditionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "condition {} fails on sections (T={}, S={}) vs (T'={}, S'={}): {} vs {}{}",
            self.condition,
            self.t,
            self.s,
            self.t2,
            self.s2,
            self.lhs,
            self.rhs,
            match self.modulus {
                Some(p) => format!(" (mod {p})"),
                None => String::new(),
            }
        )
    }
}

/// Checks the three image conditions for a vector over the full group.
pub fn check_conditions(lat: &SubgroupLattice, v: &SectionVector) -> Result<Verdict> {
    check_conditions_filtered(lat, v, false)
}

/// Same, optionally skipping the mod-p congruence at sections with trivial
/// kernel (the hypothesis set of the component-adjustment step).
pub fn check_conditions_filtered(
    lat: &SubgroupLattice,
    v: &SectionVector,
    skip_congruence_at_trivial_kernel: bool,
) -> Result<Verdict> {
    let root_sec = (lat.full_id(), lat.trivial_id());
    if v.amb != root_sec {
        return Err(Error::BadSection(
            "condition check expects a full-group vector".into(),
        ));
    }
    let fam = rel_family(lat, root_sec)?;
    if v.values.len() != fam.idxs.len() {
        return Err(Error::DimensionMismatch("vector length != family size".into()));
    }
    let pos: HashMap<(u32, u32), usize> = fam
        .idxs
        .iter()
        .enumerate()
        .map(|(p, &i)| {
            let r = &lat.e2().sections[i as usize];
            ((r.t, r.s), p)
        })
        .collect();
    let val = |t: u32, s: u32| -> i64 { v.values[pos[&(t, s)]] };

    // Condition 1: invariance under conjugation.
    for (p, &c) in fam.class_of.iter().enumerate() {
        let rep = fam.reps[c as usize] as usize;
        if v.values[p] != v.values[rep] {
            let r1 = &lat.e2().sections[fam.idxs[p] as usize];
            let r2 = &lat.e2().sections[fam.idxs[rep] as usize];
            return Ok(Verdict::Fail(ConditionFailure {
                condition: 1,
                t: r1.t,
                s: r1.s,
                t2: r2.t,
                s2: r2.s,
                lhs: v.values[p],
                rhs: v.values[rep],
                modulus: None,
            }));
        }
    }

    let p = lat.group().prime();
    for (r, s, elab) in rank3_sections(lat) {
        let planes: Vec<u32> = lat
            .above(s)
            .iter()
            .copied()
            .filter(|&t| {
                t != s
                    && t != r
                    && lat.leq(t, r)
                    && lat.quotient_order(t, s) == p * p
                    && lat.quotient_is_elab(t, s)
            })
            .collect();
        for (ia, &t) in planes.iter().enumerate() {
            for &t2 in planes.iter().skip(ia + 1) {
                if elab {
                    // v_{T,S} + sum_{S<X<T} v_{R,X} on both sides
                    let side = |tt: u32| -> i64 {
                        let idx = pos[&(tt, s)];
                        let rec = &lat.e2().sections[fam.idxs[idx] as usize];
                        v.values[idx] + rec.middles.iter().map(|&x| val(r, x)).sum::<i64>()
                    };
                    let (lhs, rhs) = (side(t), side(t2));
                    if lhs != rhs {
                        return Ok(Verdict::Fail(ConditionFailure {
                            condition: 2,
                            t,
                            s,
                            t2,
                            s2: s,
                            lhs,
                            rhs,
                            modulus: None,
                        }));
                    }
                } else {
                    if skip_congruence_at_trivial_kernel && s == lat.trivial_id() {
                        continue;
                    }
                    let (lhs, rhs) = (val(t, s), val(t2, s));
                    if (lhs - rhs).rem_euclid(p as i64) != 0 {
                        return Ok(Verdict::Fail(ConditionFailure {
                            condition: 3,
                            t,
                            s,
                            t2,
                            s2: s,
                            lhs,
                            rhs,
                            modulus: Some(p),
                        }));
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Sections (R, S) with R/S of order p^3 and either elementary abelian
/// (elab = true) or extraspecial of exponent p (elab = false).
pub fn rank3_sections(lat: &SubgroupLattice) -> Vec<(u32, u32, bool)> {
    let p3 = lat.group().prime().pow(3);
    let mut out = Vec::new();
    for r in 0..lat.num_subs() as u32 {
        for &s in lat.below(r) {
            if lat.order_of(r) != p3 * lat.order_of(s) || !lat.is_normal_in(s, r) {
                continue;
            }
            if lat.quotient_is_elab(r, s) {
                out.push((r, s, true));
            } else if lat.quotient_is_xp3(r, s) {
                out.push((r, s, false));
            }
        }
    }
    out
}

/// Generators of the full solution lattice of the image conditions, in
/// section-class coordinates: the kernel of the rank-3 relations intersected
/// with the mod-p congruence sublattice (invariance is built into the class
/// coordinates).
pub fn condition_lattice_matrix(lat: &SubgroupLattice) -> Result<IntMatrix> {
    let root_sec = (lat.full_id(), lat.trivial_id());
    let fam = rel_family(lat, root_sec)?;
    let k = fam.reps.len();
    let pos: HashMap<(u32, u32), usize> = fam
        .idxs
        .iter()
        .enumerate()
        .map(|(p, &i)| {
            let r = &lat.e2().sections[i as usize];
            ((r.t, r.s), p)
        })
        .collect();
    let cls = |t: u32, s: u32| fam.class_of[pos[&(t, s)]] as usize;

    let p = lat.group().prime();
    let mut rows2: Vec<Vec<i64>> = Vec::new();
    let mut rows3: Vec<Vec<i64>> = Vec::new();
    let mut seen2 = std::collections::HashSet::new();
    let mut seen3 = std::collections::HashSet::new();
    for (r, s, elab) in rank3_sections(lat) {
        let planes: Vec<u32> = lat
            .above(s)
            .iter()
            .copied()
            .filter(|&t| {
                t != s
                    && t != r
                    && lat.leq(t, r)
                    && lat.quotient_order(t, s) == p * p
                    && lat.quotient_is_elab(t, s)
            })
            .collect();
        for (ia, &t) in planes.iter().enumerate() {
            for &t2 in planes.iter().skip(ia + 1) {
                let mut row = vec![0i64; k];
                if elab {
                    row[cls(t, s)] += 1;
                    row[cls(t2, s)] -= 1;
                    let rec_t = &lat.e2().sections[fam.idxs[pos[&(t, s)]] as usize];
                    for &x in &rec_t.middles {
                        row[cls(r, x)] += 1;
                    }
                    let rec_t2 = &lat.e2().sections[fam.idxs[pos[&(t2, s)]] as usize];
                    for &x in &rec_t2.middles {
                        row[cls(r, x)] -= 1;
                    }
                } else {
                    row[cls(t, s)] += 1;
                    row[cls(t2, s)] -= 1;
                }
                if row.iter().all(|&c| c == 0) {
                    continue;
                }
                // sign-normalize for deduplication
                let mut norm = row.clone();
                if norm.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                    for c in &mut norm {
                        *c = -*c;
                    }
                }
                if elab {
                    if seen2.insert(norm) {
                        rows2.push(row);
                    }
                } else if seen3.insert(norm) {
                    rows3.push(row);
                }
            }
        }
    }

    // kernel of the rank-3 linear relations
    let kernel: Vec<Vec<BigInt>> = if rows2.is_empty() {
        (0..k)
            .map(|i| {
                let mut col = vec![BigInt::from(0); k];
                col[i] = BigInt::from(1);
                col
            })
            .collect()
    } else {
        let c2 = IntMatrix::from_rows_i64(&rows2)?;
        crate::linalg::kernel_basis(&c2)
    };
    let dim = kernel.len();
    let kmat = IntMatrix::from_columns(k, &kernel)?;
    if rows3.is_empty() || dim == 0 {
        return Ok(kmat);
    }
    // sublattice of kernel coordinates where the congruences vanish mod p:
    // the y-projection of the kernel of [C3 * K | p * I]
    let c3 = IntMatrix::from_rows_i64(&rows3)?;
    let m = c3.mul(&kmat)?;
    let nr = m.rows();
    let block = IntMatrix::from_fn(nr, dim + nr, |i, j| {
        if j < dim {
            m.at(i, j).clone()
        } else if j - dim == i {
            BigInt::from(p)
        } else {
            BigInt::from(0)
        }
    });
    let ygens: Vec<Vec<BigInt>> = crate::linalg::kernel_basis(&block)
        .into_iter()
        .map(|v| v[..dim].to_vec())
        .collect();
    let ymat = IntMatrix::from_columns(dim, &ygens)?;
    kmat.mul(&ymat)
}

#[derive(Clone, Debug)]
pub enum Membership {
    Element(SyzygyElement),
    NoSolution(NoSolutionCert),
}

/// Solves for a preimage of a condition-satisfying vector under the
/// coordinate map, as a combination of coset-space syzygies.
pub fn image_membership(lat: &SubgroupLattice, v: &SectionVector) -> Result<Membership> {
    match check_conditions(lat, v)? {
        Verdict::Pass => {}
        Verdict::Fail(f) => return Err(Error::ConditionsViolated(f.to_string())),
    }
    let root_sec = (lat.full_id(), lat.trivial_id());
    let fam = rel_family(lat, root_sec)?;
    let gm = generator_matrix(lat, GeneratorMode::Transitive, DEFAULT_PATTERN_CAP)?;
    let target: Vec<BigInt> = fam
        .reps
        .iter()
        .map(|&r| BigInt::from(v.values[r as usize]))
        .collect();
    match solve_in_lattice(&gm.matrix, &target)? {
        LatticeSolve::NoSolution(cert) => Ok(Membership::NoSolution(cert)),
        LatticeSolve::Solution(x) => {
            let mut e = SyzygyElement::zero(root_sec);
            for (j, coeff) in x.iter().enumerate() {
                let c = coeff
                    .to_i64()
                    .ok_or_else(|| Error::Internal("solution coefficient overflows i64".into()))?;
                e.add_term(gm.col_patterns[j].clone(), c);
            }
            let got = coordinates(lat, &e)?;
            if got != *v {
                return Err(Error::Internal(
                    "membership solution does not reproduce the target coordinates".into(),
                ));
            }
            Ok(Membership::Element(e))
        }
    }
}

/// A random element: a few random coset-space syzygies of A/B with small
/// nonzero coefficients.
pub fn random_element<R: Rng>(
    lat: &SubgroupLattice,
    sec: Sec,
    rng: &mut R,
    max_terms: usize,
    coeff_bound: i64,
) -> Result<SyzygyElement> {
    let (a, b) = sec;
    check_sec(lat, sec)?;
    let bases: Vec<u32> = lat
        .ambient_classes(a)
        .reps
        .iter()
        .copied()
        .filter(|&x0| lat.leq(b, x0))
        .collect();
    let mut e = SyzygyElement::zero(sec);
    let n = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..n {
        let x0 = bases[rng.gen_range(0..bases.len())];
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-coeff_bound..=coeff_bound);
        }
        e.add_term(pattern_of_coset_space(lat, sec, x0)?, c);
    }
    Ok(e)
}
