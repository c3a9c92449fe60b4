//! The gluing pipeline: compatibility of local data, the Möbius section
//! sigma, the obstruction cocycle on the rank->=2 poset, the component
//! adjustment, and the end-to-end solver. Also the structured report for the
//! extraspecial group of order p^5.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{AmbientClasses, SubgroupLattice};
use crate::poset::{
    build_ea_poset, solve_coboundary, validate_cocycle, CoboundaryOutcome, Cocycle1, CycleCert,
    EAPoset, VertexWeights,
};
use crate::syzygy::{
    check_sec, conjugate, coordinate_at, coordinates, defres, image_membership, inflate,
    pattern_of_coset_space, rel_family, restrict, Membership, SectionVector, SyzygyElement,
    Verdict,
};

/// A family of local elements u_Q in 2D(N_H(Q)/Q), stored on H-conjugacy
/// class representatives of nontrivial subgroups Q <= H. Missing classes are
/// zero; conjugation coherence holds by construction.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub ambient: u32,
    pub entries: BTreeMap<u32, SyzygyElement>,
}

impl GluingData {
    pub fn zero(ambient: u32) -> Self {
        GluingData {
            ambient,
            entries: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.is_formally_zero())
    }
}

/// Structural checks: keys are class representatives, entries live over the
/// right quotient section.
fn entry_checks(lat: &SubgroupLattice, ac: &AmbientClasses, data: &GluingData) -> Result<()> {
    for (&q, e) in &data.entries {
        if q == lat.trivial_id() {
            return Err(Error::InvalidGluingData(
                "entries are indexed by nontrivial subgroups".into(),
            ));
        }
        if !lat.leq(q, data.ambient) {
            return Err(Error::InvalidGluingData(format!(
                "entry subgroup {q} is not contained in the ambient subgroup"
            )));
        }
        if ac.rep[q as usize] != q {
            return Err(Error::InvalidGluingData(format!(
                "entry subgroup {q} is not a class representative"
            )));
        }
        let expect = (lat.normalizer_in(data.ambient, q), q);
        if e.sec != expect {
            return Err(Error::InvalidGluingData(format!(
                "entry at {q} lives over section {:?}, expected {:?}",
                e.sec, expect
            )));
        }
    }
    Ok(())
}

/// The local element at an arbitrary nontrivial Q <= H, filled in by
/// conjugation coherence from the stored representative.
pub fn entry_at(
    lat: &SubgroupLattice,
    ac: &AmbientClasses,
    data: &GluingData,
    q: u32,
) -> Result<SyzygyElement> {
    let rep = ac.rep[q as usize];
    if rep == u32::MAX {
        return Err(Error::InvalidGluingData(format!(
            "subgroup {q} is not contained in the ambient subgroup"
        )));
    }
    let sec = (lat.normalizer_in(data.ambient, q), q);
    match data.entries.get(&rep) {
        None => Ok(SyzygyElement::zero(sec)),
        Some(e) => {
            let x = ac.transporter[q as usize];
            let moved = conjugate(lat, e, x);
            debug_assert_eq!(moved.sec, sec);
            Ok(moved)
        }
    }
}

/// The family of deflation-restrictions of a single element over H: the
/// image of the gluing-data map.
pub fn data_of_element(lat: &SubgroupLattice, e: &SyzygyElement) -> Result<GluingData> {
    let (h, b) = e.sec;
    if b != lat.trivial_id() {
        return Err(Error::BadSection(
            "gluing data comes from an element over a subgroup, not a proper quotient".into(),
        ));
    }
    let ac = lat.ambient_classes(h);
    let mut data = GluingData::zero(h);
    for &q in &ac.reps {
        if q == lat.trivial_id() {
            continue;
        }
        let n = lat.normalizer_in(h, q);
        let local = defres(lat, e, n, q)?;
        if !local.is_formally_zero() {
            data.entries.insert(q, local);
        }
    }
    Ok(data)
}

/// Restriction of gluing data to a smaller ambient subgroup.
pub fn restrict_data(lat: &SubgroupLattice, data: &GluingData, h2: u32) -> Result<GluingData> {
    if !lat.leq(h2, data.ambient) {
        return Err(Error::BadSection(
            "restriction target is not contained in ambient".into(),
        ));
    }
    let ac = lat.ambient_classes(data.ambient);
    let ac2 = lat.ambient_classes(h2);
    let mut out = GluingData::zero(h2);
    for &q in &ac2.reps {
        if q == lat.trivial_id() {
            continue;
        }
        let u = entry_at(lat, &ac, data, q)?;
        let local = restrict(lat, &u, lat.normalizer_in(h2, q))?;
        if !local.is_formally_zero() {
            out.entries.insert(q, local);
        }
    }
    Ok(out)
}

/// Conjugation of gluing data by a group element.
pub fn conjugate_data(lat: &SubgroupLattice, data: &GluingData, x: u32) -> Result<GluingData> {
    let h2 = lat.conj_sub(x, data.ambient);
    let ac = lat.ambient_classes(data.ambient);
    let ac2 = lat.ambient_classes(h2);
    let xi = lat.group().inv(x);
    let mut out = GluingData::zero(h2);
    for &q in &ac2.reps {
        if q == lat.trivial_id() {
            continue;
        }
        let q_old = lat.conj_sub(xi, q);
        let u = entry_at(lat, &ac, data, q_old)?;
        let local = conjugate(lat, &u, x);
        if !local.is_formally_zero() {
            out.entries.insert(q, local);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum GlueVerdict {
    Pass,
    Fail(GlueIncompat),
}

impl GlueVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, GlueVerdict::Pass)
    }
}

/// First compatibility violation: the pair (Q <| R) and a section where the
/// two routes disagree.
#[derive(Clone, Debug)]
pub struct GlueIncompat {
    pub q: u32,
    pub r: u32,
    pub t: u32,
    pub s: u32,
    pub lhs: i64,
    pub rhs: i64,
}

impl std::fmt::Display for GlueIncompat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair Q = {} <| R = {}: deflation-restriction of u_Q and restriction of u_R \
             differ at section (T = {}, S = {}): {} vs {}",
            self.q, self.r, self.t, self.s, self.lhs, self.rhs
        )
    }
}

/// Checks the compatibility conditions on all pairs Q <| R up to conjugacy:
/// Defres u_Q and Res u_R must agree, in coordinates, over N(Q, R)/R.
pub fn validate(lat: &SubgroupLattice, data: &GluingData) -> Result<GlueVerdict> {
    let ac = lat.ambient_classes(data.ambient);
    entry_checks(lat, &ac, data)?;
    for &q in &ac.reps {
        if q == lat.trivial_id() {
            continue;
        }
        let n_q = lat.normalizer_in(data.ambient, q);
        let u_q = entry_at(lat, &ac, data, q)?;
        for &r in lat.above(q) {
            if r == q || !lat.leq(r, n_q) {
                continue;
            }
            let u_r = entry_at(lat, &ac, data, r)?;
            if u_q.is_formally_zero() && u_r.is_formally_zero() {
                continue;
            }
            // N(Q, R) within the ambient subgroup
            let n_qr = lat.intersection(n_q, lat.normalizer_in(data.ambient, r));
            let lhs = defres(lat, &u_q, n_qr, r)?;
            let rhs = restrict(lat, &u_r, n_qr)?;
            let vl = coordinates(lat, &lhs)?;
            let vr = coordinates(lat, &rhs)?;
            if vl != vr {
                let fam = rel_family(lat, (n_qr, r))?;
                for (pos, (&a, &b)) in vl.values.iter().zip(&vr.values).enumerate() {
                    if a != b {
                        let rec = &lat.e2().sections[fam.idxs[pos] as usize];
                        return Ok(GlueVerdict::Fail(GlueIncompat {
                            q,
                            r,
                            t: rec.t,
                            s: rec.s,
                            lhs: a,
                            rhs: b,
                        }));
                    }
                }
            }
        }
    }
    Ok(GlueVerdict::Pass)
}

/// sigma_E: the Möbius-weighted sum of inflations of the local data below an
/// elementary abelian subgroup E of rank >= 2.
pub fn sigma(lat: &SubgroupLattice, data: &GluingData, e_sub: u32) -> Result<SyzygyElement> {
    let ac = lat.ambient_classes(data.ambient);
    sigma_with(lat, &ac, data, e_sub)
}

fn sigma_with(
    lat: &SubgroupLattice,
    ac: &AmbientClasses,
    data: &GluingData,
    e_sub: u32,
) -> Result<SyzygyElement> {
    if !lat.ea_rank_of(e_sub).is_some_and(|r| r >= 2) {
        return Err(Error::BadSection(
            "sigma expects an elementary abelian subgroup of rank at least 2".into(),
        ));
    }
    if !lat.leq(e_sub, data.ambient) {
        return Err(Error::BadSection(
            "sigma target not inside the ambient subgroup".into(),
        ));
    }
    let one = lat.trivial_id();
    let mut acc = SyzygyElement::zero((e_sub, one));
    for &f in lat.below(e_sub) {
        if f == one {
            continue;
        }
        let u_f = entry_at(lat, ac, data, f)?;
        if u_f.is_formally_zero() {
            continue;
        }
        // E is abelian and contains F, so E lies inside the normalizer of F
        let local = restrict(lat, &u_f, e_sub)?;
        let inflated = inflate(lat, &local, one)?;
        let mu = lat.moebius(one, f)?;
        acc = acc.add(&inflated.scaled(-mu))?;
    }
    Ok(acc)
}

/// sigma for every poset vertex, computed once per pipeline run.
fn sigma_all(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    data: &GluingData,
) -> Result<Vec<SyzygyElement>> {
    let ac = lat.ambient_classes(data.ambient);
    poset
        .vertices
        .iter()
        .map(|&v| sigma_with(lat, &ac, data, v))
        .collect()
}

/// The obstruction cocycle: on each edge E < F, the difference between the
/// two local sections is a multiple of the free-orbit syzygy of E, and the
/// multiplier is the edge value.
pub fn obstruction_cocycle(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    data: &GluingData,
) -> Result<Cocycle1> {
    let sigmas = sigma_all(lat, poset, data)?;
    cocycle_from_sigmas(lat, poset, &sigmas)
}

fn cocycle_from_sigmas(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    sigmas: &[SyzygyElement],
) -> Result<Cocycle1> {
    let one = lat.trivial_id();
    let mut values = Vec::with_capacity(poset.edges.len());
    for &(i, j) in &poset.edges {
        let e_sub = poset.vertices[i as usize];
        let d = restrict(lat, &sigmas[j as usize], e_sub)?.sub(&sigmas[i as usize])?;
        // d must be an integer multiple of twice the free-orbit syzygy of E:
        // zero at every section with S != 1, constant at the sections (T, 1)
        let fam = rel_family(lat, (e_sub, one))?;
        let mut common: Option<i64> = None;
        for &idx in &fam.idxs {
            let rec = &lat.e2().sections[idx as usize];
            let c = coordinate_at(lat, &d, rec.t, rec.s)?;
            if rec.s != one {
                if c != 0 {
                    return Err(Error::InvalidGluingData(format!(
                        "edge ({}, {}): local difference has a nonzero coordinate at a section \
                         with nontrivial kernel (T = {}, S = {})",
                        e_sub, poset.vertices[j as usize], rec.t, rec.s
                    )));
                }
            } else {
                match common {
                    None => common = Some(c),
                    Some(c0) if c0 == c => {}
                    Some(c0) => {
                        return Err(Error::InvalidGluingData(format!(
                            "edge ({}, {}): local difference has non-constant free coordinates \
                             {c0} vs {c} (T = {})",
                            e_sub, poset.vertices[j as usize], rec.t
                        )));
                    }
                }
            }
        }
        values.push(common.ok_or_else(|| {
            Error::Internal("a rank >= 2 vertex has no section with trivial kernel".into())
        })?);
    }
    let w = Cocycle1 { values };
    validate_cocycle(poset, &w).map_err(|e| {
        Error::InvalidGluingData(format!("obstruction edge function is not a cocycle: {e}"))
    })?;
    Ok(w)
}

type SectionPositions = std::collections::HashMap<(u32, u32), usize>;

fn root_section_positions(
    lat: &SubgroupLattice,
) -> Result<(crate::syzygy::RelFamily, SectionPositions)> {
    let fam = rel_family(lat, (lat.full_id(), lat.trivial_id()))?;
    let pos = fam
        .idxs
        .iter()
        .enumerate()
        .map(|(p, &i)| {
            let r = &lat.e2().sections[i as usize];
            ((r.t, r.s), p)
        })
        .collect();
    Ok((fam, pos))
}

/// Hypotheses of the component-adjustment step: invariance, the rank-3 linear
/// relations, and the congruence at sections with nontrivial kernel only.
pub fn check_adjust_hypotheses(lat: &SubgroupLattice, v: &SectionVector) -> Result<()> {
    match crate::syzygy::check_conditions_filtered(lat, v, true)? {
        Verdict::Pass => Ok(()),
        Verdict::Fail(f) => Err(Error::ConditionsViolated(f.to_string())),
    }
}

/// Free-coordinate congruence for rank-2 pairs in a common component whose
/// product is extraspecial of order p^3: a consequence of the hypotheses,
/// checked exhaustively.
pub fn component_congruence_check(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    v: &SectionVector,
) -> Result<()> {
    let (_, pos) = root_section_positions(lat)?;
    let one = lat.trivial_id();
    let p = lat.group().prime() as i64;
    for (pi, &t) in poset.vertices.iter().enumerate() {
        if poset.rank[pi] != 2 {
            continue;
        }
        for (pj, &t2) in poset.vertices.iter().enumerate() {
            if pj == pi || poset.rank[pj] != 2 || poset.component[pi] != poset.component[pj] {
                continue;
            }
            if !lat.leq(t, lat.normalizer(t2)) {
                continue;
            }
            let prod = lat.product(t, t2)?;
            if !lat.quotient_is_xp3(prod, one) {
                continue;
            }
            let (a, b) = (v.values[pos[&(t, one)]], v.values[pos[&(t2, one)]]);
            if (a - b).rem_euclid(p) != 0 {
                return Err(Error::Internal(format!(
                    "component congruence fails for rank-2 vertices {t} and {t2}: {a} vs {b} mod {p}"
                )));
            }
        }
    }
    Ok(())
}

/// The component adjustment: zero on the component of the chosen normal
/// rank-2 subgroup, the difference of free coordinates elsewhere.
pub fn coton_adjust(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    v: &SectionVector,
) -> Result<VertexWeights> {
    check_adjust_hypotheses(lat, v)?;
    let nv = poset.num_vertices();
    if nv == 0 {
        return Ok(VertexWeights { values: Vec::new() });
    }
    let one = lat.trivial_id();
    let (_, pos) = root_section_positions(lat)?;
    // least normal rank-2 elementary abelian subgroup
    let t0_pos = (0..nv)
        .find(|&i| poset.rank[i] == 2 && lat.normalizer(poset.vertices[i]) == lat.full_id())
        .ok_or_else(|| Error::Internal("nonempty poset without a normal rank-2 subgroup".into()))?;
    let c0 = poset.component[t0_pos];
    let t0 = poset.vertices[t0_pos];
    let v_t0 = v.values[pos[&(t0, one)]];
    let mut y = vec![0i64; nv];
    for i in 0..nv {
        if poset.rank[i] != 2 || poset.component[i] == c0 {
            continue;
        }
        y[i] = v_t0 - v.values[pos[&(poset.vertices[i], one)]];
    }
    let y = VertexWeights { values: y };
    verify_adjustment(lat, poset, v, &y)?;
    Ok(y)
}

/// Conclusions of the adjustment: invariance, equality across rank-3 joins,
/// and the corrected congruence across extraspecial joins.
fn verify_adjustment(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    v: &SectionVector,
    y: &VertexWeights,
) -> Result<()> {
    for (i, &o) in poset.vert_orbits.orbit_of.iter().enumerate() {
        let rep = poset.vert_orbits.reps[o as usize] as usize;
        if y.values[i] != y.values[rep] {
            return Err(Error::Internal(
                "adjustment is not conjugation invariant".into(),
            ));
        }
    }
    let one = lat.trivial_id();
    let (_, pos) = root_section_positions(lat)?;
    let p = lat.group().prime() as i64;
    for (pi, &t) in poset.vertices.iter().enumerate() {
        if poset.rank[pi] != 2 {
            continue;
        }
        for (pj, &t2) in poset.vertices.iter().enumerate() {
            if pj == pi || poset.rank[pj] != 2 {
                continue;
            }
            if !lat.leq(t, lat.normalizer(t2)) {
                continue;
            }
            let prod = lat.product(t, t2)?;
            if lat.quotient_elab_rank(prod, one) == Some(3) {
                if y.values[pi] != y.values[pj] {
                    return Err(Error::Internal(format!(
                        "adjustment differs across a rank-3 join: vertices {t}, {t2}"
                    )));
                }
            } else if lat.quotient_is_xp3(prod, one) {
                let a = y.values[pi] + v.values[pos[&(t, one)]];
                let b = y.values[pj] + v.values[pos[&(t2, one)]];
                if (a - b).rem_euclid(p) != 0 {
                    return Err(Error::Internal(format!(
                        "adjusted congruence fails across an extraspecial join: vertices {t}, {t2}"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlueStatus {
    Glueable,
    Obstructed,
}

/// Full pipeline outcome. Exactly one of `certificate` / `obstruction` is
/// populated, matching the status; the verdict is modulo torsion and
/// endo-trivial classes.
#[derive(Clone, Debug)]
pub struct GlueOutcome {
    pub status: GlueStatus,
    pub cocycle: Cocycle1,
    pub certificate: Option<SyzygyElement>,
    pub obstruction: Option<CycleCert>,
    pub m: Option<VertexWeights>,
    pub y: Option<VertexWeights>,
}

/// Decides glueability of validated data: computes the obstruction cocycle,
/// solves the coboundary equation, assembles and adjusts the coordinate
/// vector, and solves for a global element.
pub fn glue_solve(lat: &SubgroupLattice, poset: &EAPoset, data: &GluingData) -> Result<GlueOutcome> {
    if data.ambient != lat.full_id() {
        return Err(Error::BadSection("the solver runs over the full group".into()));
    }
    match validate(lat, data)? {
        GlueVerdict::Pass => {}
        GlueVerdict::Fail(f) => return Err(Error::InvalidGluingData(f.to_string())),
    }
    let ac = lat.ambient_classes(data.ambient);
    let sigmas = sigma_all(lat, poset, data)?;
    let w = cocycle_from_sigmas(lat, poset, &sigmas)?;
    let m = match solve_coboundary(poset, &w)? {
        CoboundaryOutcome::Obstructed(cert) => {
            return Ok(GlueOutcome {
                status: GlueStatus::Obstructed,
                cocycle: w,
                certificate: None,
                obstruction: Some(cert),
                m: None,
                y: None,
            })
        }
        CoboundaryOutcome::Solved(m) => m,
    };
    // the assembly step needs w_{E,F} = m~_E - m~_F, the negative of the
    // solver's convention delta m = w
    let one = lat.trivial_id();
    let (fam, _pos) = root_section_positions(lat)?;
    let mut v_values = Vec::with_capacity(fam.idxs.len());
    for &idx in &fam.idxs {
        let rec = &lat.e2().sections[idx as usize];
        if rec.s == one {
            let vpos = poset
                .vertex_pos(rec.t)
                .ok_or_else(|| Error::Internal("rank-2 section top missing from poset".into()))?
                as usize;
            let free_coord = coordinate_at(lat, &sigmas[vpos], rec.t, one)?;
            v_values.push(-m.values[vpos] + free_coord);
        } else {
            let u_s = entry_at(lat, &ac, data, rec.s)?;
            v_values.push(coordinate_at(lat, &u_s, rec.t, rec.s)?);
        }
    }
    let v = SectionVector {
        amb: (lat.full_id(), one),
        values: v_values,
    };
    let y = coton_adjust(lat, poset, &v)?;
    let mut v_adj = v.clone();
    for (pos2, &idx) in fam.idxs.iter().enumerate() {
        let rec = &lat.e2().sections[idx as usize];
        if rec.s == one {
            let vpos = poset.vertex_pos(rec.t).unwrap() as usize;
            v_adj.values[pos2] += y.values[vpos];
        }
    }
    let cert = match image_membership(lat, &v_adj) {
        Ok(Membership::Element(x)) => x,
        Ok(Membership::NoSolution(c)) => {
            return Err(Error::Internal(format!(
                "adjusted coordinate vector left the image lattice ({c}); input data: {data:?}"
            )))
        }
        Err(e) => {
            return Err(Error::Internal(format!(
                "adjusted coordinate vector failed the image conditions ({e}); input data: {data:?}"
            )))
        }
    };
    // the certificate must reproduce the data at every section with S != 1
    for (pos2, &idx) in fam.idxs.iter().enumerate() {
        let rec = &lat.e2().sections[idx as usize];
        if rec.s != one {
            let got = coordinate_at(lat, &cert, rec.t, rec.s)?;
            if got != v.values[pos2] {
                return Err(Error::Internal(format!(
                    "certificate disagrees with the data at (T = {}, S = {})",
                    rec.t, rec.s
                )));
            }
        }
    }
    Ok(GlueOutcome {
        status: GlueStatus::Glueable,
        cocycle: w,
        certificate: Some(cert),
        obstruction: None,
        m: Some(m),
        y: Some(y),
    })
}

/// Preimage in A of the center of A/B.
pub fn section_center(lat: &SubgroupLattice, sec: (u32, u32)) -> Result<u32> {
    check_sec(lat, sec)?;
    let (a, b) = sec;
    let g = lat.group();
    let a_elems = lat.elems(a);
    let b_set = &lat.sub(b).elem_set;
    let central: Vec<u32> = a_elems
        .iter()
        .copied()
        .filter(|&x| {
            a_elems
                .iter()
                .all(|&y| b_set.contains(g.comm(x, y) as usize))
        })
        .collect();
    lat.id_of_elems(&central)
        .ok_or_else(|| Error::Internal("central preimage is not a subgroup".into()))
}

/// Searches coordinate-level gluing data supported on a single noncentral
/// order-p class for one whose obstruction class does not vanish.
///
/// Candidates per class are the generating syzygies of the local quotient
/// with vanishing proper deflations: the free orbit and the noncentral
/// order-p orbits.
pub fn find_obstructed_datum(
    lat: &SubgroupLattice,
    poset: &EAPoset,
) -> Result<Option<(GluingData, Cocycle1, CycleCert)>> {
    let p = lat.group().prime();
    let one = lat.trivial_id();
    let z = lat
        .id_of_elems(&lat.group().center_elements())
        .ok_or_else(|| Error::Internal("center not found in lattice".into()))?;
    for class in lat.classes() {
        let q = class[0];
        if lat.order_of(q) != p || q == z || lat.intersection(q, z) != one {
            continue;
        }
        let n = lat.normalizer(q);
        let sec = (n, q);
        let zbar = section_center(lat, sec)?;
        // candidate coset bases: Q itself (the free orbit) and the
        // noncentral order-p subgroups of N/Q up to N-conjugacy
        let acn = lat.ambient_classes(n);
        let mut bases = vec![q];
        for &w in &acn.reps {
            if lat.leq(q, w) && lat.order_of(w) == p * lat.order_of(q) && !lat.leq(w, zbar) {
                bases.push(w);
            }
        }
        for w0 in bases {
            let pat = pattern_of_coset_space(lat, sec, w0)?;
            let mut data = GluingData::zero(lat.full_id());
            data.entries
                .insert(q, SyzygyElement::from_pattern(sec, pat, 1));
            if !validate(lat, &data)?.is_pass() {
                continue;
            }
            let w = obstruction_cocycle(lat, poset, &data)?;
            if let CoboundaryOutcome::Obstructed(cert) = solve_coboundary(poset, &w)? {
                return Ok(Some((data, w, cert)));
            }
        }
    }
    Ok(None)
}

/// Structured report for the extraspecial group of order p^5 and exponent p.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Xp5Report {
    pub p: u32,
    pub group_order: u32,
    pub center_order: u32,
    pub quotient_by_center_rank: u32,
    /// Number of isotropic lines, (p^4 - 1)/(p - 1).
    pub e: i64,
    pub ea_over_center_rank2: usize,
    pub ea_over_center_rank3: usize,
    pub rank2_not_containing_center: usize,
    pub poset_vertices: usize,
    pub poset_edges: usize,
    pub n_components: usize,
    pub h1_invariant_rank: usize,
    pub h1_invariant_torsion: Vec<String>,
    /// 1 - 2e + e(p + 1), which must equal p^4.
    pub rank_identity_lhs: i64,
    pub rank_identity_rhs: i64,
    pub classes_order_p_trivial_center_meet: usize,
    pub order_p_quotients_all_extraspecial: bool,
    pub classes_order_p2_trivial_center_meet: usize,
    pub order_p2_quotients_all_cyclic_of_order_p: bool,
    /// The cokernel of the obstruction map is not computed here.
    pub h_p_cokernel: String,
}

/// Builds the order-p^5 extraspecial group and reports the poset, cohomology
/// and local-quotient facts about it.
pub fn xp5_report(p: u32, cap: u32) -> Result<Xp5Report> {
    if p != 3 && p != 5 {
        return Err(Error::Unsupported(format!(
            "the order-p^5 report is built for p in {{3, 5}}, got {p}"
        )));
    }
    let g = GroupTable::extraspecial(p, 5, cap)?;
    let group_order = g.order();
    let z_elems = g.center_elements();
    let lat = SubgroupLattice::enumerate(g)?;
    let z = lat
        .id_of_elems(&z_elems)
        .ok_or_else(|| Error::Internal("center not in lattice".into()))?;
    let center_order = lat.order_of(z);
    let (qz, _) = lat.quotient_table(lat.full_id(), z)?;
    let quotient_by_center_rank = qz
        .ea_rank()
        .ok_or_else(|| Error::Internal("quotient by center is not elementary abelian".into()))?;
    let e = ((p as i64).pow(4) - 1) / (p as i64 - 1);

    let mut ea2_over_z = 0usize;
    let mut ea3_over_z = 0usize;
    let mut rank2_no_z = 0usize;
    for s in 0..lat.num_subs() as u32 {
        match lat.ea_rank_of(s) {
            Some(2) if lat.leq(z, s) => ea2_over_z += 1,
            Some(2) => rank2_no_z += 1,
            Some(3) if lat.leq(z, s) => ea3_over_z += 1,
            _ => {}
        }
    }

    let poset = build_ea_poset(&lat)?;
    let (h1_rank, h1_torsion) = crate::poset::h1_rank(&poset, true)?;

    let one = lat.trivial_id();
    let mut classes_p = 0usize;
    let mut all_xp3 = true;
    let mut classes_p2 = 0usize;
    let mut all_cyclic = true;
    for class in lat.classes() {
        let q = class[0];
        if q == one || lat.intersection(q, z) != one {
            continue;
        }
        let n = lat.normalizer(q);
        if lat.order_of(q) == p {
            classes_p += 1;
            let (quot, _) = lat.quotient_table(n, q)?;
            if !quot.is_extraspecial_exponent_p() {
                all_xp3 = false;
            }
        } else if lat.order_of(q) == p * p {
            classes_p2 += 1;
            let (quot, _) = lat.quotient_table(n, q)?;
            if !(quot.order() == p && quot.is_cyclic()) {
                all_cyclic = false;
            }
        }
    }

    Ok(Xp5Report {
        p,
        group_order,
        center_order,
        quotient_by_center_rank,
        e,
        ea_over_center_rank2: ea2_over_z,
        ea_over_center_rank3: ea3_over_z,
        rank2_not_containing_center: rank2_no_z,
        poset_vertices: poset.num_vertices(),
        poset_edges: poset.num_edges(),
        n_components: poset.n_components,
        h1_invariant_rank: h1_rank,
        h1_invariant_torsion: h1_torsion.iter().map(|t| t.to_string()).collect(),
        rank_identity_lhs: 1 - 2 * e + e * (p as i64 + 1),
        rank_identity_rhs: (p as i64).pow(4),
        classes_order_p_trivial_center_meet: classes_p,
        order_p_quotients_all_extraspecial: all_xp3,
        classes_order_p2_trivial_center_meet: classes_p2,
        order_p2_quotients_all_cyclic_of_order_p: all_cyclic,
        h_p_cokernel: "image sampling only".into(),
    })
}
