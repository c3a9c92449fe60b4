//! External JSON formats. Subgroups are always written as sorted element
//! lists, never internal ids, so files stay portable across enumeration-order
//! changes. All writers are deterministic.

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::glue::{GlueOutcome, GlueStatus, GluingData};
use crate::group::GroupTable;
use crate::lattice::SubgroupLattice;
use crate::poset::EAPoset;
use crate::syzygy::{pattern_of_coset_space, rel_family, Sec, SectionVector, SyzygyElement};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub prime: u32,
    pub order: u32,
    pub table: Vec<Vec<u32>>,
}

pub fn group_to_json(g: &GroupTable) -> GroupJson {
    let n = g.order() as usize;
    GroupJson {
        prime: g.prime(),
        order: g.order(),
        table: (0..n)
            .map(|i| g.table()[i * n..(i + 1) * n].to_vec())
            .collect(),
    }
}

pub fn group_from_json(j: &GroupJson, cap: u32) -> Result<GroupTable> {
    if j.table.len() != j.order as usize || j.table.iter().any(|r| r.len() != j.order as usize) {
        return Err(Error::NotAGroup("table shape does not match order".into()));
    }
    let flat: Vec<u32> = j.table.iter().flatten().copied().collect();
    GroupTable::from_table(j.prime, flat, cap)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyzygyTermJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_base: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<Vec<u32>>>,
    pub coeff: i64,
}

/// Terms of an element; a term is either a coset-space pattern given by its
/// base subgroup or an explicit member list.
pub type SyzygyJson = Vec<SyzygyTermJson>;

pub fn syzygy_to_json(lat: &SubgroupLattice, e: &SyzygyElement) -> Result<SyzygyJson> {
    let mut out = Vec::new();
    for (pat, coeff) in e.terms() {
        // detect a principal pattern: it equals the coset pattern of one of
        // its members of maximal order
        let members: Vec<u32> = pat.iter().map(|w| w as u32).collect();
        let max_order = members.iter().map(|&w| lat.order_of(w)).max().unwrap();
        let mut base = None;
        for &w in &members {
            if lat.order_of(w) == max_order && pattern_of_coset_space(lat, e.sec, w)? == *pat {
                base = Some(w);
                break;
            }
        }
        out.push(match base {
            Some(w) => SyzygyTermJson {
                coset_base: Some(lat.elems(w).to_vec()),
                pattern: None,
                coeff,
            },
            None => SyzygyTermJson {
                coset_base: None,
                pattern: Some(members.iter().map(|&w| lat.elems(w).to_vec()).collect()),
                coeff,
            },
        });
    }
    Ok(out)
}

pub fn syzygy_from_json(lat: &SubgroupLattice, sec: Sec, j: &SyzygyJson) -> Result<SyzygyElement> {
    let mut e = SyzygyElement::zero(sec);
    for term in j {
        match (&term.coset_base, &term.pattern) {
            (Some(elems), None) => {
                let x0 = lat.id_of_elems(elems).ok_or(Error::NotASubgroup)?;
                e.add_term(pattern_of_coset_space(lat, sec, x0)?, term.coeff);
            }
            (None, Some(member_lists)) => {
                let mut pat = BitSet::new(lat.num_subs());
                for elems in member_lists {
                    let w = lat.id_of_elems(elems).ok_or(Error::NotASubgroup)?;
                    pat.insert(w as usize);
                }
                validate_pattern(lat, sec, &pat)?;
                e.add_term(pat, term.coeff);
            }
            _ => {
                return Err(Error::InvalidGluingData(
                    "a term needs exactly one of coset_base / pattern".into(),
                ))
            }
        }
    }
    Ok(e)
}

/// Explicit patterns must be downward- and conjugation-closed families of
/// subgroups between the kernel and the ambient subgroup.
fn validate_pattern(lat: &SubgroupLattice, sec: Sec, pat: &BitSet) -> Result<()> {
    let (a, b) = sec;
    for w in pat.iter() {
        let w = w as u32;
        if !lat.leq(b, w) || !lat.leq(w, a) {
            return Err(Error::InvalidGluingData(
                "pattern member outside the section interval".into(),
            ));
        }
        for &v in lat.below(w) {
            if lat.leq(b, v) && !pat.contains(v as usize) {
                return Err(Error::InvalidGluingData(
                    "pattern is not downward closed".into(),
                ));
            }
        }
        for &g in lat.elems(a) {
            if !pat.contains(lat.conj_sub(g, w) as usize) {
                return Err(Error::InvalidGluingData(
                    "pattern is not conjugation closed".into(),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionValueJson {
    #[serde(rename = "T")]
    pub t: Vec<u32>,
    #[serde(rename = "S")]
    pub s: Vec<u32>,
    pub value: i64,
}

pub fn section_vector_to_json(
    lat: &SubgroupLattice,
    v: &SectionVector,
) -> Result<Vec<SectionValueJson>> {
    let fam = rel_family(lat, v.amb)?;
    Ok(fam
        .idxs
        .iter()
        .zip(&v.values)
        .map(|(&i, &value)| {
            let r = &lat.e2().sections[i as usize];
            SectionValueJson {
                t: lat.elems(r.t).to_vec(),
                s: lat.elems(r.s).to_vec(),
                value,
            }
        })
        .collect())
}

/// Reads a full-group section vector; every family member must be covered
/// exactly once.
pub fn section_vector_from_json(
    lat: &SubgroupLattice,
    j: &[SectionValueJson],
) -> Result<SectionVector> {
    let amb = (lat.full_id(), lat.trivial_id());
    let fam = rel_family(lat, amb)?;
    let mut values = vec![None; fam.idxs.len()];
    for item in j {
        let t = lat.id_of_elems(&item.t).ok_or(Error::NotASubgroup)?;
        let s = lat.id_of_elems(&item.s).ok_or(Error::NotASubgroup)?;
        let pos = fam
            .idxs
            .iter()
            .position(|&i| {
                let r = &lat.e2().sections[i as usize];
                (r.t, r.s) == (t, s)
            })
            .ok_or_else(|| Error::BadSection(format!("({t}, {s}) is not a rank-2 section")))?;
        if values[pos].replace(item.value).is_some() {
            return Err(Error::BadSection(format!("section ({t}, {s}) listed twice")));
        }
    }
    let values: Option<Vec<i64>> = values.into_iter().collect();
    match values {
        Some(values) => Ok(SectionVector { amb, values }),
        None => Err(Error::BadSection("section vector is not total on the family".into())),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingEntryJson {
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    pub element: SyzygyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingDataJson {
    pub group: GroupJson,
    pub entries: Vec<GluingEntryJson>,
}

pub fn gluing_to_json(lat: &SubgroupLattice, data: &GluingData) -> Result<GluingDataJson> {
    let mut entries = Vec::new();
    for (&q, e) in &data.entries {
        entries.push(GluingEntryJson {
            q: lat.elems(q).to_vec(),
            element: syzygy_to_json(lat, e)?,
        });
    }
    Ok(GluingDataJson {
        group: group_to_json(lat.group()),
        entries,
    })
}

/// Reads gluing data over the full group of the lattice; the embedded group
/// must match the lattice's group exactly.
pub fn gluing_from_json(lat: &SubgroupLattice, j: &GluingDataJson) -> Result<GluingData> {
    let g = group_from_json(&j.group, u32::MAX)?;
    if g != *lat.group() {
        return Err(Error::InvalidGluingData(
            "embedded group differs from the working group".into(),
        ));
    }
    let mut data = GluingData::zero(lat.full_id());
    for entry in &j.entries {
        let q = lat.id_of_elems(&entry.q).ok_or(Error::NotASubgroup)?;
        let sec = (lat.normalizer_in(lat.full_id(), q), q);
        let e = syzygy_from_json(lat, sec, &entry.element)?;
        if data.entries.insert(q, e).is_some() {
            return Err(Error::InvalidGluingData(format!(
                "duplicate entry for subgroup {q}"
            )));
        }
    }
    Ok(data)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoebiusEntryJson {
    pub a: u32,
    pub b: u32,
    pub mu: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub subgroups: Vec<Vec<u32>>,
    pub inclusions: Vec<[u32; 2]>,
    pub orbits: Vec<Vec<u32>>,
    pub normalizers: Vec<u32>,
    pub moebius: Vec<MoebiusEntryJson>,
}

pub fn lattice_to_json(lat: &SubgroupLattice) -> Result<LatticeJson> {
    let n = lat.num_subs() as u32;
    let mut inclusions = Vec::new();
    let mut moebius = Vec::new();
    for a in 0..n {
        for &b in lat.above(a) {
            inclusions.push([a, b]);
            moebius.push(MoebiusEntryJson {
                a,
                b,
                mu: lat.moebius(a, b)?,
            });
        }
    }
    Ok(LatticeJson {
        subgroups: (0..n).map(|i| lat.elems(i).to_vec()).collect(),
        inclusions,
        orbits: lat.classes().to_vec(),
        normalizers: (0..n).map(|i| lat.normalizer(i)).collect(),
        moebius,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetVertexJson {
    pub subgroup: u32,
    pub elements: Vec<u32>,
    pub rank: u32,
    pub component: u32,
    pub orbit: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub vertices: Vec<PosetVertexJson>,
    pub edges: Vec<[u32; 2]>,
    pub n_components: usize,
    pub big_component: Option<u32>,
}

pub fn poset_to_json(lat: &SubgroupLattice, poset: &EAPoset) -> PosetJson {
    PosetJson {
        vertices: poset
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &s)| PosetVertexJson {
                subgroup: s,
                elements: lat.elems(s).to_vec(),
                rank: poset.rank[i],
                component: poset.component[i],
                orbit: poset.vert_orbits.orbit_of[i],
            })
            .collect(),
        edges: poset.edges.iter().map(|&(a, b)| [a, b]).collect(),
        n_components: poset.n_components,
        big_component: poset.big_component,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleEdgeJson {
    #[serde(rename = "E")]
    pub e: Vec<u32>,
    #[serde(rename = "F")]
    pub f: Vec<u32>,
    pub w: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycleStepJson {
    #[serde(rename = "E")]
    pub e: Vec<u32>,
    #[serde(rename = "F")]
    pub f: Vec<u32>,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexValueJson {
    pub vertex: Vec<u32>,
    pub value: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub status: GlueStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SyzygyJson>,
    pub cocycle: Vec<CocycleEdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_cycle: Option<Vec<CycleStepJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_sum: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<VertexValueJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<VertexValueJson>>,
}

pub fn outcome_to_json(
    lat: &SubgroupLattice,
    poset: &EAPoset,
    out: &GlueOutcome,
) -> Result<OutcomeJson> {
    let edge_json = |k: usize| {
        let (i, j) = poset.edges[k];
        (
            lat.elems(poset.vertices[i as usize]).to_vec(),
            lat.elems(poset.vertices[j as usize]).to_vec(),
        )
    };
    let weights_json = |wts: &crate::poset::VertexWeights| {
        wts.values
            .iter()
            .enumerate()
            .map(|(i, &value)| VertexValueJson {
                vertex: lat.elems(poset.vertices[i]).to_vec(),
                value,
            })
            .collect::<Vec<_>>()
    };
    Ok(OutcomeJson {
        status: out.status,
        certificate: out
            .certificate
            .as_ref()
            .map(|c| syzygy_to_json(lat, c))
            .transpose()?,
        cocycle: out
            .cocycle
            .values
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let (e, f) = edge_json(k);
                CocycleEdgeJson { e, f, w }
            })
            .collect(),
        obstruction_cycle: out.obstruction.as_ref().map(|c| {
            c.steps
                .iter()
                .map(|&(k, sign)| {
                    let (e, f) = edge_json(k as usize);
                    CycleStepJson { e, f, sign }
                })
                .collect()
        }),
        obstruction_sum: out.obstruction.as_ref().map(|c| c.sum),
        m: out.m.as_ref().map(&weights_json),
        y: out.y.as_ref().map(&weights_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use crate::syzygy::{coordinates, random_element};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_roundtrip() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let j = group_to_json(&g);
        let g2 = group_from_json(&j, DEFAULT_CAP).unwrap();
        assert_eq!(g, g2);
        let text = serde_json::to_string(&j).unwrap();
        let text2 = serde_json::to_string(&group_to_json(&g2)).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn group_json_rejects_bad_shape() {
        let j = GroupJson {
            prime: 3,
            order: 3,
            table: vec![vec![0, 1], vec![1, 0]],
        };
        assert!(group_from_json(&j, DEFAULT_CAP).is_err());
    }

    #[test]
    fn syzygy_roundtrip() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let lat = SubgroupLattice::enumerate(g).unwrap();
        let sec = (lat.full_id(), lat.trivial_id());
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let e = random_element(&lat, sec, &mut rng, 4, 3).unwrap();
            let j = syzygy_to_json(&lat, &e).unwrap();
            // random elements are built from coset patterns
            assert!(j.iter().all(|t| t.coset_base.is_some()));
            let e2 = syzygy_from_json(&lat, sec, &j).unwrap();
            assert_eq!(e, e2);
        }
    }

    #[test]
    fn explicit_pattern_roundtrip_and_validation() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let lat = SubgroupLattice::enumerate(g).unwrap();
        let sec = (lat.full_id(), lat.trivial_id());
        // a non-principal pattern: union of two incomparable coset patterns
        let z = lat.id_of_elems(&lat.group().center_elements()).unwrap();
        let r = (0..lat.num_subs() as u32)
            .find(|&i| lat.order_of(i) == 3 && i != z)
            .unwrap();
        let mut pat = pattern_of_coset_space(&lat, sec, z).unwrap();
        pat.union_with(&pattern_of_coset_space(&lat, sec, r).unwrap());
        let e = SyzygyElement::from_pattern(sec, pat, 2);
        let j = syzygy_to_json(&lat, &e).unwrap();
        assert!(j[0].pattern.is_some());
        let e2 = syzygy_from_json(&lat, sec, &j).unwrap();
        assert_eq!(e, e2);
        assert_eq!(
            coordinates(&lat, &e).unwrap(),
            coordinates(&lat, &e2).unwrap()
        );
        // a non-closed member list is rejected
        let bad = vec![SyzygyTermJson {
            coset_base: None,
            pattern: Some(vec![lat.elems(z).to_vec()]),
            coeff: 1,
        }];
        assert!(syzygy_from_json(&lat, sec, &bad).is_err());
    }

    #[test]
    fn gluing_roundtrip() {
        let g = GroupTable::extraspecial(3, 3, DEFAULT_CAP).unwrap();
        let lat = SubgroupLattice::enumerate(g).unwrap();
        let sec = (lat.full_id(), lat.trivial_id());
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let e = random_element(&lat, sec, &mut rng, 3, 3).unwrap();
        let data = crate::glue::data_of_element(&lat, &e).unwrap();
        let j = gluing_to_json(&lat, &data).unwrap();
        let data2 = gluing_from_json(&lat, &j).unwrap();
        assert_eq!(data.entries.len(), data2.entries.len());
        for (q, v) in &data.entries {
            assert_eq!(v, &data2.entries[q]);
        }
        // deterministic bytes
        let t1 = serde_json::to_string_pretty(&j).unwrap();
        let t2 = serde_json::to_string_pretty(&gluing_to_json(&lat, &data2).unwrap()).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn section_vector_roundtrip() {
        let g = GroupTable::elementary_abelian(3, 3, DEFAULT_CAP).unwrap();
        let lat = SubgroupLattice::enumerate(g).unwrap();
        let sec = (lat.full_id(), lat.trivial_id());
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let e = random_element(&lat, sec, &mut rng, 3, 3).unwrap();
        let v = coordinates(&lat, &e).unwrap();
        let j = section_vector_to_json(&lat, &v).unwrap();
        let v2 = section_vector_from_json(&lat, &j).unwrap();
        assert_eq!(v, v2);
        // dropping a section makes it rejected
        assert!(section_vector_from_json(&lat, &j[1..]).is_err());
    }
}
