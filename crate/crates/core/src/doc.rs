//! JSON interchange documents for spaces, systems, limits, morphisms and
//! diagrams.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cat::{CisDiagram, CisMorphism};
use crate::cis::{Cis, TailPolicy};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::limit::LimitSpace;
use crate::space::{CtsMap, FinSpace};

pub type IdMap = BTreeMap<String, String>;

/// `{"points": [id...], "min_open": {id: [id...]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub min_open: BTreeMap<String, Vec<String>>,
}

impl SpaceDoc {
    pub fn from_space(s: &FinSpace) -> Self {
        let min_open = (0..s.len())
            .map(|x| (s.id(x).to_string(), s.ids_of(s.min_open(x))))
            .collect();
        SpaceDoc {
            points: s.ids().to_vec(),
            min_open,
        }
    }

    pub fn to_space(&self) -> Result<FinSpace> {
        let mut index = BTreeMap::new();
        for (k, p) in self.points.iter().enumerate() {
            if index.insert(p.as_str(), k).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        if let Some(extra) = self
            .min_open
            .keys()
            .find(|k| !index.contains_key(k.as_str()))
        {
            return Err(Error::UnknownPoint(extra.clone()));
        }
        let sets = self
            .points
            .iter()
            .map(|p| {
                let members = self.min_open.get(p).ok_or_else(|| Error::InvalidMinOpen {
                    point: p.clone(),
                    reason: "no minimal open set given".into(),
                })?;
                members
                    .iter()
                    .map(|m| {
                        index
                            .get(m.as_str())
                            .copied()
                            .ok_or_else(|| Error::UnknownPoint(m.clone()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FinSpace::new(self.points.clone(), sets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TailDoc {
    Stationary { n0: usize },
    Cutoff,
}

impl From<TailPolicy> for TailDoc {
    fn from(t: TailPolicy) -> Self {
        match t {
            TailPolicy::Stationary { n0 } => TailDoc::Stationary { n0 },
            TailPolicy::Cutoff => TailDoc::Cutoff,
        }
    }
}

impl From<TailDoc> for TailPolicy {
    fn from(t: TailDoc) -> Self {
        match t {
            TailDoc::Stationary { n0 } => TailPolicy::Stationary { n0 },
            TailDoc::Cutoff => TailPolicy::Cutoff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub space: SpaceDoc,
    pub gluing_set: Vec<String>,
    /// Absent on the last stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<IdMap>,
}

/// `{"stages": [...], "tail": {"kind": "stationary", "n0": k} | {"kind": "cutoff"}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CisDoc {
    pub stages: Vec<StageDoc>,
    pub tail: TailDoc,
}

impl CisDoc {
    pub fn from_cis(c: &Cis) -> Self {
        let stages = (0..c.len())
            .map(|i| {
                let s = &c.stages()[i];
                let x = s.space();
                let f = if i + 1 < c.len() {
                    let next = c.space(i + 1).expect("represented");
                    Some(
                        s.gluing_set()
                            .iter()
                            .map(|y| {
                                let t = c.glue(i, y).expect("represented").expect("defined on Y");
                                (x.id(y).to_string(), next.id(t).to_string())
                            })
                            .collect(),
                    )
                } else {
                    None
                };
                StageDoc {
                    space: SpaceDoc::from_space(x),
                    gluing_set: x.ids_of(s.gluing_set()),
                    gluing: f,
                }
            })
            .collect();
        CisDoc {
            stages,
            tail: c.tail().into(),
        }
    }

    pub fn to_cis(&self) -> Result<Cis> {
        let n = self.stages.len();
        if n == 0 {
            return Err(Error::Malformed("a system needs at least one stage".into()));
        }
        let spaces = self
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.space
                    .to_space()
                    .map_err(|e| Error::Malformed(format!("stage {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.stages[n - 1].gluing.is_some() {
            return Err(Error::Malformed(
                "the last stage has no successor, so no f".into(),
            ));
        }
        let ys: Vec<Vec<String>> = self.stages.iter().map(|s| s.gluing_set.clone()).collect();
        let maps: Vec<IdMap> = self.stages[..n - 1]
            .iter()
            .map(|s| s.gluing.clone().unwrap_or_default())
            .collect();
        Cis::from_ids(spaces, &ys, &maps, self.tail.into())
    }
}

/// `{"space": <space>, "embeddings": [{id: id}...]}` aligned with the stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitDoc {
    pub space: SpaceDoc,
    pub embeddings: Vec<IdMap>,
}

impl LimitDoc {
    pub fn from_limit(ls: &LimitSpace) -> Self {
        LimitDoc {
            space: SpaceDoc::from_space(ls.space()),
            embeddings: ls.embeddings().iter().map(CtsMap::to_id_map).collect(),
        }
    }

    /// Needs the system for the stage spaces.
    pub fn to_limit(&self, c: &Cis) -> Result<LimitSpace> {
        let x = self.space.to_space()?;
        if self.embeddings.len() != c.len() {
            return Err(Error::Mismatch(format!(
                "{} stage maps for {} stages",
                self.embeddings.len(),
                c.len()
            )));
        }
        let embeddings = self
            .embeddings
            .iter()
            .enumerate()
            .map(|(i, m)| CtsMap::from_ids(c.space(i)?.clone(), x.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        LimitSpace::new(x, embeddings)
    }
}

/// `{"source": <cis>, "target": <cis>, "maps": [{id: id}...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: CisDoc,
    pub target: CisDoc,
    pub maps: Vec<IdMap>,
}

impl MorphismDoc {
    pub fn from_morphism(m: &CisMorphism) -> Self {
        MorphismDoc {
            source: CisDoc::from_cis(m.source()),
            target: CisDoc::from_cis(m.target()),
            maps: m.maps().iter().map(CtsMap::to_id_map).collect(),
        }
    }

    pub fn to_morphism(&self) -> Result<CisMorphism> {
        CisMorphism::from_ids(self.source.to_cis()?, self.target.to_cis()?, &self.maps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub maps: Vec<IdMap>,
}

/// `{"objects": [<cis>...], "arrows": [{"maps": [...]}...]}`; arrow `k` runs
/// from object `k` to object `k+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub objects: Vec<CisDoc>,
    pub arrows: Vec<ArrowDoc>,
}

impl DiagramDoc {
    pub fn from_diagram(d: &CisDiagram) -> Self {
        DiagramDoc {
            objects: d.objects().iter().map(CisDoc::from_cis).collect(),
            arrows: d
                .arrows()
                .iter()
                .map(|a| ArrowDoc {
                    maps: a.maps().iter().map(CtsMap::to_id_map).collect(),
                })
                .collect(),
        }
    }

    pub fn to_diagram(&self) -> Result<CisDiagram> {
        let objects = self
            .objects
            .iter()
            .map(CisDoc::to_cis)
            .collect::<Result<Vec<_>>>()?;
        if self.arrows.len() + 1 != objects.len() {
            return Err(Error::Mismatch(format!(
                "{} objects need {} arrows",
                objects.len(),
                objects.len().saturating_sub(1)
            )));
        }
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, a)| {
                CisMorphism::from_ids(objects[k].clone(), objects[k + 1].clone(), &a.maps)
            })
            .collect::<Result<Vec<_>>>()?;
        CisDiagram::new(objects, arrows)
    }
}

/// A matrix as a list of 0/1 rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u8>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &Gf2Matrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }

    pub fn to_matrix(&self) -> Result<Gf2Matrix> {
        if self.entries.len() != self.rows {
            return Err(Error::Malformed(format!(
                "{} rows listed, {} declared",
                self.entries.len(),
                self.rows
            )));
        }
        Gf2Matrix::from_rows(&self.entries, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build_example, sphere_truncation_diagram, GalleryId};
    use crate::limit::build_fundamental;

    #[test]
    fn space_round_trip_and_diagnostics() {
        let s = crate::gallery::circle();
        let doc = SpaceDoc::from_space(&s);
        assert_eq!(doc.to_space().unwrap(), s);
        let ok: SpaceDoc = serde_json::from_str(
            r#"{"points": ["a", "b"], "min_open": {"a": ["a", "b"], "b": ["b"]}}"#,
        )
        .unwrap();
        assert_eq!(ok.to_space().unwrap().len(), 2);
        let bad: SpaceDoc =
            serde_json::from_str(r#"{"points": ["a", "b"], "min_open": {"a": ["b"], "b": ["b"]}}"#)
                .unwrap();
        match bad.to_space() {
            Err(Error::InvalidMinOpen { point, .. }) => assert_eq!(point, "a"),
            other => panic!("{other:?}"),
        }
        let missing: SpaceDoc =
            serde_json::from_str(r#"{"points": ["a"], "min_open": {}}"#).unwrap();
        assert!(matches!(
            missing.to_space(),
            Err(Error::InvalidMinOpen { .. })
        ));
    }

    #[test]
    fn cis_limit_and_diagram_round_trip() {
        for id in [
            GalleryId::SphereChain(2),
            GalleryId::NonSemicomponible,
            GalleryId::StationarySphere(1),
        ] {
            let c = build_example(id).unwrap();
            let doc = CisDoc::from_cis(&c);
            let text = serde_json::to_string(&doc).unwrap();
            let back: CisDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_cis().unwrap(), c);
            let ls = build_fundamental(&c).unwrap();
            let ld = LimitDoc::from_limit(&ls);
            assert_eq!(ld.to_limit(&c).unwrap(), ls);
        }
        let d = sphere_truncation_diagram(2).unwrap();
        let dd = DiagramDoc::from_diagram(&d);
        assert_eq!(dd.to_diagram().unwrap(), d);
    }

    #[test]
    fn tail_is_tagged() {
        let t = serde_json::to_string(&TailDoc::Stationary { n0: 2 }).unwrap();
        assert_eq!(t, r#"{"kind":"stationary","n0":2}"#);
        let c: TailDoc = serde_json::from_str(r#"{"kind":"cutoff"}"#).unwrap();
        assert_eq!(c, TailDoc::Cutoff);
    }
}
