//! Serializable report types and parsers for the external interfaces: cone
//! specification files, JSON reports (all versioned with `"schema": 1`) and
//! the fixed-column TSV outputs.

use serde::{Deserialize, Serialize};

use crate::classify::{CFamily, DimensionReport, EFamily, Mismatch, SporadicEntry};
use crate::error::{Error, Result};
use crate::lattice::{cone_over_polygon, dual_cone, GorensteinCone, LatticeVector, QPolyhedron};

pub const SCHEMA_VERSION: u32 = 1;

/// Cone specification file: either {"rays": [[x,y,z],…]} or
/// {"polygon": [[x,y],…]}; integers only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<Vec<i64>>>,
}

impl ConeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<GorensteinCone> {
        match (&self.rays, &self.polygon) {
            (Some(rays), None) => {
                let rays: Vec<LatticeVector> = rays
                    .iter()
                    .map(|r| {
                        if r.len() != 3 {
                            return Err(Error::input("rays must have 3 integer coordinates"));
                        }
                        Ok(LatticeVector::n_from(r))
                    })
                    .collect::<Result<_>>()?;
                dual_cone(&rays)
            }
            (None, Some(polygon)) => cone_over_polygon(polygon),
            _ => Err(Error::input(
                "cone file must contain exactly one of \"rays\" or \"polygon\"",
            )),
        }
    }
}

pub fn load_cone(path: &str) -> Result<GorensteinCone> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {}", path, e)))?;
    ConeSpec::parse(&text)?.build()
}

fn vec_i64(v: &LatticeVector) -> Vec<i64> {
    v.coords_i64()
}

#[derive(Debug, Serialize)]
pub struct ConeReport {
    pub schema: u32,
    pub rays: Vec<Vec<i64>>,
    pub dual_rays: Vec<Vec<i64>>,
    pub canonical_degree: Vec<i64>,
    pub edge_lengths: Vec<i64>,
}

impl ConeReport {
    pub fn new(cone: &GorensteinCone) -> Self {
        ConeReport {
            schema: SCHEMA_VERSION,
            rays: cone.rays.iter().map(vec_i64).collect(),
            dual_rays: cone.dual_rays.iter().map(vec_i64).collect(),
            canonical_degree: vec_i64(&cone.canonical_degree),
            edge_lengths: cone
                .edge_lengths()
                .iter()
                .map(|l| l.to_string().parse().unwrap_or(-1))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct QPolyhedronReport {
    pub schema: u32,
    pub degree: Vec<i64>,
    pub vertex_weights: Vec<i64>,
    /// (ray index, ray, weight): the vertex is ray/weight.
    pub vertices: Vec<(usize, Vec<i64>, i64)>,
    pub compact_edges: Vec<(usize, usize)>,
    pub w: Vec<u8>,
    pub compact: bool,
}

impl QPolyhedronReport {
    pub fn new(q: &QPolyhedron) -> Self {
        QPolyhedronReport {
            schema: SCHEMA_VERSION,
            degree: vec_i64(&q.degree),
            vertex_weights: q
                .vertex_weights
                .iter()
                .map(|w| w.to_string().parse().unwrap_or(0))
                .collect(),
            vertices: q
                .vertices
                .iter()
                .map(|(j, ray, w)| (*j + 1, vec_i64(ray), w.to_string().parse().unwrap_or(0)))
                .collect(),
            compact_edges: q
                .compact_edges
                .iter()
                .map(|(a, b)| (*a + 1, *b + 1))
                .collect(),
            w: q.w_labels.clone(),
            compact: q.compact,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SporadicJson {
    pub degree: Vec<i64>,
    pub dims: std::collections::BTreeMap<u8, i64>,
    pub labels: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CFamilyJson {
    /// 1-indexed edge.
    pub edge: usize,
    pub q: i64,
    pub p_min: i64,
    pub dims: std::collections::BTreeMap<u8, i64>,
}

#[derive(Debug, Serialize)]
pub struct EFamilyJson {
    pub edge: usize,
    pub partner: usize,
    pub distance: i64,
    pub q: i64,
    pub p_max: i64,
    pub dims: std::collections::BTreeMap<u8, i64>,
}

#[derive(Debug, Serialize)]
pub struct MismatchJson {
    pub degree: Vec<i64>,
    pub hodge: usize,
    pub classifier: i64,
    pub evaluator: i64,
}

#[derive(Debug, Serialize)]
pub struct ClassifyJson {
    pub schema: u32,
    pub sporadic: Vec<SporadicJson>,
    pub families: Vec<CFamilyJson>,
    pub e_families: Vec<EFamilyJson>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscheck: Option<CrosscheckJson>,
}

#[derive(Debug, Serialize)]
pub struct CrosscheckJson {
    pub q_max: i64,
    pub p_max: i64,
    pub mismatches: Vec<MismatchJson>,
}

pub fn classify_json(
    report: &DimensionReport,
    crosscheck: Option<(i64, i64, &[Mismatch])>,
) -> ClassifyJson {
    let spor = |e: &SporadicEntry| SporadicJson {
        degree: vec_i64(&e.degree),
        dims: e.dims.clone(),
        labels: e.labels.clone(),
    };
    let cfam = |f: &CFamily| CFamilyJson {
        edge: f.edge_j + 1,
        q: f.q,
        p_min: f.p_min,
        dims: f.dims.clone(),
    };
    let efam = |f: &EFamily| EFamilyJson {
        edge: f.edge_j + 1,
        partner: f.partner_k + 1,
        distance: f.distance,
        q: f.q,
        p_max: f.p_max,
        dims: f.dims.clone(),
    };
    ClassifyJson {
        schema: SCHEMA_VERSION,
        sporadic: report.sporadic.iter().map(spor).collect(),
        families: report.c_families.iter().map(cfam).collect(),
        e_families: report.e_families.iter().map(efam).collect(),
        notes: report.notes.clone(),
        crosscheck: crosscheck.map(|(q_max, p_max, m)| CrosscheckJson {
            q_max,
            p_max,
            mismatches: m
                .iter()
                .map(|x| MismatchJson {
                    degree: vec_i64(&x.degree),
                    hodge: x.hodge,
                    classifier: x.classifier,
                    evaluator: x.evaluator,
                })
                .collect(),
        }),
    }
}

/// Fixed TSV columns for degreewise dimension rows.
pub const T1_TSV_HEADER: &str = "degree_x\tdegree_y\tdegree_z\thodge_i\tdim\tcase_label";

pub fn t1_tsv_row(degree: &LatticeVector, i: usize, dim: i64, label: &str) -> String {
    let c = vec_i64(degree);
    format!("{}\t{}\t{}\t{}\t{}\t{}", c[0], c[1], c[2], i, dim, label)
}

/// Classify report flattened to the fixed TSV columns; families keep their
/// symbolic p in the label.
pub fn classify_tsv(report: &DimensionReport, cone: &GorensteinCone) -> String {
    let mut out = String::from(T1_TSV_HEADER);
    out.push('\n');
    for e in &report.sporadic {
        for (i, d) in &e.dims {
            out.push_str(&t1_tsv_row(&e.degree, *i as usize, *d, &e.labels.join("+")));
            out.push('\n');
        }
    }
    for f in &report.c_families {
        let at = cone.symbolic_degree(f.q, f.edge_j, f.p_min);
        for (i, d) in &f.dims {
            out.push_str(&t1_tsv_row(
                &at,
                *i as usize,
                *d,
                &format!("c(j={},q={},p>={})", f.edge_j + 1, f.q, f.p_min),
            ));
            out.push('\n');
        }
    }
    for f in &report.e_families {
        let at = cone.symbolic_degree(f.q, f.edge_j, -1);
        for (i, d) in &f.dims {
            out.push_str(&t1_tsv_row(
                &at,
                *i as usize,
                *d,
                &format!(
                    "e(j={},k={},q={},1<=p<={})",
                    f.edge_j + 1,
                    f.partner_k + 1,
                    f.q,
                    f.p_max
                ),
            ));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_spec_roundtrip() {
        let spec = ConeSpec::parse(r#"{"rays": [[-1,-1,1],[2,-1,1],[-1,1,1]]}"#).unwrap();
        let cone = spec.build().unwrap();
        assert_eq!(cone.n_rays(), 3);
        let report = ConeReport::new(&cone);
        let text = serde_json::to_string(&report).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["schema"], 1);
        assert_eq!(parsed["dual_rays"][0][0], 0);

        let poly = ConeSpec::parse(r#"{"polygon": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(poly.build().unwrap().n_rays(), 4);

        assert!(ConeSpec::parse(r#"{"rays": [[1,0]]}"#).unwrap().build().is_err());
        assert!(ConeSpec::parse("not json").is_err());
    }
}
