//! Closed-form classification of the degrees with nonzero T¹_{(i)},
//! i = 1,2,3, for a 3D Gorenstein cone, cross-checked degreewise against the
//! vertex/edge/span evaluator, plus the assembly of the computable parts of
//! HH² and HH³.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{in_interior, GorensteinCone, LatticeVector};
use crate::t1::{binom, pairing_box_degrees, T1Context};

/// Hodge-indexed dimensions; only nonzero entries are stored.
pub type Dims = BTreeMap<u8, i64>;

fn dims_from(triple: [i64; 3]) -> Dims {
    let mut d = Dims::new();
    for (i, v) in triple.iter().enumerate() {
        if *v > 0 {
            d.insert(i as u8 + 1, *v);
        }
    }
    d
}

/// A single degree with nonzero dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SporadicEntry {
    pub degree: LatticeVector,
    pub dims: Dims,
    pub labels: Vec<String>,
}

/// The family R = qR* − p·s_j for p ≥ p_min (infinite in p, constant dims).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFamily {
    /// 0-indexed edge.
    pub edge_j: usize,
    pub q: i64,
    pub p_min: i64,
    pub dims: Dims,
}

/// The family R = qR* + p·s_j for 1 ≤ p ≤ p_max, attached to a parallel
/// edge pair at lattice distance d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EFamily {
    pub edge_j: usize,
    pub partner_k: usize,
    pub distance: i64,
    pub q: i64,
    pub p_max: i64,
    pub dims: Dims,
}

#[derive(Debug, Clone, Default)]
pub struct DimensionReport {
    pub sporadic: Vec<SporadicEntry>,
    pub c_families: Vec<CFamily>,
    pub e_families: Vec<EFamily>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Mismatch {
    pub degree: LatticeVector,
    pub hodge: usize,
    pub classifier: i64,
    pub evaluator: i64,
}

fn edge_parallel(cone: &GorensteinCone, j: usize, k: usize) -> bool {
    let dj = cone.edge_vector(j);
    let dk = cone.edge_vector(k);
    // Edges live in the height-0 plane; parallel iff the 2D cross of the
    // projections vanishes (their z-components are 0 after the lift).
    let cx = &dj.coords[0] * &dk.coords[1] - &dj.coords[1] * &dk.coords[0];
    let cy = &dj.coords[1] * &dk.coords[2] - &dj.coords[2] * &dk.coords[1];
    let cz = &dj.coords[2] * &dk.coords[0] - &dj.coords[0] * &dk.coords[2];
    cx.is_zero() && cy.is_zero() && cz.is_zero()
}

fn parallel_pairs(cone: &GorensteinCone) -> Vec<(usize, usize)> {
    let n = cone.n_rays();
    let mut out = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            if edge_parallel(cone, j, k) {
                out.push((j, k));
            }
        }
    }
    out
}

fn edge_len_i64(cone: &GorensteinCone, j: usize) -> i64 {
    cone.edge_length(j)
        .to_string()
        .parse::<i64>()
        .expect("edge length fits i64")
}

/// #{j : ℓ(j) ≥ q} together with the span dimension of the intersection of
/// the per-edge spans for R = qR*: 3 when no edge is long, 2 when the long
/// edges are a single edge or one parallel pair, 1 otherwise.
fn v_and_span(cone: &GorensteinCone, q: i64) -> (i64, i64) {
    let n = cone.n_rays();
    let long: Vec<usize> = (0..n).filter(|&j| edge_len_i64(cone, j) >= q).collect();
    let span = match long.len() {
        0 => 3,
        1 => 2,
        2 if edge_parallel(cone, long[0], long[1]) => 2,
        _ => 1,
    };
    (long.len() as i64, span)
}

/// Dimensions at R = qR*, q ≥ 2, via the count identities
/// dim₁ = v−3+s¹, dim₂ = 2v−3+s², dim₃ = v−1+s³ with s^i = C(span, i).
fn qrstar_dims(cone: &GorensteinCone, q: i64) -> [i64; 3] {
    let (v, s) = v_and_span(cone, q);
    [
        (v - 3 + binom(s, 1)).max(0),
        (2 * v - 3 + binom(s, 2)).max(0),
        (v - 1 + binom(s, 3)).max(0),
    ]
}

/// True when the parallel pair {j,k} is strictly longer than every other
/// edge and q lies in the exceptional range.
fn d_case_applies(cone: &GorensteinCone, q: i64) -> bool {
    for (j, k) in parallel_pairs(cone) {
        let lj = edge_len_i64(cone, j);
        let lk = edge_len_i64(cone, k);
        let others_max = (0..cone.n_rays())
            .filter(|&l| l != j && l != k)
            .map(|l| edge_len_i64(cone, l))
            .max()
            .unwrap_or(0);
        if lj > others_max && lk > others_max && others_max < q && q <= lj.min(lk) {
            return true;
        }
    }
    false
}

/// Smallest p ≥ 1 with qR* − p·s_j outside the interior of σ∨; boundary
/// degrees (some pairing exactly 0) qualify.
pub fn c_family_p_min(cone: &GorensteinCone, j: usize, q: i64) -> i64 {
    let n = cone.n_rays();
    (0..n)
        .filter(|&l| l != j && l != (j + 1) % n)
        .map(|l| {
            let d = cone.ray(l).pair(cone.dual_ray(j));
            debug_assert!(d.is_positive());
            let d: i64 = d.to_string().parse().expect("pairing fits i64");
            (q + d - 1) / d // ceil(q / d)
        })
        .min()
        .expect("cone has at least three rays")
}

/// Closed-form classification of all degrees with nonzero T¹_{(i)}.
pub fn classify(ctx: &T1Context) -> Result<DimensionReport> {
    let cone = &ctx.cone;
    let n = cone.n_rays() as i64;
    let mut report = DimensionReport::default();

    // Case (a): R = R* with dims (N−3, N−3, 0).
    let a_dims = dims_from([n - 3, n - 3, 0]);
    if !a_dims.is_empty() {
        report.sporadic.push(SporadicEntry {
            degree: cone.canonical_degree.clone(),
            dims: a_dims,
            labels: vec!["a".into()],
        });
    }

    // Cases (b)/(d): R = qR* for 2 ≤ q ≤ max ℓ(j).
    let max_len = (0..cone.n_rays())
        .map(|j| edge_len_i64(cone, j))
        .max()
        .unwrap_or(1);
    for q in 2..=max_len {
        let triple = qrstar_dims(cone, q);
        let dims = dims_from(triple);
        if dims.is_empty() {
            continue;
        }
        let (v, _) = v_and_span(cone, q);
        let b_formula = [
            (v - 2).max(0),
            (2 * v - 3).max(0),
            (v - 1).max(0),
        ];
        let mut labels = Vec::new();
        if b_formula == triple {
            labels.push("b".into());
        }
        if d_case_applies(cone, q) {
            labels.push("d".into());
        }
        if labels.is_empty() {
            labels.push("b".into());
        }
        report.sporadic.push(SporadicEntry {
            degree: cone.canonical_degree.scale_i64(q),
            dims,
            labels,
        });
    }

    // Case (c): R = qR* − p·s_j, 2 ≤ q ≤ ℓ(j), p ≥ p_min, dims (1,2,1).
    for j in 0..cone.n_rays() {
        let lj = edge_len_i64(cone, j);
        for q in 2..=lj {
            report.c_families.push(CFamily {
                edge_j: j,
                q,
                p_min: c_family_p_min(cone, j, q),
                dims: dims_from([1, 2, 1]),
            });
        }
    }

    // Case (e): parallel pairs, R = qR* + p·s_j, 1 ≤ q ≤ ℓ(j),
    // 1 ≤ p ≤ (ℓ(k) − q)/d.
    for (j, k) in parallel_pairs(cone) {
        for (base, partner) in [(j, k), (k, j)] {
            let d = cone.ray(base).pair(cone.dual_ray(partner));
            let d2 = cone.ray(partner).pair(cone.dual_ray(base));
            if d != d2 {
                return Err(Error::Invariant(format!(
                    "parallel pair ({},{}) has asymmetric distances",
                    base + 1,
                    partner + 1
                )));
            }
            let d: i64 = d.to_string().parse().expect("distance fits i64");
            let lb = edge_len_i64(cone, base);
            let lp = edge_len_i64(cone, partner);
            for q in 1..=lb {
                let p_max = (lp - q) / d;
                if p_max >= 1 {
                    report.e_families.push(EFamily {
                        edge_j: base,
                        partner_k: partner,
                        distance: d,
                        q,
                        p_max,
                        dims: dims_from([1, 2, 1]),
                    });
                }
            }
        }
    }

    // Interior supplement: degrees qR* − p·s_j that stay interior
    // (1 ≤ p < p_min) can still carry nonzero dims; the closed-form case
    // list does not cover them, so they are evaluated directly.
    let mut extra: Vec<SporadicEntry> = Vec::new();
    for j in 0..cone.n_rays() {
        let lj = edge_len_i64(cone, j);
        for q in 2..=lj {
            for p in 1..c_family_p_min(cone, j, q) {
                let r = cone.symbolic_degree(q, j, p);
                debug_assert!(in_interior(&r, cone));
                let triple = [
                    ctx.t1_dim(&r, 1)?,
                    ctx.t1_dim(&r, 2)?,
                    ctx.t1_dim(&r, 3)?,
                ];
                let dims = dims_from(triple);
                if dims.is_empty() {
                    continue;
                }
                // Skip degrees already covered by an (e)-family.
                if e_family_dims(cone, &r).is_some() {
                    continue;
                }
                if !extra.iter().any(|e| e.degree == r) {
                    extra.push(SporadicEntry {
                        degree: r,
                        dims,
                        labels: vec!["c-int".into()],
                    });
                }
            }
        }
    }
    if !extra.is_empty() {
        report.notes.push(format!(
            "interior degrees qR*−p·s_j with 2 ≤ q ≤ ℓ(j) and 1 ≤ p < p_min carry nonzero \
             dimensions at {} degree(s); these fall outside the closed-form families and are \
             listed with label c-int from the evaluator",
            extra.len()
        ));
        report.sporadic.append(&mut extra);
    }

    // A data-driven note for every multiple of R* the family list alone
    // would omit.
    let omitted: Vec<String> = report
        .sporadic
        .iter()
        .filter(|e| e.labels.iter().any(|l| l == "b" || l == "d"))
        .map(|e| {
            format!(
                "{} (dims {})",
                e.degree,
                e.dims
                    .iter()
                    .map(|(i, d)| format!("i={}:{}", i, d))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    if !omitted.is_empty() {
        report.notes.push(format!(
            "multiples of the canonical degree with nonzero dimensions beyond the (c)-families: {}; \
             summaries listing only the (c)-families omit these",
            omitted.join("; ")
        ));
    }
    report.notes.push(
        "family degrees satisfy ⟨a_j,R⟩ = ⟨a_{j+1},R⟩ = q on their edge; reparameterizations \
         that alter q do not match the pairing table"
            .into(),
    );

    report.sporadic.sort_by(|a, b| a.degree.cmp(&b.degree));
    Ok(report)
}

/// Dims at R when R lies inside an (e)-family; `None` otherwise.
fn e_family_dims(cone: &GorensteinCone, degree: &LatticeVector) -> Option<Dims> {
    let n = cone.n_rays();
    for (j, k) in parallel_pairs(cone) {
        for (base, partner) in [(j, k), (k, j)] {
            let wj = cone.weight(base, degree);
            if wj != cone.weight(base + 1, degree) || !wj.is_positive() {
                continue;
            }
            let q: i64 = wj.to_string().parse().ok()?;
            let diff = degree.sub(&cone.canonical_degree.scale_i64(q));
            let s = cone.dual_ray(base);
            // diff must be a positive integer multiple of s_base.
            let Some(p) = integer_multiple(&diff, s) else {
                continue;
            };
            if p < 1 {
                continue;
            }
            let d: i64 = cone
                .ray(base)
                .pair(cone.dual_ray(partner))
                .to_string()
                .parse()
                .ok()?;
            let lb = edge_len_i64(cone, base);
            let lp = edge_len_i64(cone, partner);
            if 1 <= q && q <= lb && p <= (lp - q) / d {
                return Some(dims_from([1, 2, 1]));
            }
        }
    }
    None
}

/// c with v = c·s when it exists and is integral.
fn integer_multiple(v: &LatticeVector, s: &LatticeVector) -> Option<i64> {
    let mut c: Option<(BigInt, BigInt)> = None; // (num, den) of the ratio
    for (a, b) in v.coords.iter().zip(&s.coords) {
        if b.is_zero() {
            if !a.is_zero() {
                return None;
            }
            continue;
        }
        match &c {
            None => c = Some((a.clone(), b.clone())),
            Some((num, den)) => {
                if a * den != num * b {
                    return None;
                }
            }
        }
    }
    let (num, den) = c?;
    if (&num % &den).is_zero() {
        (num / den).to_string().parse().ok()
    } else {
        None
    }
}

/// The classifier's prediction for a single degree: the (i = 1,2,3) triple
/// plus the case label that produced it.
#[derive(Debug, Clone)]
pub struct DegreePrediction {
    pub dims: [i64; 3],
    pub label: String,
}

pub fn classifier_dim_at(ctx: &T1Context, degree: &LatticeVector) -> Result<[i64; 3]> {
    Ok(classify_degree(ctx, degree)?.dims)
}

pub fn classify_degree(ctx: &T1Context, degree: &LatticeVector) -> Result<DegreePrediction> {
    let cone = &ctx.cone;
    let n = cone.n_rays() as i64;
    let pred = |dims: [i64; 3], label: &str| DegreePrediction {
        dims,
        label: label.to_string(),
    };
    // R = qR*?
    if let Some(q) = integer_multiple(degree, &cone.canonical_degree) {
        return Ok(match q {
            q if q <= 0 => pred([0, 0, 0], "-"),
            1 => pred([(n - 3).max(0), (n - 3).max(0), 0], "a"),
            q => {
                let label = if d_case_applies(cone, q) { "b+d" } else { "b" };
                pred(qrstar_dims(cone, q), label)
            }
        });
    }
    // Look for an edge with equal consecutive pairings; the offset from
    // qR* is then an integer multiple of that edge's dual ray.
    let mut subtract_interior: Option<()> = None;
    for j in 0..cone.n_rays() {
        let wj = cone.weight(j, degree);
        if wj != cone.weight(j + 1, degree) {
            continue;
        }
        let Ok(q) = wj.to_string().parse::<i64>() else {
            continue;
        };
        let diff = degree.sub(&cone.canonical_degree.scale_i64(q));
        let Some(c) = integer_multiple(&diff, cone.dual_ray(j)) else {
            continue;
        };
        if c > 0 {
            // (e)-side.
            if let Some(d) = e_family_dims(cone, degree) {
                let get = |i: u8| d.get(&i).copied().unwrap_or(0);
                return Ok(pred([get(1), get(2), get(3)], "e"));
            }
        } else if c < 0 {
            if !in_interior(degree, cone) {
                // (c)-side.
                let lj = edge_len_i64(cone, j);
                if q >= 2 && q <= lj {
                    return Ok(pred([1, 2, 1], "c"));
                }
                return Ok(pred([0, 0, 0], "-"));
            }
            subtract_interior = Some(());
        }
    }
    if subtract_interior.is_some() {
        // Interior supplement: defer to the evaluator (documented gap in the
        // closed-form case list).
        return Ok(pred(
            [
                ctx.t1_dim(degree, 1)?,
                ctx.t1_dim(degree, 2)?,
                ctx.t1_dim(degree, 3)?,
            ],
            "c-int",
        ));
    }
    Ok(pred([0, 0, 0], "-"))
}

/// Compare the classifier against the evaluator over the scan box: all
/// degrees qR* ± p·s_j with q ≤ q_max, |p| ≤ p_max, plus every lattice
/// degree whose pairings are bounded by q_max.
pub fn crosscheck(ctx: &T1Context, q_max: i64, p_max: i64) -> Result<Vec<Mismatch>> {
    let cone = &ctx.cone;
    let mut degrees: Vec<LatticeVector> = Vec::new();
    for q in 1..=q_max {
        for j in 0..cone.n_rays() {
            for p in -p_max..=p_max {
                degrees.push(cone.symbolic_degree(q, j, p));
            }
        }
    }
    degrees.extend(pairing_box_degrees(cone, q_max));
    degrees.sort();
    degrees.dedup();

    let mut mismatches = Vec::new();
    for r in &degrees {
        let predicted = classifier_dim_at(ctx, r)?;
        for i in 1..=5usize {
            let expected = if i <= 3 { predicted[i - 1] } else { 0 };
            let got = ctx.t1_dim(r, i)?;
            if got != expected {
                mismatches.push(Mismatch {
                    degree: r.clone(),
                    hodge: i,
                    classifier: expected,
                    evaluator: got,
                });
            }
        }
    }
    Ok(mismatches)
}

/// The computable parts of HH² and HH³ assembled from a classification
/// report, with named placeholders for the pieces settled elsewhere.
#[derive(Debug, Clone)]
pub struct HhReport {
    /// T¹_{(1)} degree data entering HH².
    pub hh2_families: Vec<CFamily>,
    pub hh2_e_families: Vec<EFamily>,
    pub hh2_sporadic: Vec<(LatticeVector, i64, Vec<String>)>,
    pub hh2_placeholders: Vec<String>,
    /// T¹_{(2)} degree data entering HH³.
    pub hh3_families: Vec<CFamily>,
    pub hh3_e_families: Vec<EFamily>,
    pub hh3_sporadic: Vec<(LatticeVector, i64, Vec<String>)>,
    pub hh3_placeholders: Vec<String>,
}

pub fn hh_assembly(report: &DimensionReport) -> HhReport {
    let pick = |i: u8| -> Vec<(LatticeVector, i64, Vec<String>)> {
        report
            .sporadic
            .iter()
            .filter_map(|e| {
                e.dims
                    .get(&i)
                    .map(|d| (e.degree.clone(), *d, e.labels.clone()))
            })
            .collect()
    };
    let fam_with = |i: u8| -> Vec<CFamily> {
        report
            .c_families
            .iter()
            .filter(|f| f.dims.contains_key(&i))
            .cloned()
            .collect()
    };
    let efam_with = |i: u8| -> Vec<EFamily> {
        report
            .e_families
            .iter()
            .filter(|f| f.dims.contains_key(&i))
            .cloned()
            .collect()
    };
    HhReport {
        hh2_families: fam_with(1),
        hh2_e_families: efam_with(1),
        hh2_sporadic: pick(1),
        hh2_placeholders: vec!["T0_(2): settled externally".into()],
        hh3_families: fam_with(2),
        hh3_e_families: efam_with(2),
        hh3_sporadic: pick(2),
        hh3_placeholders: vec![
            "T2_(1): settled externally".into(),
            "T0_(3): settled externally".into(),
        ],
    }
}
