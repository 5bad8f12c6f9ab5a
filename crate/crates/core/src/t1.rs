//! The degreewise T¹ dimension formula for 3D Gorenstein cones.
//!
//! Everything reduces to pairings of the rays with the degree: the vertex
//! terms V^i_j, the compact-edge terms Q^i_{jk} (through the lattice lengths
//! and the edge-surface T¹), and the correction s^i built from spans of the
//! sets K^R_{a_j} ∩ K^R_{a_{j+1}}. The quotient-lattice data of the edge
//! surfaces is never materialized; the pairing criterion replaces it.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{GorensteinCone, LatticeVector, WLabel};
use crate::linalg::{QMatrix, Rat};
use crate::toric::SemigroupAlgebra;

/// C(a, b) with the convention that a negative or overflowing top index
/// gives 0.
pub fn binom(a: i64, b: i64) -> i64 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let mut out = 1i64;
    for k in 0..b {
        out = out * (a - k) / (k + 1);
    }
    out
}

/// Evaluator for one cone, caching the Λ-window enumerations used by the
/// span computations.
pub struct T1Context {
    pub cone: GorensteinCone,
    windows: RefCell<BTreeMap<i64, Rc<Vec<LatticeVector>>>>,
}

impl T1Context {
    pub fn new(cone: GorensteinCone) -> Self {
        T1Context {
            cone,
            windows: RefCell::new(BTreeMap::new()),
        }
    }

    fn window(&self, bound: i64) -> Result<Rc<Vec<LatticeVector>>> {
        if let Some(w) = self.windows.borrow().get(&bound) {
            return Ok(w.clone());
        }
        let alg = SemigroupAlgebra::from_cone(&self.cone, bound)?;
        let w = Rc::new(alg.window_basis);
        self.windows.borrow_mut().insert(bound, w.clone());
        Ok(w)
    }

    /// dim T¹ of the edge surface spanned by a_j, a_{j+1} in degree −R̄:
    /// 1 iff 2 ≤ ⟨a_j,R⟩ = ⟨a_{j+1},R⟩ ≤ ℓ(j).
    pub fn edge_surface_t1(&self, j: usize, degree: &LatticeVector) -> u8 {
        let wj = self.cone.weight(j, degree);
        let wj1 = self.cone.weight(j + 1, degree);
        let two = BigInt::from(2);
        if wj == wj1 && wj >= two && wj <= self.cone.edge_length(j) {
            1
        } else {
            0
        }
    }

    /// dim sp_k K̄ in the rank-2 edge lattice: max{0, W_j+W_{j+1}−2−t}.
    pub fn edge_span_dim_2d(&self, j: usize, degree: &LatticeVector) -> i64 {
        let wj = WLabel::from_weight(&self.cone.weight(j, degree)).as_u8() as i64;
        let wj1 = WLabel::from_weight(&self.cone.weight(j + 1, degree)).as_u8() as i64;
        let t = self.edge_surface_t1(j, degree) as i64;
        (wj + wj1 - 2 - t).max(0)
    }

    /// The span of K^R_{a_j} ∩ K^R_{a_{j+1}} inside M⊗k for compact Q(R),
    /// described by linear constraint rows (N-side vectors); `None` means
    /// the full space.
    fn edge_span_constraints(&self, j: usize, degree: &LatticeVector) -> Result<Option<Vec<Vec<Rat>>>> {
        let n = self.cone.n_rays();
        let wj = self.cone.weight(j, degree);
        let wj1 = self.cone.weight(j + 1, degree);
        debug_assert!(wj.is_positive() && wj1.is_positive(), "compact edges only");
        let t = self.edge_surface_t1(j, degree);
        let z2 = self.edge_span_dim_2d(j, degree);
        // The dual ray s_j always lies in K∩K for a compact edge, so the 3D
        // span dimension is the 2D quotient dimension plus one.
        match z2 {
            2 => Ok(None),
            1 if wj == wj1 && wj > BigInt::one() && t == 1 => {
                // The 2-plane {c : ⟨c,a_j⟩ = ⟨c,a_{j+1}⟩}, spanned by s_j
                // and R*.
                Ok(Some(vec![self.cone.ray(j).sub(self.cone.ray(j + 1)).to_rat()]))
            }
            0 => {
                // Span is the line k·s_j: two constraint rows orthogonal to
                // s_j, taken from the nullspace of its coordinate row.
                let m = QMatrix::from_rows(vec![self.cone.dual_ray(j).to_rat()]);
                Ok(Some(m.nullspace()))
            }
            _ => {
                // Mixed vertex labels: enumerate K∩K in a growing window and
                // take exact constraints from the observed span.
                let target = (z2 + 1) as usize;
                let mut bound: i64 = 8 + 4 * n as i64
                    + self
                        .cone
                        .weights(degree)
                        .iter()
                        .map(|w| w.abs().to_string().parse::<i64>().unwrap_or(64).min(64))
                        .sum::<i64>();
                for _ in 0..4 {
                    let window = self.window(bound)?;
                    let pts: Vec<Vec<Rat>> = window
                        .iter()
                        .filter(|r| {
                            self.cone.ray(j).pair(r) < wj && self.cone.ray(j + 1).pair(r) < wj1
                        })
                        .map(|r| r.to_rat())
                        .collect();
                    let mat = QMatrix::from_rows(pts.clone());
                    if !pts.is_empty() && mat.rank() == target {
                        // Constraints = nullspace of the span basis.
                        return Ok(Some(mat.nullspace()));
                    }
                    bound *= 2;
                }
                Err(Error::Invariant(format!(
                    "edge {} span enumeration did not stabilize at degree {}",
                    j + 1,
                    degree
                )))
            }
        }
    }

    /// dim_k of the intersection over all boundary edges of sp_k K^R_{j,j+1}
    /// for a compact Q(R).
    pub fn span_intersection_dim(&self, degree: &LatticeVector) -> Result<usize> {
        if !crate::lattice::in_interior(degree, &self.cone) {
            return Err(Error::Contract(
                "span intersection requested for non-compact Q(R)".into(),
            ));
        }
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for j in 0..self.cone.n_rays() {
            if let Some(mut cs) = self.edge_span_constraints(j, degree)? {
                rows.append(&mut cs);
            }
        }
        if rows.is_empty() {
            return Ok(3);
        }
        Ok(3 - QMatrix::from_rows(rows).rank())
    }

    /// s^i_{Q(R)}: C(span dim, i) for compact Q(R), 0 otherwise.
    pub fn s_i(&self, degree: &LatticeVector, i: usize) -> Result<i64> {
        if !crate::lattice::in_interior(degree, &self.cone) {
            return Ok(0);
        }
        let d = self.span_intersection_dim(degree)?;
        Ok(binom(d as i64, i as i64))
    }

    /// dim T¹_{(i)}(−R) by the vertex/edge/span formula (ambient dim 3).
    pub fn t1_dim(&self, degree: &LatticeVector, i: usize) -> Result<i64> {
        let n = self.cone.n_rays();
        let ii = i as i64;
        let mut total: i64 = 0;
        for j in 0..n {
            let w = self.cone.weight(j, degree);
            total += match WLabel::from_weight(&w) {
                WLabel::Two => binom(3, ii),
                WLabel::One => binom(2, ii),
                WLabel::Zero => 0,
            };
        }
        for j in 0..n {
            let wj = self.cone.weight(j, degree);
            let wk = self.cone.weight(j + 1, degree);
            if wj >= BigInt::one() && wk >= BigInt::one() {
                let labels = WLabel::from_weight(&wj).as_u8() as i64
                    + WLabel::from_weight(&wk).as_u8() as i64;
                let t = self.edge_surface_t1(j, degree) as i64;
                total -= binom(labels - 1 - t, ii);
            }
        }
        total -= binom(3, ii);
        total += self.s_i(degree, i)?;
        Ok(total.max(0))
    }

    /// Certified-zero prefilter: true when all consecutive pairings differ,
    /// which forces T¹_{(i)}(−R) = 0 for every i.
    pub fn vanishing_prefilter(&self, degree: &LatticeVector) -> bool {
        let n = self.cone.n_rays();
        (0..n).all(|j| self.cone.weight(j, degree) != self.cone.weight(j + 1, degree))
    }
}

/// Convenience wrappers mirroring the operation names.
pub fn edge_surface_t1(cone: &GorensteinCone, j: usize, degree: &LatticeVector) -> u8 {
    T1Context::new(cone.clone()).edge_surface_t1(j, degree)
}

pub fn t1_dim(cone: &GorensteinCone, degree: &LatticeVector, i: usize) -> Result<i64> {
    T1Context::new(cone.clone()).t1_dim(degree, i)
}

/// Degrees R with every |⟨a_j, R⟩| ≤ bound, enumerated through pairings
/// against three independent rays.
pub fn pairing_box_degrees(cone: &GorensteinCone, bound: i64) -> Vec<LatticeVector> {
    let n = cone.n_rays();
    // Find three independent rays.
    let mut base: Vec<usize> = vec![0];
    for j in 1..n {
        let mut rows: Vec<Vec<Rat>> = base.iter().map(|&b| cone.ray(b).to_rat()).collect();
        rows.push(cone.ray(j).to_rat());
        if QMatrix::from_rows(rows.clone()).rank() == rows.len() {
            base.push(j);
        }
        if base.len() == 3 {
            break;
        }
    }
    assert_eq!(base.len(), 3, "cone rays must span 3-space");
    let mat = QMatrix::from_rows(base.iter().map(|&b| cone.ray(b).to_rat()).collect());
    let mut out = Vec::new();
    for t0 in -bound..=bound {
        for t1 in -bound..=bound {
            for t2 in -bound..=bound {
                let rhs = vec![
                    Rat::from_integer(t0.into()),
                    Rat::from_integer(t1.into()),
                    Rat::from_integer(t2.into()),
                ];
                let Some(x) = mat.solve(&rhs) else { continue };
                if !x.iter().all(|c| c.is_integer()) {
                    continue;
                }
                let r = LatticeVector::m_side(x.iter().map(|c| c.to_integer()).collect());
                if cone
                    .weights(&r)
                    .iter()
                    .all(|w| w.abs() <= BigInt::from(bound))
                {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hexagon_cone, p123_cone, rect21_cone, square2_cone};

    #[test]
    fn binom_convention() {
        assert_eq!(binom(3, 1), 3);
        assert_eq!(binom(3, 3), 1);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(-1, 1), 0);
        assert_eq!(binom(3, 0), 1);
    }

    #[test]
    fn edge_surface_t1_examples() {
        let ctx = T1Context::new(p123_cone());
        let r2 = ctx.cone.canonical_degree.scale_i64(2);
        assert_eq!(ctx.edge_surface_t1(0, &r2), 1); // ℓ(1) = 3 ≥ 2
        assert_eq!(ctx.edge_surface_t1(1, &r2), 0); // ℓ(2) = 1 < 2
        let r1 = ctx.cone.canonical_degree.clone();
        for j in 0..3 {
            assert_eq!(ctx.edge_surface_t1(j, &r1), 0);
        }
    }

    #[test]
    fn span_intersection_examples() {
        let hex = T1Context::new(hexagon_cone());
        let r2 = hex.cone.canonical_degree.scale_i64(2);
        assert_eq!(hex.span_intersection_dim(&r2).unwrap(), 3);

        let p123 = T1Context::new(p123_cone());
        let r2 = p123.cone.canonical_degree.scale_i64(2);
        assert_eq!(p123.span_intersection_dim(&r2).unwrap(), 1);
        let r3 = p123.cone.canonical_degree.scale_i64(3);
        assert_eq!(p123.span_intersection_dim(&r3).unwrap(), 2);

        // Non-compact input is a contract error.
        let bad = p123.cone.symbolic_degree(2, 0, 1);
        assert!(p123.span_intersection_dim(&bad).is_err());
    }

    #[test]
    fn s_i_examples() {
        let p123 = T1Context::new(p123_cone());
        let noncompact = p123.cone.symbolic_degree(2, 0, 1);
        for i in 0..4 {
            assert_eq!(p123.s_i(&noncompact, i).unwrap(), 0);
        }
        let hex = T1Context::new(hexagon_cone());
        let r2 = hex.cone.canonical_degree.scale_i64(2);
        assert_eq!(hex.s_i(&r2, 2).unwrap(), 3);
        assert_eq!(hex.s_i(&r2, 0).unwrap(), 1);
    }

    #[test]
    fn t1_dim_examples() {
        let p123 = T1Context::new(p123_cone());
        let rstar = p123.cone.canonical_degree.clone();
        assert_eq!(p123.t1_dim(&rstar, 1).unwrap(), 0); // N−3 with N=3

        let r = p123.cone.symbolic_degree(2, 0, 1);
        assert_eq!(p123.t1_dim(&r, 1).unwrap(), 1);
        assert_eq!(p123.t1_dim(&r, 2).unwrap(), 2);
        assert_eq!(p123.t1_dim(&r, 3).unwrap(), 1);
        assert_eq!(p123.t1_dim(&r, 4).unwrap(), 0);

        let hex = T1Context::new(hexagon_cone());
        let rstar = hex.cone.canonical_degree.clone();
        assert_eq!(hex.t1_dim(&rstar, 2).unwrap(), 3); // N−3 with N=6
        assert_eq!(hex.t1_dim(&rstar, 1).unwrap(), 3);
        assert_eq!(hex.t1_dim(&rstar, 3).unwrap(), 0);
    }

    #[test]
    fn square_and_rect_dims() {
        let sq = T1Context::new(square2_cone());
        let r2 = sq.cone.canonical_degree.scale_i64(2);
        assert_eq!(sq.t1_dim(&r2, 1).unwrap(), 2);
        assert_eq!(sq.t1_dim(&r2, 2).unwrap(), 5);
        assert_eq!(sq.t1_dim(&r2, 3).unwrap(), 3);

        let rect = T1Context::new(rect21_cone());
        let r2 = rect.cone.canonical_degree.scale_i64(2);
        assert_eq!(rect.t1_dim(&r2, 1).unwrap(), 1);
        assert_eq!(rect.t1_dim(&r2, 2).unwrap(), 2);
        assert_eq!(rect.t1_dim(&r2, 3).unwrap(), 1);
    }

    #[test]
    fn prefilter_examples() {
        let p123 = T1Context::new(p123_cone());
        // R = s_2 has pairings (6,0,0): a consecutive equal pair exists.
        let s2 = p123.cone.dual_ray(1).clone();
        assert!(!p123.vanishing_prefilter(&s2));
        // All-distinct consecutive pairings certify zero.
        let r = LatticeVector::m_from(&[1, 1, 2]);
        let w = p123.cone.weights(&r);
        if w[0] != w[1] && w[1] != w[2] && w[2] != w[0] {
            assert!(p123.vanishing_prefilter(&r));
            for i in 1..=3 {
                assert_eq!(p123.t1_dim(&r, i).unwrap(), 0);
            }
        }
        // qR* has all pairings equal.
        assert!(!p123.vanishing_prefilter(&p123.cone.canonical_degree));
    }

    #[test]
    fn prefilter_implies_zero_on_scan() {
        let ctx = T1Context::new(p123_cone());
        for r in pairing_box_degrees(&ctx.cone, 4) {
            if ctx.vanishing_prefilter(&r) {
                for i in 1..=4 {
                    assert_eq!(ctx.t1_dim(&r, i).unwrap(), 0, "degree {}", r);
                }
            }
        }
    }

    #[test]
    fn zadazad_consistency_on_compact_scan() {
        // For compact degrees the 3D span dim of each edge is the 2D
        // quotient dim plus one; verified against direct enumeration.
        let ctx = T1Context::new(p123_cone());
        for r in pairing_box_degrees(&ctx.cone, 4) {
            if !crate::lattice::in_interior(&r, &ctx.cone) {
                continue;
            }
            for j in 0..3 {
                let expect = ctx.edge_span_dim_2d(j, &r) + 1;
                let window = ctx.window(40).unwrap();
                let wj = ctx.cone.weight(j, &r);
                let wk = ctx.cone.weight(j + 1, &r);
                let pts: Vec<Vec<Rat>> = window
                    .iter()
                    .filter(|p| ctx.cone.ray(j).pair(p) < wj && ctx.cone.ray(j + 1).pair(p) < wk)
                    .map(|p| p.to_rat())
                    .collect();
                let got = crate::linalg::span_dim(&pts) as i64;
                assert_eq!(got, expect, "edge {} degree {}", j + 1, r);
            }
        }
    }

    #[test]
    fn pom_tr_bounds() {
        let ctx = T1Context::new(p123_cone());
        for r in pairing_box_degrees(&ctx.cone, 4) {
            let weights = ctx.cone.weights(&r);
            for i in 1..=3 {
                let s = ctx.s_i(&r, i).unwrap();
                if weights.iter().any(|w| !w.is_positive()) {
                    assert_eq!(s, 0);
                }
                assert!(s <= binom(3, i as i64));
            }
        }
    }
}
