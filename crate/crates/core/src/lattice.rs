//! Exact lattice and cone geometry.
//!
//! Cones over lattice polygons at height one, their dual cones with the
//! edge-adjacent labeling of the dual rays, the cross-section polyhedron
//! Q(R), lattice lengths and interiority tests. All arithmetic is exact
//! (arbitrary-precision integers and rationals); no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rat};

/// Which of the two mutually dual lattices a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The lattice N containing the cone's rays.
    N,
    /// The dual lattice M of degrees.
    M,
}

/// An integer vector in N or M.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub coords: Vec<BigInt>,
    pub side: Side,
}

impl LatticeVector {
    pub fn n_side(coords: Vec<BigInt>) -> Self {
        LatticeVector {
            coords,
            side: Side::N,
        }
    }

    pub fn m_side(coords: Vec<BigInt>) -> Self {
        LatticeVector {
            coords,
            side: Side::M,
        }
    }

    pub fn n_from(coords: &[i64]) -> Self {
        Self::n_side(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn m_from(coords: &[i64]) -> Self {
        Self::m_side(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn zero(dim: usize, side: Side) -> Self {
        LatticeVector {
            coords: vec![BigInt::zero(); dim],
            side,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Pairing ⟨n, m⟩ between the two sides (plain dot product on coords).
    pub fn pair(&self, other: &LatticeVector) -> BigInt {
        debug_assert_ne!(self.side, other.side, "pairing requires opposite sides");
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.side, other.side);
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            side: self.side,
        }
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.side, other.side);
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            side: self.side,
        }
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|a| -a).collect(),
            side: self.side,
        }
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|a| a * k).collect(),
            side: self.side,
        }
    }

    pub fn scale_i64(&self, k: i64) -> LatticeVector {
        self.scale(&BigInt::from(k))
    }

    /// gcd of the absolute coordinates; 0 only for the zero vector.
    pub fn lattice_length(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.lattice_length().is_one()
    }

    /// Divide by the gcd of the coordinates. Zero stays zero.
    pub fn primitive_part(&self) -> LatticeVector {
        let g = self.lattice_length();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector {
            coords: self.coords.iter().map(|c| c / &g).collect(),
            side: self.side,
        }
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.coords
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    pub fn coords_i64(&self) -> Vec<i64> {
        self.coords
            .iter()
            .map(|c| i64::try_from(c).expect("coordinate exceeds i64"))
            .collect()
    }
}

impl std::fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// `lattice_length` as a free function, mirroring ℓ(d) in the dimension
/// formulas.
pub fn lattice_length(v: &LatticeVector) -> BigInt {
    v.lattice_length()
}

fn cross(a: &LatticeVector, b: &LatticeVector, side: Side) -> LatticeVector {
    assert_eq!(a.dim(), 3);
    assert_eq!(b.dim(), 3);
    let (a0, a1, a2) = (&a.coords[0], &a.coords[1], &a.coords[2]);
    let (b0, b1, b2) = (&b.coords[0], &b.coords[1], &b.coords[2]);
    LatticeVector {
        coords: vec![a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0],
        side,
    }
}

/// A 3D Gorenstein cone: cyclically ordered primitive rays a_1..a_N with the
/// labeled dual rays s_1..s_N (s_j vanishes on the face spanned by a_j and
/// a_{j+1}) and the canonical degree R* pairing to 1 with every ray.
#[derive(Debug, Clone)]
pub struct GorensteinCone {
    pub rays: Vec<LatticeVector>,
    pub dual_rays: Vec<LatticeVector>,
    pub canonical_degree: LatticeVector,
}

impl GorensteinCone {
    /// Number of rays.
    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, j: usize) -> &LatticeVector {
        &self.rays[j % self.n_rays()]
    }

    pub fn dual_ray(&self, j: usize) -> &LatticeVector {
        &self.dual_rays[j % self.n_rays()]
    }

    /// Boundary edge vector d_j = a_{j+1} - a_j (indices mod N).
    pub fn edge_vector(&self, j: usize) -> LatticeVector {
        self.ray(j + 1).sub(self.ray(j))
    }

    /// Lattice length ℓ(j) of the j-th boundary edge.
    pub fn edge_length(&self, j: usize) -> BigInt {
        self.edge_vector(j).lattice_length()
    }

    pub fn edge_lengths(&self) -> Vec<BigInt> {
        (0..self.n_rays()).map(|j| self.edge_length(j)).collect()
    }

    /// Pairing ⟨a_j, R⟩.
    pub fn weight(&self, j: usize, degree: &LatticeVector) -> BigInt {
        self.ray(j).pair(degree)
    }

    pub fn weights(&self, degree: &LatticeVector) -> Vec<BigInt> {
        (0..self.n_rays()).map(|j| self.weight(j, degree)).collect()
    }

    /// λ ∈ Λ = σ∨ ∩ M, i.e. nonnegative against every ray.
    pub fn contains_degree(&self, m: &LatticeVector) -> bool {
        self.rays.iter().all(|a| !a.pair(m).is_negative())
    }

    /// The degree qR* - p·s_j.
    pub fn symbolic_degree(&self, q: i64, j: usize, p: i64) -> LatticeVector {
        self.canonical_degree
            .scale_i64(q)
            .sub(&self.dual_ray(j).scale_i64(p))
    }

    /// Check every stated cone invariant; used by tests and after parsing.
    pub fn verify_invariants(&self) -> Result<()> {
        let n = self.n_rays();
        for j in 0..n {
            if !self.ray(j).pair(&self.canonical_degree).is_one() {
                return Err(Error::NotGorenstein(format!(
                    "⟨a_{}, R*⟩ ≠ 1",
                    j + 1
                )));
            }
            if !self.ray(j).pair(self.dual_ray(j)).is_zero()
                || !self.ray(j + 1).pair(self.dual_ray(j)).is_zero()
            {
                return Err(Error::Invariant(format!(
                    "dual ray s_{} not orthogonal to its face",
                    j + 1
                )));
            }
            for l in 0..n {
                if l != j && l != (j + 1) % n && !self.ray(l).pair(self.dual_ray(j)).is_positive()
                {
                    return Err(Error::Invariant(format!(
                        "⟨a_{}, s_{}⟩ ≤ 0",
                        l + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Compute the primitive inward normals of a cyclic ray sequence: the j-th
/// output is orthogonal to rays j and j+1 and nonnegative on all rays.
pub fn dual_rays_of(rays: &[LatticeVector], out_side: Side) -> Result<Vec<LatticeVector>> {
    let n = rays.len();
    let mut duals = Vec::with_capacity(n);
    for j in 0..n {
        let mut s = cross(&rays[j], &rays[(j + 1) % n], out_side).primitive_part();
        if s.is_zero() {
            return Err(Error::input(format!(
                "rays {} and {} are collinear",
                j + 1,
                j + 2
            )));
        }
        // Fix the sign so that s is positive on the remaining rays.
        let mut sign = 0i32;
        for (l, a) in rays.iter().enumerate() {
            if l == j || l == (j + 1) % n {
                continue;
            }
            let p = a.coords.iter().zip(&s.coords).map(|(x, y)| x * y).sum::<BigInt>();
            let this = match p.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
            };
            if this != 0 {
                if sign == 0 {
                    sign = this;
                } else if sign != this {
                    return Err(Error::input(format!(
                        "rays are not in convex position around edge {}",
                        j + 1
                    )));
                }
            }
        }
        if sign == 0 {
            return Err(Error::input("rays do not span a full-dimensional cone"));
        }
        if sign < 0 {
            s = s.neg();
        }
        duals.push(s);
    }
    Ok(duals)
}

/// Build a Gorenstein cone from cyclically ordered primitive 3D rays,
/// computing the labeled dual rays and the canonical degree R*.
pub fn dual_cone(rays: &[LatticeVector]) -> Result<GorensteinCone> {
    if rays.len() < 3 {
        return Err(Error::input("need at least 3 rays"));
    }
    for (j, a) in rays.iter().enumerate() {
        if a.dim() != 3 {
            return Err(Error::input(format!("ray {} is not 3-dimensional", j + 1)));
        }
        if a.side != Side::N {
            return Err(Error::input("rays must be N-side vectors"));
        }
        if !a.is_primitive() {
            return Err(Error::input(format!("ray {} is not primitive", j + 1)));
        }
    }
    // Solve ⟨a_j, R*⟩ = 1 for all j.
    let mat = QMatrix::from_rows(rays.iter().map(|a| a.to_rat()).collect());
    let ones = vec![Rat::one(); rays.len()];
    let rstar = match mat.solve(&ones) {
        Some(x) if x.iter().all(|c| c.is_integer()) => LatticeVector::m_side(
            x.iter().map(|c| c.to_integer()).collect(),
        ),
        _ => {
            return Err(Error::NotGorenstein(
                "no integral R* with ⟨a_j, R*⟩ = 1 for all rays".into(),
            ))
        }
    };
    verify_cyclic_convex(rays, &rstar)?;
    let duals = dual_rays_of(rays, Side::M)?;
    let cone = GorensteinCone {
        rays: rays.to_vec(),
        dual_rays: duals,
        canonical_degree: rstar,
    };
    cone.verify_invariants()?;
    Ok(cone)
}

/// Lift a 2D lattice polygon to height one and build the cone over it.
/// Vertices are reordered counterclockwise.
pub fn cone_over_polygon(vertices: &[Vec<i64>]) -> Result<GorensteinCone> {
    if vertices.len() < 3 {
        return Err(Error::input("polygon needs at least 3 vertices"));
    }
    if vertices.iter().any(|v| v.len() != 2) {
        return Err(Error::input("polygon vertices must be 2-dimensional"));
    }
    let mut pts: Vec<(i64, i64)> = vertices.iter().map(|v| (v[0], v[1])).collect();
    // Sort counterclockwise around the centroid (scaled by N to stay exact).
    let n = pts.len() as i64;
    let cx: i64 = pts.iter().map(|p| p.0).sum();
    let cy: i64 = pts.iter().map(|p| p.1).sum();
    pts.sort_by(|a, b| {
        let (ax, ay) = (a.0 * n - cx, a.1 * n - cy);
        let (bx, by) = (b.0 * n - cx, b.1 * n - cy);
        half_plane(ax, ay)
            .cmp(&half_plane(bx, by))
            .then_with(|| (bx as i128 * ay as i128).cmp(&(ax as i128 * by as i128)))
    });
    let rays: Vec<LatticeVector> = pts
        .iter()
        .map(|&(x, y)| LatticeVector::n_from(&[x, y, 1]))
        .collect();
    dual_cone(&rays)
}

fn half_plane(x: i64, y: i64) -> u8 {
    // 0 for angle in [0, π), 1 for [π, 2π).
    if y > 0 || (y == 0 && x > 0) {
        0
    } else {
        1
    }
}

/// Rays must lie at height 1 against R* and walk a strictly convex cycle.
fn verify_cyclic_convex(rays: &[LatticeVector], rstar: &LatticeVector) -> Result<()> {
    let n = rays.len();
    // Orientation of the triple (a_j, a_{j+1}, a_{j+2}) seen in the height-1
    // plane: the sign of det[a_{j+1}-a_j, a_{j+2}-a_{j+1}, v] for any v with
    // ⟨v, R*⟩ ≠ 0; we use the determinant of the three rays themselves, which
    // equals the 2D cross product of the edge vectors after the height-1
    // normalization.
    let mut expected = 0i32;
    for j in 0..n {
        let d1 = rays[(j + 1) % n].sub(&rays[j]);
        let d2 = rays[(j + 2) % n].sub(&rays[(j + 1) % n]);
        let c = cross(&d1, &d2, Side::M);
        let t = c
            .coords
            .iter()
            .zip(rays[j].coords.iter())
            .map(|(x, y)| x * y)
            .sum::<BigInt>();
        let sign = match t.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        };
        if sign == 0 {
            return Err(Error::input(format!(
                "rays {}, {}, {} are collinear on the polygon boundary",
                j + 1,
                (j + 1) % n + 1,
                (j + 2) % n + 1
            )));
        }
        if expected == 0 {
            expected = sign;
        } else if sign != expected {
            return Err(Error::input(
                "rays are not cyclically ordered on the height-1 polygon",
            ));
        }
    }
    let _ = rstar;
    Ok(())
}

/// The vertex multiplicity labels W_j(R) from the dimension formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WLabel {
    Zero,
    One,
    Two,
}

impl WLabel {
    pub fn from_weight(w: &BigInt) -> Self {
        if w > &BigInt::one() {
            WLabel::Two
        } else if w.is_one() {
            WLabel::One
        } else {
            WLabel::Zero
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            WLabel::Zero => 0,
            WLabel::One => 1,
            WLabel::Two => 2,
        }
    }
}

/// The cross-section polyhedron Q(R) = σ ∩ {⟨·, R⟩ = 1}.
#[derive(Debug, Clone)]
pub struct QPolyhedron {
    pub degree: LatticeVector,
    pub vertex_weights: Vec<BigInt>,
    /// Rational vertices ā_j = a_j / ⟨a_j, R⟩, recorded as (ray, weight)
    /// for the j with weight ≥ 1.
    pub vertices: Vec<(usize, LatticeVector, BigInt)>,
    /// Index pairs {j, j+1} of compact edges.
    pub compact_edges: Vec<(usize, usize)>,
    pub w_labels: Vec<u8>,
    pub compact: bool,
}

/// Assemble Q(R) for a degree R.
pub fn q_polyhedron(cone: &GorensteinCone, degree: &LatticeVector) -> QPolyhedron {
    let n = cone.n_rays();
    let weights = cone.weights(degree);
    let vertices = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w >= &&BigInt::one())
        .map(|(j, w)| (j, cone.ray(j).clone(), w.clone()))
        .collect();
    let compact_edges: Vec<(usize, usize)> = (0..n)
        .filter(|&j| weights[j] >= BigInt::one() && weights[(j + 1) % n] >= BigInt::one())
        .map(|j| (j, (j + 1) % n))
        .collect();
    let compact = weights.iter().all(|w| w.is_positive());
    QPolyhedron {
        degree: degree.clone(),
        vertex_weights: weights.clone(),
        vertices,
        compact_edges,
        w_labels: weights.iter().map(|w| WLabel::from_weight(w).as_u8()).collect(),
        compact,
    }
}

/// True iff R lies in the interior of σ∨, i.e. ⟨a_j, R⟩ > 0 for all j.
pub fn in_interior(degree: &LatticeVector, cone: &GorensteinCone) -> bool {
    cone.rays.iter().all(|a| a.pair(degree).is_positive())
}

/// Fixture: the cone over the weighted projective plane P(1,2,3).
pub fn p123_cone() -> GorensteinCone {
    dual_cone(&[
        LatticeVector::n_from(&[-1, -1, 1]),
        LatticeVector::n_from(&[2, -1, 1]),
        LatticeVector::n_from(&[-1, 1, 1]),
    ])
    .expect("P(1,2,3) cone is valid")
}

/// Fixture: the cone over the unit hexagon (all edges of lattice length 1).
pub fn hexagon_cone() -> GorensteinCone {
    cone_over_polygon(&[
        vec![1, 0],
        vec![0, 1],
        vec![-1, 1],
        vec![-1, 0],
        vec![0, -1],
        vec![1, -1],
    ])
    .expect("hexagon cone is valid")
}

/// Fixture: the cone over the square [0,2]².
pub fn square2_cone() -> GorensteinCone {
    cone_over_polygon(&[vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2]])
        .expect("square cone is valid")
}

/// Fixture: the cone over the rectangle [0,2]×[0,1]; has a parallel pair of
/// edges strictly longer than the others.
pub fn rect21_cone() -> GorensteinCone {
    cone_over_polygon(&[vec![0, 0], vec![2, 0], vec![2, 1], vec![0, 1]])
        .expect("rectangle cone is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p123_dual_rays_match_known_values() {
        let cone = p123_cone();
        assert_eq!(cone.dual_rays[0], LatticeVector::m_from(&[0, 1, 1]));
        assert_eq!(cone.dual_rays[1], LatticeVector::m_from(&[-2, -3, 1]));
        assert_eq!(cone.dual_rays[2], LatticeVector::m_from(&[1, 0, 1]));
        assert_eq!(cone.canonical_degree, LatticeVector::m_from(&[0, 0, 1]));
    }

    #[test]
    fn unit_square_duals_satisfy_pairing_invariants() {
        let cone = cone_over_polygon(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        cone.verify_invariants().unwrap();
        // Each dual ray is orthogonal to one lifted edge.
        for j in 0..4 {
            let d = cone.edge_vector(j);
            assert!(d
                .coords
                .iter()
                .zip(&cone.dual_rays[j].coords)
                .map(|(a, b)| a * b)
                .sum::<BigInt>()
                .is_zero());
        }
    }

    #[test]
    fn biduality_returns_original_rays_up_to_cyclic_shift() {
        for cone in [p123_cone(), hexagon_cone(), rect21_cone()] {
            let n = cone.n_rays();
            let rays_m: Vec<LatticeVector> = cone
                .dual_rays
                .iter()
                .map(|s| LatticeVector::n_side(s.coords.clone()))
                .collect();
            let bidual = dual_rays_of(&rays_m, Side::N).unwrap();
            // bidual[j] should equal a_{j+1} (cross of s_j and s_{j+1}).
            for j in 0..n {
                assert_eq!(bidual[j].coords, cone.ray(j + 1).coords, "cone N={}", n);
            }
        }
    }

    #[test]
    fn lattice_length_examples() {
        assert_eq!(lattice_length(&LatticeVector::n_from(&[3, 0, 0])), BigInt::from(3));
        assert_eq!(lattice_length(&LatticeVector::n_from(&[-3, 2, 0])), BigInt::one());
        assert_eq!(lattice_length(&LatticeVector::n_from(&[0, -2, 0])), BigInt::from(2));
        assert!(lattice_length(&LatticeVector::n_from(&[0, 0, 0])).is_zero());
    }

    #[test]
    fn p123_edge_lengths() {
        let cone = p123_cone();
        let lens = cone.edge_lengths();
        assert_eq!(lens, vec![BigInt::from(3), BigInt::one(), BigInt::from(2)]);
    }

    #[test]
    fn q_polyhedron_examples() {
        let cone = p123_cone();
        let rstar = cone.canonical_degree.clone();

        let q = q_polyhedron(&cone, &rstar);
        assert_eq!(q.w_labels, vec![1, 1, 1]);
        assert!(q.compact);
        assert_eq!(q.compact_edges.len(), 3);

        let q2 = q_polyhedron(&cone, &rstar.scale_i64(2));
        assert_eq!(q2.w_labels, vec![2, 2, 2]);
        assert!(q2.compact);

        // 2R* - s_1 = (0,-1,1): weights (2,2,0), one compact edge {1,2}.
        let r = cone.symbolic_degree(2, 0, 1);
        assert_eq!(r, LatticeVector::m_from(&[0, -1, 1]));
        let q3 = q_polyhedron(&cone, &r);
        assert_eq!(q3.w_labels, vec![2, 2, 0]);
        assert!(!q3.compact);
        assert_eq!(q3.compact_edges, vec![(0, 1)]);
    }

    #[test]
    fn interiority_examples() {
        let cone = p123_cone();
        assert!(in_interior(&cone.symbolic_degree(3, 0, 1), &cone));
        assert!(!in_interior(&cone.symbolic_degree(2, 0, 1), &cone));
        assert!(in_interior(&cone.canonical_degree, &cone));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        // Too few rays.
        assert!(dual_cone(&[
            LatticeVector::n_from(&[1, 0, 1]),
            LatticeVector::n_from(&[0, 1, 1]),
        ])
        .is_err());
        // Collinear boundary points.
        assert!(dual_cone(&[
            LatticeVector::n_from(&[0, 0, 1]),
            LatticeVector::n_from(&[1, 0, 1]),
            LatticeVector::n_from(&[2, 0, 1]),
        ])
        .is_err());
        // Not Gorenstein: rays not on a common height-1 plane.
        assert!(matches!(
            dual_cone(&[
                LatticeVector::n_from(&[1, 0, 1]),
                LatticeVector::n_from(&[0, 1, 2]),
                LatticeVector::n_from(&[-1, -1, 1]),
            ]),
            Err(Error::NotGorenstein(_)) | Err(Error::Input(_))
        ));
    }

    #[test]
    fn w_labels_follow_weight_cases() {
        let cone = p123_cone();
        // W_j is determined by ⟨a_j, R⟩: 2 for > 1, 1 for = 1, 0 for ≤ 0.
        for q in -3i64..=3 {
            for p in -3i64..=3 {
                for j in 0..3 {
                    let r = cone.symbolic_degree(q, j, p);
                    let qp = q_polyhedron(&cone, &r);
                    for (label, w) in qp.w_labels.iter().zip(cone.weights(&r)) {
                        let expect = if w > BigInt::one() {
                            2
                        } else if w.is_one() {
                            1
                        } else {
                            0
                        };
                        assert_eq!(*label, expect);
                    }
                }
            }
        }
    }
}
