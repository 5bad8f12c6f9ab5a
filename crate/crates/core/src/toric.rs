//! Semigroup algebras k[Λ] for Λ = σ∨ ∩ M.
//!
//! Elements are finitely supported maps Λ → ℚ; products never truncate, so
//! all algebra identities hold exactly. The enumeration window is only a
//! device for producing finite test bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::lattice::{GorensteinCone, LatticeVector, Side};
use crate::linalg::{QMatrix, Rat};

/// The monoid Λ = σ∨ ∩ M with a positive weight functional and a finite
/// enumeration window.
#[derive(Debug, Clone)]
pub struct SemigroupAlgebra {
    /// Generators of σ (N-side); membership in Λ is nonnegativity against
    /// all of them.
    pub rays: Vec<LatticeVector>,
    /// Interior weight functional w (N-side).
    pub weight: LatticeVector,
    pub window_bound: BigInt,
    /// All λ ∈ Λ with ⟨w, λ⟩ ≤ window bound, sorted by (weight, lex).
    pub window_basis: Vec<LatticeVector>,
    /// Presentation data when this is one of the surface algebras A_n.
    pub surface: Option<SurfacePresentation>,
}

/// The Gorenstein surface A_n = k[x,y,z]/(xy - z^{n+1}) presented by its
/// semigroup generators.
#[derive(Debug, Clone)]
pub struct SurfacePresentation {
    pub n: u32,
    pub s1: LatticeVector,
    pub s2: LatticeVector,
    pub s3: LatticeVector,
}

impl SurfacePresentation {
    /// S_1 + S_3 - (n+1) S_2, which must vanish.
    pub fn relation_defect(&self) -> LatticeVector {
        self.s1
            .add(&self.s3)
            .sub(&self.s2.scale_i64(i64::from(self.n) + 1))
    }

    pub fn equation(&self) -> String {
        format!("xy - z^{}", self.n + 1)
    }
}

impl SemigroupAlgebra {
    /// Algebra of a 3D Gorenstein cone with the default interior weight
    /// w = a_1 + ... + a_N.
    pub fn from_cone(cone: &GorensteinCone, window_bound: i64) -> Result<Self> {
        let w = cone
            .rays
            .iter()
            .fold(LatticeVector::zero(3, Side::N), |acc, a| acc.add(a));
        Self::new(cone.rays.clone(), w, window_bound, None)
    }

    pub fn new(
        rays: Vec<LatticeVector>,
        weight: LatticeVector,
        window_bound: i64,
        surface: Option<SurfacePresentation>,
    ) -> Result<Self> {
        if window_bound < 0 {
            return Err(Error::input("window bound must be nonnegative"));
        }
        let mut alg = SemigroupAlgebra {
            rays,
            weight,
            window_bound: BigInt::from(window_bound),
            window_basis: Vec::new(),
            surface,
        };
        alg.check_weight_interior()?;
        alg.window_basis = alg.enumerate_window(&alg.window_bound.clone())?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    /// Membership λ ∈ Λ.
    pub fn contains(&self, m: &LatticeVector) -> bool {
        m.dim() == self.dim() && self.rays.iter().all(|a| !a.pair(m).is_negative())
    }

    /// ⟨w, λ⟩.
    pub fn weight_of(&self, m: &LatticeVector) -> BigInt {
        self.weight.pair(m)
    }

    fn check_weight_interior(&self) -> Result<()> {
        // w interior to σ ⟺ w is strictly positive on every nonzero λ ∈ Λ.
        // For the cones here this is equivalent to strict positivity on the
        // generators of σ∨, which are the solutions of dim-1 ray equalities;
        // we verify on the extreme directions obtained from ray pairs.
        for dir in self.dual_extreme_directions()? {
            if !self.weight.pair(&dir).is_positive() {
                return Err(Error::input(format!(
                    "weight functional is not interior (vanishes against {})",
                    dir
                )));
            }
        }
        Ok(())
    }

    /// Extreme directions of σ∨ (primitive, up to sign fixed by Λ-membership).
    fn dual_extreme_directions(&self) -> Result<Vec<LatticeVector>> {
        let d = self.dim();
        let mut out: Vec<LatticeVector> = Vec::new();
        let n = self.rays.len();
        let idx: Vec<Vec<usize>> = match d {
            2 => (0..n).map(|i| vec![i]).collect(),
            3 => {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        v.push(vec![i, j]);
                    }
                }
                v
            }
            _ => return Err(Error::input("only 2D and 3D semigroup algebras supported")),
        };
        for subset in idx {
            let mat = QMatrix::from_rows(subset.iter().map(|&i| self.rays[i].to_rat()).collect());
            for v in mat.nullspace() {
                // Clear denominators, reduce, fix sign by membership.
                let denom: BigInt = v
                    .iter()
                    .fold(BigInt::one(), |acc, c| {
                        let g = acc.gcd(c.denom());
                        acc * c.denom() / g
                    });
                let coords: Vec<BigInt> = v
                    .iter()
                    .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
                    .collect();
                let cand = LatticeVector::m_side(coords).primitive_part();
                if cand.is_zero() {
                    continue;
                }
                for c in [cand.clone(), cand.neg()] {
                    if self.contains(&c) && !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::input("cone has no extreme dual directions"));
        }
        Ok(out)
    }

    /// All λ ∈ Λ with ⟨w, λ⟩ ≤ bound, sorted by (weight, lex).
    pub fn enumerate_window(&self, bound: &BigInt) -> Result<Vec<LatticeVector>> {
        let d = self.dim();
        // Bounding box from the vertices of {⟨a_j,λ⟩ ≥ 0} ∩ {⟨w,λ⟩ ≤ bound}.
        let mut planes: Vec<(Vec<Rat>, Rat)> = self
            .rays
            .iter()
            .map(|a| (a.to_rat(), Rat::zero()))
            .collect();
        planes.push((
            self.weight.to_rat(),
            BigRational::from_integer(bound.clone()),
        ));
        let mut lo = vec![Rat::zero(); d];
        let mut hi = vec![Rat::zero(); d];
        let mut any = false;
        let m = planes.len();
        let mut choose = vec![0usize; d];
        fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..m {
                    cur.push(i);
                    rec(i + 1, m, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, m, k, &mut cur, &mut out);
            out
        }
        let _ = &mut choose;
        for subset in subsets(m, d) {
            let mat = QMatrix::from_rows(subset.iter().map(|&i| planes[i].0.clone()).collect());
            let rhs: Vec<Rat> = subset.iter().map(|&i| planes[i].1.clone()).collect();
            if mat.rank() < d {
                continue;
            }
            let Some(x) = mat.solve(&rhs) else { continue };
            // Feasibility.
            let feasible = planes.iter().enumerate().all(|(i, (row, b))| {
                let val: Rat = row.iter().zip(&x).map(|(a, c)| a * c).sum();
                if i < self.rays.len() {
                    !val.is_negative()
                } else {
                    val <= *b
                }
            });
            if !feasible {
                continue;
            }
            for (i, c) in x.iter().enumerate() {
                if !any {
                    lo[i] = c.clone();
                    hi[i] = c.clone();
                } else {
                    if c < &lo[i] {
                        lo[i] = c.clone();
                    }
                    if c > &hi[i] {
                        hi[i] = c.clone();
                    }
                }
            }
            any = true;
        }
        if !any {
            return Err(Error::input("window polytope is empty or unbounded"));
        }
        let lo_i: Vec<BigInt> = lo.iter().map(|c| c.floor().to_integer()).collect();
        let hi_i: Vec<BigInt> = hi.iter().map(|c| c.ceil().to_integer()).collect();
        let mut points = Vec::new();
        let mut cursor = lo_i.clone();
        'scan: loop {
            let cand = LatticeVector::m_side(cursor.clone());
            if self.contains(&cand) && self.weight_of(&cand) <= *bound {
                points.push(cand);
            }
            for i in 0..d {
                cursor[i] += 1;
                if cursor[i] <= hi_i[i] {
                    continue 'scan;
                }
                cursor[i] = lo_i[i].clone();
            }
            break;
        }
        points.sort_by(|a, b| {
            self.weight_of(a)
                .cmp(&self.weight_of(b))
                .then_with(|| a.coords.cmp(&b.coords))
        });
        Ok(points)
    }

    /// x^λ; errors when λ ∉ Λ.
    pub fn monomial(&self, m: &LatticeVector) -> Result<AlgebraElement> {
        if !self.contains(m) {
            return Err(Error::input(format!("{} is not in the semigroup", m)));
        }
        Ok(AlgebraElement::monomial(m.clone()))
    }

    /// TSV window dump: one lattice point per line with its weight.
    pub fn window_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.window_basis {
            for c in &p.coords {
                out.push_str(&c.to_string());
                out.push('\t');
            }
            out.push_str(&self.weight_of(p).to_string());
            out.push('\n');
        }
        out
    }
}

/// The Gorenstein surface algebra A_n with its presentation.
pub fn surface_algebra(n: u32, window_bound: i64) -> Result<SemigroupAlgebra> {
    if n < 1 {
        return Err(Error::input("surface index n must be ≥ 1"));
    }
    let ni = i64::from(n);
    let pres = SurfacePresentation {
        n,
        s1: LatticeVector::m_from(&[0, 1]),
        s2: LatticeVector::m_from(&[1, 1]),
        s3: LatticeVector::m_from(&[ni + 1, ni]),
    };
    debug_assert!(pres.relation_defect().is_zero());
    let rays = vec![
        LatticeVector::n_from(&[1, 0]),
        LatticeVector::n_from(&[-ni, ni + 1]),
    ];
    let weight = rays[0].add(&rays[1]);
    SemigroupAlgebra::new(rays, weight, window_bound, Some(pres))
}

/// k-dimension of the Jacobian (Milnor) ring k[x,y,z]/(∂g) for
/// g = xy - z^{n+1}, together with its monomial basis.
///
/// The partials generate the monomial ideal (y, x, z^n) in characteristic 0,
/// so the standard monomials are exactly 1, z, ..., z^{n-1}.
pub fn jacobian_ring_dim(n: u32) -> (u32, Vec<String>) {
    // Leading monomials of (∂g/∂x, ∂g/∂y, ∂g/∂z) = (y, x, -(n+1) z^n).
    let gens: [(u32, u32, u32); 3] = [(0, 1, 0), (1, 0, 0), (0, 0, n)];
    let divides = |g: (u32, u32, u32), m: (u32, u32, u32)| g.0 <= m.0 && g.1 <= m.1 && g.2 <= m.2;
    let mut basis = Vec::new();
    // Standard monomials must avoid x and y entirely, so scan powers of z.
    for c in 0..=n {
        let m = (0, 0, c);
        if gens.iter().all(|&g| !divides(g, m)) {
            basis.push(if c == 0 {
                "1".to_string()
            } else {
                format!("z^{}", c)
            });
        }
    }
    (basis.len() as u32, basis)
}

/// A finitely supported Λ-indexed coefficient map with exact rational
/// coefficients.
pub type AlgebraElement = Element<LatticeVector>;

impl Element<LatticeVector> {
    /// Exact product: x^λ · x^μ = x^{λ+μ}, no truncation.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m1, c1) in self.iter() {
            for (m2, c2) in other.iter() {
                out.add_term(m1.add(m2), c1 * c2);
            }
        }
        out
    }

    /// x^λ raised to the k-th power.
    pub fn pow(&self, k: u32) -> AlgebraElement {
        let mut out = AlgebraElement::monomial(LatticeVector::zero(
            self.iter().next().map_or(2, |(m, _)| m.dim()),
            Side::M,
        ));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}
