//! The dgla of total cochains: the component-restricted bracket [,]_p, the
//! differential d̃ = [μ+μ_p, ·]_p, Maurer–Cartan checking over Artin
//! coefficients, the gauge action, order-by-order extension, and the
//! equivalence between Maurer–Cartan elements and Poisson products.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::hochschild::{
    for_each_tuple, gerstenhaber_bracket, hochschild_d, hodge_project, hodge_projector, is_zero_on,
    rule_cochain, shuffle_apply, total_shuffle, Cochain, MultiTensor, DEFAULT_ARITY_CAP,
};
use crate::lattice::{LatticeVector, Side};
use crate::linalg::QMatrix;
use crate::toric::SemigroupAlgebra;

// ---------------------------------------------------------------------------
// Total cochains (one component per Hodge weight)
// ---------------------------------------------------------------------------

/// An element of the total complex in one arity: components f_1,...,f_m with
/// f_j of Hodge weight j. Missing components are structurally zero.
#[derive(Clone)]
pub struct TotalCochain<B: BasisKey> {
    pub arity: usize,
    components: Vec<Option<Cochain<B>>>,
}

impl<B: BasisKey> std::fmt::Debug for TotalCochain<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let present: Vec<usize> = (1..=self.arity)
            .filter(|&w| self.components[w - 1].is_some())
            .collect();
        write!(f, "TotalCochain(arity {}, weights {:?})", self.arity, present)
    }
}

impl<B: BasisKey> TotalCochain<B> {
    pub fn zero(arity: usize) -> Self {
        TotalCochain {
            arity,
            components: vec![None; arity],
        }
    }

    /// Place `f` in Hodge weight `w` of an arity-`arity` total cochain.
    pub fn single(arity: usize, w: usize, f: Cochain<B>) -> Result<Self> {
        if w < 1 || w > arity || f.arity != arity {
            return Err(Error::input("Hodge weight out of range for total cochain"));
        }
        let mut t = Self::zero(arity);
        t.components[w - 1] = Some(f);
        Ok(t)
    }

    pub fn from_components(arity: usize, comps: Vec<Option<Cochain<B>>>) -> Result<Self> {
        if comps.len() != arity {
            return Err(Error::input("component count must equal the arity"));
        }
        for c in comps.iter().flatten() {
            if c.arity != arity {
                return Err(Error::input("component arities must match"));
            }
        }
        Ok(TotalCochain {
            arity,
            components: comps,
        })
    }

    pub fn component(&self, w: usize) -> Option<&Cochain<B>> {
        self.components.get(w - 1).and_then(|c| c.as_ref())
    }

    pub fn weights(&self) -> impl Iterator<Item = (usize, &Cochain<B>)> {
        self.components
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.as_ref().map(|f| (k + 1, f)))
    }

    pub fn add(&self, other: &TotalCochain<B>) -> Result<TotalCochain<B>> {
        if self.arity != other.arity {
            return Err(Error::input("total cochain arity mismatch"));
        }
        let mut comps = Vec::with_capacity(self.arity);
        for k in 0..self.arity {
            comps.push(match (&self.components[k], &other.components[k]) {
                (None, None) => None,
                (Some(f), None) => Some(f.clone()),
                (None, Some(g)) => Some(g.clone()),
                (Some(f), Some(g)) => Some(f.add(g)?),
            });
        }
        TotalCochain::from_components(self.arity, comps)
    }

    pub fn scale(&self, k: &BigRational) -> TotalCochain<B> {
        TotalCochain {
            arity: self.arity,
            components: self
                .components
                .iter()
                .map(|c| c.as_ref().map(|f| f.scale(k)))
                .collect(),
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_none())
    }

    pub fn is_zero_on(&self, window: &[B]) -> Result<bool> {
        for (_, f) in self.weights() {
            if !is_zero_on(f, window)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verify the eigenvalue test f_j ∘ s_m = (2^j − 2) f_j on the window.
    pub fn verify_hodge_tags(&self, window: &[B]) -> Result<()> {
        let s = total_shuffle(self.arity);
        for (w, f) in self.weights() {
            let lhs = shuffle_apply(f, &s, DEFAULT_ARITY_CAP)?;
            let rhs = f.scale(&crate::hochschild::hodge_eigenvalue(w));
            if !crate::hochschild::equal_on(&lhs, &rhs, window)? {
                return Err(Error::InvalidStructure(format!(
                    "component of weight {} fails its eigenvalue test",
                    w
                )));
            }
        }
        Ok(())
    }
}

/// The component-restricted bracket: the weight-w part of [F,G]_p is
/// Σ_{i+j−1=w} e_{m+n−1}(w) [f_i, g_j].
pub fn p_bracket<B: BasisKey>(
    f: &TotalCochain<B>,
    g: &TotalCochain<B>,
) -> Result<TotalCochain<B>> {
    let m = f.arity;
    let n = g.arity;
    let arity = m + n - 1;
    if arity > DEFAULT_ARITY_CAP {
        return Err(Error::ArityCap {
            arity,
            cap: DEFAULT_ARITY_CAP,
        });
    }
    let mut comps: Vec<Option<Cochain<B>>> = vec![None; arity];
    for (i, fi) in f.weights() {
        for (j, gj) in g.weights() {
            let w = i + j - 1;
            let raw = crate::hochschild::memoized(&gerstenhaber_bracket(fi, gj)?);
            let proj = hodge_project(&raw, w)?;
            comps[w - 1] = Some(match comps[w - 1].take() {
                None => proj,
                Some(acc) => acc.add(&proj)?,
            });
        }
    }
    // Cache each assembled component: enclosing structures re-evaluate them
    // at overlapping tuples.
    let comps = comps
        .into_iter()
        .map(|c| c.map(|f| crate::hochschild::memoized(&f)))
        .collect();
    TotalCochain::from_components(arity, comps)
}

// ---------------------------------------------------------------------------
// Validated Poisson structure and d̃
// ---------------------------------------------------------------------------

/// The pair (μ, μ_p) with μ_p checked once to be a Poisson structure:
/// skew, a Hochschild cocycle, and Jacobi (e_3(3)[μ_p,μ_p] = 0).
pub struct PoissonPair<B: BasisKey> {
    pub mu: Cochain<B>,
    pub mup: Cochain<B>,
}

impl<B: BasisKey> PoissonPair<B> {
    pub fn new(mu: Cochain<B>, mup: Cochain<B>, window: &[B]) -> Result<Self> {
        if mu.arity != 2 || mup.arity != 2 {
            return Err(Error::input("structure maps must be bilinear"));
        }
        // Skewness: μ_p ∘ s_2 = 2 μ_p.
        let s2 = total_shuffle(2);
        let lhs = shuffle_apply(&mup, &s2, DEFAULT_ARITY_CAP)?;
        let rhs = mup.scale(&BigRational::from_integer(2.into()));
        if !crate::hochschild::equal_on(&lhs, &rhs, window)? {
            return Err(Error::InvalidStructure(
                "μ_p is not skew (eigenvalue-2 test fails)".into(),
            ));
        }
        // Cocycle: dμ_p = 0.
        if !is_zero_on(&hochschild_d(&mup, &mu)?, window)? {
            return Err(Error::InvalidStructure("dμ_p ≠ 0".into()));
        }
        // Jacobi: e_3(3)[μ_p, μ_p] = 0.
        let sq = gerstenhaber_bracket(&mup, &mup)?;
        if !is_zero_on(&hodge_project(&sq, 3)?, window)? {
            return Err(Error::InvalidStructure(
                "μ_p fails the Jacobi identity (e_3(3)[μ_p,μ_p] ≠ 0)".into(),
            ));
        }
        Ok(PoissonPair { mu, mup })
    }

    /// The total cochain (μ, μ_p) of arity 2.
    pub fn structure_total(&self) -> TotalCochain<B> {
        TotalCochain {
            arity: 2,
            components: vec![Some(self.mu.clone()), Some(self.mup.clone())],
        }
    }

    /// d̃ = [μ + μ_p, ·]_p.
    pub fn tilde_d(&self, f: &TotalCochain<B>) -> Result<TotalCochain<B>> {
        p_bracket(&self.structure_total(), f)
    }
}

// ---------------------------------------------------------------------------
// Artin coefficients
// ---------------------------------------------------------------------------

/// k[t_1..t_r]/m^ν: every monomial of total degree ≥ ν vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinRing {
    pub vars: usize,
    pub order: u32,
}

/// Exponent vector of a t-monomial.
pub type TMono = Vec<u32>;

impl ArtinRing {
    pub fn new(vars: usize, order: u32) -> Self {
        ArtinRing { vars, order }
    }

    /// Parse "t^3" (one variable) or "m(r)^v" (r variables).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("t^") {
            let order: u32 = rest
                .parse()
                .map_err(|_| Error::input(format!("bad Artin spec: {}", spec)))?;
            return Ok(ArtinRing::new(1, order));
        }
        if let Some(rest) = spec.strip_prefix("m(") {
            if let Some((vars, order)) = rest.split_once(")^") {
                let vars: usize = vars
                    .parse()
                    .map_err(|_| Error::input(format!("bad Artin spec: {}", spec)))?;
                let order: u32 = order
                    .parse()
                    .map_err(|_| Error::input(format!("bad Artin spec: {}", spec)))?;
                return Ok(ArtinRing::new(vars, order));
            }
        }
        Err(Error::input(format!(
            "unrecognized Artin coefficient spec: {}",
            spec
        )))
    }

    pub fn degree(&self, m: &TMono) -> u32 {
        m.iter().sum()
    }

    pub fn unit(&self) -> TMono {
        vec![0; self.vars]
    }

    pub fn var(&self, i: usize) -> TMono {
        let mut m = self.unit();
        m[i] = 1;
        m
    }

    /// Product of monomials; `None` once truncated away.
    pub fn mul(&self, a: &TMono, b: &TMono) -> Option<TMono> {
        let m: TMono = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if self.degree(&m) >= self.order {
            None
        } else {
            Some(m)
        }
    }
}

/// An element of g^k ⊗ B for an Artin ring B, stored termwise by t-monomial.
/// Maurer–Cartan elements additionally require a zero constant term.
#[derive(Clone)]
pub struct MbElement<B: BasisKey> {
    /// Arity of every total-cochain term (g-degree + 1).
    pub arity: usize,
    pub terms: BTreeMap<TMono, TotalCochain<B>>,
}

impl<B: BasisKey> std::fmt::Debug for MbElement<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MbElement(arity {}, t-monomials {:?})",
            self.arity,
            self.terms.keys().collect::<Vec<_>>()
        )
    }
}

impl<B: BasisKey> MbElement<B> {
    pub fn zero(arity: usize) -> Self {
        MbElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(tm: TMono, f: TotalCochain<B>) -> Self {
        let arity = f.arity;
        let mut e = Self::zero(arity);
        e.terms.insert(tm, f);
        e
    }

    pub fn insert_add(&mut self, tm: TMono, f: TotalCochain<B>) -> Result<()> {
        debug_assert_eq!(f.arity, self.arity);
        match self.terms.remove(&tm) {
            None => {
                self.terms.insert(tm, f);
            }
            Some(old) => {
                self.terms.insert(tm, old.add(&f)?);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MbElement<B>) -> Result<MbElement<B>> {
        let mut out = self.clone();
        for (tm, f) in &other.terms {
            out.insert_add(tm.clone(), f.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigRational) -> MbElement<B> {
        MbElement {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(tm, f)| (tm.clone(), f.scale(k)))
                .collect(),
        }
    }

    pub fn has_constant_term(&self, ring: &ArtinRing) -> bool {
        self.terms.keys().any(|tm| ring.degree(tm) == 0)
    }

    /// Keep only terms of the given t-degree.
    pub fn degree_part(&self, ring: &ArtinRing, d: u32) -> MbElement<B> {
        MbElement {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(tm, _)| ring.degree(tm) == d)
                .map(|(tm, f)| (tm.clone(), f.clone()))
                .collect(),
        }
    }

    pub fn is_zero_on(&self, window: &[B]) -> Result<bool> {
        for f in self.terms.values() {
            if !f.is_zero_on(window)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Bracket on g ⊗ m_B with t-monomial truncation.
pub fn p_bracket_mb<B: BasisKey>(
    x: &MbElement<B>,
    y: &MbElement<B>,
    ring: &ArtinRing,
) -> Result<MbElement<B>> {
    let arity = x.arity + y.arity - 1;
    let mut out = MbElement::zero(arity);
    for (tx, fx) in &x.terms {
        for (ty, fy) in &y.terms {
            if let Some(tm) = ring.mul(tx, ty) {
                out.insert_add(tm, p_bracket(fx, fy)?)?;
            }
        }
    }
    Ok(out)
}

/// d̃ applied termwise.
pub fn tilde_d_mb<B: BasisKey>(
    pair: &PoissonPair<B>,
    x: &MbElement<B>,
) -> Result<MbElement<B>> {
    let mut out = MbElement::zero(x.arity + 1);
    for (tm, f) in &x.terms {
        out.insert_add(tm.clone(), pair.tilde_d(f)?)?;
    }
    Ok(out)
}

/// The Maurer–Cartan residual d̃x + ½[x,x]_p.
pub fn mc_residual<B: BasisKey>(
    x: &MbElement<B>,
    pair: &PoissonPair<B>,
    ring: &ArtinRing,
) -> Result<MbElement<B>> {
    let half = BigRational::new(1.into(), 2.into());
    let b = p_bracket_mb(x, x, ring)?;
    tilde_d_mb(pair, x)?.add(&b.scale(&half))
}

/// Outcome of an exact Maurer–Cartan check on the window.
pub struct McCheck<B: BasisKey> {
    pub holds: bool,
    pub residual: MbElement<B>,
    /// A witness (t-monomial, Hodge weight, tuple) when the residual is
    /// nonzero.
    pub witness: Option<(TMono, usize, Vec<B>)>,
}

/// Evaluate d̃x + ½[x,x]_p exactly on all window tuples.
pub fn mc_check<B: BasisKey>(
    x: &MbElement<B>,
    pair: &PoissonPair<B>,
    ring: &ArtinRing,
    window: &[B],
) -> Result<McCheck<B>> {
    if x.has_constant_term(ring) {
        return Err(Error::input(
            "Maurer–Cartan elements must lie in the maximal ideal",
        ));
    }
    let residual = mc_residual(x, pair, ring)?;
    let mut witness = None;
    'outer: for (tm, f) in &residual.terms {
        for (w, comp) in f.weights() {
            if let Some((tuple, _)) = crate::hochschild::first_nonzero_on(comp, window)? {
                witness = Some((tm.clone(), w, tuple));
                break 'outer;
            }
        }
    }
    Ok(McCheck {
        holds: witness.is_none(),
        residual,
        witness,
    })
}

// ---------------------------------------------------------------------------
// Gauge action
// ---------------------------------------------------------------------------

/// x + Σ_{n≥0} ([α,·]^n / (n+1)!) ([α,x] − d̃α), summed exactly to the
/// nilpotency order.
pub fn gauge_act<B: BasisKey>(
    alpha: &MbElement<B>,
    x: &MbElement<B>,
    pair: &PoissonPair<B>,
    ring: &ArtinRing,
) -> Result<MbElement<B>> {
    if alpha.arity != 1 || x.arity != 2 {
        return Err(Error::input("gauge parameters live in g⁰, elements in g¹"));
    }
    if alpha.has_constant_term(ring) {
        return Err(Error::input("gauge parameter must lie in the maximal ideal"));
    }
    let seed = p_bracket_mb(alpha, x, ring)?.add(&tilde_d_mb(pair, alpha)?.scale(&-BigRational::one()))?;
    let mut out = x.clone();
    let mut term = seed;
    let mut factorial = BigInt::one();
    for n in 0..ring.order as usize + 1 {
        if term.terms.is_empty() {
            break;
        }
        // term currently holds [α,·]^n(seed); contribute term/(n+1)!.
        factorial *= BigInt::from(n as i64 + 1);
        out = out.add(&term.scale(&BigRational::new(BigInt::one(), factorial.clone())))?;
        // Multiply the 1/(n+1)! in fresh each round: rebuild factorial use.
        term = p_bracket_mb(alpha, &term, ring)?;
    }
    Ok(out)
}

/// Baker–Campbell–Hausdorff composition up to third order, enough for
/// truncation orders ν ≤ 4: x·y = x + y + ½[x,y] + 1/12([x,[x,y]] + [y,[y,x]]).
pub fn bch<B: BasisKey>(
    x: &MbElement<B>,
    y: &MbElement<B>,
    ring: &ArtinRing,
) -> Result<MbElement<B>> {
    if ring.order > 4 {
        return Err(Error::input(
            "BCH composition implemented up to truncation order 4",
        ));
    }
    let half = BigRational::new(1.into(), 2.into());
    let twelfth = BigRational::new(1.into(), 12.into());
    let xy = p_bracket_mb(x, y, ring)?;
    let xxy = p_bracket_mb(x, &xy, ring)?;
    let yx = xy.scale(&-BigRational::one());
    let yyx = p_bracket_mb(y, &yx, ring)?;
    x.add(y)?
        .add(&xy.scale(&half))?
        .add(&xxy.scale(&twelfth))?
        .add(&yyx.scale(&twelfth))
}

// ---------------------------------------------------------------------------
// Deformed structures: exp(α)-conjugation, used to verify that the gauge
// orbit agrees with the equivalence of Poisson products.
// ---------------------------------------------------------------------------

/// An element of A ⊗ B, stored by t-monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbElement<B: BasisKey> {
    pub terms: BTreeMap<TMono, Element<B>>,
}

impl<B: BasisKey> AbElement<B> {
    pub fn zero() -> Self {
        AbElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_basis(ring: &ArtinRing, b: B) -> Self {
        let mut t = BTreeMap::new();
        t.insert(ring.unit(), Element::monomial(b));
        AbElement { terms: t }
    }

    pub fn insert_add(&mut self, tm: TMono, e: Element<B>) {
        if e.is_zero() {
            return;
        }
        match self.terms.remove(&tm) {
            None => {
                self.terms.insert(tm, e);
            }
            Some(old) => {
                let sum = old.add(&e);
                if !sum.is_zero() {
                    self.terms.insert(tm, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &AbElement<B>) -> AbElement<B> {
        let mut out = self.clone();
        for (tm, e) in &other.terms {
            out.insert_add(tm.clone(), e.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> AbElement<B> {
        AbElement {
            terms: self
                .terms
                .iter()
                .map(|(tm, e)| (tm.clone(), e.scale(k)))
                .filter(|(_, e)| !e.is_zero())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|e| e.is_zero())
    }
}

/// Apply a gauge parameter α ∈ g⁰ ⊗ m_B as an operator on A ⊗ B.
fn alpha_apply<B: BasisKey>(
    alpha: &MbElement<B>,
    v: &AbElement<B>,
    ring: &ArtinRing,
) -> Result<AbElement<B>> {
    let mut out = AbElement::zero();
    for (ta, f) in &alpha.terms {
        let Some(theta) = f.component(1) else { continue };
        for (tv, e) in &v.terms {
            if let Some(tm) = ring.mul(ta, tv) {
                out.insert_add(tm, theta.eval_elements(std::slice::from_ref(e))?);
            }
        }
    }
    Ok(out)
}

/// exp(α)(v) (or exp(−α)(v) with `negate`), exact: the series terminates at
/// the nilpotency order.
pub fn exp_apply<B: BasisKey>(
    alpha: &MbElement<B>,
    v: &AbElement<B>,
    ring: &ArtinRing,
    negate: bool,
) -> Result<AbElement<B>> {
    let op = if negate {
        alpha.scale(&-BigRational::one())
    } else {
        alpha.clone()
    };
    let mut out = v.clone();
    let mut term = v.clone();
    let mut factorial = BigInt::one();
    for k in 1..=ring.order as usize + 1 {
        term = alpha_apply(&op, &term, ring)?;
        if term.terms.is_empty() {
            break;
        }
        factorial *= BigInt::from(k as i64);
        out = out.add(&term.scale(&BigRational::new(BigInt::one(), factorial.clone())));
    }
    Ok(out)
}

/// Evaluate the deformed structure map of Hodge weight `w` (1 = product,
/// 2 = bracket) of base + x at a pair of A⊗B elements.
pub fn deformed_eval<B: BasisKey>(
    pair: &PoissonPair<B>,
    x: &MbElement<B>,
    w: usize,
    a: &AbElement<B>,
    b: &AbElement<B>,
    ring: &ArtinRing,
) -> Result<AbElement<B>> {
    let mut out = AbElement::zero();
    let base = match w {
        1 => &pair.mu,
        2 => &pair.mup,
        _ => return Err(Error::input("structure weight must be 1 or 2")),
    };
    for (ta, ea) in &a.terms {
        for (tb, eb) in &b.terms {
            let Some(tm0) = ring.mul(ta, tb) else { continue };
            out.insert_add(tm0.clone(), base.eval_elements(&[ea.clone(), eb.clone()])?);
            for (tx, f) in &x.terms {
                let Some(comp) = f.component(w) else { continue };
                if let Some(tm) = ring.mul(&tm0, tx) {
                    out.insert_add(tm, comp.eval_elements(&[ea.clone(), eb.clone()])?);
                }
            }
        }
    }
    Ok(out)
}

/// exp([α,·]_p) applied to the combined structure element (μ,μ_p) + x.
pub fn exp_ad_structure<B: BasisKey>(
    alpha: &MbElement<B>,
    pair: &PoissonPair<B>,
    x: &MbElement<B>,
    ring: &ArtinRing,
) -> Result<MbElement<B>> {
    let mut z = x.clone();
    z.insert_add(ring.unit(), pair.structure_total())?;
    let mut out = z.clone();
    let mut term = z;
    let mut factorial = BigInt::one();
    for k in 1..=ring.order as usize + 1 {
        term = p_bracket_mb(alpha, &term, ring)?;
        if term.terms.is_empty() {
            break;
        }
        factorial *= BigInt::from(k as i64);
        out = out.add(&term.scale(&BigRational::new(BigInt::one(), factorial.clone())))?;
    }
    Ok(out)
}

/// Evaluate weight `w` of an MbElement (with possible constant term) at a
/// basis pair, as an A⊗B element.
pub fn mb_eval_pair<B: BasisKey>(
    z: &MbElement<B>,
    w: usize,
    a: &B,
    b: &B,
) -> Result<AbElement<B>> {
    let mut out = AbElement::zero();
    for (tm, f) in &z.terms {
        if let Some(comp) = f.component(w) {
            out.insert_add(tm.clone(), comp.eval(&[a, b])?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Order-by-order extension (semigroup algebras)
// ---------------------------------------------------------------------------

pub enum ExtendOutcome {
    /// A correction of the next t-order restoring Maurer–Cartan.
    Extended {
        correction: MbElement<LatticeVector>,
    },
    /// No correction exists in the candidate space; the residual is returned
    /// (a d̃-cocycle of total degree 2).
    Obstructed {
        residual: MbElement<LatticeVector>,
    },
}

/// Candidate rule cochains of total degree 1 at one output shift: symmetric
/// tensors in weight 1, skew in weight 2, each also modulated by the
/// reduction-carry indicator of the surface presentation when available.
fn g1_candidates(
    alg: &Rc<SemigroupAlgebra>,
    shift: &LatticeVector,
) -> Vec<TotalCochain<LatticeVector>> {
    let dim = alg.dim();
    let mut out = Vec::new();
    let mut sym_tensors = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let mut t = MultiTensor::zeros(dim, 2);
            *t.entry_mut(&[i, j]) = BigRational::one();
            if i != j {
                *t.entry_mut(&[j, i]) = BigRational::one();
            }
            sym_tensors.push(t);
        }
    }
    for t in sym_tensors {
        let f = rule_cochain(alg, t, shift.clone());
        out.push(TotalCochain::single(2, 1, f).unwrap());
    }
    if dim == 2 {
        let skew = rule_cochain(alg, MultiTensor::det2(), shift.clone());
        out.push(TotalCochain::single(2, 2, skew).unwrap());
    }
    if let Some(pres) = alg.surface.clone() {
        // Carry-indicator family: c(λ,μ) = 1 when the canonical S₂-slots of
        // λ and μ overflow the relation.
        let alg2 = alg.clone();
        let n = i64::from(pres.n);
        let shift_c = shift.clone();
        let carry_sym = Cochain::from_fn(2, Some(shift.clone()), move |args: &[&LatticeVector]| {
            let e1 = s2_exponent_of(n, args[0]);
            let e2 = s2_exponent_of(n, args[1]);
            if e1 + e2 >= n + 1 {
                let expo = args[0].add(args[1]).sub(&shift_c);
                if alg2.contains(&expo) {
                    return Ok(Element::monomial(expo));
                }
            }
            Ok(Element::zero())
        });
        out.push(TotalCochain::single(2, 1, carry_sym).unwrap());
    }
    out
}

/// The S₂-exponent of the canonical factorization λ = i S₁ + ε S₂ + j S₃.
fn s2_exponent_of(n: i64, m: &LatticeVector) -> i64 {
    let x: i64 = m.coords[0].to_string().parse().unwrap_or(0);
    x.rem_euclid(n + 1)
}

/// Extend a Maurer–Cartan solution of order `order` (residual vanishes in
/// t-degrees ≤ order) by one order, solving the linear equation for the
/// next-order correction over a candidate space of rule cochains.
pub fn mc_extend(
    x: &MbElement<LatticeVector>,
    order: u32,
    pair: &PoissonPair<LatticeVector>,
    ring: &ArtinRing,
    alg: &Rc<SemigroupAlgebra>,
    window: &[LatticeVector],
) -> Result<ExtendOutcome> {
    let residual = mc_residual(x, pair, ring)?;
    let target = residual.degree_part(ring, order + 1);
    if target.is_zero_on(window)? {
        return Ok(ExtendOutcome::Extended {
            correction: MbElement::zero(2),
        });
    }

    let mut correction = MbElement::zero(2);
    for (tm, r) in &target.terms {
        // Output shifts appearing in the residual at this monomial.
        let mut shifts: Vec<LatticeVector> = Vec::new();
        for (_, comp) in r.weights() {
            for_each_tuple(window, 3, &mut |tuple| {
                let v = comp.eval(tuple)?;
                for (mono, _) in v.iter() {
                    let total = tuple
                        .iter()
                        .fold(LatticeVector::zero(alg.dim(), Side::M), |acc, t| acc.add(t));
                    let s = total.sub(mono);
                    if !shifts.contains(&s) {
                        shifts.push(s);
                    }
                }
                Ok(())
            })?;
        }
        if shifts.is_empty() {
            continue;
        }
        // Candidates can cancel through the μ-part (same shift) or through
        // the μ_p-part (shift raised by the bracket's own shift).
        let mut cand_shifts = shifts.clone();
        if let Some(mup_shift) = &pair.mup.degree {
            for s in &shifts {
                let t = s.sub(mup_shift);
                if !cand_shifts.contains(&t) {
                    cand_shifts.push(t);
                }
            }
        }
        let mut candidates: Vec<TotalCochain<LatticeVector>> = Vec::new();
        for s in &cand_shifts {
            candidates.extend(g1_candidates(alg, s));
        }
        // Rows: (window triple, weight, output monomial) ↦ equation.
        let mut row_index: BTreeMap<(Vec<LatticeVector>, usize, LatticeVector), usize> =
            BTreeMap::new();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut rhs: Vec<BigRational> = Vec::new();
        let ncols = candidates.len();
        let images: Vec<TotalCochain<LatticeVector>> = candidates
            .iter()
            .map(|c| pair.tilde_d(c))
            .collect::<Result<_>>()?;
        let mut record =
            |key: (Vec<LatticeVector>, usize, LatticeVector),
             col: Option<usize>,
             val: BigRational,
             rows: &mut Vec<Vec<BigRational>>,
             rhs: &mut Vec<BigRational>,
             row_index: &mut BTreeMap<(Vec<LatticeVector>, usize, LatticeVector), usize>| {
                let idx = *row_index.entry(key).or_insert_with(|| {
                    rows.push(vec![BigRational::zero(); ncols]);
                    rhs.push(BigRational::zero());
                    rows.len() - 1
                });
                match col {
                    Some(c) => rows[idx][c] += val,
                    None => rhs[idx] += val,
                }
            };
        for_each_tuple(window, 3, &mut |tuple| {
            let key_tuple: Vec<LatticeVector> = tuple.iter().map(|&b| b.clone()).collect();
            for w in 1..=3usize {
                if let Some(comp) = r.component(w) {
                    let v = comp.eval(tuple)?;
                    for (mono, c) in v.iter() {
                        record(
                            (key_tuple.clone(), w, mono.clone()),
                            None,
                            -c.clone(),
                            &mut rows,
                            &mut rhs,
                            &mut row_index,
                        );
                    }
                }
                for (col, img) in images.iter().enumerate() {
                    if let Some(comp) = img.component(w) {
                        let v = comp.eval(tuple)?;
                        for (mono, c) in v.iter() {
                            record(
                                (key_tuple.clone(), w, mono.clone()),
                                Some(col),
                                c.clone(),
                                &mut rows,
                                &mut rhs,
                                &mut row_index,
                            );
                        }
                    }
                }
            }
            Ok(())
        })?;
        let mat = QMatrix::from_rows(rows);
        match mat.solve(&rhs) {
            Some(sol) => {
                let mut term = TotalCochain::zero(2);
                for (col, coeff) in sol.iter().enumerate() {
                    if !coeff.is_zero() {
                        term = term.add(&candidates[col].scale(coeff))?;
                    }
                }
                correction.insert_add(tm.clone(), term)?;
            }
            None => {
                return Ok(ExtendOutcome::Obstructed { residual: target });
            }
        }
    }
    Ok(ExtendOutcome::Extended { correction })
}

// ---------------------------------------------------------------------------
// Poisson axioms ⇔ Maurer–Cartan residuals
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub commutative: bool,
    pub associative: bool,
    pub jacobi: bool,
    pub leibniz: bool,
    pub residual_mu_mu: bool,
    pub residual_mu_mup: bool,
    pub residual_mup_mup: bool,
    /// F(a,b,c) + F(c,a,b) = −[μ_p,μ](a,b,c) pointwise.
    pub identity_f_cyclic: bool,
    /// −2F(a,b,c) = [μ_p,μ](a,b,c) + [μ_p,μ](a,c,b) − [μ_p,μ](b,a,c) pointwise.
    pub identity_minus_two_f: bool,
    /// (all axioms hold) ⇔ (all residuals vanish).
    pub equivalence: bool,
}

impl AxiomReport {
    pub fn axioms_hold(&self) -> bool {
        self.commutative && self.associative && self.jacobi && self.leibniz
    }

    pub fn residuals_vanish(&self) -> bool {
        self.residual_mu_mu && self.residual_mu_mup && self.residual_mup_mup
    }
}

/// Compare the Poisson-algebra axioms of a symmetric/skew bilinear pair with
/// the Maurer–Cartan residuals ½[μ,μ], [μ,μ_p], ½[μ_p,μ_p]_p, and verify the
/// two pointwise bracket identities behind the equivalence.
pub fn poisson_axiom_equivalence<B: BasisKey>(
    mu: &Cochain<B>,
    mup: &Cochain<B>,
    window: &[B],
) -> Result<AxiomReport> {
    // The symmetry tags are preconditions, verified first.
    let s2 = total_shuffle(2);
    if !is_zero_on(&shuffle_apply(mu, &s2, DEFAULT_ARITY_CAP)?, window)? {
        return Err(Error::input("μ' must be symmetric"));
    }
    let skew_test = shuffle_apply(mup, &s2, DEFAULT_ARITY_CAP)?
        .sub(&mup.scale(&BigRational::from_integer(2.into())))?;
    if !is_zero_on(&skew_test, window)? {
        return Err(Error::input("μ'_p must be skew"));
    }

    let eval2 = |f: &Cochain<B>, a: &B, b: &B| f.eval(&[a, b]);
    let mut associative = true;
    let mut jacobi = true;
    let mut leibniz = true;
    let mut identity_f_cyclic = true;
    let mut identity_minus_two_f = true;

    let bracket_mixed = gerstenhaber_bracket(mup, mu)?; // [μ_p, μ]
    let f_of = |a: &B, b: &B, c: &B| -> Result<Element<B>> {
        // F(a,b,c) = μ_p(a, μ(b,c)) − μ(μ_p(a,b), c) − μ(μ_p(a,c), b)
        let t1 = mup.eval_elements(&[Element::monomial(a.clone()), eval2(mu, b, c)?])?;
        let t2 = mu.eval_elements(&[eval2(mup, a, b)?, Element::monomial(c.clone())])?;
        let t3 = mu.eval_elements(&[eval2(mup, a, c)?, Element::monomial(b.clone())])?;
        Ok(t1.sub(&t2).sub(&t3))
    };

    for_each_tuple(window, 3, &mut |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        // Associativity.
        let left = mu.eval_elements(&[eval2(mu, a, b)?, Element::monomial(c.clone())])?;
        let right = mu.eval_elements(&[Element::monomial(a.clone()), eval2(mu, b, c)?])?;
        if left != right {
            associative = false;
        }
        // Jacobi.
        let j1 = mup.eval_elements(&[Element::monomial(a.clone()), eval2(mup, b, c)?])?;
        let j2 = mup.eval_elements(&[Element::monomial(b.clone()), eval2(mup, c, a)?])?;
        let j3 = mup.eval_elements(&[Element::monomial(c.clone()), eval2(mup, a, b)?])?;
        if !j1.add(&j2).add(&j3).is_zero() {
            jacobi = false;
        }
        // Leibniz via F.
        let fabc = f_of(a, b, c)?;
        if !fabc.is_zero() {
            leibniz = false;
        }
        // Pointwise identities.
        let fcab = f_of(c, a, b)?;
        let br = bracket_mixed.eval(&[a, b, c])?;
        if fabc.add(&fcab) != br.neg() {
            identity_f_cyclic = false;
        }
        let br_acb = bracket_mixed.eval(&[a, c, b])?;
        let br_bac = bracket_mixed.eval(&[b, a, c])?;
        let combo = br.add(&br_acb).sub(&br_bac);
        if combo != fabc.scale(&BigRational::from_integer((-2).into())) {
            identity_minus_two_f = false;
        }
        Ok(())
    })?;

    let residual_mu_mu = is_zero_on(&gerstenhaber_bracket(mu, mu)?, window)?;
    let residual_mu_mup = is_zero_on(&gerstenhaber_bracket(mu, mup)?, window)?;
    let mup_sq = gerstenhaber_bracket(mup, mup)?;
    let residual_mup_mup = is_zero_on(&hodge_project(&mup_sq, 3)?, window)?;

    let report = AxiomReport {
        commutative: true,
        associative,
        jacobi,
        leibniz,
        residual_mu_mu,
        residual_mu_mup,
        residual_mup_mup,
        identity_f_cyclic,
        identity_minus_two_f,
        equivalence: (associative && jacobi && leibniz)
            == (residual_mu_mu && residual_mu_mup && residual_mup_mup),
    };
    Ok(report)
}

/// Seeded random gauge parameter over the ring, built from derivation rules.
pub fn random_gauge_parameter(
    rng: &mut ChaCha8Rng,
    alg: &Rc<SemigroupAlgebra>,
    ring: &ArtinRing,
) -> MbElement<LatticeVector> {
    let dim = alg.dim();
    let mut out = MbElement::zero(1);
    for d in 1..ring.order {
        // One random derivation per t-degree, on the first variable.
        let mut mono = vec![0u32; ring.vars];
        mono[0] = d;
        let dir: Vec<BigRational> = (0..dim)
            .map(|_| BigRational::from_integer(rng.random_range(-2..3).into()))
            .collect();
        let shift = LatticeVector::m_side(
            (0..dim)
                .map(|_| BigInt::from(rng.random_range(0..2) as i64))
                .collect(),
        );
        let theta = crate::hochschild::derivation_cochain(alg, dir, shift.neg());
        out.insert_add(mono, TotalCochain::single(1, 1, theta).unwrap())
            .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::multiplication_cochain;
    use crate::surface::pi_g;
    use crate::toric::surface_algebra;
    use rand::SeedableRng;

    fn setup(n: u32, d: i64) -> (Rc<SemigroupAlgebra>, PoissonPair<LatticeVector>, Vec<LatticeVector>) {
        let alg = Rc::new(surface_algebra(n, d).unwrap());
        let window = alg.window_basis.clone();
        let mu = multiplication_cochain(&alg);
        let mup = pi_g(&alg);
        let pair = PoissonPair::new(mu, mup, &window).unwrap();
        (alg, pair, window)
    }

    #[test]
    fn structure_bracket_identities() {
        let (_alg, pair, window) = setup(1, 4);
        // [μ,μ]_p = [μ,μ] = 0 and [μ_p,μ_p]_p = e_3(3)[μ_p,μ_p] = 0.
        let m = pair.structure_total();
        let sq = p_bracket(&m, &m).unwrap();
        assert!(sq.is_zero_on(&window).unwrap());
    }

    #[test]
    fn tilde_d_squares_to_zero() {
        let (alg, pair, window) = setup(1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let mut t = MultiTensor::zeros(2, 2);
            for c in t.coeffs.iter_mut() {
                *c = BigRational::from_integer(rng.random_range(-2..3).into());
            }
            let shift = LatticeVector::m_from(&[rng.random_range(0..2), rng.random_range(0..2)]);
            let f = rule_cochain(&alg, t, shift);
            let sym = hodge_project(&f, 1).unwrap();
            let total = TotalCochain::single(2, 1, sym).unwrap();
            let d1 = pair.tilde_d(&total).unwrap();
            let d2 = pair.tilde_d(&d1).unwrap();
            assert!(d2.is_zero_on(&window).unwrap());
        }
    }

    #[test]
    fn tilde_d_on_weight_one_column() {
        let (alg, pair, window) = setup(1, 4);
        // θ a toric derivation: the vertical part (weight 1) vanishes and
        // the horizontal part is the weight-2 projection of [μ_p, θ], which
        // for a derivation is −[θ, μ_p] = d_p-type.
        let theta = crate::hochschild::derivation_cochain(
            &alg,
            vec![BigRational::from_integer(1.into()), BigRational::zero()],
            LatticeVector::zero(2, Side::M),
        );
        let total = TotalCochain::single(1, 1, theta.clone()).unwrap();
        let d = pair.tilde_d(&total).unwrap();
        // Weight 1 part = [μ, θ] restricted: a derivation is a cocycle.
        assert!(is_zero_on(d.component(1).unwrap(), &window).unwrap());
        // Weight 2 part equals e_2(2)[μ_p, θ].
        let mixed = gerstenhaber_bracket(&pair.mup, &theta).unwrap();
        let expect = hodge_project(&mixed, 2).unwrap();
        assert!(crate::hochschild::equal_on(d.component(2).unwrap(), &expect, &window).unwrap());
    }

    #[test]
    fn tilde_d_with_zero_poisson_is_hochschild_columnwise() {
        let alg = Rc::new(surface_algebra(1, 4).unwrap());
        let window = alg.window_basis.clone();
        let mu = multiplication_cochain(&alg);
        let zero = Cochain::from_fn(2, None, |_args: &[&LatticeVector]| Ok(Element::zero()));
        let pair = PoissonPair::new(mu.clone(), zero, &window).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut t = MultiTensor::zeros(2, 2);
        for c in t.coeffs.iter_mut() {
            *c = BigRational::from_integer(rng.random_range(-2..3).into());
        }
        let f = hodge_project(&rule_cochain(&alg, t, LatticeVector::m_from(&[0, 0])), 1).unwrap();
        let total = TotalCochain::single(2, 1, f.clone()).unwrap();
        let d = pair.tilde_d(&total).unwrap();
        // Columnwise the differential is the Hochschild one up to the shift
        // sign (−1)^{n+1}: here n = 2, so [μ,f] = −df.
        let df = hochschild_d(&f, &mu).unwrap();
        let got = d.component(1).unwrap();
        assert!(crate::hochschild::equal_on(got, &df.scale(&-BigRational::one()), &window).unwrap());
        assert!(d.component(2).map_or(true, |c| is_zero_on(c, &window).unwrap()));
    }

    #[test]
    fn mc_check_examples() {
        let (alg, pair, window) = setup(1, 4);
        let ring = ArtinRing::new(1, 2); // t² = 0
        // x = 0.
        let zero = MbElement::zero(2);
        assert!(mc_check(&zero, &pair, &ring, &window).unwrap().holds);

        // x = t·(0, ξ_p) with ξ_p a dropless multiple of the bracket family:
        // d̃x = 0 and the bracket term dies at t².
        let xi_p = rule_cochain(
            &alg,
            MultiTensor::det2(),
            LatticeVector::m_from(&[0, 0]), // shift 0: degree +S_2-like, dropless
        );
        let x = MbElement::from_term(
            ring.var(0),
            TotalCochain::single(2, 2, xi_p).unwrap(),
        );
        let check = mc_check(&x, &pair, &ring, &window).unwrap();
        assert!(check.holds, "witness: {:?}", check.witness);

        // Constant terms are rejected.
        let bad = MbElement::from_term(ring.unit(), TotalCochain::zero(2));
        assert!(mc_check(&bad, &pair, &ring, &window).is_err());
    }

    #[test]
    fn gauge_identities() {
        let (alg, pair, window) = setup(1, 3);
        let ring = ArtinRing::new(1, 3); // t³ = 0
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alpha = random_gauge_parameter(&mut rng, &alg, &ring);

        // gauge_act(0, x) = x.
        let xi_p = rule_cochain(&alg, MultiTensor::det2(), LatticeVector::m_from(&[0, 0]));
        let x = MbElement::from_term(ring.var(0), TotalCochain::single(2, 2, xi_p).unwrap());
        let id = MbElement::zero(1);
        let gx = gauge_act(&id, &x, &pair, &ring).unwrap();
        for (tm, f) in &gx.terms {
            let orig = x.terms.get(tm);
            let diff = match orig {
                Some(o) => f.add(&o.scale(&-BigRational::one())).unwrap(),
                None => f.clone(),
            };
            assert!(diff.is_zero_on(&window).unwrap());
        }

        // gauge_act(α, 0) = 0 when d̃α = 0: use a toric derivation with
        // shift 0, which is a cocycle for both differentials only if the
        // weight-2 part vanishes; test with the S_2-kernel direction.
        // ⟨v, S_2⟩ = 0 for v = (1,−1).
        let theta = crate::hochschild::derivation_cochain(
            &alg,
            vec![BigRational::one(), -BigRational::one()],
            LatticeVector::zero(2, Side::M),
        );
        let closed = MbElement::from_term(ring.var(0), TotalCochain::single(1, 1, theta).unwrap());
        let dcl = tilde_d_mb(&pair, &closed).unwrap();
        assert!(dcl.is_zero_on(&window).unwrap(), "α must be d̃-closed");
        let g0 = gauge_act(&closed, &MbElement::zero(2), &pair, &ring).unwrap();
        assert!(g0.is_zero_on(&window).unwrap());

        // Gauge preserves the Maurer–Cartan equation.
        let gxa = gauge_act(&alpha, &x, &pair, &ring).unwrap();
        assert!(mc_check(&gxa, &pair, &ring, &window).unwrap().holds);
    }

    #[test]
    fn gauge_composition_matches_bch() {
        let (alg, pair, window) = setup(1, 3);
        let ring = ArtinRing::new(1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let alpha = random_gauge_parameter(&mut rng, &alg, &ring);
        let beta = random_gauge_parameter(&mut rng, &alg, &ring);
        let xi_p = rule_cochain(&alg, MultiTensor::det2(), LatticeVector::m_from(&[0, 0]));
        let x = MbElement::from_term(ring.var(0), TotalCochain::single(2, 2, xi_p).unwrap());

        let one_then_two = gauge_act(&beta, &gauge_act(&alpha, &x, &pair, &ring).unwrap(), &pair, &ring).unwrap();
        let combined = gauge_act(&bch(&beta, &alpha, &ring).unwrap(), &x, &pair, &ring).unwrap();
        let diff = one_then_two.add(&combined.scale(&-BigRational::one())).unwrap();
        assert!(diff.is_zero_on(&window).unwrap());
    }

    #[test]
    fn mc_extend_examples() {
        let (alg, pair, window) = setup(1, 5);
        let ring = ArtinRing::new(1, 3);

        // x = 0 extends to 0 at every order.
        let zero = MbElement::zero(2);
        for order in 0..2 {
            match mc_extend(&zero, order, &pair, &ring, &alg, &window).unwrap() {
                ExtendOutcome::Extended { correction } => {
                    assert!(correction.is_zero_on(&window).unwrap())
                }
                ExtendOutcome::Obstructed { .. } => panic!("zero obstructed"),
            }
        }

        // The exact equation-deformation pair at degree −2S₂ is d̃-closed
        // and already Maurer–Cartan; its extension is trivial.
        let (xi, xi_p) = crate::surface::equation_deformation_pair(&alg, 2).unwrap();
        let first = TotalCochain::from_components(2, vec![Some(xi.clone()), Some(xi_p.clone())])
            .unwrap();
        let closed = tilde_d_mb(
            &pair,
            &MbElement::from_term(ring.var(0), first.clone()),
        )
        .unwrap();
        assert!(closed.is_zero_on(&window).unwrap(), "first-order pair not closed");
        let x = MbElement::from_term(ring.var(0), first.clone());
        assert!(mc_check(&x, &pair, &ring, &window).unwrap().holds);
        match mc_extend(&x, 1, &pair, &ring, &alg, &window).unwrap() {
            ExtendOutcome::Extended { correction } => {
                assert!(correction.is_zero_on(&window).unwrap())
            }
            ExtendOutcome::Obstructed { .. } => panic!("unobstructed direction obstructed"),
        }

        // Perturb by a t² junk term: the solver must find a correction
        // cancelling it, and the repaired element passes the checker.
        let mut t = MultiTensor::zeros(2, 2);
        *t.entry_mut(&[0, 0]) = BigRational::from_integer(1.into());
        *t.entry_mut(&[1, 1]) = BigRational::from_integer(2.into());
        let junk = rule_cochain(&alg, t, LatticeVector::m_from(&[1, 1]));
        let mut x2 = x.clone();
        let mut tt = ring.unit();
        tt[0] = 2;
        x2.insert_add(tt.clone(), TotalCochain::single(2, 1, hodge_project(&junk, 1).unwrap()).unwrap())
            .unwrap();
        // The t² residual is d̃(junk-part); per the general theory it is a
        // d̃-cocycle, which the checker confirms directly.
        let residual = mc_residual(&x2, &pair, &ring).unwrap().degree_part(&ring, 2);
        let d_res = tilde_d_mb(&pair, &residual).unwrap();
        assert!(d_res.is_zero_on(&window).unwrap(), "obstruction residual not closed");
        match mc_extend(&x2, 1, &pair, &ring, &alg, &window).unwrap() {
            ExtendOutcome::Extended { correction } => {
                let repaired = x2.add(&correction).unwrap();
                assert!(mc_check(&repaired, &pair, &ring, &window).unwrap().holds);
            }
            ExtendOutcome::Obstructed { residual } => {
                // The solver could legitimately fail only if the candidate
                // space is too small; the residual must still be closed.
                let d = tilde_d_mb(&pair, &residual).unwrap();
                assert!(d.is_zero_on(&window).unwrap());
                panic!("expected the junk perturbation to be correctable");
            }
        }
    }

    #[test]
    fn axiom_equivalence_cases() {
        // The diagonal product with zero bracket: everything passes.
        let mu = crate::finite::pointwise_mult(3);
        let zero = crate::finite::zero_bilinear();
        let window = crate::finite::fin_window(3);
        let rep = poisson_axiom_equivalence(&mu, &zero, &window).unwrap();
        assert!(rep.axioms_hold() && rep.residuals_vanish() && rep.equivalence);
        assert!(rep.identity_f_cyclic && rep.identity_minus_two_f);

        // The truncated polynomial Poisson pair: everything passes.
        let (mu, pois, dim) = crate::finite::truncated_poly_pair();
        let window = crate::finite::fin_window(dim);
        let rep = poisson_axiom_equivalence(&mu, &pois, &window).unwrap();
        assert!(rep.axioms_hold(), "{:?}", rep);
        assert!(rep.residuals_vanish() && rep.equivalence);

        // A random perturbed pair: axioms fail, residuals nonzero, but the
        // identities and the equivalence still hold.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = crate::finite::random_symmetric_bilinear(&mut rng, 3);
        let mup = crate::finite::random_skew_bilinear(&mut rng, 3);
        let window = crate::finite::fin_window(3);
        let rep = poisson_axiom_equivalence(&mu, &mup, &window).unwrap();
        assert!(rep.equivalence, "{:?}", rep);
        assert!(rep.identity_f_cyclic && rep.identity_minus_two_f);

        // Tag violations are input errors.
        let skew = crate::finite::random_skew_bilinear(&mut rng, 2);
        let sym = crate::finite::random_symmetric_bilinear(&mut rng, 2);
        let window2 = crate::finite::fin_window(2);
        assert!(poisson_axiom_equivalence(&skew, &sym, &window2).is_err());
    }

    #[test]
    fn toric_pair_passes_axioms_on_window() {
        let (_alg, pair, window) = setup(1, 4);
        let rep = poisson_axiom_equivalence(&pair.mu, &pair.mup, &window).unwrap();
        assert!(rep.axioms_hold() && rep.residuals_vanish() && rep.equivalence);
    }
}
