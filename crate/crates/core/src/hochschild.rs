//! Hochschild cochains, the Gerstenhaber circle product and bracket, shuffle
//! operators and the Hodge projectors e_n(i).
//!
//! Cochains are multilinear maps on a basis-indexed space. Two
//! representations exist: `Symbolic` cochains are total (a rule evaluates
//! any basis tuple), `Table` cochains are defined on tuples from a finite
//! window. Brackets and differentials of unbounded support require the
//! symbolic form; shuffle and projector actions support both.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;

use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::toric::SemigroupAlgebra;

/// Default cap on cochain arity for shuffle/projector work (s_5 already has
/// 30 shuffles and the projectors up to 120 permutations).
pub const DEFAULT_ARITY_CAP: usize = 5;

type EvalFn<B> = dyn Fn(&[&B]) -> Result<Element<B>>;

#[derive(Clone)]
enum Body<B: BasisKey> {
    Symbolic(Rc<EvalFn<B>>),
    Table(TableData<B>),
}

#[derive(Clone)]
struct TableData<B: BasisKey> {
    window: Rc<Vec<B>>,
    entries: Rc<BTreeMap<Vec<B>, Element<B>>>,
    /// When set, tuples of window points absent from `entries` read as zero
    /// (the table is total on window tuples with sparse storage).
    dense_domain: bool,
}

/// A homogeneous multilinear map on the algebra.
#[derive(Clone)]
pub struct Cochain<B: BasisKey> {
    pub arity: usize,
    /// Output shift R of a graded cochain: on monomials the output exponent
    /// is λ_1 + ... + λ_n − R. Informational; `None` when not tracked.
    pub degree: Option<LatticeVector>,
    body: Body<B>,
}

impl<B: BasisKey> std::fmt::Debug for Cochain<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.body {
            Body::Symbolic(_) => "symbolic",
            Body::Table(t) => return write!(
                f,
                "Cochain(arity {}, table over {} points)",
                self.arity,
                t.window.len()
            ),
        };
        write!(f, "Cochain(arity {}, {})", self.arity, kind)
    }
}

impl<B: BasisKey> Cochain<B> {
    pub fn from_fn<F>(arity: usize, degree: Option<LatticeVector>, f: F) -> Self
    where
        F: Fn(&[&B]) -> Result<Element<B>> + 'static,
    {
        Cochain {
            arity,
            degree,
            body: Body::Symbolic(Rc::new(f)),
        }
    }

    pub fn zero(arity: usize) -> Self {
        Cochain::from_fn(arity, None, |_| Ok(Element::zero()))
    }

    pub fn from_table(
        arity: usize,
        window: Rc<Vec<B>>,
        entries: BTreeMap<Vec<B>, Element<B>>,
    ) -> Self {
        Cochain {
            arity,
            degree: None,
            body: Body::Table(TableData {
                window,
                entries: Rc::new(entries),
                dense_domain: false,
            }),
        }
    }

    /// A table total on all window tuples, stored sparsely: missing entries
    /// read as zero.
    pub fn from_sparse_table(
        arity: usize,
        window: Rc<Vec<B>>,
        entries: BTreeMap<Vec<B>, Element<B>>,
    ) -> Self {
        Cochain {
            arity,
            degree: None,
            body: Body::Table(TableData {
                window,
                entries: Rc::new(entries),
                dense_domain: true,
            }),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.body, Body::Symbolic(_))
    }

    pub fn is_table(&self) -> bool {
        !self.is_symbolic()
    }

    pub fn table_window(&self) -> Option<&Rc<Vec<B>>> {
        match &self.body {
            Body::Table(t) => Some(&t.window),
            Body::Symbolic(_) => None,
        }
    }

    pub fn require_symbolic(&self, what: &str) -> Result<()> {
        if self.is_symbolic() {
            Ok(())
        } else {
            Err(Error::Representation(format!(
                "{} requires a symbolic cochain",
                what
            )))
        }
    }

    /// Evaluate at a basis tuple.
    pub fn eval(&self, args: &[&B]) -> Result<Element<B>> {
        debug_assert_eq!(args.len(), self.arity);
        match &self.body {
            Body::Symbolic(f) => f(args),
            Body::Table(t) => {
                let key: Vec<B> = args.iter().map(|&b| b.clone()).collect();
                match t.entries.get(&key) {
                    Some(v) => Ok(v.clone()),
                    None if t.dense_domain && key.iter().all(|b| t.window.contains(b)) => {
                        Ok(Element::zero())
                    }
                    None => Err(Error::Domain(format!("{:?}", key))),
                }
            }
        }
    }

    pub fn eval_owned(&self, args: &[B]) -> Result<Element<B>> {
        let refs: Vec<&B> = args.iter().collect();
        self.eval(&refs)
    }

    /// Multilinear extension: evaluate at element arguments by expanding
    /// over their supports.
    pub fn eval_elements(&self, args: &[Element<B>]) -> Result<Element<B>> {
        debug_assert_eq!(args.len(), self.arity);
        let mut out = Element::zero();
        let mut tuple: Vec<&B> = Vec::with_capacity(self.arity);
        self.expand(args, &mut tuple, &BigRational::one(), &mut out)?;
        Ok(out)
    }

    fn expand<'a>(
        &self,
        args: &'a [Element<B>],
        tuple: &mut Vec<&'a B>,
        coeff: &BigRational,
        out: &mut Element<B>,
    ) -> Result<()> {
        let k = tuple.len();
        if k == args.len() {
            let v = self.eval(tuple)?;
            out.scaled_add(coeff, &v);
            return Ok(());
        }
        for (b, c) in args[k].iter() {
            tuple.push(b);
            self.expand(args, tuple, &(coeff * c), out)?;
            tuple.pop();
        }
        Ok(())
    }

    /// Pointwise sum. Mixed representations yield a symbolic wrapper.
    pub fn add(&self, other: &Cochain<B>) -> Result<Cochain<B>> {
        if self.arity != other.arity {
            return Err(Error::input("cannot add cochains of different arities"));
        }
        let degree = match (&self.degree, &other.degree) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        let (f, g) = (self.clone(), other.clone());
        Ok(Cochain {
            arity: self.arity,
            degree,
            body: Body::Symbolic(Rc::new(move |args: &[&B]| {
                Ok(f.eval(args)?.add(&g.eval(args)?))
            })),
        })
    }

    pub fn sub(&self, other: &Cochain<B>) -> Result<Cochain<B>> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Cochain<B> {
        let f = self.clone();
        let k = k.clone();
        Cochain {
            arity: self.arity,
            degree: self.degree.clone(),
            body: Body::Symbolic(Rc::new(move |args: &[&B]| Ok(f.eval(args)?.scale(&k)))),
        }
    }

    /// Materialize as a table over a window (total by construction).
    pub fn materialize(&self, window: &Rc<Vec<B>>) -> Result<Cochain<B>> {
        let mut entries = BTreeMap::new();
        for_each_tuple(window, self.arity, &mut |tuple| {
            let v = self.eval(tuple)?;
            entries.insert(tuple.iter().map(|&b| b.clone()).collect(), v);
            Ok(())
        })?;
        let mut out = Cochain::from_table(self.arity, window.clone(), entries);
        out.degree = self.degree.clone();
        Ok(out)
    }
}

/// Wrap a symbolic cochain so repeated evaluations at the same tuple are
/// cached. Nested brackets and projector sums revisit tuples heavily; the
/// cache turns that from exponential to linear in distinct tuples.
pub fn memoized<B: BasisKey>(f: &Cochain<B>) -> Cochain<B> {
    if f.is_table() {
        return f.clone();
    }
    let inner = f.clone();
    let cache: Rc<std::cell::RefCell<std::collections::HashMap<Vec<B>, Element<B>>>> =
        Rc::new(std::cell::RefCell::new(std::collections::HashMap::new()));
    Cochain::from_fn(f.arity, f.degree.clone(), move |args: &[&B]| {
        let key: Vec<B> = args.iter().map(|&b| b.clone()).collect();
        if let Some(v) = cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = inner.eval(&key.iter().collect::<Vec<&B>>())?;
        cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    })
}

/// Run `f` on every `arity`-tuple of window points.
pub fn for_each_tuple<B: BasisKey>(
    window: &[B],
    arity: usize,
    f: &mut dyn FnMut(&[&B]) -> Result<()>,
) -> Result<()> {
    let mut tuple: Vec<&B> = Vec::with_capacity(arity);
    fn rec<'a, B: BasisKey>(
        window: &'a [B],
        arity: usize,
        tuple: &mut Vec<&'a B>,
        f: &mut dyn FnMut(&[&B]) -> Result<()>,
    ) -> Result<()> {
        if tuple.len() == arity {
            return f(tuple);
        }
        for b in window {
            tuple.push(b);
            rec(window, arity, tuple, f)?;
            tuple.pop();
        }
        Ok(())
    }
    rec(window, arity, &mut tuple, f)
}

/// The circle product f ∘ g with the Gerstenhaber signs.
pub fn circle<B: BasisKey>(f: &Cochain<B>, g: &Cochain<B>) -> Result<Cochain<B>> {
    f.require_symbolic("circle product")?;
    g.require_symbolic("circle product")?;
    let m = f.arity;
    let n = g.arity;
    if m == 0 || n == 0 {
        return Err(Error::input("circle product needs positive arities"));
    }
    let degree = match (&f.degree, &g.degree) {
        (Some(a), Some(b)) => Some(a.add(b)),
        _ => None,
    };
    let (fc, gc) = (f.clone(), g.clone());
    Ok(Cochain::from_fn(m + n - 1, degree, move |args: &[&B]| {
        let mut out = Element::zero();
        for i in 0..m {
            // Sign (−1)^{(i−1)(n+1)} for the 1-indexed slot i.
            let neg = (i * (n + 1)) % 2 == 1;
            let inner = gc.eval(&args[i..i + n])?;
            for (b, c) in inner.iter() {
                let mut outer: Vec<&B> = Vec::with_capacity(m);
                outer.extend_from_slice(&args[0..i]);
                outer.push(b);
                outer.extend_from_slice(&args[i + n..]);
                let v = fc.eval(&outer)?;
                let coeff = if neg { -c.clone() } else { c.clone() };
                out.scaled_add(&coeff, &v);
            }
        }
        Ok(out)
    }))
}

/// The Gerstenhaber bracket [f,g] = f∘g − (−1)^{(m+1)(n+1)} g∘f.
pub fn gerstenhaber_bracket<B: BasisKey>(f: &Cochain<B>, g: &Cochain<B>) -> Result<Cochain<B>> {
    let m = f.arity;
    let n = g.arity;
    let fg = circle(f, g)?;
    let gf = circle(g, f)?;
    let sign = if ((m + 1) * (n + 1)) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    fg.sub(&gf.scale(&sign))
}

/// The Hochschild differential of `f` with respect to the multiplication
/// two-cochain `mu`.
pub fn hochschild_d<B: BasisKey>(f: &Cochain<B>, mu: &Cochain<B>) -> Result<Cochain<B>> {
    mu.require_symbolic("the multiplication cochain of the differential")?;
    if mu.arity != 2 {
        return Err(Error::input("multiplication cochain must have arity 2"));
    }
    let n = f.arity;
    match &f.body {
        Body::Symbolic(_) => {
            let (fc, muc) = (f.clone(), mu.clone());
            Ok(Cochain::from_fn(
                n + 1,
                f.degree.clone(),
                move |args: &[&B]| d_eval(&fc, &muc, args),
            ))
        }
        Body::Table(t) => {
            // Restricted to tuples whose internal products stay inside the
            // window; other tuples are absent from the resulting table.
            let window = t.window.clone();
            let mut entries = BTreeMap::new();
            for_each_tuple(&window, n + 1, &mut |tuple| {
                match d_eval(f, mu, tuple) {
                    Ok(v) => {
                        entries.insert(tuple.iter().map(|&b| b.clone()).collect(), v);
                    }
                    Err(Error::Domain(_)) => {}
                    Err(e) => return Err(e),
                }
                Ok(())
            })?;
            Ok(Cochain::from_table(n + 1, window, entries))
        }
    }
}

fn d_eval<B: BasisKey>(f: &Cochain<B>, mu: &Cochain<B>, args: &[&B]) -> Result<Element<B>> {
    let n = f.arity;
    debug_assert_eq!(args.len(), n + 1);
    let mut out = Element::zero();
    // a_1 · f(a_2 ⊗ ... ⊗ a_{n+1})
    let tail = f.eval(&args[1..])?;
    out.add_assign(&mu.eval_elements(&[Element::monomial(args[0].clone()), tail])?);
    // Σ (−1)^i f(..., a_i a_{i+1}, ...)
    for i in 1..=n {
        let prod = mu.eval(&[args[i - 1], args[i]])?;
        let neg = i % 2 == 1;
        for (b, c) in prod.iter() {
            let mut inner: Vec<&B> = Vec::with_capacity(n);
            inner.extend_from_slice(&args[0..i - 1]);
            inner.push(b);
            inner.extend_from_slice(&args[i + 1..]);
            let v = f.eval(&inner)?;
            let coeff = if neg { -c.clone() } else { c.clone() };
            out.scaled_add(&coeff, &v);
        }
    }
    // (−1)^{n+1} f(a_1 ⊗ ... ⊗ a_n) · a_{n+1}
    let head = f.eval(&args[..n])?;
    let last = mu.eval_elements(&[head, Element::monomial(args[n].clone())])?;
    if (n + 1) % 2 == 0 {
        out.add_assign(&last);
    } else {
        out.add_assign(&last.neg());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Shuffle operators and Hodge projectors
// ---------------------------------------------------------------------------

/// Permutations are stored as index arrays: entry k is the (0-indexed)
/// source slot of output slot k, so f∘π evaluates f(a_{π(1)},...,a_{π(n)}).
pub type Perm = Vec<u8>;

/// A formal rational combination of permutations in S_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleElement {
    pub arity: usize,
    terms: BTreeMap<Perm, BigRational>,
}

impl ShuffleElement {
    pub fn zero(arity: usize) -> Self {
        ShuffleElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(arity: usize) -> Self {
        let mut s = Self::zero(arity);
        s.add_perm((0..arity as u8).collect(), BigRational::one());
        s
    }

    pub fn add_perm(&mut self, p: Perm, c: BigRational) {
        debug_assert_eq!(p.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Perm, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &ShuffleElement) -> ShuffleElement {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_perm(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ShuffleElement) -> ShuffleElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> ShuffleElement {
        if k.is_zero() {
            return ShuffleElement::zero(self.arity);
        }
        ShuffleElement {
            arity: self.arity,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    pub fn sub_scalar(&self, k: &BigRational) -> ShuffleElement {
        let mut out = self.clone();
        let id: Perm = (0..self.arity as u8).collect();
        out.add_perm(id, -k.clone());
        out
    }

    /// Product so that applying `self · other` to a cochain applies `self`
    /// first: f∘(x·y) = (f∘x)∘y.
    pub fn mul(&self, other: &ShuffleElement) -> ShuffleElement {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = ShuffleElement::zero(self.arity);
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                let composed: Perm = (0..self.arity).map(|k| q[p[k] as usize]).collect();
                out.add_perm(composed, c * d);
            }
        }
        out
    }
}

fn perm_sign(p: &[u8]) -> i32 {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The signed (i, n−i)-shuffle sum s_{i,n−i} ∈ ℚ[S_n].
pub fn shuffle_element(i: usize, j: usize) -> ShuffleElement {
    let n = i + j;
    let mut out = ShuffleElement::zero(n);
    // Choose the output positions of the first block; both blocks stay in
    // increasing order, i.e. π(1)<...<π(i) and π(i+1)<...<π(n).
    let mut positions: Vec<usize> = (0..i).collect();
    loop {
        // Build π: first block values are the chosen positions in order.
        let mut perm = vec![0u8; n];
        let chosen: Vec<usize> = positions.clone();
        let mut rest: Vec<usize> = (0..n).filter(|k| !chosen.contains(k)).collect();
        rest.sort_unstable();
        for (slot, &val) in chosen.iter().enumerate() {
            perm[slot] = val as u8;
        }
        for (slot, &val) in rest.iter().enumerate() {
            perm[i + slot] = val as u8;
        }
        // The action (f∘π)(a_1,...,a_n) = f(a_{π(1)},...,a_{π(n)}) reads the
        // permutation through the argument positions, so the shuffle
        // condition π(1)<...<π(i), π(i+1)<...<π(n) pins the inverse of the
        // stored index array; signs are inversion-invariant.
        let sgn = perm_sign(&perm);
        let mut inv = vec![0u8; n];
        for (slot, &val) in perm.iter().enumerate() {
            inv[val as usize] = slot as u8;
        }
        out.add_perm(inv, BigRational::from_integer(sgn.into()));
        // Next combination.
        let mut k = i;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if positions[k] != k + n - i {
                positions[k] += 1;
                for l in k + 1..i {
                    positions[l] = positions[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The total shuffle operator s_n = Σ_{i=1}^{n−1} s_{i,n−i}.
pub fn total_shuffle(n: usize) -> ShuffleElement {
    let mut out = ShuffleElement::zero(n);
    for i in 1..n {
        out = out.add(&shuffle_element(i, n - i));
    }
    out
}

/// Eigenvalue 2^i − 2 of s_n on the Hodge component C^n_{(i)}.
pub fn hodge_eigenvalue(i: usize) -> BigRational {
    BigRational::from_integer(((1i64 << i) - 2).into())
}

static PROJECTOR_CACHE: Lazy<Mutex<BTreeMap<(usize, usize), ShuffleElement>>> =
    Lazy::new(|| Mutex::new(BTreeMap::new()));

/// The Hodge projector e_n(i): the Lagrange interpolation polynomial in s_n
/// through the eigenvalues 2^j − 2, j = 1..n.
pub fn hodge_projector(n: usize, i: usize) -> Result<ShuffleElement> {
    if i < 1 || i > n {
        return Err(Error::input(format!(
            "Hodge index {} out of range 1..={}",
            i, n
        )));
    }
    if let Some(e) = PROJECTOR_CACHE.lock().unwrap().get(&(n, i)) {
        return Ok(e.clone());
    }
    let s = total_shuffle(n);
    let mut e = ShuffleElement::identity(n);
    for j in 1..=n {
        if j == i {
            continue;
        }
        let factor = s.sub_scalar(&hodge_eigenvalue(j));
        let denom = hodge_eigenvalue(i) - hodge_eigenvalue(j);
        e = e.mul(&factor).scale(&denom.recip());
    }
    PROJECTOR_CACHE.lock().unwrap().insert((n, i), e.clone());
    Ok(e)
}

/// Evaluate (f∘s)(a_1,...,a_n) at one tuple. Works for both
/// representations.
pub fn shuffle_apply_at<B: BasisKey>(
    f: &Cochain<B>,
    s: &ShuffleElement,
    args: &[&B],
) -> Result<Element<B>> {
    debug_assert_eq!(f.arity, s.arity);
    let mut out = Element::zero();
    let mut permuted: Vec<&B> = Vec::with_capacity(f.arity);
    for (p, c) in s.iter() {
        permuted.clear();
        permuted.extend(p.iter().map(|&k| args[k as usize]));
        let v = f.eval(&permuted)?;
        out.scaled_add(c, &v);
    }
    Ok(out)
}

/// Pointwise double application (s2 after s1) without materializing the
/// intermediate cochain.
pub fn shuffle_apply_two_at<B: BasisKey>(
    f: &Cochain<B>,
    s1: &ShuffleElement,
    s2: &ShuffleElement,
    args: &[&B],
) -> Result<Element<B>> {
    let mut out = Element::zero();
    let mut mid: Vec<&B> = Vec::with_capacity(f.arity);
    for (p, c) in s2.iter() {
        mid.clear();
        mid.extend(p.iter().map(|&k| args[k as usize]));
        let v = shuffle_apply_at(f, s1, &mid)?;
        out.scaled_add(c, &v);
    }
    Ok(out)
}

/// Apply a group-algebra element to a cochain: symbolic cochains wrap a
/// closure, table cochains materialize a new table over the same window.
pub fn shuffle_apply<B: BasisKey>(
    f: &Cochain<B>,
    s: &ShuffleElement,
    cap: usize,
) -> Result<Cochain<B>> {
    if f.arity > cap {
        return Err(Error::ArityCap {
            arity: f.arity,
            cap,
        });
    }
    if f.arity != s.arity {
        return Err(Error::input("shuffle element arity mismatch"));
    }
    match &f.body {
        Body::Symbolic(_) => {
            let (fc, sc) = (f.clone(), s.clone());
            Ok(Cochain::from_fn(
                f.arity,
                f.degree.clone(),
                move |args: &[&B]| shuffle_apply_at(&fc, &sc, args),
            ))
        }
        Body::Table(t) => {
            let window = t.window.clone();
            let mut entries = BTreeMap::new();
            for_each_tuple(&window, f.arity, &mut |tuple| {
                let v = shuffle_apply_at(f, s, tuple)?;
                entries.insert(tuple.iter().map(|&b| b.clone()).collect(), v);
                Ok(())
            })?;
            Ok(Cochain::from_table(f.arity, window, entries))
        }
    }
}

/// e_n(i) applied to f, with the default arity cap.
pub fn hodge_project<B: BasisKey>(f: &Cochain<B>, i: usize) -> Result<Cochain<B>> {
    hodge_project_capped(f, i, DEFAULT_ARITY_CAP)
}

pub fn hodge_project_capped<B: BasisKey>(
    f: &Cochain<B>,
    i: usize,
    cap: usize,
) -> Result<Cochain<B>> {
    let e = hodge_projector(f.arity, i)?;
    shuffle_apply(f, &e, cap)
}

// ---------------------------------------------------------------------------
// Comparison helpers
// ---------------------------------------------------------------------------

/// First window tuple where `f` is nonzero, if any.
pub fn first_nonzero_on<B: BasisKey>(
    f: &Cochain<B>,
    window: &[B],
) -> Result<Option<(Vec<B>, Element<B>)>> {
    let mut found: Option<(Vec<B>, Element<B>)> = None;
    let res = for_each_tuple(window, f.arity, &mut |tuple| {
        let v = f.eval(tuple)?;
        if !v.is_zero() {
            found = Some((tuple.iter().map(|&b| b.clone()).collect(), v));
            return Err(Error::Contract("early exit".into()));
        }
        Ok(())
    });
    match res {
        Ok(()) => Ok(None),
        Err(Error::Contract(_)) => Ok(found),
        Err(e) => Err(e),
    }
}

/// True iff `f` vanishes on every window tuple.
pub fn is_zero_on<B: BasisKey>(f: &Cochain<B>, window: &[B]) -> Result<bool> {
    Ok(first_nonzero_on(f, window)?.is_none())
}

/// True iff `f` and `g` agree on every window tuple.
pub fn equal_on<B: BasisKey>(f: &Cochain<B>, g: &Cochain<B>, window: &[B]) -> Result<bool> {
    if f.arity != g.arity {
        return Ok(false);
    }
    let mut equal = true;
    let res = for_each_tuple(window, f.arity, &mut |tuple| {
        if f.eval(tuple)? != g.eval(tuple)? {
            equal = false;
            return Err(Error::Contract("early exit".into()));
        }
        Ok(())
    });
    match res {
        Ok(()) | Err(Error::Contract(_)) => Ok(equal),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Cochains on a semigroup algebra
// ---------------------------------------------------------------------------

/// A multi-additive coefficient tensor on M^arity: the coefficient of a
/// tuple (λ_1,...,λ_n) is the full contraction T[i_1..i_n] λ_1[i_1]...λ_n[i_n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTensor {
    pub dim: usize,
    pub arity: usize,
    /// Flat coefficients, index Σ_k i_k · dim^k.
    pub coeffs: Vec<BigRational>,
}

impl MultiTensor {
    pub fn zeros(dim: usize, arity: usize) -> Self {
        MultiTensor {
            dim,
            arity,
            coeffs: vec![BigRational::zero(); dim.pow(arity as u32)],
        }
    }

    pub fn entry_mut(&mut self, idx: &[usize]) -> &mut BigRational {
        debug_assert_eq!(idx.len(), self.arity);
        let mut flat = 0usize;
        for (k, &i) in idx.iter().enumerate() {
            flat += i * self.dim.pow(k as u32);
        }
        &mut self.coeffs[flat]
    }

    pub fn eval(&self, args: &[&LatticeVector]) -> BigRational {
        debug_assert_eq!(args.len(), self.arity);
        let mut total = BigRational::zero();
        for (flat, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut idx = flat;
            let mut prod = c.clone();
            for arg in args {
                let i = idx % self.dim;
                idx /= self.dim;
                prod *= BigRational::from_integer(arg.coords[i].clone());
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        total
    }

    /// The 2-tensor with c(λ, μ) = det(λ, μ) on a rank-2 lattice.
    pub fn det2() -> Self {
        let mut t = MultiTensor::zeros(2, 2);
        *t.entry_mut(&[0, 1]) = BigRational::one();
        *t.entry_mut(&[1, 0]) = -BigRational::one();
        t
    }
}

/// The multiplication two-cochain μ of a semigroup algebra.
pub fn multiplication_cochain(alg: &Rc<SemigroupAlgebra>) -> Cochain<LatticeVector> {
    let alg = alg.clone();
    let dim = alg.dim();
    Cochain::from_fn(
        2,
        Some(LatticeVector::zero(dim, crate::lattice::Side::M)),
        move |args: &[&LatticeVector]| Ok(Element::monomial(args[0].add(args[1]))),
    )
}

/// A rule cochain f(x^{λ_1},...,x^{λ_n}) = c(λ_1,...,λ_n) · x^{Σλ − R} with
/// a multi-additive coefficient tensor; the value is dropped when the output
/// exponent leaves Λ.
pub fn rule_cochain(
    alg: &Rc<SemigroupAlgebra>,
    tensor: MultiTensor,
    shift: LatticeVector,
) -> Cochain<LatticeVector> {
    let alg = alg.clone();
    let arity = tensor.arity;
    let shift_c = shift.clone();
    Cochain::from_fn(arity, Some(shift), move |args: &[&LatticeVector]| {
        let c = tensor.eval(args);
        if c.is_zero() {
            return Ok(Element::zero());
        }
        let mut expo = args[0].clone();
        for a in &args[1..] {
            expo = expo.add(a);
        }
        let expo = expo.sub(&shift_c);
        if alg.contains(&expo) {
            Ok(Element::term(expo, c))
        } else {
            Ok(Element::zero())
        }
    })
}

/// The derivation with symbol ⟨v, λ⟩ and output shift R:
/// θ(x^λ) = ⟨v, λ⟩ x^{λ−R}, dropped outside Λ.
pub fn derivation_cochain(
    alg: &Rc<SemigroupAlgebra>,
    direction: Vec<BigRational>,
    shift: LatticeVector,
) -> Cochain<LatticeVector> {
    let mut t = MultiTensor::zeros(direction.len(), 1);
    for (i, c) in direction.iter().enumerate() {
        *t.entry_mut(&[i]) = c.clone();
    }
    rule_cochain(alg, t, shift)
}
