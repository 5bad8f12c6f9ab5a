//! Seeded property suites. Each suite is deterministic in its seed, returns
//! a structured report, and is shared between the CLI `check` command and
//! the acceptance tests.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dgla::{
    deformed_eval, exp_ad_structure, exp_apply, gauge_act, mb_eval_pair, mc_check,
    poisson_axiom_equivalence, AbElement, ArtinRing, MbElement, PoissonPair, TotalCochain,
};
use crate::element::Element;
use crate::error::Result;
use crate::hochschild::{
    for_each_tuple, gerstenhaber_bracket, hodge_eigenvalue, hodge_project, hodge_projector,
    memoized, multiplication_cochain, rule_cochain, shuffle_apply_at, shuffle_apply_two_at,
    total_shuffle, Cochain, MultiTensor,
};
use crate::lattice::LatticeVector;
use crate::surface::pi_g;
use crate::toric::{surface_algebra, SemigroupAlgebra};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, trials: usize) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            trials,
            passed: true,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        if self.failures.len() < 16 {
            self.failures.push(msg);
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---------------------------------------------------------------------------
// Hodge projector suite (random table cochains)
// ---------------------------------------------------------------------------

fn random_table(
    rng: &mut ChaCha8Rng,
    window: &Rc<Vec<LatticeVector>>,
    arity: usize,
    nonzero: usize,
) -> Cochain<LatticeVector> {
    let mut entries: BTreeMap<Vec<LatticeVector>, Element<LatticeVector>> = BTreeMap::new();
    let w = window.len();
    for _ in 0..nonzero {
        let key: Vec<LatticeVector> = (0..arity)
            .map(|_| window[rng.random_range(0..w)].clone())
            .collect();
        let value = Element::term(
            window[rng.random_range(0..w)].clone(),
            rat(rng.random_range(-3..4)),
        );
        entries.insert(key, value);
    }
    Cochain::from_sparse_table(arity, window.clone(), entries)
}

fn sample_tuples<'a>(
    rng: &mut ChaCha8Rng,
    window: &'a [LatticeVector],
    arity: usize,
    count: usize,
) -> Vec<Vec<&'a LatticeVector>> {
    let total = window.len().pow(arity as u32);
    if total <= count {
        let mut all = Vec::with_capacity(total);
        let mut idx = vec![0usize; arity];
        'outer: loop {
            all.push(idx.iter().map(|&i| &window[i]).collect());
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < window.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == arity {
                    break 'outer;
                }
            }
        }
        return all;
    }
    (0..count)
        .map(|_| {
            (0..arity)
                .map(|_| &window[rng.random_range(0..window.len())])
                .collect()
        })
        .collect()
}

/// Random table cochains of arities 2–4 on the n = 1 surface window:
/// resolution of identity, idempotence and orthogonality of the projectors
/// (pointwise, exact), eigenvalue 0 for the multiplication, eigenvalue 2 for
/// skew bilinears.
pub fn hodge_projector_suite(seed: u64, trials: usize, window_bound: i64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("hodge-projectors", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = Rc::new(surface_algebra(1, window_bound)?);
    let window = Rc::new(alg.window_basis.clone());

    for trial in 0..trials {
        let arity = 2 + trial % 3;
        let f = random_table(&mut rng, &window, arity, 64.min(window.len().pow(arity as u32)));
        let projectors: Vec<_> = (1..=arity)
            .map(|i| hodge_projector(arity, i))
            .collect::<Result<_>>()?;
        let tuples = sample_tuples(
            &mut rng,
            &window,
            arity,
            match arity {
                2 => 256,
                3 => 160,
                _ => 96,
            },
        );
        for t in &tuples {
            // Σᵢ e_n(i) f = f.
            let mut sum = Element::zero();
            for e in &projectors {
                sum.add_assign(&shuffle_apply_at(&f, e, t)?);
            }
            if sum != f.eval(t)? {
                report.fail(format!("trial {}: Σ e_{}(i) f ≠ f at {:?}", trial, arity, t));
                break;
            }
        }
        // Idempotence and orthogonality, pointwise on a smaller sample.
        let small = sample_tuples(&mut rng, &window, arity, 8);
        for t in &small {
            for (i, ei) in projectors.iter().enumerate() {
                let once = shuffle_apply_at(&f, ei, t)?;
                let twice = shuffle_apply_two_at(&f, ei, ei, t)?;
                if once != twice {
                    report.fail(format!("trial {}: e({}) not idempotent", trial, i + 1));
                }
                for (j, ej) in projectors.iter().enumerate() {
                    if i != j && !shuffle_apply_two_at(&f, ei, ej, t)?.is_zero() {
                        report.fail(format!(
                            "trial {}: e({})e({}) ≠ 0 pointwise",
                            trial,
                            j + 1,
                            i + 1
                        ));
                    }
                }
            }
        }
    }

    // μ has eigenvalue 0 under s₂ on every window pair.
    let mu = multiplication_cochain(&alg);
    let s2 = total_shuffle(2);
    for_each_tuple(&window, 2, &mut |t| {
        if !shuffle_apply_at(&mu, &s2, t)?.is_zero() {
            report.fail(format!("μ∘s₂ ≠ 0 at {:?}", t));
        }
        Ok(())
    })?;
    // Skew bilinear tables have eigenvalue 2.
    for k in 0..16 {
        let mut entries: BTreeMap<Vec<LatticeVector>, Element<LatticeVector>> = BTreeMap::new();
        for i in 0..window.len() {
            for j in i + 1..window.len() {
                let v = Element::term(
                    window[rng.random_range(0..window.len())].clone(),
                    rat(rng.random_range(-3..4)),
                );
                entries.insert(vec![window[i].clone(), window[j].clone()], v.clone());
                entries.insert(vec![window[j].clone(), window[i].clone()], v.neg());
            }
        }
        let p = Cochain::from_sparse_table(2, window.clone(), entries);
        let two = hodge_eigenvalue(2);
        let mut ok = true;
        for_each_tuple(&window, 2, &mut |t| {
            if shuffle_apply_at(&p, &s2, t)? != p.eval(t)?.scale(&two) {
                ok = false;
            }
            Ok(())
        })?;
        if !ok {
            report.fail(format!("skew table {} does not have eigenvalue 2", k));
        }
    }
    report
        .notes
        .push(format!("window size {}", window.len()));
    Ok(report)
}

// ---------------------------------------------------------------------------
// Bracket purity suite (the weight restrictions of squares and mixed
// brackets, with the cochain-vs-cocycle level recorded)
// ---------------------------------------------------------------------------

/// The shuffle-restriction clauses: for skew bilinear p, e₃(2)[p,p] = 0 and
/// e₃(3)[p,p] = 0 exactly when p satisfies the Jacobi identity; for
/// symmetric q, [q,q] = e₃(1)[q,q]; for mixed, [p,q] = e₃(2)[p,q]. The suite
/// reports the level (cochain vs cocycle) at which each clause held.
pub fn pal_lemma_suite(seed: u64, trials: usize, window_bound: i64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("pal-lemma", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = Rc::new(surface_algebra(1, window_bound)?);
    let window = alg.window_basis.clone();

    let mut skew = |rng: &mut ChaCha8Rng| -> Result<Cochain<LatticeVector>> {
        let mut acc: Option<Cochain<LatticeVector>> = None;
        for _ in 0..rng.random_range(1..3) {
            let shift = LatticeVector::m_from(&[rng.random_range(0..4), rng.random_range(0..4)]);
            let kappa = rat(rng.random_range(-2..3));
            let atom = rule_cochain(&alg, MultiTensor::det2(), shift).scale(&kappa);
            acc = Some(match acc {
                None => atom,
                Some(a) => a.add(&atom)?,
            });
        }
        Ok(memoized(&acc.unwrap()))
    };
    let mut sym = |rng: &mut ChaCha8Rng| -> Result<Cochain<LatticeVector>> {
        let mut t = MultiTensor::zeros(2, 2);
        for i in 0..2 {
            for j in i..2 {
                let c = rat(rng.random_range(-2..3));
                *t.entry_mut(&[i, j]) = c.clone();
                *t.entry_mut(&[j, i]) = c;
            }
        }
        let shift = LatticeVector::m_from(&[rng.random_range(0..4), rng.random_range(0..4)]);
        Ok(memoized(&rule_cochain(&alg, t, shift)))
    };

    let mut e32_pp_cochain_level = true;
    let mut e31_qq_level = true;
    let mut e32_pq_level = true;

    for trial in 0..trials {
        let p = skew(&mut rng)?;
        let q = sym(&mut rng)?;
        let pp = memoized(&gerstenhaber_bracket(&p, &p)?);
        // e₃(2)[p,p] = 0 exactly.
        if !crate::hochschild::is_zero_on(&hodge_project(&pp, 2)?, &window)? {
            e32_pp_cochain_level = false;
            report.fail(format!("trial {}: e₃(2)[p,p] ≠ 0", trial));
        }
        // e₃(3)[p,p] = 0 ⇔ Jacobi identity for p (pointwise comparison with
        // the Jacobiator).
        let e33 = hodge_project(&pp, 3)?;
        let mut jac_zero = true;
        let mut e33_zero = true;
        for_each_tuple(&window, 3, &mut |t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            let j1 = p.eval_elements(&[Element::monomial(a.clone()), p.eval(&[b, c])?])?;
            let j2 = p.eval_elements(&[Element::monomial(b.clone()), p.eval(&[c, a])?])?;
            let j3 = p.eval_elements(&[Element::monomial(c.clone()), p.eval(&[a, b])?])?;
            if !j1.add(&j2).add(&j3).is_zero() {
                jac_zero = false;
            }
            if !e33.eval(t)?.is_zero() {
                e33_zero = false;
            }
            Ok(())
        })?;
        if jac_zero != e33_zero {
            report.fail(format!(
                "trial {}: e₃(3)[p,p] = 0 disagrees with the Jacobi identity",
                trial
            ));
        }
        // [q,q] = e₃(1)[q,q].
        let qq = memoized(&gerstenhaber_bracket(&q, &q)?);
        if !crate::hochschild::equal_on(&hodge_project(&qq, 1)?, &qq, &window)? {
            e31_qq_level = false;
        }
        // [p,q] = e₃(2)[p,q].
        let pq = memoized(&gerstenhaber_bracket(&p, &q)?);
        if !crate::hochschild::equal_on(&hodge_project(&pq, 2)?, &pq, &window)? {
            e32_pq_level = false;
        }
    }

    // π_g satisfies the Jacobi clause.
    let pg = pi_g(&alg);
    let pgpg = memoized(&gerstenhaber_bracket(&pg, &pg)?);
    if !crate::hochschild::is_zero_on(&hodge_project(&pgpg, 3)?, &window)? {
        report.fail("e₃(3)[π_g,π_g] ≠ 0".into());
    }

    // A seeded Jacobi-violating skew bilinear must light up e₃(3)[p,p].
    let mut found_violation = false;
    let mut vrng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..64 {
        let p = skew(&mut vrng)?;
        let pp = memoized(&gerstenhaber_bracket(&p, &p)?);
        if !crate::hochschild::is_zero_on(&hodge_project(&pp, 3)?, &window)? {
            found_violation = true;
            break;
        }
    }
    if !found_violation {
        report.fail("no seeded Jacobi-violating p found".into());
    }

    report.notes.push(format!(
        "levels: e3(2)[p,p]=0 held at {} level; [q,q]=e3(1)[q,q] at {} level; [p,q]=e3(2)[p,q] at {} level",
        if e32_pp_cochain_level { "cochain" } else { "cocycle-only" },
        if e31_qq_level { "cochain" } else { "cocycle-only" },
        if e32_pq_level { "cochain" } else { "cocycle-only" },
    ));
    // When a clause fails for arbitrary cochains, retry it on cocycles
    // (dropless shifts) and record the level.
    if !(e32_pp_cochain_level && e31_qq_level && e32_pq_level) {
        let p = memoized(&rule_cochain(
            &alg,
            MultiTensor::det2(),
            LatticeVector::m_from(&[0, 0]),
        ));
        let pp = gerstenhaber_bracket(&p, &p)?;
        let ok = crate::hochschild::is_zero_on(&hodge_project(&pp, 2)?, &window)?;
        report
            .notes
            .push(format!("cocycle-level retry of e3(2)[p,p]=0: {}", ok));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Maurer–Cartan ⇔ Poisson axiom suite (finite dimensions)
// ---------------------------------------------------------------------------

/// Random symmetric/skew pairs on spaces of dimension ≤ 4: the axiom report
/// and the residual report agree, and the two pointwise bracket identities
/// hold. Includes the exactly-Poisson fixtures.
pub fn mc_poisson_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("mc-poisson", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let dim = 1 + trial % 4;
        let mu = crate::finite::random_symmetric_bilinear(&mut rng, dim);
        let mup = crate::finite::random_skew_bilinear(&mut rng, dim);
        let window = crate::finite::fin_window(dim);
        let rep = poisson_axiom_equivalence(&mu, &mup, &window)?;
        if !rep.equivalence {
            report.fail(format!(
                "trial {}: axiom report and residual report disagree: {:?}",
                trial, rep
            ));
        }
        if !rep.identity_f_cyclic || !rep.identity_minus_two_f {
            report.fail(format!("trial {}: pointwise bracket identity failed", trial));
        }
    }
    // Positive instances: the diagonal product with the zero bracket, and
    // the truncated polynomial Poisson pair.
    let mu = crate::finite::pointwise_mult(3);
    let zero = crate::finite::zero_bilinear();
    let rep = poisson_axiom_equivalence(&mu, &zero, &crate::finite::fin_window(3))?;
    if !(rep.axioms_hold() && rep.residuals_vanish() && rep.equivalence) {
        report.fail("diagonal algebra with zero bracket failed".into());
    }
    let (mu, pois, dim) = crate::finite::truncated_poly_pair();
    let rep = poisson_axiom_equivalence(&mu, &pois, &crate::finite::fin_window(dim))?;
    if !(rep.axioms_hold() && rep.residuals_vanish() && rep.equivalence) {
        report.fail("truncated polynomial Poisson pair failed".into());
    }
    report
        .notes
        .push("identities: F+F∘cyc = −[μ_p,μ] and −2F = [μ_p,μ](a,b,c)+[μ_p,μ](a,c,b)−[μ_p,μ](b,a,c)".into());
    Ok(report)
}

// ---------------------------------------------------------------------------
// Gauge invariance suite
// ---------------------------------------------------------------------------

/// Over k[t]/t³ on the n = 1 surface: gauge_act preserves the Maurer–Cartan
/// equation and agrees pointwise with the exp(α)-conjugation recipe and with
/// exp([α,·]) applied to the structure maps.
pub fn gauge_suite(seed: u64, trials: usize, window_bound: i64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("gauge", seed, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = Rc::new(surface_algebra(1, window_bound)?);
    let window = alg.window_basis.clone();
    let ring = ArtinRing::new(1, 3);
    let mu = multiplication_cochain(&alg);
    let mup = pi_g(&alg);
    let pair = PoissonPair::new(mu, mup, &window)?;

    for trial in 0..trials {
        // Maurer–Cartan element: t·(0, ξ_p) with ξ_p a dropless multiple of
        // the determinant family (its self-bracket vanishes identically).
        let kappa = rat(rng.random_range(1..4));
        let shift = LatticeVector::m_from(&[0, 0]).sub(&LatticeVector::m_from(&[
            rng.random_range(0..2),
            rng.random_range(0..2),
        ]));
        let xi_p = rule_cochain(&alg, MultiTensor::det2(), shift).scale(&kappa);
        let x = MbElement::from_term(ring.var(0), TotalCochain::single(2, 2, xi_p)?);
        let chk = mc_check(&x, &pair, &ring, &window)?;
        if !chk.holds {
            report.fail(format!("trial {}: seed element is not Maurer–Cartan", trial));
            continue;
        }
        let alpha = crate::dgla::random_gauge_parameter(&mut rng, &alg, &ring);
        let gauged = gauge_act(&alpha, &x, &pair, &ring)?;
        let chk = mc_check(&gauged, &pair, &ring, &window)?;
        if !chk.holds {
            report.fail(format!(
                "trial {}: gauge image fails Maurer–Cartan: witness {:?}",
                trial, chk.witness
            ));
            continue;
        }
        // Conjugation recipe, pointwise on window pairs to order t².
        let exp_ad = exp_ad_structure(&alpha, &pair, &x, &ring)?;
        let mut ok = true;
        'pairs: for a in &window {
            for b in &window {
                for w in 1..=2usize {
                    let lhs = deformed_eval(&pair, &gauged, w, &AbElement::from_basis(&ring, a.clone()), &AbElement::from_basis(&ring, b.clone()), &ring)?;
                    let ea = exp_apply(&alpha, &AbElement::from_basis(&ring, a.clone()), &ring, true)?;
                    let eb = exp_apply(&alpha, &AbElement::from_basis(&ring, b.clone()), &ring, true)?;
                    let prod = deformed_eval(&pair, &x, w, &ea, &eb, &ring)?;
                    let rhs = exp_apply(&alpha, &prod, &ring, false)?;
                    if lhs != rhs {
                        report.fail(format!(
                            "trial {}: conjugation recipe mismatch at ({}, {}) weight {}",
                            trial, a, b, w
                        ));
                        ok = false;
                        break 'pairs;
                    }
                    let rhs2 = mb_eval_pair(&exp_ad, w, a, b)?;
                    if lhs != rhs2 {
                        report.fail(format!(
                            "trial {}: exp([α,·]) recipe mismatch at ({}, {}) weight {}",
                            trial, a, b, w
                        ));
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        let _ = ok;
    }
    report
        .notes
        .push(format!("ring k[t]/t³, window size {}", window.len()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hodge_suite_small() {
        let r = hodge_projector_suite(7, 12, 6).unwrap();
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn pal_suite_small() {
        let r = pal_lemma_suite(7, 10, 4).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert!(r.notes.iter().any(|n| n.contains("cochain")));
    }

    #[test]
    fn mc_poisson_suite_small() {
        let r = mc_poisson_suite(7, 24).unwrap();
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn gauge_suite_small() {
        let r = gauge_suite(7, 4, 3).unwrap();
        assert!(r.passed, "{:?}", r.failures);
    }
}
