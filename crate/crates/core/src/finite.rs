//! Cochains on a finite-dimensional vector space with a chosen basis.
//!
//! Used for the Maurer–Cartan ⇔ Poisson-axiom comparisons, where candidate
//! multiplications and brackets are arbitrary bilinear maps given by dense
//! structure tensors. Basis keys are plain indices.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::element::Element;
use crate::hochschild::Cochain;

pub type FinBasis = usize;

/// A bilinear map V×V→V from its structure tensor c[i][j][k] (the
/// e_k-coefficient of f(e_i, e_j)).
pub fn bilinear_from_tensor(dim: usize, tensor: Vec<Vec<Vec<BigRational>>>) -> Cochain<FinBasis> {
    assert_eq!(tensor.len(), dim);
    Cochain::from_fn(2, None, move |args: &[&FinBasis]| {
        let (i, j) = (*args[0], *args[1]);
        let mut out = Element::zero();
        for (k, c) in tensor[i][j].iter().enumerate() {
            if !c.is_zero() {
                out.add_term(k, c.clone());
            }
        }
        Ok(out)
    })
}

pub fn zero_bilinear() -> Cochain<FinBasis> {
    Cochain::from_fn(2, None, |_args| Ok(Element::zero()))
}

/// The pointwise (diagonal) product on k^dim: e_i · e_j = δ_{ij} e_i.
pub fn pointwise_mult(dim: usize) -> Cochain<FinBasis> {
    let _ = dim;
    Cochain::from_fn(2, None, |args: &[&FinBasis]| {
        Ok(if args[0] == args[1] {
            Element::monomial(*args[0])
        } else {
            Element::zero()
        })
    })
}

fn rand_rat(rng: &mut ChaCha8Rng, span: i64) -> BigRational {
    BigRational::from_integer(rng.random_range(-span..=span).into())
}

/// Random symmetric bilinear map with small integer entries.
pub fn random_symmetric_bilinear(rng: &mut ChaCha8Rng, dim: usize) -> Cochain<FinBasis> {
    let mut t = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            for k in 0..dim {
                let c = rand_rat(rng, 2);
                t[i][j][k] = c.clone();
                t[j][i][k] = c;
            }
        }
    }
    bilinear_from_tensor(dim, t)
}

/// Random skew bilinear map with small integer entries.
pub fn random_skew_bilinear(rng: &mut ChaCha8Rng, dim: usize) -> Cochain<FinBasis> {
    let mut t = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            for k in 0..dim {
                let c = rand_rat(rng, 2);
                t[i][j][k] = c.clone();
                t[j][i][k] = -c;
            }
        }
    }
    bilinear_from_tensor(dim, t)
}

/// The four-dimensional algebra k[x,y]/(x²,y²) with basis (1, x, y, xy) and
/// the Poisson bracket determined by {x,y} = xy. Both maps are exact and the
/// pair satisfies every Poisson-algebra axiom.
pub fn truncated_poly_pair() -> (Cochain<FinBasis>, Cochain<FinBasis>, usize) {
    // Basis indices: 0 ↦ 1, 1 ↦ x, 2 ↦ y, 3 ↦ xy.
    let dim = 4;
    let mut mult = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
    let one = || BigRational::from_integer(1.into());
    // Monomial exponents (a, b) with a, b ∈ {0,1}.
    let expo = [(0u8, 0u8), (1, 0), (0, 1), (1, 1)];
    let index = |a: u8, b: u8| -> Option<usize> {
        if a > 1 || b > 1 {
            None
        } else {
            Some(match (a, b) {
                (0, 0) => 0,
                (1, 0) => 1,
                (0, 1) => 2,
                _ => 3,
            })
        }
    };
    for i in 0..dim {
        for j in 0..dim {
            let (a, b) = (expo[i].0 + expo[j].0, expo[i].1 + expo[j].1);
            if let Some(k) = index(a, b) {
                mult[i][j][k] = one();
            }
        }
    }
    // {f,g} = xy(∂x f ∂y g − ∂y f ∂x g) on the basis.
    let mut pois = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
    // ∂x, ∂y of the basis monomials as (coefficient, index) or None.
    let dx = [None, Some(0usize), None, Some(2usize)];
    let dy = [None, None, Some(0usize), Some(1usize)];
    for i in 0..dim {
        for j in 0..dim {
            let mut add = |fi: Option<usize>, gj: Option<usize>, sign: i64| {
                if let (Some(fi), Some(gj)) = (fi, gj) {
                    // xy · e_fi · e_gj
                    let (a, b) = (
                        1 + expo[fi].0 + expo[gj].0,
                        1 + expo[fi].1 + expo[gj].1,
                    );
                    if let Some(k) = index(a, b) {
                        pois[i][j][k] += BigRational::from_integer(sign.into());
                    }
                }
            };
            add(dx[i], dy[j], 1);
            add(dy[i], dx[j], -1);
        }
    }
    (
        bilinear_from_tensor(dim, mult),
        bilinear_from_tensor(dim, pois),
        dim,
    )
}

/// The basis window 0..dim.
pub fn fin_window(dim: usize) -> Vec<FinBasis> {
    (0..dim).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{gerstenhaber_bracket, hochschild_d, is_zero_on};

    #[test]
    fn pointwise_mult_is_associative() {
        let mu = pointwise_mult(3);
        let window = fin_window(3);
        let dmu = hochschild_d(&mu, &mu).unwrap();
        assert!(is_zero_on(&dmu, &window).unwrap());
        let b = gerstenhaber_bracket(&mu, &mu).unwrap();
        assert!(is_zero_on(&b, &window).unwrap());
    }

    #[test]
    fn truncated_poly_pair_is_poisson() {
        let (mu, pois, dim) = truncated_poly_pair();
        let window = fin_window(dim);
        // Associativity and the Leibniz-compatible bracket: dμ = 0, and the
        // bracket is a biderivation against μ, i.e. [μ, μ_p] = 0.
        assert!(is_zero_on(&hochschild_d(&mu, &mu).unwrap(), &window).unwrap());
        let mixed = gerstenhaber_bracket(&mu, &pois).unwrap();
        assert!(is_zero_on(&mixed, &window).unwrap());
    }
}
