//! Seeded generators for rationals, elements, φ𝔸-polynomials and probe points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Element;
use crate::calculus::{PhiContext, PhiFunction, PhiPoly};
use crate::harmonic::AffineMap;
use crate::scalar::{ratio, Rational};

/// Largest denominator drawn by [`Sampler::rational`].
pub const MAX_DENOMINATOR: i64 = 6;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream of the same seed.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational in `[−bound, bound]` with denominator at most [`MAX_DENOMINATOR`].
    pub fn rational(&mut self, bound: i64) -> Rational {
        let d = self.rng.random_range(1..=MAX_DENOMINATOR);
        let n = self.rng.random_range(-bound * d..=bound * d);
        ratio(n, d)
    }

    pub fn element(&mut self, bound: i64) -> Element<Rational> {
        Element(std::array::from_fn(|_| self.rational(bound)))
    }

    /// An element with `x + y + z = 0`.
    pub fn plane_element(&mut self, bound: i64) -> Element<Rational> {
        let x = self.rational(bound);
        let y = self.rational(bound);
        let z = -(&x + &y);
        Element([x, y, z])
    }

    /// An element with `x = y = z`.
    pub fn trisector_element(&mut self, bound: i64) -> Element<Rational> {
        let t = self.rational(bound);
        Element([t.clone(), t.clone(), t])
    }

    pub fn nonzero_plane_element(&mut self, bound: i64) -> Element<Rational> {
        loop {
            let u = self.plane_element(bound);
            if !u.is_zero() {
                return u;
            }
        }
    }

    /// `c₀ + c₁u + … + c_m u^m` with `1 ≤ m ≤ max_degree` and a nonzero leading coefficient.
    pub fn phi_poly(&mut self, max_degree: usize, bound: i64) -> PhiPoly {
        let degree = self.rng.random_range(1..=max_degree);
        let mut coeffs: Vec<Element<Rational>> =
            (0..=degree).map(|_| self.element(bound)).collect();
        while coeffs[degree].is_zero() {
            coeffs[degree] = self.element(bound);
        }
        PhiPoly::new(coeffs)
    }

    /// A rational point of `[−1, 1]³`.
    pub fn point(&mut self) -> [Rational; 3] {
        std::array::from_fn(|_| self.rational(1))
    }

    /// A float point of `[lo, hi]³`.
    pub fn point_f64(&mut self, lo: f64, hi: f64) -> [f64; 3] {
        std::array::from_fn(|_| self.rng.random_range(lo..=hi))
    }
}

/// One member of a seeded population of harmonic fields.
#[derive(Clone, Debug)]
pub struct PopulationMember {
    pub function: PhiFunction,
    /// `c₀` and `k` both lie in the nodal plane, so the field is parallel to it.
    pub plane_parallel: bool,
}

/// `count` φ𝔸-polynomials over the cyclic algebra with its harmonic map and random offset `k`.
/// Even-indexed members take `c₀, k ∈ Π`.
pub fn harmonic_population(seed: u64, count: usize, max_degree: usize) -> Vec<PopulationMember> {
    let mut s = Sampler::new(seed);
    (0..count)
        .map(|i| {
            let plane_parallel = i % 2 == 0;
            let k = if plane_parallel {
                s.plane_element(3)
            } else {
                s.element(3)
            };
            let mut poly = s.phi_poly(max_degree, 3);
            if plane_parallel {
                let mut coeffs = poly.coeffs().to_vec();
                coeffs[0] = s.plane_element(3);
                poly = PhiPoly::new(coeffs);
            }
            let ctx = PhiContext::new(
                crate::algebra::AlgebraParams::cyclic(),
                AffineMap::cyclic_harmonic().with_offset(k),
            );
            PopulationMember {
                function: PhiFunction::polynomial(poly, ctx),
                plane_parallel,
            }
        })
        .collect()
}
