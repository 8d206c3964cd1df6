//! Seeded random Lie elements and endomorphisms for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraContext;
use crate::coeff::{rat, Rational};
use crate::series::Series;
use crate::subst::Endomorphism;

/// Deterministic generator; the same seed gives the same sequence on
/// every platform.
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A small rational, zero about half the time.
    pub fn coefficient(&mut self) -> Rational {
        if self.rng.random_bool(0.5) {
            return rat(0, 1);
        }
        let num = self.rng.random_range(-3i64..=3);
        let den = self.rng.random_range(1i64..=3);
        rat(num, den)
    }

    /// A random combination of Lie basis elements of grade `1..=max_grade`.
    pub fn lie_element(&mut self, ctx: &AlgebraContext, max_grade: usize, order: usize) -> Series {
        let basis = ctx.lie_basis();
        let mut out = Series::zero(order);
        for ix in basis.indices(max_grade.min(order)) {
            let c = self.coefficient();
            out.add_scaled(&basis.element(ix, order), &c);
        }
        out
    }

    /// A random primitive series with every grade up to the order available.
    pub fn primitive(&mut self, ctx: &AlgebraContext, order: usize) -> Series {
        self.lie_element(ctx, order, order)
    }

    /// A random endomorphism whose images have a nonzero grade-one part
    /// proportional to the color itself.
    pub fn endomorphism(&mut self, ctx: &AlgebraContext, order: usize) -> Endomorphism {
        let identity = Endomorphism::<Rational>::identity(ctx, order);
        let images = identity
            .images()
            .iter()
            .map(|leaf| {
                let mut lead = self.coefficient();
                if lead == rat(0, 1) {
                    lead = rat(1, 1);
                }
                let mut img = leaf.scale_rational(&lead);
                for ix in ctx.lie_basis().indices(order) {
                    if ix.grade < 2 {
                        continue;
                    }
                    let c = self.coefficient();
                    img.add_scaled(&ctx.lie_basis().element(ix, order), &c);
                }
                img
            })
            .collect();
        Endomorphism::new(ctx, images).expect("Lie basis combinations are primitive")
    }
}
