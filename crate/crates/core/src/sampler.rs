//! Exact uniform sampling of permutations with no decreasing subsequence of
//! length `d + 1`, and the unconditioned lazy walk.

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rsk::{inverse_rsk, ShapeTableauPair};
use crate::words::LayeredWords;
use crate::young::{hook_walk, ShapeSampler};

/// Uniform sampler on `Av_n(ρ_d)` that keeps its shape distribution between draws.
///
/// A draw picks `λ` with probability `(f^λ)²/Σ(f^μ)²`, two independent
/// uniform tableaux of shape `λ`, and maps the pair back through RSK.
#[derive(Clone, Debug)]
pub struct AvoiderSampler {
    n: usize,
    d: usize,
    shapes: ShapeSampler,
}

impl AvoiderSampler {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("need n >= 1 and d >= 1".into()));
        }
        Ok(Self { n, d, shapes: ShapeSampler::new(n, d)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let shape = self.shapes.sample(rng);
        let p = hook_walk(&shape, rng).expect("sampled shapes are valid");
        let q = hook_walk(&shape, rng).expect("sampled shapes are valid");
        inverse_rsk(&ShapeTableauPair { p, q })
    }
}

/// One uniform draw from `Av_n(ρ_d)`. Use [`AvoiderSampler`] for repeated draws.
pub fn sample_avoider<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Permutation> {
    Ok(AvoiderSampler::new(n, d)?.sample(rng))
}

/// Independent uniform letters for `a` and `b`: the lazy walk with zero
/// step probability `1/d` and probability `1/d²` for each `e_i - e_j`.
pub fn sample_lazy_walk<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> LayeredWords {
    let mut letter = || rng.random_range(1..=d as u8);
    let a: Vec<u8> = (0..n).map(|_| letter()).collect();
    let b: Vec<u8> = (0..n).map(|_| letter()).collect();
    LayeredWords::new(a, b, d).expect("letters lie in 1..=d")
}
