use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::HierarchicalTree;

/// Generator for stream `stream` of `seed`. Distinct streams never overlap, so
/// independent trials can each take their own.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Noise scale `h / ε`: the tree height bounds how many node counts one
/// record can change.
pub fn laplace_scale(tree: &HierarchicalTree, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(tree.height() as f64 / epsilon)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    Ok(())
}

/// One Laplace(0, `scale`) draw by inverting the CDF.
pub fn sample_laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    let u: f64 = Open01.sample(rng);
    let u = u - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// `v + ξ` with `ξ_i` i.i.d. Laplace of scale `h / ε`.
pub fn add_laplace_noise(v: &[f64], epsilon: f64, tree: &HierarchicalTree, seed: u64) -> Result<Vec<f64>> {
    add_laplace_noise_with(v, epsilon, tree, &mut seeded_rng(seed, 0))
}

pub fn add_laplace_noise_with<R: Rng + ?Sized>(
    v: &[f64],
    epsilon: f64,
    tree: &HierarchicalTree,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let scale = laplace_scale(tree, epsilon)?;
    if v.len() != tree.len() {
        return Err(Error::DimensionMismatch {
            expected: tree.len(),
            actual: v.len(),
        });
    }
    Ok(v.iter().map(|x| x + sample_laplace(rng, scale)).collect())
}
