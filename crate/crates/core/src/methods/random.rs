use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Method, MethodError, ObjectiveVector};
use crate::Scalar;

/// Directions uniform on the unit sphere: normalized standard normals.
#[derive(Debug, Clone)]
pub struct RandomVector {
    rng: ChaCha8Rng,
}

impl RandomVector {
    pub fn new(seed: u64) -> Self {
        RandomVector {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        RandomVector { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn unit<T: Scalar>(&mut self, n: usize) -> Result<Vec<T>, MethodError> {
        if n == 0 {
            return Err(MethodError::NoDimensions);
        }
        loop {
            let g: Vec<f64> = (0..n).map(|_| self.rng.sample(StandardNormal)).collect();
            let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 0.0 {
                return Ok(g.into_iter().map(|x| T::lit(x / len)).collect());
            }
        }
    }

    pub fn propose<T: Scalar>(
        &mut self,
        n: usize,
        iteration: usize,
    ) -> Result<ObjectiveVector<T>, MethodError> {
        Ok(ObjectiveVector::new(
            self.unit(n)?,
            Method::Random,
            iteration,
        ))
    }
}
