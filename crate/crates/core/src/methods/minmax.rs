use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Method, MethodError, ObjectiveVector};
use crate::Scalar;

/// Sign-vector objectives with entries in {-1, 0, +1}, never repeated
/// across the lifetime of the generator.
///
/// Each batch first covers every variable with `+1` and with `-1` (using
/// the axis vector when it is still unused), then fills up with uniformly
/// random unused sign vectors.
#[derive(Debug, Clone)]
pub struct MinMax {
    rng: ChaCha8Rng,
    issued: HashSet<Vec<i8>>,
}

impl MinMax {
    pub fn new(seed: u64) -> Self {
        MinMax {
            rng: ChaCha8Rng::seed_from_u64(seed),
            issued: HashSet::new(),
        }
    }

    pub fn issued_count(&self) -> usize {
        self.issued.len()
    }

    /// Unused nonzero sign vectors left in `n` dimensions.
    pub fn remaining(&self, n: usize) -> usize {
        let space = u32::try_from(n)
            .ok()
            .and_then(|n| 3usize.checked_pow(n))
            .map_or(usize::MAX, |s| s - 1);
        space.saturating_sub(self.issued.len())
    }

    pub fn propose_signs(&mut self, n: usize, batch: usize) -> Result<Vec<Vec<i8>>, MethodError> {
        if n == 0 {
            return Err(MethodError::NoDimensions);
        }
        let remaining = self.remaining(n);
        if batch > remaining {
            return Err(MethodError::SignSpaceExhausted {
                requested: batch,
                remaining,
            });
        }
        let mut out: Vec<Vec<i8>> = Vec::with_capacity(batch);
        'cover: for k in 0..n {
            for s in [1i8, -1] {
                if out.len() == batch {
                    break 'cover;
                }
                if out.iter().any(|v| v[k] == s) {
                    continue;
                }
                let mut axis = vec![0i8; n];
                axis[k] = s;
                if self.issued.insert(axis.clone()) {
                    out.push(axis);
                    continue;
                }
                // axis already used: look for any unused vector with that sign
                // at k; give up on this slot if there is none
                for _ in 0..1000 {
                    let mut v = self.draw(n);
                    v[k] = s;
                    if self.issued.insert(v.clone()) {
                        out.push(v);
                        break;
                    }
                }
            }
        }
        while out.len() < batch {
            let v = self.draw(n);
            if v.iter().any(|&x| x != 0) && self.issued.insert(v.clone()) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Sign vectors as objective vectors numbered from `first_iteration`.
    pub fn propose_batch<T: Scalar>(
        &mut self,
        n: usize,
        batch: usize,
        first_iteration: usize,
    ) -> Result<Vec<ObjectiveVector<T>>, MethodError> {
        Ok(self
            .propose_signs(n, batch)?
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let w = v.into_iter().map(|s| T::lit(s as f64)).collect();
                ObjectiveVector::new(w, Method::MinMax, first_iteration + i)
            })
            .collect())
    }

    fn draw(&mut self, n: usize) -> Vec<i8> {
        (0..n).map(|_| self.rng.random_range(-1i8..=1)).collect()
    }
}
