use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Stop once the volume estimate grew by at most `rel_threshold` of its
/// current value over the last `window` insertions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceRule {
    pub window: usize,
    pub rel_threshold: f64,
    pub floor_eps: f64,
}

impl Default for ConvergenceRule {
    fn default() -> Self {
        ConvergenceRule {
            window: 10,
            rel_threshold: 0.01,
            floor_eps: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Continue,
    Converged,
    /// Converged with a volume that is still zero: the method keeps
    /// returning points that span nothing, which is usually a false stop.
    ConvergedZeroVolume,
}

impl Decision {
    pub fn is_converged(self) -> bool {
        self != Decision::Continue
    }
}

pub fn converged<T: Scalar>(trajectory: &[T], rule: &ConvergenceRule) -> Decision {
    let w = rule.window.max(1);
    if trajectory.len() < w + 1 {
        return Decision::Continue;
    }
    let last = trajectory[trajectory.len() - 1].as_f64();
    let earlier = trajectory[trajectory.len() - 1 - w].as_f64();
    if last - earlier > rule.rel_threshold * last.max(rule.floor_eps) {
        Decision::Continue
    } else if last <= rule.floor_eps {
        Decision::ConvergedZeroVolume
    } else {
        Decision::Converged
    }
}
