use super::{Method, MethodError, ObjectiveVector, RandomVector};
use crate::Scalar;

/// `+e_k` and `-e_k` for every variable: minimize then maximize each one.
pub fn default_brackets<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        for s in [1.0, -1.0] {
            let mut v = vec![T::zero(); n];
            v[k] = T::lit(s);
            out.push(v);
        }
    }
    out
}

/// Bracketing vectors first, then random directions up to `total`. Exact
/// repeats are dropped. When `total` is too small for every bracket the list
/// is cut short and a warning returned.
///
/// Pass [`default_brackets`] (optionally extended with directions of
/// interest) for the usual per-variable extremes.
pub fn hybrid_schedule<T: Scalar>(
    n: usize,
    total: usize,
    bracket_list: &[Vec<T>],
    random: &mut RandomVector,
) -> Result<(Vec<ObjectiveVector<T>>, Vec<String>), MethodError> {
    if n == 0 {
        return Err(MethodError::NoDimensions);
    }
    let mut brackets: Vec<Vec<T>> = Vec::with_capacity(bracket_list.len());
    for b in bracket_list {
        if b.len() != n {
            return Err(MethodError::BracketLength {
                expected: n,
                got: b.len(),
            });
        }
        if b.iter().all(|x| x.is_zero()) {
            return Err(MethodError::ZeroBracket);
        }
        if !brackets.contains(b) {
            brackets.push(b.clone());
        }
    }
    let mut warnings = Vec::new();
    if brackets.len() > total {
        warnings.push(format!(
            "only {total} of {} bracketing vectors fit; some variables are not bracketed",
            brackets.len()
        ));
        brackets.truncate(total);
    }
    let mut out: Vec<ObjectiveVector<T>> = brackets
        .into_iter()
        .enumerate()
        .map(|(i, w)| ObjectiveVector::new(w, Method::Hybrid, i + 1))
        .collect();
    while out.len() < total {
        let w = random.unit(n)?;
        if out.iter().all(|v| v.weights != w) {
            out.push(ObjectiveVector::new(w, Method::Hybrid, out.len() + 1));
        }
    }
    Ok((out, warnings))
}
