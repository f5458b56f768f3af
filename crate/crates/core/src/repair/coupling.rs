use crate::error::{Error, Result};
use crate::game::{check_distribution, Radix};
use crate::rational::Rational;

/// The canonical maximal coupling of `target` (first coordinate) and
/// `source` (second), laid out as `s·|S| + s′`.
///
/// The diagonal holds `min(target, source)`; the excess `d⁺(s)` of `target`
/// over `source` is paired with the excess `d⁻(s′)` of `source` over `target`
/// in proportion `d⁺(s)·d⁻(s′)/D`. The off-diagonal mass is
/// `½‖target − source‖₁`.
pub fn maximal_coupling(target: &[Rational], source: &[Rational]) -> Result<Vec<Rational>> {
    if target.len() != source.len() {
        return Err(Error::shape("coupled distributions live on different sets"));
    }
    check_distribution(target, "coupling target")?;
    check_distribution(source, "coupling source")?;
    Ok(coupling(target, source))
}

fn coupling(target: &[Rational], source: &[Rational]) -> Vec<Rational> {
    let n = target.len();
    let mut pi = vec![Rational::zero(); n * n];
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for s in 0..n {
        pi[s * n + s] = target[s].clone().min(source[s].clone());
        plus.push((&target[s] - &source[s]).max(Rational::zero()));
        minus.push((&source[s] - &target[s]).max(Rational::zero()));
    }
    let excess: Rational = plus.iter().sum();
    if excess.is_zero() {
        return pi;
    }
    for s in (0..n).filter(|&s| !plus[s].is_zero()) {
        let row = &plus[s] / &excess;
        for t in (0..n).filter(|&t| !minus[t].is_zero()) {
            pi[s * n + t] = &row * &minus[t];
        }
    }
    pi
}

/// Replaces the marginal of `dist` on digit `digit` of `radix` by `target`,
/// keeping the joint marginal of the remaining digits, via the maximal
/// coupling.
pub(crate) fn adjust_digit(dist: &[Rational], radix: &Radix, digit: usize, target: &[Rational]) -> Vec<Rational> {
    let sizes = radix.sizes();
    let size = sizes[digit];
    let stride: usize = sizes[digit + 1..].iter().product();
    let mut source = vec![Rational::zero(); size];
    for (b, p) in dist.iter().enumerate() {
        if !p.is_zero() {
            source[(b / stride) % size] += p;
        }
    }
    let pi = coupling(target, &source);
    let mut out = vec![Rational::zero(); dist.len()];
    for (b, p) in dist.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let from = (b / stride) % size;
        let base = b - from * stride;
        let conditional = p / &source[from];
        for to in 0..size {
            let w = &pi[to * size + from];
            if !w.is_zero() {
                out[base + to * stride] += w * &conditional;
            }
        }
    }
    out
}

/// Given a joint `P̄` on `S × T̄` (layout `s·|T̄| + t`) and a target `Q̄` on
/// `S`, returns `R̄` with `R̄_S = Q̄`, `R̄_T̄ = P̄_T̄` and
/// `‖R̄ − P̄‖₁ ≤ ‖Q̄ − P̄_S‖₁`: `R̄(s,t) = Σ_{s′} π(s,s′) P̄(t|s′)` for the
/// maximal coupling `π` of `Q̄` and `P̄_S`.
pub fn coupling_adjust(joint: &[Rational], target: &[Rational]) -> Result<Vec<Rational>> {
    let size = target.len();
    if size == 0 || !joint.len().is_multiple_of(size) {
        return Err(Error::shape(format!(
            "joint of {} entries cannot be split over a first factor of size {size}",
            joint.len()
        )));
    }
    check_distribution(joint, "joint distribution")?;
    check_distribution(target, "coupling target")?;
    let radix = Radix::new(vec![size, joint.len() / size]);
    Ok(adjust_digit(joint, &radix, 0, target))
}
