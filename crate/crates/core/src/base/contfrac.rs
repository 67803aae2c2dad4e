//! Regular continued fractions of rotation numbers.

use super::circle::Alpha;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Convergent {
    pub p: u128,
    pub q: u128,
}

impl Convergent {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Why an expansion stopped before the requested depth.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Truncation {
    /// The input is rational and the expansion is finite.
    Terminated,
    /// Further convergents are not determined by the known bits of alpha.
    PrecisionExhausted,
}

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    /// `a_1, a_2, ...` (the integer part `a_0 = 0` is omitted).
    pub partial_quotients: Vec<u128>,
    /// `p_k / q_k` for `k = 1, 2, ...`.
    pub convergents: Vec<Convergent>,
    pub truncation: Option<Truncation>,
}

impl ContinuedFraction {
    /// `q_k` with the convention `q_0 = 1`.
    pub fn q(&self, k: usize) -> Option<u128> {
        if k == 0 {
            Some(1)
        } else {
            self.convergents.get(k - 1).map(|c| c.q)
        }
    }

    pub fn p(&self, k: usize) -> Option<u128> {
        if k == 0 {
            Some(0)
        } else {
            self.convergents.get(k - 1).map(|c| c.p)
        }
    }
}

/// Expands `alpha` to at most `depth` convergents.
///
/// For exact rationals the Euclidean algorithm runs on `(p, q)`; otherwise it
/// runs on the fixed-point value and stops once `q_k^2` would exceed the
/// number of trusted bits.
pub fn continued_fraction(alpha: &Alpha, depth: usize) -> ContinuedFraction {
    let mut partial_quotients = Vec::new();
    let mut convergents = Vec::new();
    let mut truncation = None;

    let (p_prev2, q_prev2) = (1u128, 0u128);
    let (p_prev, q_prev) = (0u128, 1u128);
    let (mut pp, mut qp, mut p, mut q) = (p_prev2, q_prev2, p_prev, q_prev);

    // Remainder pair (num, den) with alpha_k = num / den. The first
    // denominator may be 2^128, so the first step is handled separately.
    let (mut num, mut den, first) = match alpha.exact_rational() {
        Some((a, b)) => (a, b, None),
        None => {
            let u = alpha.units();
            let a1 = u128::MAX / u + u128::from(u128::MAX % u + 1 == u);
            let r = (u128::MAX % u).wrapping_add(1) % u;
            (r, u, Some(a1))
        }
    };
    let limit_bits = alpha.precision_bits().saturating_sub(2) / 2;
    let q_limit: u128 = if alpha.exact_rational().is_some() || limit_bits >= 127 {
        u128::MAX
    } else {
        1u128 << limit_bits
    };

    let mut pending = first;
    while convergents.len() < depth {
        let a = match pending.take() {
            Some(a) => a,
            None => {
                if num == 0 {
                    truncation = Some(Truncation::Terminated);
                    break;
                }
                let a = den / num;
                let r = den % num;
                den = num;
                num = r;
                a
            }
        };
        let next_p = a.checked_mul(p).and_then(|x| x.checked_add(pp));
        let next_q = a.checked_mul(q).and_then(|x| x.checked_add(qp));
        let (Some(np), Some(nq)) = (next_p, next_q) else {
            truncation = Some(Truncation::PrecisionExhausted);
            break;
        };
        if nq > q_limit {
            truncation = Some(Truncation::PrecisionExhausted);
            break;
        }
        partial_quotients.push(a);
        convergents.push(Convergent { p: np, q: nq });
        pp = p;
        qp = q;
        p = np;
        q = nq;
        if alpha.exact_rational().is_none() && num == 0 && pending.is_none() {
            // The fixed-point value itself was rational; nothing more is known.
            truncation = Some(Truncation::Terminated);
            break;
        }
    }
    if truncation.is_none() && alpha.exact_rational().is_some() && num == 0 {
        truncation = Some(Truncation::Terminated);
    }

    ContinuedFraction { partial_quotients, convergents, truncation }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_denominators_are_fibonacci() {
        let cf = continued_fraction(&Alpha::golden(), 40);
        let mut fib = (1u128, 2u128);
        for c in &cf.convergents[1..] {
            assert_eq!(c.q, fib.1);
            fib = (fib.1, fib.0 + fib.1);
        }
        assert!(cf.partial_quotients.iter().all(|&a| a == 1));
        assert_eq!(cf.convergents[0].q, 1);
    }

    #[test]
    fn rational_terminates() {
        let cf = continued_fraction(&Alpha::rational(7, 22).unwrap(), 50);
        assert_eq!(cf.truncation, Some(Truncation::Terminated));
        assert_eq!(cf.convergents.last().unwrap(), &Convergent { p: 7, q: 22 });
        assert_eq!(cf.partial_quotients, vec![3, 7]);
    }

    #[test]
    fn low_precision_is_flagged() {
        let cf = continued_fraction(&Alpha::parse("0.618").unwrap(), 100);
        assert_eq!(cf.truncation, Some(Truncation::PrecisionExhausted));
        assert!(cf.convergents.len() < 10);
    }

    #[test]
    fn short_decimal_has_no_trusted_convergents() {
        // "0.5" carries three bits; a decimal is read as an approximation.
        let cf = continued_fraction(&Alpha::parse("0.5").unwrap(), 10);
        assert!(cf.convergents.is_empty());
        assert_eq!(cf.truncation, Some(Truncation::PrecisionExhausted));
        let cf = continued_fraction(&Alpha::parse("1/2").unwrap(), 10);
        assert_eq!(cf.convergents, vec![Convergent { p: 1, q: 2 }]);
        assert_eq!(cf.truncation, Some(Truncation::Terminated));
    }
}
