//! Real polynomials with Sturm-sequence real-root isolation.
//!
//! Coefficients are stored in ascending degree order; the empty coefficient
//! vector is the zero polynomial. Root finding follows the classical recipe:
//! build the (numerically regularized) Sturm chain, isolate distinct real
//! roots by sign-variation counts, then bisect each isolating interval down
//! to a relative width of 1e-12 with a short guarded Newton polish.

const CHAIN_TRIM: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Builds a polynomial from ascending coefficients, trimming exact zeros
    /// at the high-degree end so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn zero() -> Self {
        RealPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() <= 1 {
            return RealPoly::zero();
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        RealPoly::new(coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    /// Drops high-degree coefficients that are negligible relative to the
    /// largest coefficient (noise left behind by floating-point division).
    fn trim_relative(&self, tol: f64) -> RealPoly {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return RealPoly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        while let Some(&c) = coeffs.last() {
            if c.abs() <= tol * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        RealPoly { coeffs }
    }

    /// Rescales so the largest coefficient magnitude is 1 (sign preserved).
    fn normalized_inf(&self) -> RealPoly {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return RealPoly::zero();
        }
        RealPoly { coeffs: self.coeffs.iter().map(|c| c / scale).collect() }
    }

    /// Euclidean division remainder `self mod d` (quotient discarded).
    fn rem(&self, d: &RealPoly) -> RealPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd];
        let mut r = self.coeffs.clone();
        let mut k = r.len();
        while k > dd {
            k -= 1;
            let f = r[k] / lead;
            if f != 0.0 {
                for i in 0..dd {
                    r[k - dd + i] -= f * d.coeffs[i];
                }
            }
            r[k] = 0.0;
        }
        r.truncate(dd);
        RealPoly::new(r)
    }

    /// All distinct real roots, ascending. Multiple roots are reported once;
    /// roots closer together than the isolation resolution collapse to one
    /// representative.
    pub fn real_roots(&self) -> Vec<f64> {
        let p = self.trim_relative(1e-13);
        let deg = match p.degree() {
            None | Some(0) => return Vec::new(),
            Some(d) => d,
        };
        if deg == 1 {
            return vec![-p.coeffs[0] / p.coeffs[1]];
        }
        let chain = sturm_chain(&p);
        let bound = cauchy_bound(&p);
        let mut roots = Vec::new();
        let c_lo = sign_variations(&chain, -bound);
        let c_hi = sign_variations(&chain, bound);
        isolate(&chain, -bound, bound, c_lo, c_hi, 0, &mut roots);
        for r in &mut roots {
            *r = newton_polish(&p, *r);
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots
    }
}

/// Cauchy root bound: every root lies in [-b, b].
fn cauchy_bound(p: &RealPoly) -> f64 {
    let deg = p.degree().unwrap();
    let lead = p.coeffs[deg].abs();
    let max_rest = p.coeffs[..deg].iter().fold(0.0, |m: f64, c| m.max(c.abs()));
    1.0 + max_rest / lead
}

/// Sturm chain of `p`, each member scaled to unit max coefficient and tiny
/// remainders truncated so floating-point noise terminates the chain.
fn sturm_chain(p: &RealPoly) -> Vec<RealPoly> {
    let mut chain = vec![p.normalized_inf()];
    let d = p.derivative().normalized_inf();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let len = chain.len();
        let r = chain[len - 2].rem(&chain[len - 1]).trim_relative(CHAIN_TRIM);
        if r.is_zero() || r.max_abs_coeff() <= CHAIN_TRIM {
            break;
        }
        let neg = RealPoly { coeffs: r.coeffs.iter().map(|c| -c).collect() };
        chain.push(neg.normalized_inf());
        if chain.last().unwrap().degree() == Some(0) {
            break;
        }
    }
    chain
}

/// Number of sign variations in the chain evaluated at `x` (zeros skipped,
/// which makes the count behave as the limit from the right, so interval
/// counts follow half-open (a, b] semantics).
fn sign_variations(chain: &[RealPoly], x: f64) -> usize {
    let mut variations = 0;
    let mut prev = 0i8;
    for poly in chain {
        let v = poly.eval(x);
        let s = if v > 0.0 {
            1i8
        } else if v < 0.0 {
            -1i8
        } else {
            continue;
        };
        if prev != 0 && s != prev {
            variations += 1;
        }
        prev = s;
    }
    variations
}

fn isolate(
    chain: &[RealPoly],
    lo: f64,
    hi: f64,
    c_lo: usize,
    c_hi: usize,
    depth: usize,
    out: &mut Vec<f64>,
) {
    let count = c_lo.saturating_sub(c_hi);
    if count == 0 {
        return;
    }
    let mid = 0.5 * (lo + hi);
    if count == 1 {
        out.push(bisect_single(chain, lo, hi, c_lo));
        return;
    }
    // A persistent cluster below resolution collapses to one representative.
    if depth > 200 || hi - lo <= 1e-13 * mid.abs().max(1.0) {
        out.push(mid);
        return;
    }
    let c_mid = sign_variations(chain, mid);
    isolate(chain, lo, mid, c_lo, c_mid, depth + 1, out);
    isolate(chain, mid, hi, c_mid, c_hi, depth + 1, out);
}

/// Bisects an interval known to hold exactly one distinct root, steering by
/// Sturm counts (robust even at even-multiplicity roots where the polynomial
/// does not change sign).
fn bisect_single(chain: &[RealPoly], mut lo: f64, mut hi: f64, mut c_lo: usize) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.abs().max(1.0) {
            break;
        }
        let c_mid = sign_variations(chain, mid);
        if c_lo.saturating_sub(c_mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
            c_lo = c_mid;
        }
    }
    0.5 * (lo + hi)
}

/// A few Newton steps, accepted only while they shrink |p| and stay nearby.
fn newton_polish(p: &RealPoly, mut x: f64) -> f64 {
    let dp = p.derivative();
    let window = 1e-9 * x.abs().max(1.0);
    let x0 = x;
    for _ in 0..3 {
        let f = p.eval(x);
        let g = dp.eval(x);
        if g == 0.0 {
            break;
        }
        let next = x - f / g;
        if (next - x0).abs() > window || p.eval(next).abs() >= f.abs() {
            break;
        }
        x = next;
    }
    x
}
