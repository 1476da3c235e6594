//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The small-argument series for K0/K1 subtract quantities that grow like
//! e^x while the result shrinks like e^-x, so plain f64 loses up to 2x/ln(10)
//! digits. Carrying the series in double-double keeps the final f64 value
//! correct to the last ulp for x up to the asymptotic crossover.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const DD_LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

pub(crate) const DD_EULER_GAMMA: Dd = Dd {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::renorm(s, e + self.lo + o.lo)
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Self {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        let (p, e) = two_prod(self.hi, s);
        Dd::renorm(p, e + self.lo * s)
    }

    #[inline]
    pub fn div(self, o: Dd) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.scale(q1));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.scale(q2));
        let q3 = r2.hi / o.hi;
        Dd::renorm(q1, q2 + q3)
    }

    #[inline]
    pub fn recip(self) -> Self {
        Dd::from_f64(1.0).div(self)
    }
}

/// Natural log of a positive f64, in double-double precision.
///
/// Reduction x = m * 2^e with m in [1/sqrt(2), sqrt(2)), then the atanh
/// series for ln(m) with |t| <= 3 - 2*sqrt(2) extended well past the
/// convergence needed for 1e-32.
pub(crate) fn dd_ln(x: f64) -> Dd {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut e = (x.ln() / std::f64::consts::LN_2).round();
    let mut m = x / e.exp2();
    if m < std::f64::consts::FRAC_1_SQRT_2 {
        m *= 2.0;
        e -= 1.0;
    } else if m >= std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1.0;
    }
    let md = Dd::from_f64(m);
    let t = md.sub(Dd::from_f64(1.0)).div(md.add(Dd::from_f64(1.0)));
    let t2 = t.mul(t);
    let mut term = t;
    let mut sum = t;
    let mut k = 1u32;
    while k < 60 {
        term = term.mul(t2);
        k += 2;
        let contrib = term.div(Dd::from_f64(f64::from(k)));
        sum = sum.add(contrib);
        if contrib.hi.abs() <= 1e-35 * sum.hi.abs() {
            break;
        }
    }
    sum.scale(2.0).add(DD_LN2.scale(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_ln_matches_f64_ln() {
        for &x in &[1e-8, 0.3, 1.0, 2.0, 8.5, 17.0, 123.456] {
            let d = dd_ln(x).to_f64();
            assert!((d - x.ln()).abs() <= 4.0 * f64::EPSILON * x.ln().abs().max(1.0));
        }
    }

    #[test]
    fn dd_mul_div_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let r = a.mul(b).div(b);
        assert!((r.to_f64() - std::f64::consts::PI).abs() < 1e-30);
    }
}
