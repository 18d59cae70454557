
use super::{rat, PrecReal, QuadSurd, Rational};

/// Critical point data. t_c and u_c themselves involve √10 and (7+√7)^{3/2},
/// so only their square, product and ratio are stored exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalConstants {
    pub nu_c: QuadSurd,
    pub t_c_squared: QuadSurd,
    /// t_c / u_c
    pub t_over_u: QuadSurd,
    /// t_c · u_c
    pub t_times_u: QuadSurd,
    /// μ² for the drift μ = 1/(4√7)
    pub mu_squared: Rational,
    /// c_∞² for c_∞ = 1/(3√7)
    pub c_infty_squared: Rational,
}

pub fn constants_critical() -> CriticalConstants {
    let s = QuadSurd::from_ints(7, 1, 1, 1); // 7 + √7
    let s3 = s.pow(3);
    let t_c_squared = QuadSurd::from_int(10) / (QuadSurd::from_int(64) * s3);
    let t_over_u = QuadSurd::from_int(5) / (QuadSurd::from_int(6) * &s);
    let t_times_u = &t_c_squared * &s.scale(&rat(6, 5));
    CriticalConstants {
        nu_c: QuadSurd::from_ints(1, 1, 2, 1),
        t_c_squared,
        t_over_u,
        t_times_u,
        mu_squared: rat(1, 112),
        c_infty_squared: rat(1, 63),
    }
}

impl CriticalConstants {
    /// u_c² = (t_c u_c) / (t_c / u_c).
    pub fn u_c_squared(&self) -> QuadSurd {
        &self.t_times_u / &self.t_over_u
    }

    pub fn t_c(&self, bits: usize) -> PrecReal {
        self.t_c_squared.to_prec(bits + 16).sqrt().with_precision(bits)
    }

    pub fn u_c(&self, bits: usize) -> PrecReal {
        self.u_c_squared().to_prec(bits + 16).sqrt().with_precision(bits)
    }

    pub fn mu(&self) -> f64 {
        1.0 / (4.0 * 7f64.sqrt())
    }

    /// μ as an element of Q(√7): √7/28.
    pub fn mu_surd(&self) -> QuadSurd {
        QuadSurd::new(rat(0, 1), rat(1, 28))
    }

    /// c_∞ as an element of Q(√7): √7/21.
    pub fn c_infty_surd(&self) -> QuadSurd {
        QuadSurd::new(rat(0, 1), rat(1, 21))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let cc = constants_critical();
        assert_eq!(cc.t_over_u, QuadSurd::new(rat(35, 252), rat(-5, 252)));
        assert!((cc.t_c(64).to_f64() - 0.0131949).abs() < 5e-8);
        assert!((cc.u_c(64).to_f64() - 0.15272961).abs() < 5e-8);
        let ratio = cc.t_c(128).to_f64() / cc.u_c(128).to_f64();
        assert!((ratio - cc.t_over_u.to_f64()).abs() < 1e-15, "{ratio} {}", cc.t_over_u.to_f64());
        for x in [&cc.nu_c, &cc.t_c_squared, &cc.t_over_u, &cc.t_times_u] {
            assert!(x.is_positive());
        }
        let mu = cc.mu_surd();
        assert_eq!(&mu * &mu, QuadSurd::from_rational(cc.mu_squared.clone()));
        let ci = cc.c_infty_surd();
        assert_eq!(&ci * &ci, QuadSurd::from_rational(cc.c_infty_squared.clone()));
    }

    #[test]
    fn t_c_from_closed_form() {
        // t_c = √10 / (8 (7+√7)^{3/2})
        let s: f64 = 7.0 + 7f64.sqrt();
        let direct = 10f64.sqrt() / (8.0 * s.powf(1.5));
        assert!((constants_critical().t_c(128).to_f64() / direct - 1.0).abs() < 1e-14);
    }
}
