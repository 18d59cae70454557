use super::Field;

/// Truncated power series: coefficients 0..=order.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<F> {
    pub c: Vec<F>,
}

impl<F: Field> Series<F> {
    pub fn zero(order: usize) -> Self {
        Series { c: vec![F::zero(); order + 1] }
    }

    pub fn constant(x: F, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = x;
        s
    }

    pub fn from_coeffs(mut c: Vec<F>, order: usize) -> Self {
        c.resize(order + 1, F::zero());
        Series { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a.fadd(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a.fsub(b)).collect() }
    }

    pub fn scale(&self, k: &F) -> Self {
        Series { c: self.c.iter().map(|a| a.fmul(k)).collect() }
    }

    pub fn add_const(&self, k: &F) -> Self {
        let mut s = self.clone();
        s.c[0] = s.c[0].fadd(k);
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![F::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].fadd(&a.fmul(b));
            }
        }
        Series { c: out }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Self {
        let n = self.order();
        let c0 = self.c[0].finv();
        let mut out = vec![F::zero(); n + 1];
        out[0] = c0.clone();
        for k in 1..=n {
            let mut acc = F::zero();
            for j in 1..=k {
                if !self.c[j].is_zero() {
                    acc = acc.fadd(&self.c[j].fmul(&out[k - j]));
                }
            }
            out[k] = acc.fmul(&c0).fneg();
        }
        Series { c: out }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Evaluates the polynomial Σ p_k x^k at this series (Horner).
    pub fn compose_poly(&self, p: &[F]) -> Self {
        let n = self.order();
        let mut acc = Series::zero(n);
        for coef in p.iter().rev() {
            acc = acc.mul(self).add_const(coef);
        }
        acc
    }

    /// Coefficient shift: (f(x) − f(0)) / x, keeping the same order
    /// (the top coefficient becomes unknown and is set to zero).
    pub fn delta(&self) -> Self {
        let n = self.order();
        let mut c: Vec<F> = self.c[1..].to_vec();
        c.push(F::zero());
        Series { c }.truncate(n)
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.c.resize(order + 1, F::zero());
        self
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Series<G> {
        Series { c: self.c.iter().map(f).collect() }
    }
}
