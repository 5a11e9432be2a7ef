//! Truncated Taylor series ("jets") used to differentiate survival functions to any order.
//!
//! A jet of order `m` at `x` stores `f^{(k)}(x)/k!` for `k = 0..=m`.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Jet(pub(crate) Vec<f64>);

impl Jet {
    /// The identity function `u ↦ u` expanded at `x`.
    pub(crate) fn variable(x: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet(c)
    }

    pub(crate) fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub(crate) fn scale(mut self, s: f64) -> Self {
        self.0.iter_mut().for_each(|c| *c *= s);
        self
    }

    pub(crate) fn add_const(mut self, s: f64) -> Self {
        self.0[0] += s;
        self
    }

    pub(crate) fn add(mut self, other: &Jet) -> Self {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        self
    }

    pub(crate) fn mul(&self, other: &Jet) -> Self {
        let m = self.order();
        let mut out = vec![0.0; m + 1];
        for k in 0..=m {
            out[k] = (0..=k).map(|i| self.0[i] * other.0[k - i]).sum();
        }
        Jet(out)
    }

    /// `self^r` for a jet with positive constant term.
    pub(crate) fn powf(&self, r: f64) -> Self {
        let a = &self.0;
        let m = self.order();
        let mut b = vec![0.0; m + 1];
        b[0] = a[0].powf(r);
        for k in 1..=m {
            let kf = k as f64;
            let s: f64 = (1..=k)
                .map(|i| ((r + 1.0) * i as f64 - kf) * a[i] * b[k - i])
                .sum();
            b[k] = s / (kf * a[0]);
        }
        Jet(b)
    }

    pub(crate) fn exp(&self) -> Self {
        let a = &self.0;
        let m = self.order();
        let mut b = vec![0.0; m + 1];
        b[0] = a[0].exp();
        for k in 1..=m {
            let s: f64 = (1..=k).map(|i| i as f64 * a[i] * b[k - i]).sum();
            b[k] = s / k as f64;
        }
        Jet(b)
    }

    /// Antiderivative with the given constant term; the top coefficient of `self` is dropped.
    pub(crate) fn integrate(&self, constant: f64) -> Self {
        let m = self.order();
        let mut b = vec![0.0; m + 1];
        b[0] = constant;
        for k in 1..=m {
            b[k] = self.0[k - 1] / k as f64;
        }
        Jet(b)
    }

    /// `f^{(j)}(x)`.
    pub(crate) fn derivative(&self, j: usize) -> f64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.0[j] * fact
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_rule() {
        let j = Jet::variable(2.0, 3).powf(-1.5);
        assert!((j.derivative(0) - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((j.derivative(1) + 1.5 * 2f64.powf(-2.5)).abs() < 1e-15);
        assert!((j.derivative(3) + 1.5 * 2.5 * 3.5 * 2f64.powf(-4.5)).abs() < 1e-14);
    }

    #[test]
    fn exp_of_square() {
        // d²/dx² e^{x²} = (2 + 4x²) e^{x²}
        let x = Jet::variable(0.7, 2);
        let e = x.mul(&x).exp();
        let want = (2.0 + 4.0 * 0.49) * 0.49f64.exp();
        assert!((e.derivative(2) - want).abs() < 1e-13);
    }

    #[test]
    fn integrate_shifts_coefficients() {
        let x = Jet::variable(3.0, 2);
        let f = x.integrate(4.5); // antiderivative of u is u²/2
        assert_eq!(f.derivative(0), 4.5);
        assert_eq!(f.derivative(1), 3.0);
        assert_eq!(f.derivative(2), 1.0);
    }
}
