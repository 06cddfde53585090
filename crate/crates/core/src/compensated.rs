//! Error-carrying summation for long accumulations.

use num_complex::Complex64;
use std::ops::AddAssign;

/// Kahan-Babuska-Neumaier running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl AddAssign<f64> for NeumaierSum {
    #[inline]
    fn add_assign(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }
}

/// Component-wise compensated sum of complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexSum {
    #[inline]
    fn add_assign(&mut self, z: Complex64) {
        self.re += z.re;
        self.im += z.im;
    }
}
