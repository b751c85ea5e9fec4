//! Trigonometric polynomials: finite real combinations of `cos(w x)` and
//! `sin(w x)` plus a constant term.
//!
//! The canonical form keeps frequencies strictly positive, distinct, and
//! sorted ascending; frequency-zero content lives in the constant term. The
//! band edge is the largest frequency.

use num_complex::Complex64;

/// One frequency component `cos_amp*cos(freq*x) + sin_amp*sin(freq*x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub freq: f64,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

/// `constant + sum of terms`, in canonical form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    constant: f64,
    terms: Vec<TrigTerm>,
}

/// Frequencies closer than this (relative to their size) denote one mode.
fn same_freq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

impl TrigPolynomial {
    pub fn constant(value: f64) -> Self {
        TrigPolynomial {
            constant: value,
            terms: Vec::new(),
        }
    }

    /// Build from raw `(freq, cos_amp, sin_amp)` triples; frequencies of any
    /// sign are folded into the canonical non-negative form.
    pub fn from_terms(constant: f64, raw: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let mut p = TrigPolynomial {
            constant,
            terms: Vec::new(),
        };
        for (freq, cos_amp, sin_amp) in raw {
            p.accumulate(freq, cos_amp, sin_amp);
        }
        p.normalize();
        p
    }

    pub fn cosine(freq: f64, amp: f64) -> Self {
        Self::from_terms(0.0, [(freq, amp, 0.0)])
    }

    pub fn sine(freq: f64, amp: f64) -> Self {
        Self::from_terms(0.0, [(freq, 0.0, amp)])
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn band_edge(&self) -> f64 {
        self.terms.last().map(|t| t.freq).unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.is_empty()
    }

    fn accumulate(&mut self, freq: f64, cos_amp: f64, sin_amp: f64) {
        // cos(-w x) = cos(w x), sin(-w x) = -sin(w x)
        let (freq, cos_amp, sin_amp) = if freq < 0.0 {
            (-freq, cos_amp, -sin_amp)
        } else {
            (freq, cos_amp, sin_amp)
        };
        if same_freq(freq, 0.0) {
            self.constant += cos_amp;
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| same_freq(t.freq, freq)) {
            t.cos_amp += cos_amp;
            t.sin_amp += sin_amp;
        } else {
            self.terms.push(TrigTerm {
                freq,
                cos_amp,
                sin_amp,
            });
        }
    }

    fn normalize(&mut self) {
        self.terms
            .retain(|t| t.cos_amp != 0.0 || t.sin_amp != 0.0);
        self.terms
            .sort_by(|a, b| a.freq.partial_cmp(&b.freq).unwrap());
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.constant;
        for t in &self.terms {
            let (s, c) = (t.freq * x).sin_cos();
            v += t.cos_amp * c + t.sin_amp * s;
        }
        v
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for t in &self.terms {
            let (s, c) = (t.freq * x).sin_cos();
            v += t.freq * (t.sin_amp * c - t.cos_amp * s);
        }
        v
    }

    /// Termwise derivative as a new polynomial.
    pub fn derivative(&self) -> TrigPolynomial {
        TrigPolynomial::from_terms(
            0.0,
            self.terms
                .iter()
                .map(|t| (t.freq, t.freq * t.sin_amp, -t.freq * t.cos_amp)),
        )
    }

    pub fn scale(&self, factor: f64) -> TrigPolynomial {
        TrigPolynomial::from_terms(
            self.constant * factor,
            self.terms
                .iter()
                .map(|t| (t.freq, t.cos_amp * factor, t.sin_amp * factor)),
        )
    }

    pub fn add(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let all = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.freq, t.cos_amp, t.sin_amp));
        TrigPolynomial::from_terms(self.constant + other.constant, all)
    }

    pub fn sub(&self, other: &TrigPolynomial) -> TrigPolynomial {
        self.add(&other.scale(-1.0))
    }

    /// Product-to-sum expansion; band edges add exactly.
    pub fn mul(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let mut raw: Vec<(f64, f64, f64)> = Vec::new();
        let mut constant = self.constant * other.constant;
        for t in &self.terms {
            raw.push((t.freq, t.cos_amp * other.constant, t.sin_amp * other.constant));
        }
        for u in &other.terms {
            raw.push((u.freq, u.cos_amp * self.constant, u.sin_amp * self.constant));
        }
        for t in &self.terms {
            for u in &other.terms {
                let sum = t.freq + u.freq;
                let diff = t.freq - u.freq;
                // cos a cos b = (cos(a-b)+cos(a+b))/2
                // sin a sin b = (cos(a-b)-cos(a+b))/2
                // sin a cos b = (sin(a+b)+sin(a-b))/2
                // cos a sin b = (sin(a+b)-sin(a-b))/2
                let cc = t.cos_amp * u.cos_amp;
                let ss = t.sin_amp * u.sin_amp;
                let sc = t.sin_amp * u.cos_amp;
                let cs = t.cos_amp * u.sin_amp;
                if same_freq(diff, 0.0) {
                    constant += 0.5 * (cc + ss);
                    raw.push((diff, 0.0, 0.5 * (sc - cs)));
                } else {
                    raw.push((diff, 0.5 * (cc + ss), 0.5 * (sc - cs)));
                }
                raw.push((sum, 0.5 * (cc - ss), 0.5 * (sc + cs)));
            }
        }
        TrigPolynomial::from_terms(constant, raw)
    }

    pub fn powi(&self, n: u32) -> TrigPolynomial {
        let mut acc = TrigPolynomial::constant(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Translate the argument: returns `q(x) = self(x - shift)`.
    pub fn shift(&self, shift: f64) -> TrigPolynomial {
        TrigPolynomial::from_terms(
            self.constant,
            self.terms.iter().map(|t| {
                let (s, c) = (t.freq * shift).sin_cos();
                // cos(w(x-s)) = cos wx cos ws + sin wx sin ws
                // sin(w(x-s)) = sin wx cos ws - cos wx sin ws
                (
                    t.freq,
                    t.cos_amp * c - t.sin_amp * s,
                    t.cos_amp * s + t.sin_amp * c,
                )
            }),
        )
    }

    /// Value of `sum c_j e^{i w_j x}` when this polynomial is read as the real
    /// part paired with `imag` as the imaginary part.
    pub fn eval_complex_with(&self, imag: &TrigPolynomial, x: f64) -> Complex64 {
        Complex64::new(self.eval(x), imag.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_expands_cosines() {
        // cos x * cos 2x = cos(3x)/2 + cos(x)/2
        let p = TrigPolynomial::cosine(1.0, 1.0).mul(&TrigPolynomial::cosine(2.0, 1.0));
        assert_eq!(p.constant_term(), 0.0);
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.terms()[0], TrigTerm { freq: 1.0, cos_amp: 0.5, sin_amp: 0.0 });
        assert_eq!(p.terms()[1], TrigTerm { freq: 3.0, cos_amp: 0.5, sin_amp: 0.0 });
        assert_eq!(p.band_edge(), 3.0);
    }

    #[test]
    fn squares_produce_constant_terms() {
        // sin^2 x = 1/2 - cos(2x)/2
        let p = TrigPolynomial::sine(1.0, 1.0).powi(2);
        assert_eq!(p.constant_term(), 0.5);
        assert_eq!(p.terms(), &[TrigTerm { freq: 2.0, cos_amp: -0.5, sin_amp: 0.0 }]);
    }

    #[test]
    fn pythagorean_identity_cancels_exactly() {
        let p = TrigPolynomial::sine(1.0, 1.0)
            .powi(2)
            .add(&TrigPolynomial::cosine(1.0, 1.0).powi(2));
        assert_eq!(p, TrigPolynomial::constant(1.0));
    }

    #[test]
    fn negative_frequencies_fold() {
        let p = TrigPolynomial::from_terms(0.0, [(-2.0, 0.25, 0.5)]);
        assert_eq!(p.terms(), &[TrigTerm { freq: 2.0, cos_amp: 0.25, sin_amp: -0.5 }]);
    }

    #[test]
    fn eval_and_derivative_agree_with_closed_form() {
        let p = TrigPolynomial::from_terms(0.75, [(1.0, -1.0, 0.0), (2.0, 0.5, 0.0)]);
        for i in 0..50 {
            let x = -3.0 + 0.13 * i as f64;
            let want = 0.75 - x.cos() + 0.5 * (2.0 * x).cos();
            assert!((p.eval(x) - want).abs() < 1e-14);
            let dwant = x.sin() - (2.0 * x).sin();
            assert!((p.derivative_at(x) - dwant).abs() < 1e-14);
            assert!((p.derivative().eval(x) - dwant).abs() < 1e-14);
        }
    }

    #[test]
    fn shift_translates_argument() {
        let p = TrigPolynomial::from_terms(0.2, [(1.0, 0.3, -0.7), (2.5, 0.0, 1.1)]);
        let q = p.shift(0.8);
        for i in 0..30 {
            let x = -2.0 + 0.21 * i as f64;
            assert!((q.eval(x) - p.eval(x - 0.8)).abs() < 1e-13);
        }
    }
}
