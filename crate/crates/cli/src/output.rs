use num_complex::Complex64;
use serde::Serialize;

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 15 significant digits.
pub fn fmt15(x: f64) -> String {
    let r = round15(x);
    if r == 0.0 {
        "0".into()
    } else if !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(c: Complex64) -> Self {
        JsonComplex { re: round15(c.re), im: round15(c.im) }
    }
}

pub const CSV_HEADER: &str = "xi,r,re,im,err";

pub fn csv_row(xi: f64, r: f64, value: Complex64, err: f64) -> String {
    format!("{},{},{},{},{}", fmt15(xi), fmt15(r), fmt15(value.re), fmt15(value.im), fmt15(err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(-2.0), "-2");
        assert_eq!(fmt15(0.0), "0");
        assert_eq!(fmt15(-0.0), "0");
        assert_eq!(fmt15(1.234e-20), "1.234e-20");
        assert_eq!(fmt15(2.5e16), "2.5e16");
        assert_eq!(fmt15(0.001), "0.001");
    }

    #[test]
    fn row_layout() {
        assert_eq!(csv_row(0.5, 1.0, Complex64::new(2.0, -0.25), 1e-9), "0.5,1,2,-0.25,1e-9");
    }
}
