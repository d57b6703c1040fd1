//! Thin wrappers over `libm` so the model code stays `no_std`-clean.

pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub fn powi(x: f64, mut n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    if n < 0 {
        n = -n;
    }
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub const PI: f64 = core::f64::consts::PI;
