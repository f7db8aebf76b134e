//! Small exact-arithmetic helpers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Binomial with signed arguments; zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        BigUint::zero()
    } else {
        binomial(n as usize, k as usize)
    }
}

/// Pascal triangle up to row `n`, so lookups in hot loops stay cheap.
#[derive(Debug, Clone)]
pub struct Pascal {
    rows: Vec<Vec<BigUint>>,
}

impl Pascal {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![BigUint::one(); i + 1];
            for j in 1..i {
                row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
            }
            rows.push(row);
        }
        Pascal { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.rows[n][k]
    }
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(x.clone().into())
}

/// Approximate a rational as f64 even when numerator and denominator overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(f) = r.to_f64() {
        if f.is_finite() && (f != 0.0 || r.is_zero()) {
            return f;
        }
    }
    let (a, b) = (r.numer(), r.denom());
    let sa = (a.bits() as i64 - 60).max(0);
    let sb = (b.bits() as i64 - 60).max(0);
    let fa = (a >> sa as usize).to_f64().unwrap_or(f64::NAN);
    let fb = (b >> sb as usize).to_f64().unwrap_or(f64::NAN);
    fa / fb * 2f64.powi((sa - sb) as i32)
}

/// Decimal rendering with `sig` significant digits (scientific when tiny or huge).
pub fn rational_to_decimal(r: &BigRational, sig: usize) -> String {
    use num_bigint::BigInt;
    use num_traits::Signed;
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let (num, den) = (a.numer().clone(), a.denom().clone());
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10u8);
    let pow = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k.unsigned_abs() as usize) };
    let ge = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow(e)
        } else {
            &num * pow(e) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    // digits = round(a * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (&num * pow(shift), den.clone())
    } else {
        (num.clone(), &den * pow(shift))
    };
    let mut digits: BigInt = (&n2 * 2 + &d2) / (&d2 * 2);
    if digits.to_string().len() > sig {
        digits /= 10;
        e += 1;
    }
    let s = digits.to_string();
    let mantissa = if s.len() > 1 {
        format!("{}.{}", &s[..1], &s[1..])
    } else {
        s
    };
    format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e)
}
