//! Decimal rendering shared by the JSON and CSV writers.

use nigwh::Float;
use serde_json::Value;

/// Significant digits used unless `--full` is given.
pub const DEFAULT_DIGITS: usize = 17;

#[derive(Clone, Copy, Debug)]
pub struct NumberFormat {
    pub full: bool,
}

impl NumberFormat {
    pub fn f64(&self, x: f64) -> String {
        if !x.is_finite() {
            return x.to_string();
        }
        if self.full {
            // shortest representation that round-trips
            let s = format!("{x:e}");
            let (mantissa, exp) = s.split_once('e').expect("exponent present");
            let exp: i32 = exp.parse().expect("integer exponent");
            let negative = mantissa.starts_with('-');
            let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
            return render(negative, &digits, exp + 1);
        }
        self.float(&Float::with_val(53, x), Some(DEFAULT_DIGITS))
    }

    /// High-precision value: 17 digits, or every carried digit with `--full`.
    pub fn big(&self, x: &Float) -> String {
        self.float(x, if self.full { None } else { Some(DEFAULT_DIGITS) })
    }

    /// Always at the working precision, whatever `--full` says.
    pub fn exact(&self, x: &Float) -> String {
        self.float(x, None)
    }

    fn float(&self, x: &Float, digits: Option<usize>) -> String {
        if !x.is_finite() {
            return x.to_f64().to_string();
        }
        if x.is_zero() {
            return "0".into();
        }
        let (negative, digits, exp) = x.to_sign_string_exp(10, digits);
        render(negative, &digits, exp.expect("finite nonzero value has an exponent"))
    }

    /// Replaces every non-integer JSON number by its decimal string.
    pub fn stringify(&self, v: &mut Value) {
        match v {
            Value::Number(n) if n.is_f64() => {
                *v = Value::String(self.f64(n.as_f64().expect("f64 number")));
            }
            Value::Array(items) => items.iter_mut().for_each(|x| self.stringify(x)),
            Value::Object(map) => map.values_mut().for_each(|x| self.stringify(x)),
            _ => {}
        }
    }
}

/// `0.d1d2... x 10^exp` as plain decimal when the exponent is moderate, otherwise `d.ddd e N`.
fn render(negative: bool, digits: &str, exp: i32) -> String {
    let sign = if negative { "-" } else { "" };
    let sci = exp - 1;
    let n = digits.len() as i32;
    if (-5..6).contains(&sci) {
        if exp <= 0 {
            format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
        } else if exp >= n {
            format!("{sign}{digits}{}", "0".repeat((exp - n) as usize))
        } else {
            format!("{sign}{}.{}", &digits[..exp as usize], &digits[exp as usize..])
        }
    } else {
        let tail = &digits[1..];
        if tail.is_empty() {
            format!("{sign}{}e{sci}", &digits[..1])
        } else {
            format!("{sign}{}.{tail}e{sci}", &digits[..1])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_plain_and_scientific() {
        let f = NumberFormat { full: false };
        assert_eq!(f.f64(28.921875), "28.921875000000000");
        assert_eq!(f.f64(-1.25e11), "-1.2500000000000000e11");
        assert_eq!(f.f64(1.5e-9), "1.5000000000000000e-9");
        assert_eq!(f.f64(0.0), "0");
        let full = NumberFormat { full: true };
        assert_eq!(full.f64(0.1), "0.1");
        assert_eq!(full.f64(-2.5e20), "-2.5e20");
        assert_eq!(full.f64(120.0), "120");
    }
}
