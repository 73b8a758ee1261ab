//! Flag value parsers. Errors here surface as clap usage errors (exit 2).

use riemann_aux::zeros::Rectangle;
use riemann_aux::Complex64;

fn number(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|_| format!("not a number: {text:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {text:?}"))
    }
}

/// `a+bi`, `a-bi`, `a`, `bi`, `i`, with no spaces.
pub fn complex(text: &str) -> Result<Complex64, String> {
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(format!("expected a+bi with no spaces, got {text:?}"));
    }
    let Some(body) = text.strip_suffix('i') else {
        return Ok(Complex64::new(number(text)?, 0.0));
    };
    let bytes = body.as_bytes();
    // last sign that is not the leading one and not part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => number(t),
    };
    match split {
        Some(k) => Ok(Complex64::new(number(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `sigma_min,sigma_max,t_min,t_max`
pub fn rectangle(text: &str) -> Result<Rectangle, String> {
    let parts = text.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d] = parts[..] else {
        return Err(format!("expected sigma_min,sigma_max,t_min,t_max, got {text:?}"));
    };
    Rectangle::new(a, b, c, d).map_err(|e| e.to_string())
}

pub fn positive(text: &str) -> Result<f64, String> {
    let v = number(text)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Axis {
    /// Points start, start+step, ... up to end inclusive.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// `name=start:end:step`
pub fn axis(text: &str) -> Result<(String, Axis), String> {
    let (name, range) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=start:end:step, got {text:?}"))?;
    let parts = range.split(':').map(number).collect::<Result<Vec<_>, _>>()?;
    let [start, end, step] = parts[..] else {
        return Err(format!("expected start:end:step, got {range:?}"));
    };
    if !(step > 0.0) || end < start {
        return Err(format!("need start <= end and step > 0 in {text:?}"));
    }
    Ok((name.to_string(), Axis { start, end, step }))
}
