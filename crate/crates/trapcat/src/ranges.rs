//! Range and scalar syntax accepted on the command line.

use trapcat_core::Complex64;

/// Slack on the stop value when stepping a real range.
pub const STOP_EPSILON: f64 = 1e-9;

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let re = parse_real(parts.next().unwrap_or(""))?;
    let im = match parts.next() {
        Some(p) => parse_real(p)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("expected re[,im], got {s:?}"));
    }
    Ok(Complex64::new(re, im))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if !x.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(x)
}

/// Points of a `start:stop:step` range.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRange(pub Vec<f64>);

/// `start:stop:step`, both ends included. The stop is reached if the last
/// step lands within [`STOP_EPSILON`] of it. Values are `start + i * step`
/// so that rounding does not accumulate.
pub fn parse_real_range(s: &str) -> Result<RealRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    let (start, stop, step) = (parse_real(start)?, parse_real(stop)?, parse_real(step)?);
    if step <= 0.0 {
        return Err(format!("step must be positive, got {step}"));
    }
    if stop < start {
        return Err(format!("stop {stop} lies below start {start}"));
    }
    let count = ((stop - start) / step + STOP_EPSILON).floor() as usize + 1;
    Ok(RealRange(
        (0..count).map(|i| start + i as f64 * step).collect(),
    ))
}

/// A single count or an inclusive `a..b` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSpec {
    One(usize),
    Span(usize, usize),
}

impl CountSpec {
    pub fn values(self) -> Vec<usize> {
        match self {
            CountSpec::One(n) => vec![n],
            CountSpec::Span(a, b) => (a..=b).collect(),
        }
    }
}

pub fn parse_count_spec(s: &str) -> Result<CountSpec, String> {
    let int = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a count: {t:?}"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (int(a)?, int(b)?);
            if b < a {
                return Err(format!("empty range {s:?}"));
            }
            Ok(CountSpec::Span(a, b))
        }
        None => Ok(CountSpec::One(int(s)?)),
    }
}

/// `auto`, a count or an `a..b` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationsArg {
    Auto,
    Counts(CountSpec),
}

pub fn parse_iterations(s: &str) -> Result<IterationsArg, String> {
    if s == "auto" {
        return Ok(IterationsArg::Auto);
    }
    parse_count_spec(s).map(IterationsArg::Counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffArg {
    Auto,
    Fixed(usize),
}

pub fn parse_cutoff(s: &str) -> Result<CutoffArg, String> {
    if s == "auto" {
        return Ok(CutoffArg::Auto);
    }
    s.parse()
        .map(CutoffArg::Fixed)
        .map_err(|_| format!("expected auto or a count, got {s:?}"))
}
