//! Numeric values with optional SI prefix/unit suffixes, e.g. `15MPa`,
//! `0.5 MHz`, `20us`, `2μm`, `0.1MPa/m`.

/// (suffix, multiplier to SI base units)
const SUFFIXES: &[(&str, f64)] = &[
    ("", 1.0),
    ("Pa", 1.0),
    ("kPa", 1e3),
    ("MPa", 1e6),
    ("GPa", 1e9),
    ("Pa/m", 1.0),
    ("kPa/m", 1e3),
    ("MPa/m", 1e6),
    ("Hz", 1.0),
    ("kHz", 1e3),
    ("MHz", 1e6),
    ("s", 1.0),
    ("ms", 1e-3),
    ("us", 1e-6),
    ("μs", 1e-6),
    ("µs", 1e-6),
    ("ns", 1e-9),
    ("ps", 1e-12),
    ("m", 1.0),
    ("cm", 1e-2),
    ("mm", 1e-3),
    ("um", 1e-6),
    ("μm", 1e-6),
    ("µm", 1e-6),
    ("nm", 1e-9),
    ("N/m", 1.0),
    ("mN/m", 1e-3),
    ("Pa.s", 1.0),
    ("mPa.s", 1e-3),
    ("m2/s", 1.0),
    ("1/Pa", 1.0),
    ("kg/m3", 1.0),
    ("kg/s", 1.0),
    ("1/m3", 1.0),
];

/// Parses a number followed by an optional unit suffix and returns the value
/// in SI base units.
pub fn parse_quantity(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty value".to_string());
    }
    // Longest numeric prefix that parses as f64.
    let boundaries: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .collect();
    for &end in boundaries.iter().rev() {
        let (num, suffix) = text.split_at(end);
        let Ok(value) = num.trim().parse::<f64>() else {
            continue;
        };
        let suffix = suffix.trim();
        return match SUFFIXES.iter().find(|(s, _)| *s == suffix) {
            Some((_, scale)) => Ok(value * scale),
            None => Err(format!("unknown unit suffix `{suffix}` in `{text}`")),
        };
    }
    Err(format!("`{text}` is not a number"))
}
