//! Decimal rendering with 12 significant digits.

/// Formats `v` rounded to 12 significant digits, without trailing zeros.
/// Plain decimal notation is used for exponents in `-6..15`, scientific
/// notation otherwise. Negative zero prints as `0`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    if !(-6..15).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

/// `[a, b, c]` with each entry rendered by [`fmt_num`].
pub fn fmt_vec<'a>(values: impl IntoIterator<Item = &'a f64>) -> String {
    let parts: Vec<String> = values.into_iter().map(|&v| fmt_num(v)).collect();
    format!("[{}]", parts.join(", "))
}

/// Like [`fmt_vec`], but entries below `1e-12` times the largest magnitude
/// (at least 1) print as zero. Used for computed vectors whose exact zeros
/// come back as rounding residue.
pub fn fmt_vec_clean<'a>(values: impl IntoIterator<Item = &'a f64>) -> String {
    let values: Vec<f64> = values.into_iter().copied().collect();
    let cutoff = 1e-12 * values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    fmt_vec(
        values
            .iter()
            .map(|&v| if v.abs() <= cutoff { 0.0 } else { v })
            .collect::<Vec<_>>()
            .iter(),
    )
}
