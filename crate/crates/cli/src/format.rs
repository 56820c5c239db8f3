//! Plain-text rendering.

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
