//! RFC-4180-style CSV traces: header row mandatory, '.' decimal separator,
//! scientific notation with 15 significant digits, CRLF line endings.

/// One record of a run trace. Optional columns stay empty when the quantity
/// is unavailable (no known optimum, no certificate).
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub iter: usize,
    pub f_value: f64,
    pub grad_norm_dual: f64,
    pub step_l: f64,
    pub bregman_to_opt: Option<f64>,
    pub certificate: Option<f64>,
    pub grad_calls: u64,
    pub value_calls: u64,
}

pub const HEADER: &str =
    "iter,f_value,grad_norm_dual,step_L,bregman_to_opt,certificate,grad_calls,value_calls";

fn sci(v: f64) -> String {
    format!("{v:.14e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

pub fn render(rows: &[TraceRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push_str("\r\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\r\n",
            r.iter,
            sci(r.f_value),
            sci(r.grad_norm_dual),
            sci(r.step_l),
            opt(r.bregman_to_opt),
            opt(r.certificate),
            r.grad_calls,
            r.value_calls
        ));
    }
    out
}

/// Combined CSV for method comparisons: one row per (method, iter).
pub fn render_compare(series: &[(String, Vec<TraceRow>)]) -> String {
    let mut out = String::new();
    out.push_str("method,");
    out.push_str(HEADER);
    out.push_str("\r\n");
    for (name, rows) in series {
        for r in rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\r\n",
                name,
                r.iter,
                sci(r.f_value),
                sci(r.grad_norm_dual),
                sci(r.step_l),
                opt(r.bregman_to_opt),
                opt(r.certificate),
                r.grad_calls,
                r.value_calls
            ));
        }
    }
    out
}

/// Minimal CSV reader for the plot path (plots must derive from the file,
/// not the in-memory trace). Returns (method-or-empty, iter, f_value).
pub fn parse_for_plot(text: &str) -> Vec<(String, usize, f64)> {
    let mut out = Vec::new();
    let mut lines = text.lines();
    let header = match lines.next() {
        Some(h) => h,
        None => return out,
    };
    let has_method = header.starts_with("method,");
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let (name, iter_idx, val_idx) = if has_method {
            (fields[0].to_string(), 1usize, 2usize)
        } else {
            (String::new(), 0usize, 1usize)
        };
        let (Some(it), Some(fv)) = (fields.get(iter_idx), fields.get(val_idx)) else {
            continue;
        };
        if let (Ok(it), Ok(fv)) = (it.parse::<usize>(), fv.parse::<f64>()) {
            out.push((name, it, fv));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse_roundtrip() {
        let rows = vec![TraceRow {
            iter: 0,
            f_value: 1.5,
            grad_norm_dual: 0.25,
            step_l: 2.0,
            bregman_to_opt: None,
            certificate: Some(3.0),
            grad_calls: 1,
            value_calls: 1,
        }];
        let text = render(&rows);
        assert!(text.starts_with(HEADER));
        assert!(text.contains("1.50000000000000e0"));
        let parsed = parse_for_plot(&text);
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].1, 0);
        assert!((parsed[0].2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn significant_digits_at_least_twelve() {
        let v = 1.0 / 3.0;
        let s = sci(v);
        // 14 digits after the decimal point in scientific notation
        let mantissa = s.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert!(digits >= 13, "{s}");
    }
}
