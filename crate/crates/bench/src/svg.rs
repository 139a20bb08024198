//! Hand-rolled SVG convergence plots. Best-effort visuals: all acceptance
//! logic depends on CSV values only, and the plot is derived from the CSV
//! file rather than the in-memory trace.

const PALETTE: [&str; 6] = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0d9488"];

/// Plot f-value (or gap, when `f_star` is known) against iteration on a
/// log-scaled y axis.
pub fn plot_csv(
    csv_text: &str,
    f_star: Option<f64>,
    title: &str,
) -> String {
    let data = crate::csv::parse_for_plot(csv_text);
    let mut series: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
    for (name, iter, fv) in data {
        let y = match f_star {
            Some(fs) => (fv - fs).max(1e-16),
            None => fv.abs().max(1e-16),
        };
        match series.iter_mut().find(|(n, _)| *n == name) {
            Some((_, pts)) => pts.push((iter, y)),
            None => series.push((name, vec![(iter, y)])),
        }
    }
    render(&series, f_star.is_some(), title)
}

fn render(series: &[(String, Vec<(usize, f64)>)], gap_axis: bool, title: &str) -> String {
    let (w, h, ml, mb) = (720.0, 440.0, 70.0, 50.0);
    let plot_w = w - ml - 20.0;
    let plot_h = h - mb - 40.0;

    let max_iter = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, pts) in series {
        for &(_, y) in pts {
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !ymin.is_finite() || !ymax.is_finite() {
        ymin = 1e-16;
        ymax = 1.0;
    }
    let (ly_min, ly_max) = (ymin.log10().floor(), ymax.log10().ceil().max(ymin.log10() + 1.0));

    let x_of = |it: f64| ml + plot_w * it / max_iter;
    let y_of = |v: f64| {
        let t = (v.log10() - ly_min) / (ly_max - ly_min);
        40.0 + plot_h * (1.0 - t)
    };

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        ml,
        xml_escape(title)
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"40\" x2=\"{ml}\" y2=\"{}\" stroke=\"#444\"/>\n",
        40.0 + plot_h
    ));
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#444\"/>\n",
        40.0 + plot_h,
        ml + plot_w
    ));
    // y ticks: one per decade (capped)
    let decades = (ly_max - ly_min).round() as i64;
    let stride = (decades / 8).max(1);
    let mut d = ly_min as i64;
    while d <= ly_max as i64 {
        let y = y_of(10f64.powi(d as i32));
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{ml}\" y2=\"{y}\" stroke=\"#444\"/>\n",
            ml - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>\n",
            ml - 8.0,
            y + 4.0
        ));
        d += stride;
    }
    // x ticks
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let it = max_iter * frac;
        let x = x_of(it);
        s.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{0}\" x2=\"{x}\" y2=\"{1}\" stroke=\"#444\"/>\n",
            40.0 + plot_h,
            45.0 + plot_h
        ));
        s.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            58.0 + plot_h,
            it.round() as u64
        ));
    }
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        40.0 + plot_h / 2.0,
        40.0 + plot_h / 2.0,
        if gap_axis { "f - f*" } else { "f" }
    ));

    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(it, y)| format!("{:.2},{:.2}", x_of(it as f64), y_of(y)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        let label = if name.is_empty() { "trace" } else { name };
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            ml + plot_w - 150.0,
            55.0 + 16.0 * i as f64,
            xml_escape(label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_well_formed_svg() {
        let csv = "iter,f_value,grad_norm_dual,step_L,bregman_to_opt,certificate,grad_calls,value_calls\r\n0,1.0e0,1.0e0,1.0e0,,,1,1\r\n1,5.0e-1,5.0e-1,1.0e0,,,2,2\r\n";
        let svg = plot_csv(csv, Some(0.0), "test");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
