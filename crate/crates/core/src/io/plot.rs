use std::fmt::Write;

use super::document::ResultDocument;
use crate::ComplexValue;

/// Parameter-plane window and resolution of the SVG plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    /// Pixels per unit of the plane.
    pub scale: f64,
    /// Side of a raster cell in pixels.
    pub cell: usize,
    pub max_iter: usize,
}

impl Default for PlotWindow {
    fn default() -> Self {
        Self { re_min: -2.1, re_max: 0.7, im_min: -1.3, im_max: 1.3, scale: 250.0, cell: 5, max_iter: 200 }
    }
}

impl PlotWindow {
    fn width(&self) -> usize {
        ((self.re_max - self.re_min) * self.scale).round() as usize
    }

    fn height(&self) -> usize {
        ((self.im_max - self.im_min) * self.scale).round() as usize
    }

    fn pixel_of(&self, c: ComplexValue) -> (f64, f64) {
        ((c.re - self.re_min) * self.scale, (self.im_max - c.im) * self.scale)
    }

    fn plane_of(&self, px: f64, py: f64) -> ComplexValue {
        ComplexValue::new(self.re_min + px / self.scale, self.im_max - py / self.scale)
    }
}

fn escape_shade(c: ComplexValue, max_iter: usize) -> u8 {
    let mut z = ComplexValue::new(0.0, 0.0);
    for k in 0..max_iter {
        z = z * z + c;
        if z.norm_sqr() > 4.0 {
            return 250u8.saturating_sub((k.min(45) * 5) as u8);
        }
    }
    26
}

/// Escape-time raster of the window with one marker per record: filled
/// circles for parameters inside the Mandelbrot set, crosses outside.
pub fn render_svg(doc: &ResultDocument, window: &PlotWindow) -> String {
    let (w, h) = (window.width(), window.height());
    let cell = window.cell.max(1);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(svg, "<title>critical points of the period-{} multiplier map</title>", doc.period);
    let _ = writeln!(svg, r#"<g id="raster" shape-rendering="crispEdges">"#);
    for row in (0..h).step_by(cell) {
        let shades: Vec<u8> = (0..w)
            .step_by(cell)
            .map(|col| {
                let c = window.plane_of(col as f64 + cell as f64 / 2.0, row as f64 + cell as f64 / 2.0);
                escape_shade(c, window.max_iter)
            })
            .collect();
        // run-length encode equal shades along the row
        let mut start = 0;
        while start < shades.len() {
            let mut end = start + 1;
            while end < shades.len() && shades[end] == shades[start] {
                end += 1;
            }
            let g = shades[start];
            let _ = writeln!(
                svg,
                r##"<rect x="{}" y="{row}" width="{}" height="{cell}" fill="#{g:02x}{g:02x}{g:02x}"/>"##,
                start * cell,
                (end - start) * cell
            );
            start = end;
        }
    }
    svg.push_str("</g>\n<g id=\"critical-points\">\n");
    for r in &doc.records {
        let (x, y) = window.pixel_of(r.c);
        if r.inside_mandelbrot {
            let _ = writeln!(
                svg,
                r##"<circle class="inside" cx="{x:.2}" cy="{y:.2}" r="4" fill="#e4572e" stroke="#000000" stroke-width="1"/>"##
            );
        } else {
            let _ = writeln!(
                svg,
                r##"<path class="outside" d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="#1f6fd1" stroke-width="2"/>"##,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        }
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}
