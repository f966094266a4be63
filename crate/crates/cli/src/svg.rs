//! SVG 1.1 of the Poincare disc. Geodesics are arcs of circles orthogonal to the unit circle.
//!
//! For interior points z, w not on a common diameter the circle has centre m with
//! 2 Re(z conj m) = |z|^2 + 1 and the same for w, radius sqrt(|m|^2 - 1). The part inside the
//! disc is less than a half circle, so the arc is always the short one; its sweep follows
//! the sign of (z - m) x (w - m). On a common diameter the geodesic is a straight segment.

use std::fmt::Write;

use num_complex::Complex;

pub type Z = Complex<f64>;

/// Circle through z and w orthogonal to the unit circle, or None for a diameter.
pub fn orthogonal_circle(z: Z, w: Z) -> Option<(Z, f64)> {
    let det = z.re * w.im - z.im * w.re;
    if det.abs() < 1e-12 {
        return None;
    }
    let (bz, bw) = ((z.norm_sqr() + 1.0) / 2.0, (w.norm_sqr() + 1.0) / 2.0);
    // Re(z conj m) = z.re m.re + z.im m.im.
    let mx = (bz * w.im - bw * z.im) / det;
    let my = (z.re * bw - w.re * bz) / det;
    let m = Complex::new(mx, my);
    Some((m, (m.norm_sqr() - 1.0).max(0.0).sqrt()))
}

pub struct Canvas {
    size: u32,
    body: String,
}

fn f(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Canvas {
    pub fn new(size: u32) -> Self {
        Self { size, body: String::new() }
    }

    fn radius(&self) -> f64 {
        self.size as f64 * 0.45
    }

    /// Screen coordinates; y points down.
    pub fn screen(&self, z: Z) -> (f64, f64) {
        let h = self.size as f64 / 2.0;
        (h + self.radius() * z.re, h - self.radius() * z.im)
    }

    pub fn boundary(&mut self) {
        let h = self.size as f64 / 2.0;
        writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1"/>"#, f(h), f(h), f(self.radius()))
            .unwrap();
    }

    /// Path data from z to w along the geodesic, without the leading move.
    fn arc_to(&self, z: Z, w: Z) -> String {
        let (x, y) = self.screen(w);
        match orthogonal_circle(z, w) {
            None => format!("L {} {}", f(x), f(y)),
            Some((m, r)) => {
                let (a, b) = (z - m, w - m);
                let cross = a.re * b.im - a.im * b.re;
                // y is flipped on screen, which turns a counterclockwise arc into sweep flag 0.
                let sweep = if cross > 0.0 { 0 } else { 1 };
                let rr = r * self.radius();
                format!("A {} {} 0 0 {} {} {}", f(rr), f(rr), sweep, f(x), f(y))
            }
        }
    }

    /// Closed geodesic polygon.
    pub fn polygon(&mut self, pts: &[Z], class: &str) {
        if pts.is_empty() {
            return;
        }
        let (x0, y0) = self.screen(pts[0]);
        let mut d = format!("M {} {}", f(x0), f(y0));
        for k in 0..pts.len() {
            d.push(' ');
            d.push_str(&self.arc_to(pts[k], pts[(k + 1) % pts.len()]));
        }
        d.push_str(" Z");
        writeln!(self.body, r#"<path class="{class}" d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#).unwrap();
    }

    pub fn polyline(&mut self, pts: &[Z], class: &str, closed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&z| {
                let (x, y) = self.screen(z);
                format!("{},{}", f(x), f(y))
            })
            .collect();
        let tag = if closed { "polygon" } else { "polyline" };
        writeln!(self.body, r#"<{tag} class="{class}" points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#, coords.join(" "))
            .unwrap();
    }

    pub fn label(&mut self, z: Z, text: &str) {
        let (x, y) = self.screen(z);
        writeln!(self.body, r#"<circle cx="{}" cy="{}" r="2.5" fill="black"/>"#, f(x), f(y)).unwrap();
        writeln!(self.body, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#, f(x + 4.0), f(y - 4.0), escape(text))
            .unwrap();
    }

    pub fn title(&mut self, text: &str) {
        writeln!(self.body, "<title>{}</title>", escape(text)).unwrap();
    }

    pub fn finish(self) -> String {
        let s = self.size;
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                "{}</svg>\n"
            ),
            s, s, s, s, self.body
        )
    }
}
