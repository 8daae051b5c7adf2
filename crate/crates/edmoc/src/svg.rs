use std::fmt::Write as _;

use edmoc_core::PointCloud;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 30.0;

fn planar(x: &PointCloud, i: usize) -> (f64, f64) {
    let p = x.point(i);
    (p[0], p.get(1).copied().unwrap_or(0.0))
}

/// Scatter of estimated points (pink dots) over the ground truth (blue
/// circles), each estimate joined to its true position. Only the first two
/// coordinates are drawn.
pub fn scatter(estimate: &PointCloud, truth: &PointCloud) -> String {
    let all: Vec<(f64, f64)> = (0..truth.count())
        .map(|i| planar(truth, i))
        .chain((0..estimate.count()).map(|i| planar(estimate, i)))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - lo_x) * scale, SIZE - MARGIN - (y - lo_y) * scale);

    let mut s = String::new();
    let w = |s: &mut String, text: std::fmt::Arguments| s.write_fmt(text).expect("writing to a String cannot fail");
    w(&mut s, format_args!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    w(&mut s, format_args!("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"));
    let count = truth.count().min(estimate.count());
    for i in 0..count {
        let ((x1, y1), (x2, y2)) = (map(planar(estimate, i)), map(planar(truth, i)));
        w(&mut s, format_args!(
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"deeppink\" stroke-width=\"1\"/>\n"
        ));
    }
    for i in 0..truth.count() {
        let (x, y) = map(planar(truth, i));
        w(&mut s, format_args!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"none\" stroke=\"blue\" stroke-width=\"1.2\"/>\n"
        ));
    }
    for i in 0..estimate.count() {
        let (x, y) = map(planar(estimate, i));
        w(&mut s, format_args!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"deeppink\"/>\n"));
    }
    s.push_str("</svg>\n");
    s
}
