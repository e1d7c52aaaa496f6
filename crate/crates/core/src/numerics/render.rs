//! Escape-time grayscale images of the parameter plane or a dynamical
//! plane, with optional polyline overlays.

use serde::Serialize;

use super::rays::RayKind;
use super::{step, ComplexPoint};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Squared escape radius for the escape-time count.
const BAILOUT2: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Region { re_min, re_max, im_min, im_max };
        r.validate()?;
        Ok(r)
    }

    /// Square region of half-width `radius` around `center`.
    pub fn around(center: ComplexPoint, radius: f64) -> Result<Self> {
        Self::new(center.re - radius, center.re + radius, center.im - radius, center.im + radius)
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|x| x.is_finite())
            && self.re_min < self.re_max
            && self.im_min < self.im_max;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("degenerate region {self:?}")))
        }
    }

    /// Parses `re_min,re_max,im_min,im_max`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "region",
            input: s.to_string(),
        };
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [a, b, c, d]: [f64; 4] = v.try_into().map_err(|_| bad())?;
        Self::new(a, b, c, d)
    }
}

/// A polyline drawn on top of the image with a fixed gray level.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub points: Vec<ComplexPoint>,
    pub shade: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Binary PGM, maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub region: Region,
    pub width: usize,
    pub height: usize,
    pub max_iter: u32,
    pub degree: u32,
    /// Parameter plane (Mandelbrot-type set) or the dynamical plane of `c`.
    pub kind: RayKind,
}

impl RenderSpec {
    pub fn parameter(region: Region, width: usize, height: usize, max_iter: u32) -> Self {
        RenderSpec {
            region,
            width,
            height,
            max_iter,
            degree: 2,
            kind: RayKind::Parameter,
        }
    }

    /// Pixel whose center is nearest to `z`, if inside the image.
    pub fn pixel_of(&self, z: ComplexPoint) -> Option<(usize, usize)> {
        let r = &self.region;
        let fx = (z.re - r.re_min) / (r.re_max - r.re_min) * self.width as f64;
        let fy = (r.im_max - z.im) / (r.im_max - r.im_min) * self.height as f64;
        if !(fx >= 0.0 && fy >= 0.0 && fx < self.width as f64 && fy < self.height as f64) {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    fn point_of(&self, x: usize, y: usize) -> ComplexPoint {
        let r = &self.region;
        ComplexPoint::new(
            r.re_min + (x as f64 + 0.5) / self.width as f64 * (r.re_max - r.re_min),
            r.im_max - (y as f64 + 0.5) / self.height as f64 * (r.im_max - r.im_min),
        )
    }
}

/// Escape time of the critical orbit (parameter plane) or of `z`
/// (dynamical plane); `None` if it stays bounded for `max_iter` steps.
fn escape_time(spec: &RenderSpec, p: ComplexPoint) -> Option<u32> {
    let (mut z, c) = match spec.kind {
        RayKind::Parameter => (ComplexPoint::new(0.0, 0.0), p),
        RayKind::Dynamic(c) => (p, c),
    };
    for k in 0..spec.max_iter {
        if z.norm_sqr() > BAILOUT2 {
            return Some(k);
        }
        z = step(z, c, spec.degree);
    }
    None
}

fn shade(k: Option<u32>, max_iter: u32) -> u8 {
    match k {
        None => 0,
        Some(k) => {
            let t = (f64::from(k) + 1.0).ln() / (f64::from(max_iter) + 1.0).ln();
            (255.0 - 191.0 * t).round().clamp(64.0, 255.0) as u8
        }
    }
}

pub fn render(spec: &RenderSpec, overlays: &[Overlay]) -> Result<GrayImage> {
    render_with(spec, overlays, Exec::Auto)
}

/// Rows are computed independently and assembled in order.
pub fn render_with(spec: &RenderSpec, overlays: &[Overlay], exec: Exec) -> Result<GrayImage> {
    spec.region.validate()?;
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::Precondition("image dimensions must be positive".into()));
    }
    crate::angles::check_degree(spec.degree)?;
    let rows = par::map_range(exec, spec.height, |y| {
        (0..spec.width)
            .map(|x| shade(escape_time(spec, spec.point_of(x, y)), spec.max_iter))
            .collect::<Vec<u8>>()
    });
    let mut image = GrayImage {
        width: spec.width,
        height: spec.height,
        pixels: rows.concat(),
    };
    for o in overlays {
        draw(&mut image, spec, o);
    }
    Ok(image)
}

fn draw(image: &mut GrayImage, spec: &RenderSpec, overlay: &Overlay) {
    let r = &spec.region;
    let pixel = ((r.re_max - r.re_min) / spec.width as f64).min((r.im_max - r.im_min) / spec.height as f64);
    for w in overlay.points.windows(2) {
        let steps = ((w[1] - w[0]).norm() / (0.5 * pixel)).ceil().clamp(1.0, 1e6) as usize;
        for i in 0..=steps {
            let z = w[0] + (w[1] - w[0]) * (i as f64 / steps as f64);
            if let Some((x, y)) = spec.pixel_of(z) {
                image.pixels[y * spec.width + x] = overlay.shade;
            }
        }
    }
}
