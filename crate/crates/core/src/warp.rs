//! Raster warping by backward mapping.
//!
//! The reverse transformation (target landmarks as fit sources) maps each
//! output pixel back into the input image, which is then sampled bilinearly.
//! Samples outside the input bounds produce a configurable fill value.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::netpbm::{Pixels, RasterImage};
use crate::kernels::Kernel;
use crate::registration::{fit, LandmarkCorrespondence, Point2, Transformation};

/// Warps `img` so that the source landmarks land on the target landmarks.
/// Landmark coordinates are in pixel units and must lie inside the image.
pub fn warp_image(
    kernel: Kernel,
    lm: &LandmarkCorrespondence,
    img: &RasterImage,
    fill: u8,
) -> Result<RasterImage> {
    let w = img.width as f64 - 1.0;
    let h = img.height as f64 - 1.0;
    for p in lm.source().iter().chain(lm.target().iter()) {
        if p.x < 0.0 || p.y < 0.0 || p.x > w || p.y > h {
            return Err(Error::InvalidInput(format!(
                "landmark ({}, {}) outside image bounds {}x{}",
                p.x, p.y, img.width, img.height
            )));
        }
    }
    let backward = fit(kernel, &lm.reversed()?)?;
    Ok(apply_backward(&backward, img, fill))
}

/// Applies an already-fitted backward map. Output rows are independent, so
/// they are computed in parallel.
pub fn apply_backward(backward: &Transformation, img: &RasterImage, fill: u8) -> RasterImage {
    let channels = img.channels();
    let rows: Vec<Vec<u8>> = (0..img.height)
        .into_par_iter()
        .map(|row| {
            let mut out = Vec::with_capacity(img.width * channels);
            for col in 0..img.width {
                let src = backward.evaluate(Point2::new(col as f64, row as f64));
                for ch in 0..channels {
                    out.push(sample_bilinear(img, src.x, src.y, ch, fill));
                }
            }
            out
        })
        .collect();

    let data: Vec<u8> = rows.into_iter().flatten().collect();
    RasterImage {
        width: img.width,
        height: img.height,
        pixels: match img.pixels {
            Pixels::Gray(_) => Pixels::Gray(data),
            Pixels::Rgb(_) => Pixels::Rgb(data),
        },
    }
}

/// Bilinear sample of one channel at fractional pixel coordinates; `fill`
/// outside `[0, w-1] x [0, h-1]`.
fn sample_bilinear(img: &RasterImage, x: f64, y: f64, channel: usize, fill: u8) -> u8 {
    let w = img.width;
    let h = img.height;
    if x < 0.0 || y < 0.0 || x > (w - 1) as f64 || y > (h - 1) as f64 {
        return fill;
    }
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;

    let ch = img.channels();
    let at = |col: usize, row: usize| img.data()[(row * w + col) * ch + channel] as f64;
    let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
    let bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
    (top * (1.0 - fy) + bottom * fy).round().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::netpbm::RasterImage;
    use crate::kernels::KernelFamily;

    fn gradient_image(w: usize, h: usize) -> RasterImage {
        let data = (0..w * h).map(|i| (i * 7 % 256) as u8).collect();
        RasterImage::new_gray(w, h, data).unwrap()
    }

    #[test]
    fn identity_correspondence_is_byte_identical() {
        let img = gradient_image(16, 12);
        let pts = vec![Point2::new(4.0, 4.0), Point2::new(10.0, 8.0)];
        let lm = LandmarkCorrespondence::new(pts.clone(), pts).unwrap();
        let k = Kernel::new(KernelFamily::GNEITING_SEVEN_HALVES, 5.0).unwrap();
        let out = warp_image(k, &lm, &img, 0).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn regions_outside_support_are_untouched() {
        let img = gradient_image(32, 32);
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(8.0, 8.0)], vec![Point2::new(9.0, 9.0)])
                .unwrap();
        let k = Kernel::new(KernelFamily::Wendland31, 4.0).unwrap();
        let out = warp_image(k, &lm, &img, 0).unwrap();
        // pixels further than c from the (target) landmark are copied verbatim
        for row in 0..32usize {
            for col in 0..32usize {
                let d = Point2::new(col as f64, row as f64).dist(Point2::new(9.0, 9.0));
                if d >= 4.0 {
                    assert_eq!(out.data()[row * 32 + col], img.data()[row * 32 + col]);
                }
            }
        }
    }

    #[test]
    fn constant_image_stays_constant_in_bounds() {
        let img = RasterImage::new_gray(24, 24, vec![137; 24 * 24]).unwrap();
        let lm = LandmarkCorrespondence::new(
            vec![Point2::new(12.0, 12.0)],
            vec![Point2::new(13.0, 14.0)],
        )
        .unwrap();
        let k = Kernel::new(KernelFamily::Wu12, 8.0).unwrap();
        let out = warp_image(k, &lm, &img, 0).unwrap();
        // the deformation keeps all samples interior here, so every output
        // pixel must be the constant
        assert!(out.data().iter().all(|&v| v == 137));
    }

    #[test]
    fn rejects_out_of_bounds_landmarks() {
        let img = gradient_image(8, 8);
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(20.0, 2.0)], vec![Point2::new(21.0, 2.0)])
                .unwrap();
        let k = Kernel::new(KernelFamily::Wendland31, 2.0).unwrap();
        assert!(warp_image(k, &lm, &img, 0).is_err());
    }
}
