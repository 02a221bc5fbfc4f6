//! Binary netpbm raster I/O: PGM (P5, grayscale) and PPM (P6, RGB), 8-bit.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// 8-bit raster image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Pixels,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pixels {
    Gray(Vec<u8>),
    Rgb(Vec<u8>),
}

impl RasterImage {
    pub fn new_gray(width: usize, height: usize, data: Vec<u8>) -> Result<RasterImage> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "gray image dimensions {width}x{height} do not match {} bytes",
                data.len()
            )));
        }
        Ok(RasterImage {
            width,
            height,
            pixels: Pixels::Gray(data),
        })
    }

    pub fn new_rgb(width: usize, height: usize, data: Vec<u8>) -> Result<RasterImage> {
        if width == 0 || height == 0 || data.len() != 3 * width * height {
            return Err(Error::InvalidInput(format!(
                "rgb image dimensions {width}x{height} do not match {} bytes",
                data.len()
            )));
        }
        Ok(RasterImage {
            width,
            height,
            pixels: Pixels::Rgb(data),
        })
    }

    pub fn channels(&self) -> usize {
        match self.pixels {
            Pixels::Gray(_) => 1,
            Pixels::Rgb(_) => 3,
        }
    }

    pub fn data(&self) -> &[u8] {
        match &self.pixels {
            Pixels::Gray(d) => d,
            Pixels::Rgb(d) => d,
        }
    }
}

/// Reads a binary PGM (P5) or PPM (P6) image with maxval 255.
pub fn read_netpbm<R: Read>(reader: &mut R) -> Result<RasterImage> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;

    let mut pos = 0usize;
    let magic = read_token(&bytes, &mut pos)?;
    let channels = match magic.as_str() {
        "P5" => 1,
        "P6" => 3,
        other => {
            return Err(Error::Parse {
                line: 1,
                message: format!("unsupported netpbm magic {other:?} (expected P5 or P6)"),
            })
        }
    };
    let width = parse_dim(&bytes, &mut pos, "width")?;
    let height = parse_dim(&bytes, &mut pos, "height")?;
    let maxval = parse_dim(&bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(Error::Parse {
            line: 1,
            message: format!("only maxval 255 is supported, got {maxval}"),
        });
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let n = width * height * channels;
    if bytes.len() < pos + n {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "truncated raster: expected {n} bytes, found {}",
                bytes.len().saturating_sub(pos)
            ),
        });
    }
    let data = bytes[pos..pos + n].to_vec();
    if channels == 1 {
        RasterImage::new_gray(width, height, data)
    } else {
        RasterImage::new_rgb(width, height, data)
    }
}

pub fn read_netpbm_file(path: &std::path::Path) -> Result<RasterImage> {
    read_netpbm(&mut std::fs::File::open(path)?)
}

/// Writes the image as binary PGM (P5) or PPM (P6) depending on its channels.
pub fn write_netpbm<W: Write>(img: &RasterImage, writer: &mut W) -> Result<()> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    write!(writer, "{magic}\n{} {}\n255\n", img.width, img.height)?;
    writer.write_all(img.data())?;
    Ok(())
}

pub fn write_netpbm_file(img: &RasterImage, path: &std::path::Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_netpbm(img, &mut w)?;
    use std::io::Write as _;
    w.flush()?;
    Ok(())
}

/// Next whitespace-delimited header token, skipping `#` comments.
fn read_token(bytes: &[u8], pos: &mut usize) -> Result<String> {
    while *pos < bytes.len() {
        let b = bytes[*pos];
        if b == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else if b.is_ascii_whitespace() {
            *pos += 1;
        } else {
            break;
        }
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected end of netpbm header".into(),
        });
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn parse_dim(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let tok = read_token(bytes, pos)?;
    tok.parse().map_err(|_| Error::Parse {
        line: 1,
        message: format!("invalid {what} {tok:?} in netpbm header"),
    })
}
