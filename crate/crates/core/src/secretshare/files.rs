//! Binary P6 pixmaps and share files.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::MaskerId;
use crate::error::{Error, Result};

/// 8-bit RGB raster, row-major from the top-left corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() as u64 != width as u64 * height as u64 {
            return Err(Error::ImageFormat(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[(y * self.width + x) as usize]
    }
}

fn next_token<R: Read>(r: &mut R) -> Result<String> {
    let mut tok = String::new();
    let mut byte = [0u8; 1];
    loop {
        if r.read(&mut byte)? == 0 {
            return Err(Error::ImageFormat("truncated header".into()));
        }
        match byte[0] {
            b'#' if tok.is_empty() => {
                while byte[0] != b'\n' {
                    if r.read(&mut byte)? == 0 {
                        return Err(Error::ImageFormat("truncated header".into()));
                    }
                }
            }
            c if c.is_ascii_whitespace() => {
                if !tok.is_empty() {
                    return Ok(tok);
                }
            }
            c => tok.push(c as char),
        }
    }
}

fn header_number<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let t = next_token(r)?;
    t.parse()
        .map_err(|_| Error::ImageFormat(format!("bad {what}: {t:?}")))
}

/// Reads a binary pixmap with maxval 255.
pub fn read_ppm<R: Read>(mut r: R) -> Result<RgbImage> {
    let magic = next_token(&mut r)?;
    if magic != "P6" {
        return Err(Error::ImageFormat(format!("expected P6, found {magic:?}")));
    }
    let width = header_number(&mut r, "width")?;
    let height = header_number(&mut r, "height")?;
    let maxval = header_number(&mut r, "maxval")?;
    if maxval != 255 {
        return Err(Error::ImageFormat(format!("maxval {maxval} unsupported")));
    }
    let n = width as usize * height as usize;
    let mut raw = vec![0u8; n * 3];
    r.read_exact(&mut raw)
        .map_err(|_| Error::ImageFormat("truncated pixel data".into()))?;
    let pixels = raw.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    RgbImage::new(width, height, pixels)
}

pub fn write_ppm<W: Write>(img: &RgbImage, mut w: W) -> Result<()> {
    write!(w, "P6\n{} {}\n255\n", img.width, img.height)?;
    let raw: Vec<u8> = img.pixels.iter().flatten().copied().collect();
    w.write_all(&raw)?;
    Ok(())
}

const SHARE_MAGIC: &[u8; 8] = b"MBSHARE1";
const HEADER_LEN: usize = 8 + 1 + 4 + 4;
const DIGEST_LEN: usize = 32;

/// Per-pixel population differences from one sharing masker.
///
/// Binary layout, little-endian: magic `MBSHARE1`, masker id (u8: 1 = x,
/// 2 = y, 3 = z), width (u32), height (u32), `width·height` f64 values,
/// then the SHA-256 of everything before it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareFile {
    masker_id: MaskerId,
    width: u32,
    height: u32,
    w: Vec<f64>,
}

impl ShareFile {
    pub fn new(masker_id: MaskerId, width: u32, height: u32, w: Vec<f64>) -> Result<Self> {
        if w.len() as u64 != width as u64 * height as u64 {
            return Err(Error::ShareFormat(format!(
                "{} values for a {width}x{height} share",
                w.len()
            )));
        }
        Ok(Self {
            masker_id,
            width,
            height,
            w,
        })
    }

    pub fn masker_id(&self) -> MaskerId {
        self.masker_id
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.w.len() + DIGEST_LEN);
        out.extend_from_slice(SHARE_MAGIC);
        out.push(self.masker_id.to_byte());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        for v in &self.w {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(digest.as_slice());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN + DIGEST_LEN || &bytes[..8] != SHARE_MAGIC {
            return Err(Error::ShareFormat("missing share header".into()));
        }
        let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
        if Sha256::digest(body).as_slice() != digest {
            return Err(Error::ShareFormat("checksum mismatch".into()));
        }
        let masker_id = MaskerId::from_byte(body[8])?;
        let width = u32::from_le_bytes(body[9..13].try_into().expect("4 bytes"));
        let height = u32::from_le_bytes(body[13..17].try_into().expect("4 bytes"));
        let data = &body[HEADER_LEN..];
        if data.len() as u64 != 8 * width as u64 * height as u64 {
            return Err(Error::ShareFormat(format!(
                "{} data bytes for a {width}x{height} share",
                data.len()
            )));
        }
        let w = data
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Self::new(masker_id, width, height, w)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }
}
