//! Weight serialization: a small versioned binary with a dimension header
//! followed by row-major little-endian f64 parameter blocks (weights then
//! bias per layer). Hyperparameters travel in a JSON sidecar one level up.

use crate::net::{DenseNet, Layer};
use crate::{NnError, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"AXNN";
const VERSION: u32 = 1;

pub fn save_weights(net: &DenseNet, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(MAGIC)?;
    f.write_all(&VERSION.to_le_bytes())?;
    f.write_all(&(net.layers.len() as u32).to_le_bytes())?;
    f.write_all(&(net.input_dim() as u32).to_le_bytes())?;
    for l in &net.layers {
        f.write_all(&(l.out_dim as u32).to_le_bytes())?;
    }
    for l in &net.layers {
        for v in l.w.iter().chain(l.b.iter()) {
            f.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn load_weights(path: &Path) -> Result<DenseNet> {
    let bad = |reason: &str| NnError::BadWeightFile {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    f.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    let mut u32buf = [0u8; 4];
    f.read_exact(&mut u32buf)?;
    if u32::from_le_bytes(u32buf) != VERSION {
        return Err(bad("unsupported version"));
    }
    f.read_exact(&mut u32buf)?;
    let n_layers = u32::from_le_bytes(u32buf) as usize;
    if n_layers == 0 || n_layers > 64 {
        return Err(bad("implausible layer count"));
    }
    f.read_exact(&mut u32buf)?;
    let mut dims = vec![u32::from_le_bytes(u32buf) as usize];
    for _ in 0..n_layers {
        f.read_exact(&mut u32buf)?;
        dims.push(u32::from_le_bytes(u32buf) as usize);
    }
    let mut layers = Vec::with_capacity(n_layers);
    let mut f64buf = [0u8; 8];
    for d in dims.windows(2) {
        let (in_dim, out_dim) = (d[0], d[1]);
        let mut w = vec![0.0; in_dim * out_dim];
        for v in &mut w {
            f.read_exact(&mut f64buf)?;
            *v = f64::from_le_bytes(f64buf);
        }
        let mut b = vec![0.0; out_dim];
        for v in &mut b {
            f.read_exact(&mut f64buf)?;
            *v = f64::from_le_bytes(f64buf);
        }
        layers.push(Layer {
            w,
            b,
            in_dim,
            out_dim,
        });
    }
    Ok(DenseNet::from_layers(layers))
}
