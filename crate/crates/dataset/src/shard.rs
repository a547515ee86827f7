//! Shard files: a `DWPY` magic, a JSON header blob carrying the generating
//! spec, the frame constants and the field dimensions, then fixed-width
//! little-endian f32 records and a trailing CRC32 over the record region.
//! Fixed-width records give random access by index, so training shuffles
//! indices and streams batches from disk.

use crate::{DatasetError, Result};
use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_core::Cx;
use axphy_frame::Mcs;
use axphy_neural::{FeatureVector, TrainExample};
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 4] = b"DWPY";
pub const VERSION: u32 = 1;

const LLTF_N: usize = 104;
const HELTF_N: usize = 484;
const PILOT_N: usize = 16;
const DATA_N: usize = 234;
/// f32 payload per record.
const F32_COUNT: usize = LLTF_N + HELTF_N + 2 * PILOT_N + 4 * DATA_N;
/// packet_id + symbol_index + model + type + mcs + snr + rx_power + sigma2.
const PREFIX_BYTES: usize = 8 + 2 + 1 + 1 + 1 + 4 + 4 + 4;
pub const RECORD_BYTES: usize = PREFIX_BYTES + 4 * F32_COUNT;

/// One training example as stored: provenance plus features and labels.
#[derive(Debug, Clone)]
pub struct SymbolRecord {
    pub packet_id: u64,
    pub symbol_index: u16,
    pub model: ChannelModelId,
    pub imp_type: ImpairmentType,
    pub mcs: Mcs,
    pub snr_db: f64,
    /// Mean received sample power of the packet (before normalization).
    pub rx_power: f64,
    /// Applied noise variance.
    pub sigma2: f64,
    pub features: FeatureVector,
    pub labels: Vec<Cx>,
}

impl SymbolRecord {
    pub fn to_train_example(&self) -> TrainExample {
        TrainExample {
            features: self.features.clone(),
            labels: self.labels.clone(),
        }
    }

    fn write_to(&self, buf: &mut Vec<u8>) {
        buf.extend_from_slice(&self.packet_id.to_le_bytes());
        buf.extend_from_slice(&self.symbol_index.to_le_bytes());
        buf.push(self.model.index());
        buf.push(self.imp_type.index());
        buf.push(self.mcs.index());
        buf.extend_from_slice(&(self.snr_db as f32).to_le_bytes());
        buf.extend_from_slice(&(self.rx_power as f32).to_le_bytes());
        buf.extend_from_slice(&(self.sigma2 as f32).to_le_bytes());
        let mut push = |v: f64| buf.extend_from_slice(&(v as f32).to_le_bytes());
        for &v in &self.features.rx_lltf {
            push(v);
        }
        for &v in &self.features.rx_heltf {
            push(v);
        }
        for &v in &self.features.tx_pilots {
            push(v);
        }
        for &v in &self.features.rx_pilots {
            push(v);
        }
        for c in &self.features.rx_data {
            push(c.re);
            push(c.im);
        }
        for c in &self.labels {
            push(c.re);
            push(c.im);
        }
    }

    fn read_from(bytes: &[u8], path: &Path) -> Result<Self> {
        if bytes.len() != RECORD_BYTES {
            return Err(DatasetError::format(path, "truncated record"));
        }
        let packet_id = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let symbol_index = u16::from_le_bytes(bytes[8..10].try_into().unwrap());
        let model = ChannelModelId::from_index(bytes[10])
            .ok_or_else(|| DatasetError::format(path, "bad channel model id"))?;
        let imp_type = ImpairmentType::from_index(bytes[11])
            .ok_or_else(|| DatasetError::format(path, "bad impairment type id"))?;
        let mcs = Mcs::from_index(bytes[12])
            .ok_or_else(|| DatasetError::format(path, "bad mcs id"))?;
        let f32_at = |i: usize| -> f64 {
            let off = 13 + 4 * i;
            f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as f64
        };
        let snr_db = f32_at(0);
        let rx_power = f32_at(1);
        let sigma2 = f32_at(2);
        let mut idx = 3;
        let mut take = |n: usize| -> Vec<f64> {
            let v = (0..n).map(|i| f32_at(idx + i)).collect();
            idx += n;
            v
        };
        let rx_lltf = take(LLTF_N);
        let rx_heltf = take(HELTF_N);
        let tx_pilots = take(PILOT_N);
        let rx_pilots = take(PILOT_N);
        let data_raw = take(2 * DATA_N);
        let label_raw = take(2 * DATA_N);
        let rx_data = data_raw.chunks(2).map(|c| Cx::new(c[0], c[1])).collect();
        let labels = label_raw.chunks(2).map(|c| Cx::new(c[0], c[1])).collect();
        Ok(Self {
            packet_id,
            symbol_index,
            model,
            imp_type,
            mcs,
            snr_db,
            rx_power,
            sigma2,
            features: FeatureVector {
                rx_lltf,
                rx_heltf,
                rx_pilots,
                tx_pilots,
                rx_data,
            },
            labels,
        })
    }
}

pub struct ShardWriter {
    file: BufWriter<std::fs::File>,
    path: PathBuf,
    hasher: crc32fast::Hasher,
    written: u64,
    declared: u64,
}

impl ShardWriter {
    pub fn create(path: &Path, header_json: &serde_json::Value, record_count: u64) -> Result<Self> {
        let f = std::fs::File::create(path).map_err(|e| DatasetError::io(path, e))?;
        let mut file = BufWriter::new(f);
        let header = serde_json::to_vec(header_json)
            .map_err(|e| DatasetError::format(path, e.to_string()))?;
        let io = |e| DatasetError::io(path, e);
        file.write_all(MAGIC).map_err(io)?;
        file.write_all(&VERSION.to_le_bytes()).map_err(io)?;
        file.write_all(&(header.len() as u32).to_le_bytes()).map_err(io)?;
        file.write_all(&header).map_err(io)?;
        file.write_all(&record_count.to_le_bytes()).map_err(io)?;
        file.write_all(&(RECORD_BYTES as u32).to_le_bytes()).map_err(io)?;
        Ok(Self {
            file,
            path: path.to_path_buf(),
            hasher: crc32fast::Hasher::new(),
            written: 0,
            declared: record_count,
        })
    }

    pub fn push(&mut self, record: &SymbolRecord) -> Result<()> {
        let mut buf = Vec::with_capacity(RECORD_BYTES);
        record.write_to(&mut buf);
        debug_assert_eq!(buf.len(), RECORD_BYTES);
        self.hasher.update(&buf);
        self.file
            .write_all(&buf)
            .map_err(|e| DatasetError::io(&self.path, e))?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        if self.written != self.declared {
            return Err(DatasetError::format(
                &self.path,
                format!("wrote {} records, declared {}", self.written, self.declared),
            ));
        }
        let crc = self.hasher.finalize();
        self.file
            .write_all(&crc.to_le_bytes())
            .map_err(|e| DatasetError::io(&self.path, e))?;
        self.file
            .flush()
            .map_err(|e| DatasetError::io(&self.path, e))?;
        Ok(self.path)
    }
}

#[derive(Debug)]
pub struct ShardReader {
    file: BufReader<std::fs::File>,
    path: PathBuf,
    pub header: serde_json::Value,
    pub record_count: u64,
    records_start: u64,
}

impl ShardReader {
    /// Open and fully validate (magic, version, CRC over the records).
    pub fn open(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| DatasetError::io(path, e))?;
        let mut file = BufReader::new(f);
        let io = |e| DatasetError::io(path, e);
        let mut magic = [0u8; 4];
        file.read_exact(&mut magic).map_err(io)?;
        if &magic != MAGIC {
            return Err(DatasetError::format(path, "bad magic"));
        }
        let mut b4 = [0u8; 4];
        file.read_exact(&mut b4).map_err(io)?;
        if u32::from_le_bytes(b4) != VERSION {
            return Err(DatasetError::format(path, "unsupported version"));
        }
        file.read_exact(&mut b4).map_err(io)?;
        let hlen = u32::from_le_bytes(b4) as usize;
        let mut hbuf = vec![0u8; hlen];
        file.read_exact(&mut hbuf).map_err(io)?;
        let header: serde_json::Value = serde_json::from_slice(&hbuf)
            .map_err(|e| DatasetError::format(path, format!("header json: {e}")))?;
        let mut b8 = [0u8; 8];
        file.read_exact(&mut b8).map_err(io)?;
        let record_count = u64::from_le_bytes(b8);
        file.read_exact(&mut b4).map_err(io)?;
        if u32::from_le_bytes(b4) as usize != RECORD_BYTES {
            return Err(DatasetError::format(path, "record size mismatch"));
        }
        let records_start = file.stream_position().map_err(io)?;
        // CRC over the record region.
        let mut hasher = crc32fast::Hasher::new();
        let mut remaining = record_count * RECORD_BYTES as u64;
        let mut chunk = vec![0u8; 1 << 16];
        while remaining > 0 {
            let n = remaining.min(chunk.len() as u64) as usize;
            file.read_exact(&mut chunk[..n]).map_err(io)?;
            hasher.update(&chunk[..n]);
            remaining -= n as u64;
        }
        file.read_exact(&mut b4).map_err(io)?;
        if hasher.finalize() != u32::from_le_bytes(b4) {
            return Err(DatasetError::format(path, "CRC mismatch"));
        }
        Ok(Self {
            file,
            path: path.to_path_buf(),
            header,
            record_count,
            records_start,
        })
    }

    pub fn read(&mut self, index: u64) -> Result<SymbolRecord> {
        if index >= self.record_count {
            return Err(DatasetError::format(
                &self.path,
                format!("record {index} out of range {}", self.record_count),
            ));
        }
        let off = self.records_start + index * RECORD_BYTES as u64;
        self.file
            .seek(SeekFrom::Start(off))
            .map_err(|e| DatasetError::io(&self.path, e))?;
        let mut buf = vec![0u8; RECORD_BYTES];
        self.file
            .read_exact(&mut buf)
            .map_err(|e| DatasetError::io(&self.path, e))?;
        SymbolRecord::read_from(&buf, &self.path)
    }
}

/// Optional provenance filters for reads.
#[derive(Debug, Clone, Default)]
pub struct ReadFilter {
    pub snr_db: Option<f64>,
    pub models: Option<Vec<ChannelModelId>>,
    pub imp_types: Option<Vec<ImpairmentType>>,
}

impl ReadFilter {
    fn matches(&self, r: &SymbolRecord) -> bool {
        if let Some(s) = self.snr_db {
            let both_inf = s.is_infinite() && r.snr_db.is_infinite();
            if !both_inf && (r.snr_db - s).abs() > 1e-3 {
                return false;
            }
        }
        if let Some(ms) = &self.models {
            if !ms.contains(&r.model) {
                return false;
            }
        }
        if let Some(ts) = &self.imp_types {
            if !ts.contains(&r.imp_type) {
                return false;
            }
        }
        true
    }
}

/// A set of shards addressed by one global record index, usable as a
/// streaming training source.
#[derive(Debug)]
pub struct ShardSet {
    readers: Vec<ShardReader>,
    offsets: Vec<u64>,
    total: u64,
}

impl ShardSet {
    pub fn open(paths: &[PathBuf]) -> Result<Self> {
        let mut readers = Vec::with_capacity(paths.len());
        let mut offsets = Vec::with_capacity(paths.len());
        let mut total = 0u64;
        for p in paths {
            let r = ShardReader::open(p)?;
            offsets.push(total);
            total += r.record_count;
            readers.push(r);
        }
        Ok(Self {
            readers,
            offsets,
            total,
        })
    }

    pub fn record_count(&self) -> u64 {
        self.total
    }

    pub fn read(&mut self, global: u64) -> Result<SymbolRecord> {
        let shard = match self.offsets.binary_search(&global) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let local = global - self.offsets[shard];
        self.readers[shard].read(local)
    }

    /// Global indices of records matching the filter (full scan).
    pub fn filter_indices(&mut self, filter: &ReadFilter) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for g in 0..self.total {
            if filter.matches(&self.read(g)?) {
                out.push(g);
            }
        }
        Ok(out)
    }
}

/// Streamed training source over a subset of records in a ShardSet.
pub struct ShardSource {
    set: ShardSet,
    indices: Vec<u64>,
}

impl ShardSource {
    pub fn new(set: ShardSet, indices: Vec<u64>) -> Self {
        Self { set, indices }
    }

    pub fn all(mut set: ShardSet, filter: &ReadFilter) -> Result<Self> {
        let indices = set.filter_indices(filter)?;
        Ok(Self { set, indices })
    }
}

impl axphy_neural::BatchSource for ShardSource {
    fn len(&self) -> usize {
        self.indices.len()
    }

    fn fetch(&mut self, indices: &[usize]) -> axphy_neural::Result<Vec<TrainExample>> {
        indices
            .iter()
            .map(|&i| {
                self.set
                    .read(self.indices[i])
                    .map(|r| r.to_train_example())
                    .map_err(|e| {
                        axphy_neural::NeuralError::Bundle(format!("shard read: {e}"))
                    })
            })
            .collect()
    }
}
