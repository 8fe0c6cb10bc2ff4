//! Versioned binary checkpoint: config header, vocabulary string tables,
//! then named parameter tensors (shape, precision, row-major payload),
//! little-endian throughout.

use std::io::{Read, Write};
use std::path::Path;

use super::math::Mat;
use super::vocab::Vocab;
use super::{Model, ModelConfig, ModelError, Precision};

const MAGIC: &[u8; 8] = b"CTXRECV1";
const VERSION: u32 = 1;

pub fn save(model: &Model, path: &Path) -> Result<(), ModelError> {
    let io_err = |e: std::io::Error| ModelError::Io { path: path.display().to_string(), source: e };
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    write_config(&mut buf, &model.cfg);
    write_strings(&mut buf, model.labels.names());
    write_strings(&mut buf, model.classes.names());
    write_strings(&mut buf, model.tokens.names());

    let mut tensors: Vec<(String, &Mat)> = Vec::new();
    model.params.for_each(|name, m| tensors.push((name.to_string(), m)));
    buf.extend_from_slice(&(tensors.len() as u64).to_le_bytes());
    let width = model.cfg.precision.width();
    for (name, m) in tensors {
        write_str(&mut buf, &name);
        buf.extend_from_slice(&(m.rows as u64).to_le_bytes());
        buf.extend_from_slice(&(m.cols as u64).to_le_bytes());
        buf.push(width);
        match model.cfg.precision {
            Precision::F64 => {
                for v in &m.data {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
            Precision::F32 => {
                for v in &m.data {
                    buf.extend_from_slice(&(*v as f32).to_le_bytes());
                }
            }
        }
    }
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    f.write_all(&buf).map_err(io_err)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Model, ModelError> {
    let io_err = |e: std::io::Error| ModelError::Io { path: path.display().to_string(), source: e };
    let mut bytes = Vec::new();
    std::fs::File::open(path).map_err(io_err)?.read_to_end(&mut bytes).map_err(io_err)?;
    let mut r = Reader { bytes: &bytes, pos: 0 };

    let magic = r.take(8)?;
    if magic != MAGIC {
        return Err(ModelError::Checkpoint("bad magic; not a model checkpoint".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(ModelError::Checkpoint(format!("unsupported checkpoint version {version}")));
    }
    let cfg = read_config(&mut r)?;
    let labels = Vocab::from_names(r.strings()?);
    let classes = Vocab::from_names(r.strings()?);
    let tokens = Vocab::from_names(r.strings()?);

    let mut model = Model::new(cfg, labels, classes, tokens)?;
    let count = r.u64()? as usize;
    let mut loaded: std::collections::HashMap<String, Mat> = std::collections::HashMap::new();
    for _ in 0..count {
        let name = r.string()?;
        let rows = r.u64()? as usize;
        let cols = r.u64()? as usize;
        let width = r.u8()?;
        let precision = Precision::from_width(width)
            .ok_or_else(|| ModelError::Checkpoint(format!("bad tensor width {width}")))?;
        let len = rows * cols;
        let mut data = Vec::with_capacity(len);
        match precision {
            Precision::F64 => {
                let raw = r.take(len * 8)?;
                for chunk in raw.chunks_exact(8) {
                    data.push(f64::from_le_bytes(chunk.try_into().unwrap()));
                }
            }
            Precision::F32 => {
                let raw = r.take(len * 4)?;
                for chunk in raw.chunks_exact(4) {
                    data.push(f32::from_le_bytes(chunk.try_into().unwrap()) as f64);
                }
            }
        }
        loaded.insert(name, Mat { rows, cols, data });
    }
    let mut missing = Vec::new();
    model.params.for_each_mut(|name, m| match loaded.remove(name) {
        Some(t) if t.rows == m.rows && t.cols == m.cols => *m = t,
        Some(t) => missing.push(format!(
            "tensor {name} has shape {}x{}, expected {}x{}",
            t.rows, t.cols, m.rows, m.cols
        )),
        None => missing.push(format!("tensor {name} missing")),
    });
    if !missing.is_empty() {
        return Err(ModelError::Checkpoint(missing.join("; ")));
    }
    if !loaded.is_empty() {
        let extra: Vec<String> = loaded.into_keys().collect();
        return Err(ModelError::Checkpoint(format!("unexpected tensors: {}", extra.join(", "))));
    }
    Ok(model)
}

/// Error when the checkpoint's structural config disagrees with `expect`.
pub fn check_compatible(model: &Model, expect: &ModelConfig) -> Result<(), ModelError> {
    let c = &model.cfg;
    let mut diffs = Vec::new();
    if c.embedding_size != expect.embedding_size {
        diffs.push(format!(
            "embedding_size {} vs {}",
            c.embedding_size, expect.embedding_size
        ));
    }
    if c.hidden_layers != expect.hidden_layers {
        diffs.push(format!("hidden_layers {} vs {}", c.hidden_layers, expect.hidden_layers));
    }
    if c.hidden_size != expect.hidden_size {
        diffs.push(format!("hidden_size {} vs {}", c.hidden_size, expect.hidden_size));
    }
    if c.propagation_steps != expect.propagation_steps {
        diffs.push(format!(
            "propagation_steps {} vs {}",
            c.propagation_steps, expect.propagation_steps
        ));
    }
    if c.structure_only != expect.structure_only {
        diffs.push(format!("structure_only {} vs {}", c.structure_only, expect.structure_only));
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(ModelError::CheckpointMismatch(diffs.join("; ")))
    }
}

fn write_config(buf: &mut Vec<u8>, cfg: &ModelConfig) {
    for v in [
        cfg.embedding_size as u64,
        cfg.hidden_layers as u64,
        cfg.hidden_size as u64,
        cfg.batch_size as u64,
        cfg.propagation_steps as u64,
        cfg.patience as u64,
        cfg.min_class_freq as u64,
        cfg.max_epochs as u64,
        cfg.seed,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&cfg.keep_prob.to_le_bytes());
    buf.extend_from_slice(&cfg.learning_rate.to_le_bytes());
    buf.push(cfg.precision.width());
    buf.push(cfg.structure_only as u8);
}

fn read_config(r: &mut Reader) -> Result<ModelConfig, ModelError> {
    let embedding_size = r.u64()? as usize;
    let hidden_layers = r.u64()? as usize;
    let hidden_size = r.u64()? as usize;
    let batch_size = r.u64()? as usize;
    let propagation_steps = r.u64()? as usize;
    let patience = r.u64()? as usize;
    let min_class_freq = r.u64()? as usize;
    let max_epochs = r.u64()? as usize;
    let seed = r.u64()?;
    let keep_prob = r.f64()?;
    let learning_rate = r.f64()?;
    let width = r.u8()?;
    let precision = Precision::from_width(width)
        .ok_or_else(|| ModelError::Checkpoint(format!("bad precision width {width}")))?;
    let structure_only = r.u8()? != 0;
    Ok(ModelConfig {
        embedding_size,
        hidden_layers,
        hidden_size,
        keep_prob,
        learning_rate,
        batch_size,
        propagation_steps,
        patience,
        min_class_freq,
        max_epochs,
        seed,
        precision,
        structure_only,
    })
}

fn write_strings(buf: &mut Vec<u8>, strings: &[String]) {
    buf.extend_from_slice(&(strings.len() as u64).to_le_bytes());
    for s in strings {
        write_str(buf, s);
    }
}

fn write_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u64).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelError> {
        if self.pos + n > self.bytes.len() {
            return Err(ModelError::Checkpoint("truncated checkpoint".into()));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, ModelError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, ModelError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, ModelError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, ModelError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, ModelError> {
        let len = self.u64()? as usize;
        let raw = self.take(len)?;
        String::from_utf8(raw.to_vec())
            .map_err(|_| ModelError::Checkpoint("invalid utf-8 in string table".into()))
    }

    fn strings(&mut self) -> Result<Vec<String>, ModelError> {
        let count = self.u64()? as usize;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.string()?);
        }
        Ok(out)
    }
}
