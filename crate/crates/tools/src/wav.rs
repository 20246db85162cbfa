//! Multichannel WAV clips, 16-bit PCM or 32-bit float.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Result, ToolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavFormat {
    Pcm16,
    Float32,
}

/// Deinterleaved samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavClip {
    pub sample_rate: u32,
    pub channels: Vec<Vec<f64>>,
}

impl WavClip {
    pub fn new(sample_rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        if channels.is_empty() {
            return Err(ToolError::usage("a clip needs at least one channel"));
        }
        if channels.iter().any(|c| c.len() != channels[0].len()) {
            return Err(ToolError::usage("all channels must have equal length"));
        }
        Ok(Self {
            sample_rate,
            channels,
        })
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn frames(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = WavReader::open(path.as_ref())?;
        let spec = reader.spec();
        let count = spec.channels as usize;
        let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
            (SampleFormat::Int, 16) => reader
                .samples::<i16>()
                .map(|s| s.map(|v| f64::from(v) / 32768.0))
                .collect::<Result<_, _>>()?,
            (SampleFormat::Float, 32) => reader
                .samples::<f32>()
                .map(|s| s.map(f64::from))
                .collect::<Result<_, _>>()?,
            (fmt, bits) => {
                return Err(ToolError::usage(format!(
                    "unsupported wav sample format {fmt:?} with {bits} bits; need 16-bit PCM or 32-bit float"
                )))
            }
        };
        let mut channels = vec![Vec::with_capacity(interleaved.len() / count.max(1)); count];
        for frame in interleaved.chunks_exact(count) {
            for (c, v) in channels.iter_mut().zip(frame) {
                c.push(*v);
            }
        }
        Self::new(spec.sample_rate, channels)
    }

    pub fn write(&self, path: impl AsRef<Path>, format: WavFormat) -> Result<()> {
        let spec = WavSpec {
            channels: self.channels.len() as u16,
            sample_rate: self.sample_rate,
            bits_per_sample: match format {
                WavFormat::Pcm16 => 16,
                WavFormat::Float32 => 32,
            },
            sample_format: match format {
                WavFormat::Pcm16 => SampleFormat::Int,
                WavFormat::Float32 => SampleFormat::Float,
            },
        };
        let mut writer = WavWriter::create(path.as_ref(), spec)?;
        for i in 0..self.frames() {
            for c in &self.channels {
                let v = c[i].clamp(-1.0, 1.0);
                match format {
                    WavFormat::Pcm16 => writer.write_sample((v * 32767.0).round() as i16)?,
                    WavFormat::Float32 => writer.write_sample(v as f32)?,
                }
            }
        }
        writer.finalize()?;
        Ok(())
    }
}
