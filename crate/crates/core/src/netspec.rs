//! Deterministic network description and exact trainable-parameter count.
//!
//! The backbone is fixed: a pointwise projection to `C0` channels, three
//! bi-branch 1-D convolution layers (short and long kernels share channel
//! widths), a branch fusion operator, flattening over the aligned length and
//! a single linear head. Convolutions use stride 1 and `(k-1)/2` padding, so
//! the temporal length stays `L_p` throughout.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::space::{Candidate, DecodedConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    BatchNorm,
    LayerNorm,
    InstanceNorm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fusion {
    Concat,
    Add,
    Weighting(CombineMode),
    Gating,
    Attention,
    CrossMapping(CrossMode),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineMode {
    Add,
    Concat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossMode {
    Add,
    Concat,
    Gated,
}

impl Fusion {
    /// Channel width of the fused sequence for branch width `cf`.
    pub fn output_channels(self, cf: u64) -> u64 {
        match self {
            Fusion::Concat | Fusion::Weighting(CombineMode::Concat) | Fusion::CrossMapping(CrossMode::Concat) => 2 * cf,
            _ => cf,
        }
    }

    /// Trainable parameters owned by the fusion module.
    pub fn params(self, cf: u64) -> u64 {
        match self {
            Fusion::Concat | Fusion::Add => 0,
            // w over the pooled concatenation, no bias
            Fusion::Weighting(_) => 2 * cf,
            // W_g: 2C -> C with bias b_g
            Fusion::Gating => 2 * cf * cf + cf,
            // W_Q, W_K, W_V, no bias and no output projection
            Fusion::Attention => 3 * cf * cf,
            Fusion::CrossMapping(mode) => {
                let maps = 2 * (cf * cf + cf);
                match mode {
                    CrossMode::Gated => maps + 2 * cf * cf + cf,
                    _ => maps,
                }
            }
        }
    }
}

/// One entry of the per-layer parameter breakdown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerParams {
    pub name: String,
    /// Shapes of the trainable tensors of this layer.
    pub tensors: Vec<Vec<u64>>,
    pub count: u64,
}

impl LayerParams {
    fn new(name: impl Into<String>, tensors: Vec<Vec<u64>>) -> Self {
        let count = tensors.iter().map(|t| t.iter().product::<u64>()).sum();
        Self {
            name: name.into(),
            tensors,
            count,
        }
    }
}

/// Recorded but parameter-free settings carried along for export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordedSettings {
    pub activation: Option<String>,
    pub dropout: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub aligned_length: u64,
    pub input_channels: u64,
    pub projection_channels: u64,
    pub channels: [u64; 3],
    pub short_kernels: [u64; 3],
    pub long_kernels: [u64; 3],
    pub norm: NormKind,
    pub fusion: Fusion,
    pub targets: u64,
    pub settings: RecordedSettings,
    pub layers: Vec<LayerParams>,
    pub total_params: u64,
}

impl NetworkSpec {
    pub fn fused_channels(&self) -> u64 {
        self.fusion.output_channels(self.channels[2])
    }

    /// Width of the flattened head input, `L_p * C_out`.
    pub fn head_inputs(&self) -> u64 {
        self.aligned_length * self.fused_channels()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("network spec serializes")
    }
}

/// Padding that keeps the sequence length for an odd kernel.
pub fn same_padding(kernel: u64) -> u64 {
    (kernel - 1) / 2
}

/// Sine/cosine embedding of periodic time indices `(tau, period)`.
pub fn time_embedding<T: Scalar>(components: &[(T, T)]) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(2 * components.len());
    for &(tau, period) in components {
        if !(period > T::zero()) || tau < T::zero() || tau > period - T::one() {
            return Err(invalid(format!("time index {tau} outside [0, {period} - 1]")));
        }
        let phase = T::lit(2.0) * T::PI() * tau / period;
        out.push(phase.sin());
        out.push(phase.cos());
    }
    Ok(out)
}

/// Input channel count after concatenating aligned sources and broadcasting
/// a `k_t`-component time embedding.
pub fn input_channels(source_channels: &[u64], k_t: u64) -> u64 {
    source_channels.iter().sum::<u64>() + 2 * k_t
}

fn required<'a>(d: &'a DecodedConfig, name: &str) -> Result<&'a Candidate> {
    d.get(name)
        .and_then(|v| v.candidate())
        .ok_or_else(|| Error::Decode(format!("missing active variable {name}")))
}

fn int(d: &DecodedConfig, name: &str) -> Result<u64> {
    required(d, name)?
        .as_usize()
        .map(|v| v as u64)
        .ok_or_else(|| Error::Decode(format!("{name} is not an integer")))
}

fn triple(d: &DecodedConfig, name: &str) -> Result<[u64; 3]> {
    let items = required(d, name)?
        .as_tuple()
        .ok_or_else(|| Error::Decode(format!("{name} is not a tuple")))?;
    let ks: Vec<u64> = items.iter().filter_map(|c| c.as_usize().map(|v| v as u64)).collect();
    match ks[..] {
        [a, b, c] if items.len() == 3 => {
            if ks.iter().any(|k| k % 2 == 0) {
                return Err(Error::Decode(format!("{name} has an even kernel")));
            }
            Ok([a, b, c])
        }
        _ => Err(Error::Decode(format!("{name} is not a kernel triple"))),
    }
}

fn symbol<'a>(d: &'a DecodedConfig, name: &str) -> Result<&'a str> {
    required(d, name)?
        .as_symbol()
        .ok_or_else(|| Error::Decode(format!("{name} is not symbolic")))
}

fn parse_norm(s: &str) -> Result<NormKind> {
    match s {
        "BatchNorm" => Ok(NormKind::BatchNorm),
        "LayerNorm" => Ok(NormKind::LayerNorm),
        "InstanceNorm" => Ok(NormKind::InstanceNorm),
        other => Err(Error::Decode(format!("unknown normalization {other}"))),
    }
}

fn parse_fusion(d: &DecodedConfig) -> Result<Fusion> {
    Ok(match symbol(d, "fusion")? {
        "concat" => Fusion::Concat,
        "add" => Fusion::Add,
        "gating" => Fusion::Gating,
        "attention" => Fusion::Attention,
        "weighting" => Fusion::Weighting(match symbol(d, "weighting_mode")? {
            "add" => CombineMode::Add,
            "concat" => CombineMode::Concat,
            other => return Err(Error::Decode(format!("unknown weighting mode {other}"))),
        }),
        "cross_mapping" => Fusion::CrossMapping(match symbol(d, "cross_mapping_mode")? {
            "add" => CrossMode::Add,
            "concat" => CrossMode::Concat,
            "gated" => CrossMode::Gated,
            other => return Err(Error::Decode(format!("unknown cross-mapping mode {other}"))),
        }),
        other => return Err(Error::Decode(format!("unknown fusion {other}"))),
    })
}

/// Instantiates the network description for a decoded configuration of the
/// built-in space, with `c_in` input channels and `targets` outputs.
pub fn build_graph(d: &DecodedConfig, c_in: u64, targets: u64) -> Result<NetworkSpec> {
    let aligned_length = int(d, "aligned_length")?;
    let c0 = int(d, "projection_channels")?;
    let channels = [
        int(d, "conv1_channels")?,
        int(d, "conv2_channels")?,
        int(d, "conv3_channels")?,
    ];
    let short_kernels = triple(d, "short_kernels")?;
    let long_kernels = triple(d, "long_kernels")?;
    let norm = parse_norm(symbol(d, "normalization")?)?;
    let fusion = parse_fusion(d)?;
    let settings = RecordedSettings {
        activation: d.get("activation").and_then(|v| v.candidate()).map(|c| c.to_string()),
        dropout: d.get("dropout").and_then(|v| v.as_f64()),
    };

    let mut layers = vec![LayerParams::new("projection", vec![vec![c0, c_in], vec![c0]])];
    for (branch, kernels) in [("short", short_kernels), ("long", long_kernels)] {
        let mut prev = c0;
        for (i, (&c, &k)) in channels.iter().zip(&kernels).enumerate() {
            layers.push(LayerParams::new(
                format!("{branch}.conv{}", i + 1),
                vec![vec![c, prev, k], vec![c]],
            ));
            layers.push(LayerParams::new(
                format!("{branch}.norm{}", i + 1),
                vec![vec![c], vec![c]],
            ));
            prev = c;
        }
    }
    let cf = channels[2];
    let fusion_tensors: Vec<Vec<u64>> = match fusion {
        Fusion::Concat | Fusion::Add => vec![],
        Fusion::Weighting(_) => vec![vec![2 * cf]],
        Fusion::Gating => vec![vec![cf, 2 * cf], vec![cf]],
        Fusion::Attention => vec![vec![cf, cf]; 3],
        Fusion::CrossMapping(mode) => {
            let mut t = vec![vec![cf, cf], vec![cf], vec![cf, cf], vec![cf]];
            if mode == CrossMode::Gated {
                t.push(vec![cf, 2 * cf]);
                t.push(vec![cf]);
            }
            t
        }
    };
    layers.push(LayerParams::new("fusion", fusion_tensors));
    let flat = aligned_length * fusion.output_channels(cf);
    layers.push(LayerParams::new("head", vec![vec![targets, flat], vec![targets]]));

    let total_params = layers.iter().map(|l| l.count).sum();
    Ok(NetworkSpec {
        aligned_length,
        input_channels: c_in,
        projection_channels: c0,
        channels,
        short_kernels,
        long_kernels,
        norm,
        fusion,
        targets,
        settings,
        layers,
        total_params,
    })
}

/// Exact trainable-parameter count, computed in closed form from the
/// architectural fields. Parameter-free operators contribute nothing.
pub fn count_params(spec: &NetworkSpec) -> u64 {
    let c0 = spec.projection_channels;
    let projection = spec.input_channels * c0 + c0;
    let mut backbone = 0;
    for kernels in [spec.short_kernels, spec.long_kernels] {
        let mut prev = c0;
        for (&c, &k) in spec.channels.iter().zip(&kernels) {
            // conv weight + bias, then the norm's affine scale and shift
            backbone += prev * c * k + c + 2 * c;
            prev = c;
        }
    }
    let fusion = spec.fusion.params(spec.channels[2]);
    let head = spec.targets * spec.head_inputs() + spec.targets;
    projection + backbone + fusion + head
}
