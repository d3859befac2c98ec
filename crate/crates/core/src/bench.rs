//! Hierarchical bi-objective DTLZ2/DTLZ7 benchmarks.
//!
//! The genome holds `z1` and `z2` (always active) followed by a binary gate
//! and a conditional continuous variable for every tail index `j = 3..n`.
//! Inactive tails project onto the variant's neutral value.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::metrics::{non_dominated, Point};
use crate::scalar::Scalar;
use crate::space::{Candidate, ConfigSpace, DecodedConfig, Scale, Value, VariableSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Hdtlz2,
    Hdtlz7,
}

impl Variant {
    /// Projection value for inactive tails; keeps the analytic front reachable.
    pub fn neutral(self) -> f64 {
        match self {
            Variant::Hdtlz2 => 0.5,
            Variant::Hdtlz7 => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Hdtlz2 => "hdtlz2",
            Variant::Hdtlz7 => "hdtlz7",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hdtlz2" => Ok(Variant::Hdtlz2),
            "hdtlz7" => Ok(Variant::Hdtlz7),
            other => Err(invalid(format!("unknown benchmark {other}; expected hdtlz2 or hdtlz7"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Chain,
    Tree,
}

impl Topology {
    /// Parent of tail index `j >= 3` (1-based).
    pub fn parent(self, j: usize) -> usize {
        match self {
            Topology::Chain => j - 1,
            Topology::Tree => (j - 3) / 2 + 2,
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Topology::Chain),
            "tree" => Ok(Topology::Tree),
            other => Err(invalid(format!("unknown topology {other}; expected chain or tree"))),
        }
    }
}

pub const DEFAULT_N: usize = 12;
pub const DEFAULT_GAMMA: f64 = 1.0;
/// Grid size of the reference fronts used for IGD.
pub const REFERENCE_POINTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HBenchProblem {
    pub variant: Variant,
    /// Number of continuous variables, at least 3.
    pub n: usize,
    pub topology: Topology,
    /// Coupling coefficient, non-negative.
    pub gamma: f64,
}

/// Continuous vector after projection plus the active tail indices (1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct Projection<T> {
    pub z: Vec<T>,
    pub active_tails: Vec<usize>,
}

impl HBenchProblem {
    pub fn new(variant: Variant, n: usize, topology: Topology, gamma: f64) -> Result<Self> {
        if n < 3 {
            return Err(invalid(format!("benchmark needs n >= 3, got {n}")));
        }
        if !(gamma >= 0.0) {
            return Err(invalid("coupling coefficient must be non-negative"));
        }
        Ok(Self {
            variant,
            n,
            topology,
            gamma,
        })
    }

    pub fn with_defaults(variant: Variant) -> Self {
        Self::new(variant, DEFAULT_N, Topology::Chain, DEFAULT_GAMMA).expect("defaults are valid")
    }

    /// Reference point for hypervolume.
    pub fn hv_reference(&self) -> Point<f64> {
        [1.1, 1.1]
    }

    /// Mixed genome: `z1, z2, gate3, z3, ..., gate_n, z_n`, `2n - 2` dims.
    pub fn space(&self) -> ConfigSpace {
        let mut vars = vec![
            VariableSpec::continuous(1, "z1", 0.0, 1.0, Scale::Linear),
            VariableSpec::continuous(2, "z2", 0.0, 1.0, Scale::Linear),
        ];
        for j in 3..=self.n {
            let gate = vars.len() + 1;
            let sym = |s: &str| Candidate::Symbol(s.to_string());
            vars.push(VariableSpec::discrete(
                gate,
                format!("gate{j}"),
                vec![sym("off"), sym("on")],
            ));
            vars.push(
                VariableSpec::continuous(gate + 1, format!("z{j}"), 0.0, 1.0, Scale::Linear)
                    .with_parent(gate, vec![sym("on")]),
            );
        }
        ConfigSpace::new(vars).expect("benchmark genome is well formed")
    }

    /// Space dimension holding continuous variable `j` (1-based).
    pub fn dim_of(j: usize) -> usize {
        if j <= 2 {
            j - 1
        } else {
            2 * j - 3
        }
    }

    /// Projects a decoded benchmark configuration onto `[0,1]^n`.
    pub fn project(&self, d: &DecodedConfig) -> Result<Projection<f64>> {
        let mut z = vec![self.variant.neutral(); self.n];
        let mut active_tails = Vec::new();
        for (j, zj) in z.iter_mut().enumerate().map(|(i, v)| (i + 1, v)) {
            match d.value(Self::dim_of(j)) {
                Some(Value::Real { value, .. }) => {
                    *zj = *value;
                    if j >= 3 {
                        active_tails.push(j);
                    }
                }
                Some(_) => return Err(invalid(format!("z{j} is not continuous"))),
                None if j <= 2 => return Err(invalid(format!("z{j} must always be active"))),
                None => {}
            }
        }
        Ok(Projection { z, active_tails })
    }

    /// `γ` times the mean squared parent gap over the active tails.
    pub fn coupling<T: Scalar>(&self, z: &[T], active_tails: &[usize]) -> T {
        coupling(z, active_tails, self.topology, T::lit(self.gamma))
    }

    pub fn objectives<T: Scalar>(&self, z: &[T], active_tails: &[usize]) -> Point<T> {
        let g_cpl = self.coupling(z, active_tails);
        match self.variant {
            Variant::Hdtlz2 => hdtlz2(z, g_cpl),
            Variant::Hdtlz7 => hdtlz7(z, g_cpl),
        }
    }

    pub fn evaluate(&self, d: &DecodedConfig) -> Result<Point<f64>> {
        let p = self.project(d)?;
        Ok(self.objectives(&p.z, &p.active_tails))
    }

    pub fn reference_front(&self, points: usize) -> Vec<Point<f64>> {
        reference_front(self.variant, points)
    }
}

/// Coupling regularizer; `active_tails` holds 1-based indices in `3..=n`.
pub fn coupling<T: Scalar>(z: &[T], active_tails: &[usize], topology: Topology, gamma: T) -> T {
    if active_tails.is_empty() {
        return T::zero();
    }
    let sum = active_tails.iter().fold(T::zero(), |acc, &j| {
        let d = z[j - 1] - z[topology.parent(j) - 1];
        acc + d * d
    });
    gamma * sum / T::from_usize_lossy(active_tails.len())
}

fn tail_mean<T: Scalar>(z: &[T], f: impl Fn(T) -> T) -> T {
    z[1..].iter().fold(T::zero(), |acc, &v| acc + f(v)) / T::from_usize_lossy(z.len() - 1)
}

pub fn hdtlz2<T: Scalar>(z: &[T], g_cpl: T) -> Point<T> {
    let half = T::lit(0.5);
    let g = tail_mean(z, |v| (v - half) * (v - half)) + g_cpl;
    let theta = T::FRAC_PI_2() * z[0];
    [(T::one() + g) * theta.cos(), (T::one() + g) * theta.sin()]
}

pub fn hdtlz7<T: Scalar>(z: &[T], g_cpl: T) -> Point<T> {
    let f1 = z[0];
    let g = T::one() + T::lit(9.0) * tail_mean(z, |v| v) + g_cpl;
    let h = T::lit(2.0) - f1 / g * (T::one() + (T::lit(3.0) * T::PI() * f1).sin());
    [f1, g * h / T::lit(2.0)]
}

/// Analytic front sampled on a uniform grid of `points` values of `u`.
pub fn reference_front(variant: Variant, points: usize) -> Vec<Point<f64>> {
    let points = points.max(2);
    let grid = (0..points).map(|i| i as f64 / (points - 1) as f64);
    match variant {
        Variant::Hdtlz2 => grid
            .map(|u| {
                let t = std::f64::consts::FRAC_PI_2 * u;
                [t.cos(), t.sin()]
            })
            .collect(),
        Variant::Hdtlz7 => {
            let cand: Vec<Point<f64>> = grid
                .map(|u| [u, (2.0 - u * (1.0 + (3.0 * std::f64::consts::PI * u).sin())) / 2.0])
                .collect();
            non_dominated(&cand)
        }
    }
}

/// Writes points as CSV with an `f1,f2` header.
pub fn write_points_csv<W: Write>(points: &[Point<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["f1", "f2"]).map_err(csv_err)?;
    for p in points {
        w.write_record([p[0].to_string(), p[1].to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{decode, Genotype, RefinementState};

    fn close(a: Point<f64>, b: [f64; 2]) -> bool {
        (a[0] - b[0]).abs() < 1e-5 && (a[1] - b[1]).abs() < 1e-5
    }

    fn neutral(variant: Variant, z1: f64) -> Vec<f64> {
        let mut z = vec![variant.neutral(); 12];
        z[0] = z1;
        z
    }

    #[test]
    fn hdtlz2_examples() {
        let p = HBenchProblem::with_defaults(Variant::Hdtlz2);
        assert!(close(p.objectives(&neutral(Variant::Hdtlz2, 0.0), &[]), [1.0, 0.0]));
        assert!(close(p.objectives(&neutral(Variant::Hdtlz2, 1.0), &[]), [0.0, 1.0]));
        assert!(close(
            p.objectives(&neutral(Variant::Hdtlz2, 0.5), &[]),
            [std::f64::consts::FRAC_1_SQRT_2; 2]
        ));
    }

    #[test]
    fn hdtlz7_examples() {
        let p = HBenchProblem::with_defaults(Variant::Hdtlz7);
        assert!(close(p.objectives(&neutral(Variant::Hdtlz7, 0.0), &[]), [0.0, 1.0]));
        assert!(close(p.objectives(&neutral(Variant::Hdtlz7, 1.0), &[]), [1.0, 0.5]));
        assert!(close(
            p.objectives(&neutral(Variant::Hdtlz7, 1.0 / 6.0), &[]),
            [0.16667, 0.83333]
        ));
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(coupling(&[0.3, 0.0, 1.0, 0.0], &[], Topology::Chain, 1.0), 0.0);
        assert_eq!(coupling(&[0.3, 0.0, 1.0, 0.0], &[3, 4], Topology::Chain, 1.0), 1.0);
        assert_eq!(coupling(&[0.3, 0.0, 1.0, 0.0], &[3, 4], Topology::Chain, 0.25), 0.25);
        let parents: Vec<usize> = (3..=6).map(|j| Topology::Tree.parent(j)).collect();
        assert_eq!(parents, vec![2, 2, 3, 3]);
    }

    #[test]
    fn genome_layout_and_projection() {
        let p = HBenchProblem::with_defaults(Variant::Hdtlz2);
        let space = p.space();
        assert_eq!(space.dims(), 22);
        assert_eq!(space.variable(HBenchProblem::dim_of(5)).name, "z5");
        let refine = RefinementState::with_defaults(&space);
        // all gates off
        let d = decode(&Genotype::new(vec![0; 22]), &space, &refine);
        let proj = p.project(&d).unwrap();
        assert!(proj.active_tails.is_empty());
        assert_eq!(&proj.z[2..], &[0.5; 10]);
        assert!((proj.z[0] - 1.0 / 12.0).abs() < 1e-15);
        let p7 = HBenchProblem::with_defaults(Variant::Hdtlz7);
        assert_eq!(&p7.project(&d).unwrap().z[2..], &[0.0; 10]);
        // all gates on, every z in the top bin
        let genes: Vec<usize> = (0..22).map(|j| if j >= 2 && j % 2 == 0 { 1 } else { 5 }).collect();
        let d = decode(&Genotype::new(genes), &space, &refine);
        let proj = p.project(&d).unwrap();
        assert_eq!(proj.active_tails, (3..=12).collect::<Vec<_>>());
        assert!(proj.z.iter().all(|&v| (v - 11.0 / 12.0).abs() < 1e-15));
    }

    #[test]
    fn reference_fronts() {
        assert_eq!(reference_front(Variant::Hdtlz2, 2).len(), 2);
        let f = reference_front(Variant::Hdtlz2, 2);
        assert!(close(f[0], [1.0, 0.0]) && close(f[1], [0.0, 1.0]));
        for p in reference_front(Variant::Hdtlz2, 1000) {
            assert!((p[0] * p[0] + p[1] * p[1] - 1.0).abs() < 1e-12);
        }
        let f7 = reference_front(Variant::Hdtlz7, 1000);
        assert!(f7.len() < 1000 && f7.len() > 100);
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        write_points_csv(&reference_front(Variant::Hdtlz2, 2), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("f1,f2\n1,0\n"));
    }
}
