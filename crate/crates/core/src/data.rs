//! Discrete datasets, their empirical label statistics, and the generators
//! for every toy problem the experiments use.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qm::Herm2;

/// One labelled observation.
///
/// Input entries live on the ternary grid `{-1, 0, +1}`; the binary problems
/// only ever use `±1`, the zero level is there for the 3x3 layouts of the
/// entangled-perceptron problems. Labels are always `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sample {
    x: Vec<i8>,
    y: i8,
}

impl Sample {
    pub fn new(x: Vec<i8>, y: i8) -> Result<Self> {
        if y != 1 && y != -1 {
            return Err(Error::Domain(format!("label must be ±1, got {y}")));
        }
        if let Some(bad) = x.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::Domain(format!(
                "input entry {bad} not in {{-1, 0, 1}}"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[i8] {
        &self.x
    }

    pub fn y(&self) -> i8 {
        self.y
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Input as floating point, the form the models consume.
    pub fn input(&self) -> Vec<f64> {
        self.x.iter().map(|&v| f64::from(v)).collect()
    }

    pub fn flipped(&self) -> Self {
        Self {
            x: self.x.clone(),
            y: -self.y,
        }
    }
}

/// Statistics of one distinct input pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternStats {
    pub pattern: Vec<i8>,
    pub input: Vec<f64>,
    /// Number of occurrences `M`.
    pub count: usize,
    /// Sum of the labels over all occurrences.
    pub label_sum: i64,
    /// Empirical weight `q(x) = M / N`.
    pub weight: f64,
}

impl PatternStats {
    /// Conditional label mean `b(x)`.
    pub fn label_mean(&self) -> f64 {
        self.label_sum as f64 / self.count as f64
    }

    /// `q(y = +1 | x)`.
    pub fn prob_positive(&self) -> f64 {
        0.5 * (1.0 + self.label_mean())
    }
}

/// Samples grouped by distinct input pattern, ordered lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedDataset {
    entries: Vec<PatternStats>,
    total: usize,
    dim: usize,
}

impl AggregatedDataset {
    pub fn entries(&self) -> &[PatternStats] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total sample count `N`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Input dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn find(&self, pattern: &[i8]) -> Option<&PatternStats> {
        self.entries
            .binary_search_by(|e| e.pattern.as_slice().cmp(pattern))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Dataset-wide label mean.
    pub fn label_mean(&self) -> f64 {
        let sum: i64 = self.entries.iter().map(|e| e.label_sum).sum();
        sum as f64 / self.total as f64
    }
}

/// Groups samples by input pattern.
pub fn aggregate(samples: &[Sample]) -> Result<AggregatedDataset> {
    let first = samples.first().ok_or(Error::EmptyDataset)?;
    let dim = first.dim();
    let mut groups: BTreeMap<&[i8], (usize, i64)> = BTreeMap::new();
    for s in samples {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
        let slot = groups.entry(s.x()).or_insert((0, 0));
        slot.0 += 1;
        slot.1 += i64::from(s.y());
    }
    let total = samples.len();
    let entries = groups
        .into_iter()
        .map(|(pattern, (count, label_sum))| PatternStats {
            pattern: pattern.to_vec(),
            input: pattern.iter().map(|&v| f64::from(v)).collect(),
            count,
            label_sum,
            weight: count as f64 / total as f64,
        })
        .collect();
    Ok(AggregatedDataset {
        entries,
        total,
        dim,
    })
}

/// Rank-1 data density matrix built from `sqrt(q(y|x))` amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataDensity {
    pub b: f64,
    /// Rows and columns ordered `y = +1, y = -1`.
    pub entries: [[f64; 2]; 2],
}

impl DataDensity {
    pub fn matrix(&self) -> Herm2 {
        Herm2::new(
            self.entries[0][0],
            self.entries[1][1],
            self.entries[0][1].into(),
        )
    }
}

pub fn data_density(b: f64) -> Result<DataDensity> {
    if !(-1.0..=1.0).contains(&b) {
        return Err(Error::Domain(format!("label mean {b} outside [-1, 1]")));
    }
    let up = 0.5 * (1.0 + b);
    let down = 0.5 * (1.0 - b);
    let off = (up * down).sqrt();
    Ok(DataDensity {
        b,
        entries: [[up, off], [off, down]],
    })
}

/// SplitMix64 finaliser, used to derive independent stream seeds.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `stream` and item `index` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    mix64(mix64(mix64(master) ^ stream) ^ index)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The four corners of the binary square.
pub const SQUARE: [[i8; 2]; 4] = [[1, 1], [1, -1], [-1, 1], [-1, -1]];

/// Labels of the noiseless two-dimensional problem, aligned with [`SQUARE`].
pub const NOISY_2D_LABELS: [i8; 4] = [-1, -1, 1, -1];

/// The patterns that receive label noise in the two-dimensional problem.
pub const NOISY_2D_FLIP_PATTERNS: [[i8; 2]; 2] = [[1, -1], [-1, -1]];

fn duplicate_with_flips(
    layout: &[(Vec<i8>, i8)],
    copies: usize,
    flip_fraction: f64,
    flip_patterns: &[Vec<i8>],
    seed: u64,
) -> Result<Vec<Sample>> {
    if copies == 0 {
        return Err(Error::Precondition("copies must be positive".into()));
    }
    if !(0.0..=1.0).contains(&flip_fraction) {
        return Err(Error::Precondition(format!(
            "flip fraction {flip_fraction} outside [0, 1]"
        )));
    }
    let n_flip = (flip_fraction * copies as f64).round() as usize;
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(layout.len() * copies);
    for (pattern, label) in layout {
        let mut block = vec![Sample::new(pattern.clone(), *label)?; copies];
        if flip_patterns.iter().any(|p| p == pattern) {
            let mut idx: Vec<usize> = (0..copies).collect();
            idx.shuffle(&mut rng);
            for &i in &idx[..n_flip] {
                block[i] = block[i].flipped();
            }
        }
        out.extend(block);
    }
    Ok(out)
}

/// The four-corner problem with `copies` duplicates and label noise on
/// `flip_patterns`.
pub fn gen_noisy_2d(
    copies: usize,
    flip_fraction: f64,
    flip_patterns: &[[i8; 2]],
    seed: u64,
) -> Result<Vec<Sample>> {
    let layout: Vec<(Vec<i8>, i8)> = SQUARE
        .iter()
        .zip(NOISY_2D_LABELS)
        .map(|(p, y)| (p.to_vec(), y))
        .collect();
    let flips: Vec<Vec<i8>> = flip_patterns.iter().map(|p| p.to_vec()).collect();
    duplicate_with_flips(&layout, copies, flip_fraction, &flips, seed)
}

/// `sign(x . teacher)` with `sign(0) = +1`.
pub fn teacher_label(x: &[i8], teacher: &[f64]) -> i8 {
    let dot: f64 = x.iter().zip(teacher).map(|(&a, &w)| f64::from(a) * w).sum();
    if dot >= 0.0 {
        1
    } else {
        -1
    }
}

/// Random binary patterns labelled by a hidden linear teacher, each repeated
/// `duplicates` times. Returns the samples and the teacher.
pub fn gen_teacher_student(
    n_patterns: usize,
    d: usize,
    duplicates: usize,
    seed: u64,
) -> Result<(Vec<Sample>, Vec<f64>)> {
    if n_patterns == 0 || d == 0 || duplicates == 0 {
        return Err(Error::Precondition(
            "n_patterns, d and duplicates must be positive".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let teacher: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let mut samples = Vec::with_capacity(n_patterns * duplicates);
    for _ in 0..n_patterns {
        let x: Vec<i8> = (0..d)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let y = teacher_label(&x, &teacher);
        let s = Sample::new(x, y)?;
        samples.extend(std::iter::repeat_n(s, duplicates));
    }
    Ok((samples, teacher))
}

/// Negates the labels of the first `floor(fraction * len)` samples of a
/// seeded permutation.
pub fn flip_labels(samples: &[Sample], fraction: f64, seed: u64) -> Result<Vec<Sample>> {
    if !(0.0..=0.5).contains(&fraction) {
        return Err(Error::Precondition(format!(
            "flip fraction {fraction} outside [0, 0.5]"
        )));
    }
    let n_flip = (fraction * samples.len() as f64).floor() as usize;
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    idx.shuffle(&mut rng_from_seed(seed));
    let mut out = samples.to_vec();
    for &i in &idx[..n_flip] {
        out[i] = out[i].flipped();
    }
    Ok(out)
}

/// Seeded random partition; the first `floor(train_fraction * N)` samples
/// of the permutation become the training set.
pub fn split_train_test(
    samples: &[Sample],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<Sample>, Vec<Sample>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Precondition(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let n_train = (train_fraction * samples.len() as f64).floor() as usize;
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    idx.shuffle(&mut rng_from_seed(seed));
    let train = idx[..n_train].iter().map(|&i| samples[i].clone()).collect();
    let test = idx[n_train..].iter().map(|&i| samples[i].clone()).collect();
    Ok((train, test))
}

/// XOR of the sign bits: equal signs are labelled -1.
pub fn gen_xor(copies: usize) -> Result<Vec<Sample>> {
    duplicate_with_flips(&xor_layout(), copies, 0.0, &[], 0)
}

fn xor_layout() -> Vec<(Vec<i8>, i8)> {
    SQUARE
        .iter()
        .map(|p| (p.to_vec(), if p[0] == p[1] { -1 } else { 1 }))
        .collect()
}

/// Two-dimensional problems for the entangled perceptron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AppendixProblem {
    /// XOR with 30% label noise on the two bottom (`x1 = -1`) patterns.
    NoisyXor,
    /// Two columns of the 3x3 grid, split by the line `x0 = 0`.
    ParallelLines,
    /// Centre of the 3x3 grid labelled -1, the eight neighbours +1.
    Ellipse,
    /// Checkerboard on the 3x3 grid (alternating anti-diagonal bands); no
    /// conic separates it.
    NonQuadric,
}

impl AppendixProblem {
    pub const ALL: [AppendixProblem; 4] = [
        AppendixProblem::NoisyXor,
        AppendixProblem::ParallelLines,
        AppendixProblem::Ellipse,
        AppendixProblem::NonQuadric,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AppendixProblem::NoisyXor => "noisy-xor",
            AppendixProblem::ParallelLines => "parallel-lines",
            AppendixProblem::Ellipse => "ellipse",
            AppendixProblem::NonQuadric => "non-quadric",
        }
    }

    /// Noiseless pattern/label layout.
    pub fn layout(&self) -> Vec<(Vec<i8>, i8)> {
        let grid = || (-1..=1i8).flat_map(|x0| (-1..=1i8).map(move |x1| [x0, x1]));
        match self {
            AppendixProblem::NoisyXor => xor_layout(),
            AppendixProblem::ParallelLines => grid()
                .filter(|p| p[0] != 0)
                .map(|p| (p.to_vec(), p[0]))
                .collect(),
            AppendixProblem::Ellipse => grid()
                .map(|p| (p.to_vec(), if p == [0, 0] { -1 } else { 1 }))
                .collect(),
            AppendixProblem::NonQuadric => grid()
                .map(|p| {
                    let y = if (p[0] + p[1]).rem_euclid(2) == 0 {
                        1
                    } else {
                        -1
                    };
                    (p.to_vec(), y)
                })
                .collect(),
        }
    }

    fn flip_patterns(&self) -> Vec<Vec<i8>> {
        match self {
            AppendixProblem::NoisyXor => vec![vec![1, -1], vec![-1, -1]],
            _ => Vec::new(),
        }
    }
}

impl std::str::FromStr for AppendixProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AppendixProblem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "appendix problem",
                name: s.to_string(),
            })
    }
}

/// Copies per pattern in the entangled-perceptron problems.
pub const APPENDIX_COPIES: usize = 40;

/// Label noise applied to the noisy-XOR bottom patterns.
pub const APPENDIX_FLIP_FRACTION: f64 = 0.3;

pub fn gen_appendix_problems(which: AppendixProblem, seed: u64) -> Result<Vec<Sample>> {
    duplicate_with_flips(
        &which.layout(),
        APPENDIX_COPIES,
        APPENDIX_FLIP_FRACTION,
        &which.flip_patterns(),
        seed,
    )
}

/// Writes samples as `x0,...,x{d-1},y` with integer entries.
pub fn write_dataset_csv<W: Write>(writer: W, samples: &[Sample]) -> Result<()> {
    let first = samples.first().ok_or(Error::EmptyDataset)?;
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..first.dim()).map(|i| format!("x{i}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for s in samples {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                got: s.dim(),
            });
        }
        let row: Vec<String> = s
            .x()
            .iter()
            .map(|v| v.to_string())
            .chain(std::iter::once(s.y().to_string()))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset_csv<R: Read>(reader: R) -> Result<Vec<Sample>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let d = header
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Parse("empty header".into()))?;
    let expected = (0..d)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("y".to_string()));
    if !header
        .iter()
        .eq(expected.collect::<Vec<_>>().iter().map(String::as_str))
    {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record?;
        let values = record
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<i8>()
                    .map_err(|e| Error::Parse(format!("{f:?}: {e}")))
            })
            .collect::<Result<Vec<i8>>>()?;
        let (y, x) = values
            .split_last()
            .ok_or_else(|| Error::Parse("empty row".into()))?;
        out.push(Sample::new(x.to_vec(), *y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(x: &[i8], y: i8) -> Sample {
        Sample::new(x.to_vec(), y).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert!(Sample::new(vec![1, -1], 0).is_err());
        assert!(Sample::new(vec![2, -1], 1).is_err());
        assert!(Sample::new(vec![0, -1], 1).is_ok());
    }

    #[test]
    fn aggregate_counts_and_means() {
        let mut v = vec![s(&[1, 1], -1); 7];
        v.extend(vec![s(&[1, 1], 1); 3]);
        let agg = aggregate(&v).unwrap();
        assert_eq!(agg.len(), 1);
        let e = &agg.entries()[0];
        assert_eq!(e.count, 10);
        assert_abs_diff_eq!(e.label_mean(), -0.4, epsilon = 1e-15);

        let agg = aggregate(&[s(&[1, -1, 1], 1)]).unwrap();
        assert_eq!(agg.entries()[0].label_mean(), 1.0);
        assert_eq!(agg.entries()[0].weight, 1.0);
    }

    #[test]
    fn aggregate_errors() {
        assert!(matches!(aggregate(&[]), Err(Error::EmptyDataset)));
        let r = aggregate(&[s(&[1, 1], 1), s(&[1], 1)]);
        assert!(matches!(
            r,
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn aggregate_order_is_lexicographic() {
        let agg = aggregate(&gen_xor(1).unwrap()).unwrap();
        let patterns: Vec<_> = agg.entries().iter().map(|e| e.pattern.clone()).collect();
        assert_eq!(
            patterns,
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
    }

    #[test]
    fn fig1_dataset_statistics() {
        let samples = gen_noisy_2d(40, 0.3, &NOISY_2D_FLIP_PATTERNS, 7).unwrap();
        assert_eq!(samples.len(), 160);
        let agg = aggregate(&samples).unwrap();
        let expect = [
            ([1, 1], -1.0),
            ([1, -1], -0.4),
            ([-1, 1], 1.0),
            ([-1, -1], -0.4),
        ];
        for (p, b) in expect {
            let e = agg.find(&p).unwrap();
            assert_abs_diff_eq!(e.label_mean(), b, epsilon = 1e-15);
            assert_eq!(e.count, 40);
        }
        for p in NOISY_2D_FLIP_PATTERNS {
            let positives = samples.iter().filter(|s| s.x() == p && s.y() == 1).count();
            assert_eq!(positives, 12);
        }
    }

    #[test]
    fn noisy_2d_without_noise() {
        let base = gen_noisy_2d(1, 0.0, &NOISY_2D_FLIP_PATTERNS, 0).unwrap();
        assert_eq!(base.len(), 4);
        for (smp, (p, y)) in base.iter().zip(SQUARE.iter().zip(NOISY_2D_LABELS)) {
            assert_eq!(smp.x(), p);
            assert_eq!(smp.y(), y);
        }
        let agg = aggregate(&gen_noisy_2d(40, 0.0, &NOISY_2D_FLIP_PATTERNS, 0).unwrap()).unwrap();
        for (p, y) in SQUARE.iter().zip(NOISY_2D_LABELS) {
            assert_eq!(agg.find(p).unwrap().label_mean(), f64::from(y));
        }
    }

    #[test]
    fn data_density_examples() {
        let eta = data_density(-0.4).unwrap();
        assert_abs_diff_eq!(eta.entries[0][0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(eta.entries[1][1], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(eta.entries[0][1], 0.458_257_569_495_584, epsilon = 1e-15);
        assert_eq!(data_density(1.0).unwrap().entries, [[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(data_density(0.0).unwrap().entries, [[0.5; 2]; 2]);
        assert!(matches!(data_density(1.1), Err(Error::Domain(_))));
    }

    #[test]
    fn teacher_student_shape() {
        let (samples, teacher) = gen_teacher_student(600, 8, 5, 3).unwrap();
        assert_eq!(samples.len(), 3000);
        assert_eq!(teacher.len(), 8);
        let agg = aggregate(&samples).unwrap();
        for e in agg.entries() {
            assert_eq!(e.count % 5, 0);
            assert_eq!(e.label_mean().abs(), 1.0);
        }
        let again = gen_teacher_student(600, 8, 5, 3).unwrap();
        assert_eq!(again.0, samples);
    }

    #[test]
    fn single_coordinate_teacher() {
        let teacher = [1.0, 0.0, 0.0, 0.0];
        for x in [[1, -1, 1, 1], [-1, 1, 1, -1], [-1, -1, -1, -1]] {
            assert_eq!(teacher_label(&x, &teacher), x[0]);
        }
        assert_eq!(teacher_label(&[1, -1], &[0.5, 0.5]), 1);
    }

    #[test]
    fn flip_label_counts() {
        let (samples, _) = gen_teacher_student(480, 8, 5, 11).unwrap();
        assert_eq!(samples.len(), 2400);
        assert_eq!(flip_labels(&samples, 0.0, 1).unwrap(), samples);
        let flipped = flip_labels(&samples, 0.5, 1).unwrap();
        let changed = samples
            .iter()
            .zip(&flipped)
            .filter(|(a, b)| a.y() != b.y())
            .count();
        assert_eq!(changed, 1200);
        assert_eq!(flip_labels(&flipped, 0.5, 1).unwrap(), samples);
        assert!(flip_labels(&samples, 0.6, 1).is_err());
    }

    #[test]
    fn split_sizes() {
        let (samples, _) = gen_teacher_student(600, 8, 5, 2).unwrap();
        let (train, test) = split_train_test(&samples, 0.8, 9).unwrap();
        assert_eq!((train.len(), test.len()), (2400, 600));

        let ten = &samples[..10];
        let (train, test) = split_train_test(ten, 0.99, 9).unwrap();
        assert_eq!((train.len(), test.len()), (9, 1));

        let mut joined: Vec<_> = train.into_iter().chain(test).collect();
        joined.sort();
        let mut orig = ten.to_vec();
        orig.sort();
        assert_eq!(joined, orig);
        assert!(split_train_test(ten, 1.0, 0).is_err());
    }

    #[test]
    fn xor_statistics() {
        assert_eq!(gen_xor(1).unwrap().len(), 4);
        let agg = aggregate(&gen_xor(40).unwrap()).unwrap();
        for e in agg.entries() {
            assert_eq!(e.label_mean().abs(), 1.0);
            let eta = data_density(e.label_mean()).unwrap();
            assert!(eta.matrix().det().abs() < 1e-15);
            assert!(eta.entries[0][0] == 0.0 || eta.entries[0][0] == 1.0);
        }
    }

    #[test]
    fn appendix_layouts() {
        let agg = aggregate(&gen_appendix_problems(AppendixProblem::NoisyXor, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(
            agg.find(&[1, -1]).unwrap().label_mean(),
            0.4,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            agg.find(&[-1, -1]).unwrap().label_mean(),
            -0.4,
            epsilon = 1e-15
        );
        assert_eq!(agg.find(&[1, 1]).unwrap().label_mean(), -1.0);

        let ellipse = AppendixProblem::Ellipse.layout();
        assert_eq!(ellipse.iter().filter(|(_, y)| *y == -1).count(), 1);
        assert_eq!(ellipse.iter().filter(|(_, y)| *y == 1).count(), 8);

        // separable by x0 = 0
        for (p, y) in AppendixProblem::ParallelLines.layout() {
            assert_eq!(i8::signum(p[0]), y);
        }
        assert_eq!(
            "ellipse".parse::<AppendixProblem>().unwrap(),
            AppendixProblem::Ellipse
        );
        assert!("circle".parse::<AppendixProblem>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let samples = gen_appendix_problems(AppendixProblem::Ellipse, 0).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x0,x1,y\n-1,-1,1\n"));
        assert_eq!(read_dataset_csv(buf.as_slice()).unwrap(), samples);
        assert!(read_dataset_csv("a,b\n1,1\n".as_bytes()).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(42, 1, 0);
        assert_ne!(a, derive_seed(42, 1, 1));
        assert_ne!(a, derive_seed(42, 2, 0));
        assert_ne!(a, derive_seed(43, 1, 0));
        assert_eq!(a, derive_seed(42, 1, 0));
    }
}
