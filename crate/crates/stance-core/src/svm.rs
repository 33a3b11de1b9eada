//! Soft-margin binary SVM trained by sequential minimal optimization.
//!
//! The solver follows Platt's scheme: an outer loop alternating full sweeps
//! with sweeps over non-bound examples, a second-multiplier choice maximizing
//! |E1 - E2| with deterministic fallback scans, and the analytic two-variable
//! update with box clipping. Everything is deterministic: scans run in
//! ascending index order and nothing is randomized. Only the linear kernel is
//! provided, so the model caches primal weights and the decision function is
//! w.x + b.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::StanceLabel;
use crate::features::SparseVector;

/// Class label in the +1/-1 encoding the dual works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn label(self) -> StanceLabel {
        match self {
            Sign::Plus => StanceLabel::Favor,
            Sign::Minus => StanceLabel::Against,
        }
    }
}

impl From<StanceLabel> for Sign {
    fn from(label: StanceLabel) -> Self {
        match label {
            StanceLabel::Favor => Sign::Plus,
            StanceLabel::Against => Sign::Minus,
        }
    }
}

/// One training example.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    pub x: SparseVector,
    pub y: Sign,
}

/// Solver parameters.
///
/// `max_passes` bounds the number of outer sweeps; hitting it yields a model
/// flagged as unconverged rather than an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Box constraint on the dual variables.
    pub c: f64,
    /// KKT tolerance for both the violation test and convergence.
    pub kkt_tol: f64,
    /// Below this, an alpha change is treated as no progress; alphas within
    /// it of a bound snap onto the bound.
    pub alpha_eps: f64,
    pub max_passes: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            kkt_tol: 1e-3,
            alpha_eps: 1e-12,
            max_passes: 10_000,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), SvmError> {
        // each comparison also rejects NaN
        if self.c.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return Err(SvmError::BadConfig("c must be positive"));
        }
        if self.kkt_tol.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return Err(SvmError::BadConfig("kkt_tol must be positive"));
        }
        if self.alpha_eps.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return Err(SvmError::BadConfig("alpha_eps must be positive"));
        }
        if self.kkt_tol <= self.alpha_eps {
            return Err(SvmError::BadConfig("kkt_tol must exceed alpha_eps"));
        }
        if self.max_passes == 0 {
            return Err(SvmError::BadConfig("max_passes must be at least 1"));
        }
        Ok(())
    }
}

/// Trained classifier. `weights` is the primal vector sum(alpha_i y_i x_i),
/// valid because the kernel is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub weights: Vec<f64>,
    pub dimension: usize,
    /// False when training stopped at max_passes instead of a clean sweep.
    pub converged: bool,
}

/// One outer-sweep record of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub sweep: usize,
    pub changed_pairs: usize,
    pub dual_objective: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SvmError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training data contains only one class")]
    SingleClass,
    #[error("example {index} has feature index {found}, dimension is {dimension}")]
    DimensionMismatch {
        index: usize,
        found: usize,
        dimension: usize,
    },
    #[error("invalid training config: {0}")]
    BadConfig(&'static str),
}

/// Kernel seam. Only [`LinearKernel`] ships; the solver's primal-weight fast
/// path assumes it.
pub trait Kernel {
    fn eval(&self, a: &SparseVector, b: &SparseVector) -> f64;
}

/// Dot-product kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearKernel;

impl Kernel for LinearKernel {
    fn eval(&self, a: &SparseVector, b: &SparseVector) -> f64 {
        a.dot(b)
    }
}

/// Trains a model by SMO. See [`SvmModel::converged`] for the max_passes
/// outcome; all other listed failures are errors.
pub fn train(
    data: &[LabeledExample],
    dimension: usize,
    cfg: &TrainConfig,
) -> Result<SvmModel, SvmError> {
    train_with_trace(data, dimension, cfg).map(|(model, _)| model)
}

/// Like [`train`], also returning one record per outer sweep.
pub fn train_with_trace(
    data: &[LabeledExample],
    dimension: usize,
    cfg: &TrainConfig,
) -> Result<(SvmModel, Vec<SweepRecord>), SvmError> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(SvmError::EmptyTrainingSet);
    }
    if data.iter().all(|e| e.y == data[0].y) {
        return Err(SvmError::SingleClass);
    }
    for (index, example) in data.iter().enumerate() {
        if let Some(found) = example.x.max_index() {
            if found >= dimension {
                return Err(SvmError::DimensionMismatch {
                    index,
                    found,
                    dimension,
                });
            }
        }
    }
    let mut solver = Solver {
        data,
        cfg,
        alphas: vec![0.0; data.len()],
        weights: vec![0.0; dimension],
        bias: 0.0,
        kernel: LinearKernel,
    };
    let trace = solver.run();
    solver.settle_bias();
    let converged = trace.last().is_some_and(|r| r.changed_pairs == 0);
    Ok((
        SvmModel {
            alphas: solver.alphas,
            bias: solver.bias,
            weights: solver.weights,
            dimension,
            converged,
        },
        trace,
    ))
}

/// w.x + b. Indices beyond the model's dimension contribute nothing.
pub fn decision_value(model: &SvmModel, x: &SparseVector) -> f64 {
    x.dot_dense(&model.weights) + model.bias
}

/// Favor on nonnegative decision values; the tie at exactly zero goes to
/// Favor.
pub fn predict(model: &SvmModel, x: &SparseVector) -> StanceLabel {
    if decision_value(model, x) >= 0.0 {
        StanceLabel::Favor
    } else {
        StanceLabel::Against
    }
}

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j).
pub fn dual_objective(data: &[LabeledExample], alphas: &[f64]) -> f64 {
    assert_eq!(data.len(), alphas.len(), "one alpha per example");
    let mut linear = 0.0;
    let mut quad = 0.0;
    for (i, (ei, &ai)) in data.iter().zip(alphas).enumerate() {
        linear += ai;
        if ai == 0.0 {
            continue;
        }
        for (j, (ej, &aj)) in data.iter().zip(alphas).enumerate().take(i + 1) {
            if aj == 0.0 {
                continue;
            }
            let term = ai * aj * ei.y.value() * ej.y.value() * ei.x.dot(&ej.x);
            // off-diagonal pairs appear twice in the double sum
            quad += if i == j { term } else { 2.0 * term };
        }
    }
    linear - 0.5 * quad
}

/// Largest violation of the optimality conditions:
/// y f(x) >= 1 at alpha = 0, <= 1 at alpha = C, and = 1 in between.
/// A converged model keeps this within `cfg.kkt_tol`.
pub fn max_kkt_violation(data: &[LabeledExample], model: &SvmModel, cfg: &TrainConfig) -> f64 {
    let mut worst = 0.0f64;
    for (example, &alpha) in data.iter().zip(&model.alphas) {
        let yf = example.y.value() * decision_value(model, &example.x);
        let violation = if alpha <= cfg.alpha_eps {
            1.0 - yf
        } else if alpha >= cfg.c - cfg.alpha_eps {
            yf - 1.0
        } else {
            (yf - 1.0).abs()
        };
        worst = worst.max(violation);
    }
    worst
}

struct Solver<'a> {
    data: &'a [LabeledExample],
    cfg: &'a TrainConfig,
    alphas: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
    kernel: LinearKernel,
}

impl Solver<'_> {
    fn run(&mut self) -> Vec<SweepRecord> {
        let n = self.data.len();
        let mut trace = Vec::new();
        let mut examine_all = true;
        while trace.len() < self.cfg.max_passes {
            let mut changed = 0;
            for i in 0..n {
                if examine_all || self.is_non_bound(i) {
                    changed += usize::from(self.examine(i));
                }
            }
            trace.push(SweepRecord {
                sweep: trace.len() + 1,
                changed_pairs: changed,
                dual_objective: dual_objective(self.data, &self.alphas),
            });
            if examine_all {
                if changed == 0 {
                    break;
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
        }
        trace
    }

    /// Recomputes the threshold from the final alphas. The running bias only
    /// reflects the last step taken; when no interior alphas remain it can
    /// settle outside the interval the optimality conditions permit (repeated
    /// points leave pair steps objective-neutral, so nothing corrects it).
    /// The interval midpoint satisfies every condition whenever some
    /// threshold does.
    fn settle_bias(&mut self) {
        let mut low = f64::NEG_INFINITY;
        let mut high = f64::INFINITY;
        for (example, &alpha) in self.data.iter().zip(&self.alphas) {
            let pinned = example.y.value() - example.x.dot_dense(&self.weights);
            let at_zero = alpha <= self.cfg.alpha_eps;
            let at_c = alpha >= self.cfg.c - self.cfg.alpha_eps;
            // y f(x) >= 1 at alpha = 0, <= 1 at alpha = C, = 1 in between
            match example.y {
                Sign::Plus => {
                    if !at_c {
                        low = low.max(pinned);
                    }
                    if !at_zero {
                        high = high.min(pinned);
                    }
                }
                Sign::Minus => {
                    if !at_c {
                        high = high.min(pinned);
                    }
                    if !at_zero {
                        low = low.max(pinned);
                    }
                }
            }
        }
        if low.is_finite() && high.is_finite() {
            self.bias = 0.5 * (low + high);
        } else if low.is_finite() {
            self.bias = low;
        } else if high.is_finite() {
            self.bias = high;
        }
    }

    fn y(&self, i: usize) -> f64 {
        self.data[i].y.value()
    }

    fn error(&self, i: usize) -> f64 {
        self.data[i].x.dot_dense(&self.weights) + self.bias - self.y(i)
    }

    fn is_non_bound(&self, i: usize) -> bool {
        self.alphas[i] > self.cfg.alpha_eps && self.alphas[i] < self.cfg.c - self.cfg.alpha_eps
    }

    fn examine(&mut self, i2: usize) -> bool {
        let alpha2 = self.alphas[i2];
        let e2 = self.error(i2);
        let r2 = e2 * self.y(i2);
        let violates = (r2 < -self.cfg.kkt_tol && alpha2 < self.cfg.c)
            || (r2 > self.cfg.kkt_tol && alpha2 > 0.0);
        if !violates {
            return false;
        }
        // widest-error partner first, then non-bound scan, then full scan;
        // both scans ascend from index 0 so training is deterministic
        if let Some(i1) = self.widest_error_partner(i2, e2) {
            if self.take_step(i1, i2, e2) {
                return true;
            }
        }
        for i1 in 0..self.data.len() {
            if i1 != i2 && self.is_non_bound(i1) && self.take_step(i1, i2, e2) {
                return true;
            }
        }
        for i1 in 0..self.data.len() {
            if i1 != i2 && !self.is_non_bound(i1) && self.take_step(i1, i2, e2) {
                return true;
            }
        }
        false
    }

    fn widest_error_partner(&self, i2: usize, e2: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.data.len() {
            if i == i2 || !self.is_non_bound(i) {
                continue;
            }
            let gap = (self.error(i) - e2).abs();
            if best.is_none_or(|(_, g)| gap > g) {
                best = Some((i, gap));
            }
        }
        best.map(|(i, _)| i)
    }

    fn take_step(&mut self, i1: usize, i2: usize, e2: f64) -> bool {
        let (alpha1, alpha2) = (self.alphas[i1], self.alphas[i2]);
        let (y1, y2) = (self.y(i1), self.y(i2));
        let s = y1 * y2;
        let c = self.cfg.c;
        let (low, high) = if s < 0.0 {
            ((alpha2 - alpha1).max(0.0), (c + alpha2 - alpha1).min(c))
        } else {
            ((alpha1 + alpha2 - c).max(0.0), (alpha1 + alpha2).min(c))
        };
        if high - low < self.cfg.alpha_eps {
            return false;
        }
        let e1 = self.error(i1);
        let x1 = &self.data[i1].x;
        let x2 = &self.data[i2].x;
        let k11 = self.kernel.eval(x1, x1);
        let k12 = self.kernel.eval(x1, x2);
        let k22 = self.kernel.eval(x2, x2);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2 = if eta > 0.0 {
            (alpha2 + y2 * (e1 - e2) / eta).clamp(low, high)
        } else {
            // flat direction: move to whichever endpoint improves the
            // objective, if either does
            let obj_low = self.objective_with_pair(i1, i2, alpha1 + s * (alpha2 - low), low);
            let obj_high = self.objective_with_pair(i1, i2, alpha1 + s * (alpha2 - high), high);
            if obj_low > obj_high + self.cfg.alpha_eps {
                low
            } else if obj_high > obj_low + self.cfg.alpha_eps {
                high
            } else {
                return false;
            }
        };
        if a2 < self.cfg.alpha_eps {
            a2 = 0.0;
        } else if a2 > c - self.cfg.alpha_eps {
            a2 = c;
        }
        if (a2 - alpha2).abs() < self.cfg.alpha_eps * (a2 + alpha2 + self.cfg.alpha_eps) {
            return false;
        }
        // a1 follows from the equality constraint, then a guard clamp
        // against rounding at the box edge
        let a1 = (alpha1 + s * (alpha2 - a2)).clamp(0.0, c);

        let d1 = a1 - alpha1;
        let d2 = a2 - alpha2;
        let b1 = self.bias - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        let b2 = self.bias - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        self.bias = if a1 > self.cfg.alpha_eps && a1 < c - self.cfg.alpha_eps {
            b1
        } else if a2 > self.cfg.alpha_eps && a2 < c - self.cfg.alpha_eps {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        x1.scatter_add(y1 * d1, &mut self.weights);
        x2.scatter_add(y2 * d2, &mut self.weights);
        self.alphas[i1] = a1;
        self.alphas[i2] = a2;
        true
    }

    /// Dual objective with the pair (i1, i2) set to trial values.
    fn objective_with_pair(&self, i1: usize, i2: usize, a1: f64, a2: f64) -> f64 {
        let mut trial = self.alphas.clone();
        trial[i1] = a1;
        trial[i2] = a2;
        dual_objective(self.data, &trial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(coords: &[f64], y: Sign) -> LabeledExample {
        let pairs: Vec<(usize, f64)> = coords
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        LabeledExample {
            x: SparseVector::from_pairs(pairs).unwrap(),
            y,
        }
    }

    fn two_point_instance() -> Vec<LabeledExample> {
        vec![
            example(&[-1.0], Sign::Minus),
            example(&[1.0], Sign::Plus),
        ]
    }

    fn assert_box_and_balance(data: &[LabeledExample], model: &SvmModel, c: f64) {
        let mut balance = 0.0;
        for (ex, &alpha) in data.iter().zip(&model.alphas) {
            assert!((0.0..=c).contains(&alpha), "alpha {alpha} outside box");
            balance += alpha * ex.y.value();
        }
        assert!(balance.abs() <= 1e-12, "sum alpha*y = {balance}");
    }

    fn assert_weights_identity(data: &[LabeledExample], model: &SvmModel) {
        let mut recomputed = vec![0.0; model.dimension];
        for (ex, &alpha) in data.iter().zip(&model.alphas) {
            ex.x.scatter_add(alpha * ex.y.value(), &mut recomputed);
        }
        for (a, b) in recomputed.iter().zip(&model.weights) {
            assert!((a - b).abs() <= 1e-9, "weights drifted: {a} vs {b}");
        }
    }

    #[test]
    fn symmetric_two_point_max_margin() {
        let data = two_point_instance();
        let cfg = TrainConfig::default();
        let model = train(&data, 1, &cfg).unwrap();
        assert!(model.converged);
        assert!((model.weights[0] - 1.0).abs() <= 1e-9);
        assert!(model.bias.abs() <= 1e-9);
        assert!((model.alphas[0] - 0.5).abs() <= 1e-9);
        assert!((model.alphas[1] - 0.5).abs() <= 1e-9);
        assert_box_and_balance(&data, &model, cfg.c);
        assert_weights_identity(&data, &model);
        // support vectors of a hard-margin solution sit on the margin
        for ex in &data {
            let yf = ex.y.value() * decision_value(&model, &ex.x);
            assert!(yf >= 1.0 - 1e-6);
        }
    }

    #[test]
    fn four_point_diagonal_fixture() {
        // classes split along x + y = 3; nearest points (1,1) and (2,2)
        let data = vec![
            example(&[0.0, 0.0], Sign::Minus),
            example(&[1.0, 1.0], Sign::Minus),
            example(&[2.0, 2.0], Sign::Plus),
            example(&[3.0, 3.0], Sign::Plus),
        ];
        let cfg = TrainConfig {
            c: 10.0,
            ..TrainConfig::default()
        };
        let model = train(&data, 2, &cfg).unwrap();
        assert!(model.converged);
        assert!((model.weights[0] - 1.0).abs() <= 1e-6);
        assert!((model.weights[1] - 1.0).abs() <= 1e-6);
        assert!((model.bias + 3.0).abs() <= 1e-6);
        // geometric margin 1/|w| equals the analytic value 1/sqrt(2)
        let norm = (model.weights[0].powi(2) + model.weights[1].powi(2)).sqrt();
        assert!((1.0 / norm - 1.0 / 2.0f64.sqrt()).abs() <= 1e-6);
        let objective = dual_objective(&data, &model.alphas);
        assert!((objective - 1.0).abs() <= 1e-6);
        assert!(max_kkt_violation(&data, &model, &cfg) <= cfg.kkt_tol);
        assert_box_and_balance(&data, &model, cfg.c);
        assert_weights_identity(&data, &model);
    }

    #[test]
    fn duplicated_points_share_the_optimum() {
        // three copies per side; optimum unchanged: w = 1, b = 0, W = 0.5
        let mut data = Vec::new();
        for _ in 0..3 {
            data.extend(two_point_instance());
        }
        let cfg = TrainConfig::default();
        let model = train(&data, 1, &cfg).unwrap();
        assert!(model.converged);
        assert!((model.weights[0] - 1.0).abs() <= 1e-9);
        assert!(model.bias.abs() <= 1e-9);
        assert!((dual_objective(&data, &model.alphas) - 0.5).abs() <= 1e-9);
        assert_box_and_balance(&data, &model, cfg.c);
        assert!(max_kkt_violation(&data, &model, &cfg) <= cfg.kkt_tol);
    }

    #[test]
    fn overlapping_classes_stay_within_invariants() {
        let data = vec![
            example(&[-2.0], Sign::Minus),
            example(&[-1.0], Sign::Minus),
            example(&[-0.5], Sign::Plus),
            example(&[0.5], Sign::Minus),
            example(&[1.0], Sign::Plus),
            example(&[2.0], Sign::Plus),
        ];
        let cfg = TrainConfig::default();
        let (model, trace) = train_with_trace(&data, 1, &cfg).unwrap();
        assert!(model.converged);
        assert_box_and_balance(&data, &model, cfg.c);
        assert_weights_identity(&data, &model);
        assert!(max_kkt_violation(&data, &model, &cfg) <= cfg.kkt_tol);
        for pair in trace.windows(2) {
            assert!(pair[1].dual_objective >= pair[0].dual_objective - 1e-12);
        }
        // duplicating every example must not move any prediction
        let doubled: Vec<LabeledExample> =
            data.iter().chain(data.iter()).cloned().collect();
        let doubled_model = train(&doubled, 1, &cfg).unwrap();
        for x in [-3.0, -1.5, -0.25, 0.25, 1.5, 3.0] {
            let probe = SparseVector::from_pairs(vec![(0, x)]).unwrap();
            assert_eq!(predict(&model, &probe), predict(&doubled_model, &probe));
        }
    }

    #[test]
    fn decision_value_basics() {
        let data = two_point_instance();
        let model = train(&data, 1, &TrainConfig::default()).unwrap();
        assert_eq!(decision_value(&model, &SparseVector::new()), model.bias);
        let probe = SparseVector::from_pairs(vec![(0, 2.0)]).unwrap();
        assert!((decision_value(&model, &probe) - 2.0).abs() <= 1e-9);
        // indices beyond the model dimension are ignored
        let oob = SparseVector::from_pairs(vec![(7, 5.0)]).unwrap();
        assert_eq!(decision_value(&model, &oob), model.bias);
    }

    #[test]
    fn predict_tie_goes_to_favor() {
        let model = SvmModel {
            alphas: vec![],
            bias: 0.0,
            weights: vec![0.0],
            dimension: 1,
            converged: true,
        };
        let x = SparseVector::from_pairs(vec![(0, 3.0)]).unwrap();
        assert_eq!(predict(&model, &x), StanceLabel::Favor);
        let negative = SvmModel {
            bias: -0.1,
            ..model.clone()
        };
        assert_eq!(predict(&negative, &x), StanceLabel::Against);
        let positive = SvmModel {
            bias: 2.3,
            ..model
        };
        assert_eq!(predict(&positive, &x), StanceLabel::Favor);
    }

    #[test]
    fn zero_alphas_zero_objective() {
        let data = two_point_instance();
        assert_eq!(dual_objective(&data, &[0.0, 0.0]), 0.0);
    }

    #[test]
    fn degenerate_inputs_are_errors() {
        let cfg = TrainConfig::default();
        assert_eq!(train(&[], 1, &cfg), Err(SvmError::EmptyTrainingSet));
        let one_class = vec![example(&[1.0], Sign::Plus), example(&[2.0], Sign::Plus)];
        assert_eq!(train(&one_class, 1, &cfg), Err(SvmError::SingleClass));
        let wide = vec![
            example(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], Sign::Plus),
            example(&[1.0], Sign::Minus),
        ];
        assert_eq!(
            train(&wide, 3, &cfg),
            Err(SvmError::DimensionMismatch {
                index: 0,
                found: 5,
                dimension: 3,
            })
        );
    }

    #[test]
    fn bad_configs_are_rejected() {
        let data = two_point_instance();
        for cfg in [
            TrainConfig { c: 0.0, ..TrainConfig::default() },
            TrainConfig { kkt_tol: -1.0, ..TrainConfig::default() },
            TrainConfig { alpha_eps: 0.0, ..TrainConfig::default() },
            TrainConfig { kkt_tol: 1e-13, ..TrainConfig::default() },
            TrainConfig { max_passes: 0, ..TrainConfig::default() },
        ] {
            assert!(matches!(train(&data, 1, &cfg), Err(SvmError::BadConfig(_))));
        }
    }

    #[test]
    fn pass_cap_yields_flagged_usable_model() {
        let data = vec![
            example(&[0.0, 0.0], Sign::Minus),
            example(&[1.0, 1.0], Sign::Minus),
            example(&[2.0, 2.0], Sign::Plus),
            example(&[3.0, 3.0], Sign::Plus),
        ];
        let cfg = TrainConfig {
            max_passes: 1,
            ..TrainConfig::default()
        };
        let model = train(&data, 2, &cfg).unwrap();
        assert!(!model.converged);
        let probe = SparseVector::from_pairs(vec![(0, 3.0), (1, 3.0)]).unwrap();
        assert!(decision_value(&model, &probe).is_finite());
    }

    #[test]
    fn sign_round_trips_stance_labels() {
        for label in StanceLabel::ALL {
            assert_eq!(Sign::from(label).label(), label);
        }
        assert_eq!(Sign::Plus.value(), 1.0);
        assert_eq!(Sign::Minus.value(), -1.0);
    }
}
