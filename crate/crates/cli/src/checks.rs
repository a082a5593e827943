//! Randomized verification campaigns over the measure identities and
//! inequalities, sharded with rayon.
//!
//! Scheduling independence: sample `j` of a check draws every random object
//! from sub-seeds of `derive_seed(check_seed, j)`, and shards merge by
//! (residual, index) with ties broken toward the smaller index, so reports
//! are byte-identical regardless of worker count.

use rayon::prelude::*;
use serde::Serialize;

use quent_core::measures::{
    chen_gap, concurrence_pure, concurrence_schmidt, negativity, negativity_operator,
    negativity_schmidt, peres_classify, quadrit_residuals, qutrit_residual, symmetric_invariants,
    PptClass,
};
use quent_core::rng::{derive_seed, SplitMix64};
use quent_core::states::{
    apply_local_unitaries, random_mixed_state, random_pure_state, random_schmidt_vector,
    random_unitary, schmidt_decompose, BipartiteDims, SchmidtForm,
};

use crate::statefile::StateFile;

/// Negativity above this marks a state as entangled when cross-checking the
/// Peres classification.
const NEGATIVITY_FLOOR: f64 = 1e-8;

/// The closed set of verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    QubitEquality,
    TracenormVsSchmidt,
    OperatorVsSchmidt,
    Chen,
    QutritIdentity,
    QuadritCorrected,
    QuadritPaperPrinted,
    LuInvariance,
    MaxValues,
    PeresConsistency,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::QubitEquality,
        CheckKind::TracenormVsSchmidt,
        CheckKind::OperatorVsSchmidt,
        CheckKind::Chen,
        CheckKind::QutritIdentity,
        CheckKind::QuadritCorrected,
        CheckKind::QuadritPaperPrinted,
        CheckKind::LuInvariance,
        CheckKind::MaxValues,
        CheckKind::PeresConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::QubitEquality => "qubit-equality",
            CheckKind::TracenormVsSchmidt => "tracenorm-vs-schmidt",
            CheckKind::OperatorVsSchmidt => "operator-vs-schmidt",
            CheckKind::Chen => "chen",
            CheckKind::QutritIdentity => "qutrit-identity",
            CheckKind::QuadritCorrected => "quadrit-corrected",
            CheckKind::QuadritPaperPrinted => "quadrit-paper-printed",
            CheckKind::LuInvariance => "lu-invariance",
            CheckKind::MaxValues => "max-values",
            CheckKind::PeresConsistency => "peres-consistency",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckKind::QubitEquality => 1e-10,
            CheckKind::TracenormVsSchmidt => 1e-8,
            CheckKind::OperatorVsSchmidt => 1e-12,
            CheckKind::Chen => 1e-12,
            CheckKind::QutritIdentity => 1e-10,
            CheckKind::QuadritCorrected => 1e-10,
            CheckKind::QuadritPaperPrinted => 1e-10,
            CheckKind::LuInvariance => 1e-9,
            CheckKind::MaxValues => 1e-12,
            CheckKind::PeresConsistency => 1e-8,
        }
    }

    /// Dimension-specific checks ignore a user-supplied --dims.
    pub fn dims_fixed(self) -> bool {
        matches!(
            self,
            CheckKind::QubitEquality
                | CheckKind::QutritIdentity
                | CheckKind::QuadritCorrected
                | CheckKind::QuadritPaperPrinted
        )
    }

    pub fn default_dims(self) -> Vec<(usize, usize)> {
        match self {
            CheckKind::QubitEquality => vec![(2, 2)],
            CheckKind::TracenormVsSchmidt => (2..=6).map(|d| (d, d)).collect(),
            CheckKind::OperatorVsSchmidt => (2..=10).map(|d| (d, d)).collect(),
            CheckKind::Chen => (2..=8).map(|d| (d, d)).collect(),
            CheckKind::QutritIdentity => vec![(3, 3)],
            CheckKind::QuadritCorrected | CheckKind::QuadritPaperPrinted => vec![(4, 4)],
            CheckKind::LuInvariance => vec![(2, 2), (3, 3)],
            CheckKind::MaxValues => (2..=10).map(|d| (d, d)).collect(),
            CheckKind::PeresConsistency => vec![(2, 2), (2, 3)],
        }
    }

    /// max-values is a deterministic one-shot evaluation per dimension.
    fn effective_samples(self, requested: usize) -> usize {
        match self {
            CheckKind::MaxValues => 1,
            _ => requested.max(1),
        }
    }
}

/// One (check, dims) campaign result.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub dims: [usize; 2],
    pub d: usize,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst_index: u64,
    pub worst_case: StateFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub campaign_id: String,
    pub master_seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,d,samples,max_residual,tolerance,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.check, c.d, c.samples, c.max_residual, c.tolerance, c.pass
            ));
        }
        out
    }
}

#[derive(Clone, Copy)]
struct CheckCtx {
    kind: CheckKind,
    m: usize,
    n: usize,
    d: usize,
    check_seed: u64,
}

impl CheckCtx {
    fn sample_seed(&self, index: u64) -> u64 {
        derive_seed(self.check_seed, index)
    }
}

/// Stable per-(check, dims) seed stream inside a campaign.
fn check_stream_id(kind: CheckKind, m: usize, n: usize) -> u64 {
    let kind_index = CheckKind::ALL.iter().position(|k| *k == kind).unwrap() as u64;
    (kind_index << 32) ^ ((m as u64) << 16) ^ n as u64
}

/// Run one check over `samples` seeded samples at the given dimensions.
pub fn run_check(
    kind: CheckKind,
    m: usize,
    n: usize,
    samples: usize,
    master_seed: u64,
    tolerance_override: Option<f64>,
) -> CheckOutcome {
    let ctx = CheckCtx {
        kind,
        m,
        n,
        d: m.min(n),
        check_seed: derive_seed(master_seed, check_stream_id(kind, m, n)),
    };
    let samples = kind.effective_samples(samples);
    let (worst_index, max_residual) = (0..samples as u64)
        .into_par_iter()
        .map(|j| (j, residual(&ctx, j)))
        .reduce(
            || (u64::MAX, f64::NEG_INFINITY),
            |a, b| {
                // Max residual; ties and the identity element lose to the
                // smaller sample index so reductions are order-free.
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    let tolerance = tolerance_override.unwrap_or_else(|| kind.default_tolerance());
    CheckOutcome {
        check: kind.name().to_string(),
        dims: [m, n],
        d: ctx.d,
        samples,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
        worst_index,
        worst_case: payload(&ctx, worst_index),
    }
}

/// Residual of sample `index`; reproducible from (master seed, check, dims,
/// index) alone.
pub fn residual_for(kind: CheckKind, m: usize, n: usize, master_seed: u64, index: u64) -> f64 {
    let ctx = CheckCtx {
        kind,
        m,
        n,
        d: m.min(n),
        check_seed: derive_seed(master_seed, check_stream_id(kind, m, n)),
    };
    residual(&ctx, index)
}

fn uniform_schmidt(d: usize) -> SchmidtForm {
    SchmidtForm::new(vec![1.0 / (d as f64).sqrt(); d]).expect("uniform vector is normalized")
}

fn two_level_schmidt(d: usize) -> SchmidtForm {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = vec![0.0; d];
    k[0] = r;
    k[1] = r;
    SchmidtForm::new(k).expect("two-level vector is normalized")
}

/// Schmidt sample for identity checks: canonical witnesses first, then
/// seeded random vectors.
fn schmidt_sample(ctx: &CheckCtx, index: u64) -> SchmidtForm {
    let anchored = matches!(
        ctx.kind,
        CheckKind::QutritIdentity | CheckKind::QuadritCorrected | CheckKind::QuadritPaperPrinted
    );
    if anchored && index == 0 {
        return uniform_schmidt(ctx.d);
    }
    if anchored && index == 1 {
        return two_level_schmidt(ctx.d);
    }
    random_schmidt_vector(ctx.d, ctx.sample_seed(index)).expect("d ≥ 1")
}

fn residual(ctx: &CheckCtx, index: u64) -> f64 {
    let r = match ctx.kind {
        CheckKind::QubitEquality => {
            let dims = BipartiteDims::new(2, 2).expect("static dims");
            let psi = random_pure_state(dims, ctx.sample_seed(index));
            let k = schmidt_decompose(&psi).expect("2x2 state");
            let c = concurrence_pure(&psi);
            let neg = negativity_schmidt(&k).expect("d = 2");
            let pair = 2.0 * k.coefficients()[0] * k.coefficients()[1];
            (neg - c)
                .abs()
                .max((neg - pair).abs())
                .max((c - pair).abs())
        }
        CheckKind::TracenormVsSchmidt => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            let psi = random_pure_state(dims, ctx.sample_seed(index));
            let from_trace = negativity(&psi.projector()).expect("d ≥ 2");
            let from_schmidt_form =
                negativity_schmidt(&schmidt_decompose(&psi).expect("valid state")).expect("d ≥ 2");
            (from_trace - from_schmidt_form).abs()
        }
        CheckKind::OperatorVsSchmidt => {
            let k = schmidt_sample(ctx, index);
            let a = negativity_operator(&k).expect("d ≥ 2");
            let b = negativity_schmidt(&k).expect("d ≥ 2");
            (a - b).abs()
        }
        CheckKind::Chen => {
            // Violation amount: positive only when the bound fails.
            let k = schmidt_sample(ctx, index);
            (-chen_gap(&k).expect("d ≥ 2")).max(0.0)
        }
        CheckKind::QutritIdentity => qutrit_residual(&schmidt_sample(ctx, index))
            .expect("d = 3")
            .abs(),
        CheckKind::QuadritCorrected => quadrit_residuals(&schmidt_sample(ctx, index))
            .expect("d = 4")
            .corrected
            .abs(),
        CheckKind::QuadritPaperPrinted => quadrit_residuals(&schmidt_sample(ctx, index))
            .expect("d = 4")
            .paper_printed
            .abs(),
        CheckKind::LuInvariance => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            let seed = ctx.sample_seed(index);
            let psi = random_pure_state(dims, derive_seed(seed, 0));
            let u = random_unitary(ctx.m, derive_seed(seed, 1)).expect("m ≥ 1");
            let v = random_unitary(ctx.n, derive_seed(seed, 2)).expect("n ≥ 1");
            let rotated = apply_local_unitaries(&psi, &u, &v).expect("matching dims");
            let ka = schmidt_decompose(&psi).expect("valid state");
            let kb = schmidt_decompose(&rotated).expect("valid state");
            let mut worst = (concurrence_schmidt(&ka) - concurrence_schmidt(&kb)).abs();
            worst = worst.max(
                (negativity_schmidt(&ka).expect("d ≥ 2") - negativity_schmidt(&kb).expect("d ≥ 2"))
                    .abs(),
            );
            let ia = symmetric_invariants(&ka);
            let ib = symmetric_invariants(&kb);
            for (x, y) in ia.values().iter().zip(ib.values()) {
                worst = worst.max((x - y).abs());
            }
            worst
        }
        CheckKind::MaxValues => {
            let k = uniform_schmidt(ctx.d);
            let c_max = (2.0 * (1.0 - 1.0 / ctx.d as f64)).sqrt();
            let c_err = (concurrence_schmidt(&k) - c_max).abs();
            let n_err = (negativity_schmidt(&k).expect("d ≥ 2") - 1.0).abs();
            c_err.max(n_err)
        }
        CheckKind::PeresConsistency => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            let seed = ctx.sample_seed(index);
            let mut rng = SplitMix64::new(derive_seed(seed, 0));
            let rank = 1 + (rng.next_u64() % dims.total() as u64) as usize;
            let rho = random_mixed_state(dims, rank, derive_seed(seed, 1)).expect("valid rank");
            let peres = peres_classify(&rho).expect("valid state");
            let neg = negativity(&rho).expect("d ≥ 2");
            let is_npt = peres.class == PptClass::Npt;
            let mismatch: f64 = if is_npt != (neg > NEGATIVITY_FLOOR) {
                1.0
            } else {
                0.0
            };
            let neg_sum: f64 = peres.negative_eigenvalues.iter().sum::<f64>().abs();
            let identity_gap = (neg - 2.0 * neg_sum / (ctx.d as f64 - 1.0)).abs();
            mismatch.max(identity_gap)
        }
    };
    // A NaN residual must fail loudly, never vanish in the max-reduction.
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}

/// Rebuild the input that produced sample `index` (the worst-case payload).
fn payload(ctx: &CheckCtx, index: u64) -> StateFile {
    match ctx.kind {
        CheckKind::QubitEquality | CheckKind::TracenormVsSchmidt => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            StateFile::from_pure(&random_pure_state(dims, ctx.sample_seed(index)))
        }
        CheckKind::OperatorVsSchmidt
        | CheckKind::Chen
        | CheckKind::QutritIdentity
        | CheckKind::QuadritCorrected
        | CheckKind::QuadritPaperPrinted => {
            StateFile::from_schmidt_form(&schmidt_sample(ctx, index))
        }
        CheckKind::LuInvariance => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            let seed = ctx.sample_seed(index);
            StateFile::from_pure(&random_pure_state(dims, derive_seed(seed, 0)))
        }
        CheckKind::MaxValues => StateFile::from_schmidt_form(&uniform_schmidt(ctx.d)),
        CheckKind::PeresConsistency => {
            let dims = BipartiteDims::new(ctx.m, ctx.n).expect("validated dims");
            let seed = ctx.sample_seed(index);
            let mut rng = SplitMix64::new(derive_seed(seed, 0));
            let rank = 1 + (rng.next_u64() % dims.total() as u64) as usize;
            StateFile::from_mixed(
                &random_mixed_state(dims, rank, derive_seed(seed, 1)).expect("valid rank"),
            )
        }
    }
}

/// Recompute a check residual from a serialized worst-case payload. Returns
/// None for lu-invariance, whose unitaries live in the seed stream rather
/// than the payload (use [`residual_for`] with the recorded index instead).
pub fn reevaluate(kind: CheckKind, payload: &StateFile) -> Option<f64> {
    let value = match (kind, payload.clone()) {
        (CheckKind::QubitEquality, file @ StateFile::Pure { .. }) => {
            let state = file.into_state().ok()?;
            let psi = match state {
                quent_core::State::Pure(psi) => psi,
                _ => return None,
            };
            let k = schmidt_decompose(&psi).ok()?;
            let c = concurrence_pure(&psi);
            let neg = negativity_schmidt(&k).ok()?;
            let pair = 2.0 * k.coefficients()[0] * k.coefficients()[1];
            (neg - c)
                .abs()
                .max((neg - pair).abs())
                .max((c - pair).abs())
        }
        (CheckKind::TracenormVsSchmidt, file @ StateFile::Pure { .. }) => {
            let psi = match file.into_state().ok()? {
                quent_core::State::Pure(psi) => psi,
                _ => return None,
            };
            let from_trace = negativity(&psi.projector()).ok()?;
            let from_schmidt_form = negativity_schmidt(&schmidt_decompose(&psi).ok()?).ok()?;
            (from_trace - from_schmidt_form).abs()
        }
        (CheckKind::OperatorVsSchmidt, StateFile::Schmidt { k, .. }) => {
            let k = SchmidtForm::new(k).ok()?;
            (negativity_operator(&k).ok()? - negativity_schmidt(&k).ok()?).abs()
        }
        (CheckKind::Chen, StateFile::Schmidt { k, .. }) => {
            let k = SchmidtForm::new(k).ok()?;
            (-chen_gap(&k).ok()?).max(0.0)
        }
        (CheckKind::QutritIdentity, StateFile::Schmidt { k, .. }) => {
            qutrit_residual(&SchmidtForm::new(k).ok()?).ok()?.abs()
        }
        (CheckKind::QuadritCorrected, StateFile::Schmidt { k, .. }) => {
            quadrit_residuals(&SchmidtForm::new(k).ok()?)
                .ok()?
                .corrected
                .abs()
        }
        (CheckKind::QuadritPaperPrinted, StateFile::Schmidt { k, .. }) => {
            quadrit_residuals(&SchmidtForm::new(k).ok()?)
                .ok()?
                .paper_printed
                .abs()
        }
        (CheckKind::MaxValues, StateFile::Schmidt { k, .. }) => {
            let k = SchmidtForm::new(k).ok()?;
            let d = k.d();
            let c_max = (2.0 * (1.0 - 1.0 / d as f64)).sqrt();
            (concurrence_schmidt(&k) - c_max)
                .abs()
                .max((negativity_schmidt(&k).ok()? - 1.0).abs())
        }
        (CheckKind::PeresConsistency, file @ StateFile::Mixed { .. }) => {
            let rho = match file.into_state().ok()? {
                quent_core::State::Mixed(rho) => rho,
                _ => return None,
            };
            let d = rho.dims().d();
            let peres = peres_classify(&rho).ok()?;
            let neg = negativity(&rho).ok()?;
            let mismatch: f64 = if (peres.class == PptClass::Npt) != (neg > NEGATIVITY_FLOOR) {
                1.0
            } else {
                0.0
            };
            let neg_sum: f64 = peres.negative_eigenvalues.iter().sum::<f64>().abs();
            mismatch.max((neg - 2.0 * neg_sum / (d as f64 - 1.0)).abs())
        }
        _ => return None,
    };
    Some(value)
}

/// Expand a check selection against an optional --dims filter.
pub fn dims_for(kind: CheckKind, user_dims: Option<&[(usize, usize)]>) -> Vec<(usize, usize)> {
    match user_dims {
        Some(dims) if !kind.dims_fixed() => dims.to_vec(),
        _ => kind.default_dims(),
    }
}
