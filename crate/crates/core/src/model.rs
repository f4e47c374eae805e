//! The coupled dengue / Wolbachia compartmental model.
//!
//! The state has 18 compartments: four human classes (susceptible, infected,
//! healthcare-seeking, recovered) and fourteen vector classes split by sex,
//! life stage, pregnancy, Wolbachia status and dengue status. Releases of
//! Wolbachia-infected aquatic-stage mosquitoes enter only the `A_w` equation.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of compartments in the state vector.
pub const DIM: usize = 18;

/// Compartments in their fixed serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compartment {
    Sh,
    Ih,
    Jh,
    Rh,
    MvW,
    Mv,
    SvfW,
    Svf,
    SvfpW,
    Svfp,
    SvfpS,
    IvfW,
    Ivf,
    Ivfp,
    IvfpS,
    IvfpW,
    AW,
    A,
}

impl Compartment {
    pub const ALL: [Compartment; DIM] = [
        Compartment::Sh,
        Compartment::Ih,
        Compartment::Jh,
        Compartment::Rh,
        Compartment::MvW,
        Compartment::Mv,
        Compartment::SvfW,
        Compartment::Svf,
        Compartment::SvfpW,
        Compartment::Svfp,
        Compartment::SvfpS,
        Compartment::IvfW,
        Compartment::Ivf,
        Compartment::Ivfp,
        Compartment::IvfpS,
        Compartment::IvfpW,
        Compartment::AW,
        Compartment::A,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    /// Column / key name used in scenario documents and CSV headers.
    pub const fn name(self) -> &'static str {
        match self {
            Compartment::Sh => "S_h",
            Compartment::Ih => "I_h",
            Compartment::Jh => "J_h",
            Compartment::Rh => "R_h",
            Compartment::MvW => "M_v_w",
            Compartment::Mv => "M_v",
            Compartment::SvfW => "S_vf_w",
            Compartment::Svf => "S_vf",
            Compartment::SvfpW => "S_vfp_w",
            Compartment::Svfp => "S_vfp",
            Compartment::SvfpS => "S_vfp_s",
            Compartment::IvfW => "I_vf_w",
            Compartment::Ivf => "I_vf",
            Compartment::Ivfp => "I_vfp",
            Compartment::IvfpS => "I_vfp_s",
            Compartment::IvfpW => "I_vfp_w",
            Compartment::AW => "A_w",
            Compartment::A => "A",
        }
    }

    pub fn from_name(name: &str) -> Option<Compartment> {
        Compartment::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn is_human(self) -> bool {
        self.index() < 4
    }
}

impl fmt::Display for Compartment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Populations of all compartments at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector(pub [f64; DIM]);

/// Rates of change of every compartment, in the same order as [`StateVector`].
pub type StateDerivative = StateVector;

impl StateVector {
    pub const ZERO: StateVector = StateVector([0.0; DIM]);

    pub fn from_fn(mut f: impl FnMut(Compartment) -> f64) -> Self {
        let mut out = [0.0; DIM];
        for c in Compartment::ALL {
            out[c.index()] = f(c);
        }
        StateVector(out)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn human_total(&self) -> f64 {
        self[Compartment::Sh] + self[Compartment::Ih] + self[Compartment::Jh] + self[Compartment::Rh]
    }

    pub fn aquatic_total(&self) -> f64 {
        self[Compartment::A] + self[Compartment::AW]
    }

    pub fn male_total(&self) -> f64 {
        self[Compartment::Mv] + self[Compartment::MvW]
    }

    pub fn nonpregnant_female_total(&self) -> f64 {
        self[Compartment::Svf] + self[Compartment::SvfW] + self[Compartment::Ivf] + self[Compartment::IvfW]
    }

    pub fn pregnant_female_total(&self) -> f64 {
        self[Compartment::Svfp]
            + self[Compartment::SvfpW]
            + self[Compartment::SvfpS]
            + self[Compartment::Ivfp]
            + self[Compartment::IvfpW]
            + self[Compartment::IvfpS]
    }

    /// Dengue-infected vectors without Wolbachia (`I_vf + I_vfp`).
    pub fn infected_vectors(&self) -> f64 {
        self[Compartment::Ivf] + self[Compartment::Ivfp]
    }

    /// Dengue-infected vectors carrying Wolbachia, sterile-pregnant included.
    pub fn infected_vectors_wolbachia(&self) -> f64 {
        self[Compartment::IvfW] + self[Compartment::IvfpW] + self[Compartment::IvfpS]
    }

    pub fn one_norm(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Multiplies every compartment by `factor`.
    pub fn scale(&self, factor: f64) -> Result<StateVector> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor must be positive and finite, got {factor}")));
        }
        Ok(StateVector(self.0.map(|v| v * factor)))
    }

    pub(crate) fn axpy(&self, a: f64, x: &StateVector) -> StateVector {
        let mut out = self.0;
        for (o, xi) in out.iter_mut().zip(x.0.iter()) {
            *o += a * xi;
        }
        StateVector(out)
    }
}

impl Index<Compartment> for StateVector {
    type Output = f64;
    fn index(&self, c: Compartment) -> &f64 {
        &self.0[c.index()]
    }
}

impl IndexMut<Compartment> for StateVector {
    fn index_mut(&mut self, c: Compartment) -> &mut f64 {
        &mut self.0[c.index()]
    }
}

/// Free function form of [`StateVector::scale`].
pub fn scale_state(state: &StateVector, factor: f64) -> Result<StateVector> {
    state.scale(factor)
}

/// Rate constants of the model. Rates are per day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub b_h: f64,
    pub mu_h: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
    #[serde(rename = "B")]
    pub biting_rate: f64,
    pub c_hv: f64,
    pub c_vh: f64,
    pub c_vh_w: f64,
    pub sigma: f64,
    pub phi: f64,
    pub phi_w: f64,
    pub v_w: f64,
    pub v: f64,
    pub psi: f64,
    pub b_m: f64,
    pub b_f: f64,
    pub mu_a: f64,
    pub mu_f: f64,
    pub mu_f_w: f64,
    pub mu_m: f64,
    pub mu_m_w: f64,
    /// Aquatic-stage carrying capacity (mosquitoes).
    pub k_a: f64,
}

impl ModelParameters {
    /// Rate constants of the reference parameterization with the given
    /// carrying capacity.
    pub fn reference(k_a: f64) -> Self {
        ModelParameters {
            b_h: 0.00085 / 7.0,
            mu_h: 0.00045 / 7.0,
            alpha: 0.2,
            gamma: 0.5 / 7.0,
            theta: 1.0 / 7.0,
            biting_rate: 1.0 / 7.0,
            c_hv: 0.75,
            c_vh: 0.375,
            c_vh_w: 0.0,
            sigma: 1.0,
            phi: 13.0,
            phi_w: 11.0,
            v_w: 0.95,
            v: 0.05,
            psi: 1.0 / 8.75,
            b_m: 0.5,
            b_f: 0.5,
            mu_a: 0.02,
            mu_f: 1.0 / 17.5,
            mu_f_w: 1.0 / 15.8,
            mu_m: 1.0 / 10.5,
            mu_m_w: 1.0 / 10.5,
            k_a,
        }
    }

    /// Named view of every field, in declaration order.
    pub fn named_values(&self) -> [(&'static str, f64); 23] {
        [
            ("b_h", self.b_h),
            ("mu_h", self.mu_h),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("B", self.biting_rate),
            ("c_hv", self.c_hv),
            ("c_vh", self.c_vh),
            ("c_vh_w", self.c_vh_w),
            ("sigma", self.sigma),
            ("phi", self.phi),
            ("phi_w", self.phi_w),
            ("v_w", self.v_w),
            ("v", self.v),
            ("psi", self.psi),
            ("b_m", self.b_m),
            ("b_f", self.b_f),
            ("mu_a", self.mu_a),
            ("mu_f", self.mu_f),
            ("mu_f_w", self.mu_f_w),
            ("mu_m", self.mu_m),
            ("mu_m_w", self.mu_m_w),
            ("k_a", self.k_a),
        ]
    }

    /// Checks signs, probability ranges, the sum-to-one pairs and the death
    /// rate ordering the invariance bounds depend on.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, value) in self.named_values() {
            if !value.is_finite() || value < 0.0 {
                problems.push(format!("{name} must be finite and non-negative (got {value})"));
            }
        }
        for (name, value) in [
            ("alpha", self.alpha),
            ("c_hv", self.c_hv),
            ("c_vh", self.c_vh),
            ("c_vh_w", self.c_vh_w),
            ("v_w", self.v_w),
            ("v", self.v),
            ("b_m", self.b_m),
            ("b_f", self.b_f),
        ] {
            if value > 1.0 {
                problems.push(format!("{name} must lie in [0, 1] (got {value})"));
            }
        }
        if (self.v_w + self.v - 1.0).abs() > 1e-12 {
            problems.push(format!("v_w + v must equal 1 (got {})", self.v_w + self.v));
        }
        if (self.b_m + self.b_f - 1.0).abs() > 1e-12 {
            problems.push(format!("b_m + b_f must equal 1 (got {})", self.b_m + self.b_f));
        }
        if self.mu_f > self.mu_f_w {
            problems.push(format!("mu_f ({}) must not exceed mu_f_w ({})", self.mu_f, self.mu_f_w));
        }
        if self.mu_m > self.mu_m_w {
            problems.push(format!("mu_m ({}) must not exceed mu_m_w ({})", self.mu_m, self.mu_m_w));
        }
        if !(self.k_a > 0.0) {
            problems.push(format!("k_a must be positive (got {})", self.k_a));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Largest release rate that keeps the aquatic bound forward invariant.
    pub fn max_release_rate(&self) -> f64 {
        (self.psi + self.mu_a) * self.k_a
    }

    /// Upper limits of the invariant domain: (aquatic, males, non-pregnant
    /// females, pregnant females).
    pub fn vector_bounds(&self) -> [f64; 4] {
        let k = self.k_a;
        [
            k,
            self.b_m * self.psi / self.mu_m * k,
            self.b_f * self.psi / (self.sigma + self.mu_f) * k,
            self.b_f * self.sigma / (self.sigma + self.mu_f) * self.psi / self.mu_f * k,
        ]
    }
}

/// Population totals and mating / oviposition quantities derived from a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedAggregates {
    pub n_h: f64,
    pub i_v: f64,
    pub i_v_w: f64,
    /// Probability that a mating male is Wolbachia-free.
    pub m: f64,
    pub m_w: f64,
    pub eta: f64,
    pub eta_w: f64,
}

pub fn derived_aggregates(state: &StateVector, params: &ModelParameters) -> Result<DerivedAggregates> {
    let n_h = state.human_total();
    if !(n_h > 0.0) {
        return Err(Error::Domain(format!("human population is extinct (N_h = {n_h})")));
    }
    let males = state.male_total();
    // No males at all: treat as the Wolbachia-free limit.
    let m = if males > 0.0 { state[Compartment::Mv] / males } else { 1.0 };
    let logistic = 1.0 - state.aquatic_total() / params.k_a;
    Ok(DerivedAggregates {
        n_h,
        i_v: state.infected_vectors(),
        i_v_w: state.infected_vectors_wolbachia(),
        m,
        m_w: 1.0 - m,
        eta: params.phi * logistic,
        eta_w: params.phi_w * logistic,
    })
}

/// Right-hand side of the ODE system with release rate `release` entering the
/// Wolbachia aquatic compartment.
pub fn rhs(_t: f64, state: &StateVector, params: &ModelParameters, release: f64) -> Result<StateDerivative> {
    use Compartment::*;
    let p = params;
    let agg = derived_aggregates(state, p)?;
    let x = state;

    let force_h = p.biting_rate * (p.c_vh * agg.i_v + p.c_vh_w * agg.i_v_w) / agg.n_h;
    let force_v = p.biting_rate * p.c_hv * x[Ih] / agg.n_h;

    let mut d = StateVector::ZERO;
    d[Sh] = p.b_h * agg.n_h - (force_h + p.mu_h) * x[Sh];
    d[Ih] = (1.0 - p.alpha) * force_h * x[Sh] - (p.mu_h + p.gamma) * x[Ih];
    d[Jh] = p.alpha * force_h * x[Sh] - (p.mu_h + p.theta) * x[Jh];
    d[Rh] = p.gamma * x[Ih] + p.theta * x[Jh] - p.mu_h * x[Rh];

    d[MvW] = p.psi * p.b_m * x[AW] - p.mu_m_w * x[MvW];
    d[Mv] = p.psi * p.b_m * x[A] - p.mu_m * x[Mv];

    d[SvfW] = p.psi * p.b_f * x[AW] - (force_v + p.sigma + p.mu_f_w) * x[SvfW];
    d[Svf] = p.psi * p.b_f * x[A] - (force_v + p.sigma + p.mu_f) * x[Svf];
    d[SvfpW] = p.sigma * x[SvfW] - (force_v + p.mu_f_w) * x[SvfpW];
    d[Svfp] = p.sigma * agg.m * x[Svf] - (force_v + p.mu_f) * x[Svfp];
    d[SvfpS] = p.sigma * agg.m_w * x[Svf] - (force_v + p.mu_f) * x[SvfpS];
    d[IvfW] = force_v * x[SvfW] - (p.sigma + p.mu_f_w) * x[IvfW];
    d[Ivf] = force_v * x[Svf] - (p.sigma + p.mu_f) * x[Ivf];
    d[Ivfp] = p.sigma * agg.m * x[Ivf] + force_v * x[Svfp] - p.mu_f * x[Ivfp];
    d[IvfpS] = p.sigma * agg.m_w * x[Ivf] + force_v * x[SvfpS] - p.mu_f_w * x[IvfpS];
    d[IvfpW] = p.sigma * x[IvfW] + force_v * x[SvfpW] - p.mu_f_w * x[IvfpW];

    let laying_w = x[SvfpW] + x[IvfpW];
    d[AW] = release + agg.eta_w * p.v_w * laying_w - (p.psi + p.mu_a) * x[AW];
    d[A] = agg.eta * (x[Svfp] + x[Ivfp]) + agg.eta_w * p.v * laying_w - (p.psi + p.mu_a) * x[A];

    if let Some(c) = Compartment::ALL.into_iter().find(|c| !d[*c].is_finite()) {
        return Err(Error::Computation(format!("non-finite derivative in compartment {c}")));
    }
    Ok(d)
}

/// Dense 18x18 matrix, row-major: `m[i][j] = d f_i / d x_j`.
pub type Matrix = [[f64; DIM]; DIM];

/// Analytic Jacobian of [`rhs`] with respect to the state.
///
/// Requires `N_h > 0` and at least one adult male so that the mating
/// probabilities are differentiable.
pub fn jacobian(state: &StateVector, params: &ModelParameters) -> Result<Matrix> {
    use Compartment::*;
    let p = params;
    let x = state;
    let agg = derived_aggregates(state, p)?;
    let males = state.male_total();
    if !(males > 0.0) {
        return Err(Error::Domain("no adult males: mating probabilities are not differentiable".into()));
    }
    let n = agg.n_h;
    let q = p.biting_rate * (p.c_vh * agg.i_v + p.c_vh_w * agg.i_v_w);
    let force_h = q / n;
    let force_v = p.biting_rate * p.c_hv * x[Ih] / n;

    // Gradients of the nonlinear building blocks.
    let mut g_force_h = [0.0; DIM];
    let mut g_force_v = [0.0; DIM];
    for c in [Sh, Ih, Jh, Rh] {
        g_force_h[c.index()] = -q / (n * n);
        g_force_v[c.index()] = -p.biting_rate * p.c_hv * x[Ih] / (n * n);
    }
    g_force_v[Ih.index()] += p.biting_rate * p.c_hv / n;
    for c in [Ivf, Ivfp] {
        g_force_h[c.index()] = p.biting_rate * p.c_vh / n;
    }
    for c in [IvfW, IvfpW, IvfpS] {
        g_force_h[c.index()] = p.biting_rate * p.c_vh_w / n;
    }
    let mut g_m = [0.0; DIM];
    g_m[Mv.index()] = x[MvW] / (males * males);
    g_m[MvW.index()] = -x[Mv] / (males * males);
    let g_m_w = g_m.map(|v| -v);
    let mut g_eta = [0.0; DIM];
    let mut g_eta_w = [0.0; DIM];
    for c in [A, AW] {
        g_eta[c.index()] = -p.phi / p.k_a;
        g_eta_w[c.index()] = -p.phi_w / p.k_a;
    }

    let mut jac = [[0.0; DIM]; DIM];
    let row = |c: Compartment| c.index();

    // Humans.
    for h in [Sh, Ih, Jh, Rh] {
        jac[row(Sh)][h.index()] += p.b_h;
    }
    for j in 0..DIM {
        jac[row(Sh)][j] -= x[Sh] * g_force_h[j];
        jac[row(Ih)][j] += (1.0 - p.alpha) * x[Sh] * g_force_h[j];
        jac[row(Jh)][j] += p.alpha * x[Sh] * g_force_h[j];
    }
    jac[row(Sh)][Sh.index()] -= force_h + p.mu_h;
    jac[row(Ih)][Sh.index()] += (1.0 - p.alpha) * force_h;
    jac[row(Ih)][Ih.index()] -= p.mu_h + p.gamma;
    jac[row(Jh)][Sh.index()] += p.alpha * force_h;
    jac[row(Jh)][Jh.index()] -= p.mu_h + p.theta;
    jac[row(Rh)][Ih.index()] = p.gamma;
    jac[row(Rh)][Jh.index()] = p.theta;
    jac[row(Rh)][Rh.index()] = -p.mu_h;

    // Adult males.
    jac[row(MvW)][AW.index()] = p.psi * p.b_m;
    jac[row(MvW)][MvW.index()] = -p.mu_m_w;
    jac[row(Mv)][A.index()] = p.psi * p.b_m;
    jac[row(Mv)][Mv.index()] = -p.mu_m;

    // Every female row loses (or gains) force_v times some compartment.
    let force_v_terms: [(Compartment, Compartment, f64); 10] = [
        (SvfW, SvfW, -1.0),
        (Svf, Svf, -1.0),
        (SvfpW, SvfpW, -1.0),
        (Svfp, Svfp, -1.0),
        (SvfpS, SvfpS, -1.0),
        (IvfW, SvfW, 1.0),
        (Ivf, Svf, 1.0),
        (Ivfp, Svfp, 1.0),
        (IvfpS, SvfpS, 1.0),
        (IvfpW, SvfpW, 1.0),
    ];
    for (r, c, sign) in force_v_terms {
        for j in 0..DIM {
            jac[row(r)][j] += sign * x[c] * g_force_v[j];
        }
        jac[row(r)][c.index()] += sign * force_v;
    }

    jac[row(SvfW)][AW.index()] += p.psi * p.b_f;
    jac[row(SvfW)][SvfW.index()] -= p.sigma + p.mu_f_w;
    jac[row(Svf)][A.index()] += p.psi * p.b_f;
    jac[row(Svf)][Svf.index()] -= p.sigma + p.mu_f;
    jac[row(SvfpW)][SvfW.index()] += p.sigma;
    jac[row(SvfpW)][SvfpW.index()] -= p.mu_f_w;
    jac[row(Svfp)][Svf.index()] += p.sigma * agg.m;
    jac[row(Svfp)][Svfp.index()] -= p.mu_f;
    jac[row(SvfpS)][Svf.index()] += p.sigma * agg.m_w;
    jac[row(SvfpS)][SvfpS.index()] -= p.mu_f;
    jac[row(IvfW)][IvfW.index()] -= p.sigma + p.mu_f_w;
    jac[row(Ivf)][Ivf.index()] -= p.sigma + p.mu_f;
    jac[row(Ivfp)][Ivf.index()] += p.sigma * agg.m;
    jac[row(Ivfp)][Ivfp.index()] -= p.mu_f;
    jac[row(IvfpS)][Ivf.index()] += p.sigma * agg.m_w;
    jac[row(IvfpS)][IvfpS.index()] -= p.mu_f_w;
    jac[row(IvfpW)][IvfW.index()] += p.sigma;
    jac[row(IvfpW)][IvfpW.index()] -= p.mu_f_w;
    for j in 0..DIM {
        jac[row(Svfp)][j] += p.sigma * x[Svf] * g_m[j];
        jac[row(SvfpS)][j] += p.sigma * x[Svf] * g_m_w[j];
        jac[row(Ivfp)][j] += p.sigma * x[Ivf] * g_m[j];
        jac[row(IvfpS)][j] += p.sigma * x[Ivf] * g_m_w[j];
    }

    // Aquatic stage.
    let laying_w = x[SvfpW] + x[IvfpW];
    let laying = x[Svfp] + x[Ivfp];
    for j in 0..DIM {
        jac[row(AW)][j] += p.v_w * laying_w * g_eta_w[j];
        jac[row(A)][j] += laying * g_eta[j] + p.v * laying_w * g_eta_w[j];
    }
    for c in [SvfpW, IvfpW] {
        jac[row(AW)][c.index()] += agg.eta_w * p.v_w;
        jac[row(A)][c.index()] += agg.eta_w * p.v;
    }
    for c in [Svfp, Ivfp] {
        jac[row(A)][c.index()] += agg.eta;
    }
    jac[row(AW)][AW.index()] -= p.psi + p.mu_a;
    jac[row(A)][A.index()] -= p.psi + p.mu_a;

    Ok(jac)
}

/// Which bound of the invariant domain a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainBound {
    NonNegative,
    Aquatic,
    Males,
    NonPregnantFemales,
    PregnantFemales,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub bound: DomainBound,
    pub value: f64,
    pub limit: f64,
    /// `limit - value`; negative when violated. For the non-negativity check
    /// this is the smallest compartment value.
    pub slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainReport {
    pub checks: Vec<BoundCheck>,
}

impl DomainReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, bound: DomainBound) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.bound == bound)
    }
}

/// Reports membership of `state` in the forward-invariant domain. Upper
/// bounds pass when `value <= limit * (1 + tol)`; non-negativity passes when
/// every compartment is at least `-tol * ||state||_1`.
pub fn in_domain(state: &StateVector, params: &ModelParameters, tol: f64) -> DomainReport {
    let [aq, males, nonpreg, preg] = params.vector_bounds();
    let min_value = state.0.iter().copied().fold(f64::INFINITY, f64::min);
    let floor = -tol * state.one_norm();
    let mut checks = vec![BoundCheck {
        bound: DomainBound::NonNegative,
        value: min_value,
        limit: 0.0,
        slack: min_value,
        passed: min_value >= floor,
    }];
    for (bound, value, limit) in [
        (DomainBound::Aquatic, state.aquatic_total(), aq),
        (DomainBound::Males, state.male_total(), males),
        (DomainBound::NonPregnantFemales, state.nonpregnant_female_total(), nonpreg),
        (DomainBound::PregnantFemales, state.pregnant_female_total(), preg),
    ] {
        checks.push(BoundCheck {
            bound,
            value,
            limit,
            slack: limit - value,
            passed: value <= limit * (1.0 + tol),
        });
    }
    DomainReport { checks }
}

/// Default aquatic carrying capacity as a multiple of the initial aquatic
/// population. Smaller multiples put the reference female populations outside
/// the invariant region.
pub const DEFAULT_CARRYING_CAPACITY_FACTOR: f64 = 15.0;

/// Reference parameters with `K_a` set from `initial` by the default factor.
pub fn reference_parameters_for(initial: &StateVector) -> ModelParameters {
    ModelParameters::reference(DEFAULT_CARRYING_CAPACITY_FACTOR * initial.aquatic_total())
}

/// Initial populations of the reference (national-scale) scenario.
pub fn reference_initial_state() -> StateVector {
    use Compartment::*;
    let mut s = StateVector::ZERO;
    s[Sh] = 50_000_000.0;
    s[Ih] = 15_000.0;
    s[Jh] = 1_500.0;
    s[Rh] = 5_000.0;
    s[Mv] = 10_000_000.0;
    s[Svf] = 7_500_000.0;
    s[Svfp] = 2_500_000.0;
    s[Ivf] = 1_500_000.0;
    s[Ivfp] = 500_000.0;
    s[A] = 25_000_000.0;
    s
}
