//! Planar five-link biped: torso, two thighs, two shanks, point feet.
//!
//! The stance foot is pinned to the ground, giving five continuous degrees
//! of freedom (torso pitch plus four joint angles). Walking alternates
//! continuous pinned dynamics with instantaneous plastic impacts at swing
//! foot touchdown, after which the legs swap roles.

mod dynamics;
mod impact;
pub(crate) mod kinematics;

pub use dynamics::{continuous_dynamics, electrical_power, step_integrate, Derivative};
pub use impact::{
    detect_fall, detect_touchdown, impact_map, touchdown_state, FallThresholds, HybridEvent,
};

use nalgebra::{SVector, Vector2};
use thiserror::Error;

/// Generalized coordinate layout shared by `RobotState::q` and `RobotState::qd`.
pub const IDX_STANCE_X: usize = 0;
pub const IDX_PITCH: usize = 1;
pub const IDX_STANCE_HIP: usize = 2;
pub const IDX_STANCE_KNEE: usize = 3;
pub const IDX_SWING_HIP: usize = 4;
pub const IDX_SWING_KNEE: usize = 5;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("mass matrix factorization failed (singular configuration)")]
    MassMatrixSingular,
    #[error("impact matrix solve failed")]
    ImpactSolveFailed,
    #[error("integration produced a non-finite state")]
    NonFiniteState,
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("invalid model parameter: {0}")]
    InvalidModel(&'static str),
}

/// Physical parameters of the biped. All links are modeled as rigid bodies
/// with a center of mass at `*_com` meters from the proximal joint (the hip
/// for torso and thighs, the knee for shanks).
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    pub torso_mass: f64,
    pub torso_length: f64,
    pub torso_com: f64,
    pub torso_inertia: f64,
    pub thigh_mass: f64,
    pub thigh_length: f64,
    pub thigh_com: f64,
    pub thigh_inertia: f64,
    pub shank_mass: f64,
    pub shank_length: f64,
    pub shank_com: f64,
    pub shank_inertia: f64,
    pub gravity: f64,
    /// Saturation bound applied to every joint torque, N·m.
    pub torque_limit: f64,
    /// Copper-loss coefficient of the electrical power model, W/(N·m)².
    pub copper_loss: f64,
}

impl Default for RobotModel {
    fn default() -> Self {
        // Child-scale planar biped; inertias are uniform-rod values m*l^2/12.
        Self {
            torso_mass: 5.0,
            torso_length: 0.5,
            torso_com: 0.2,
            torso_inertia: 5.0 * 0.5 * 0.5 / 12.0,
            thigh_mass: 1.0,
            thigh_length: 0.4,
            thigh_com: 0.2,
            thigh_inertia: 1.0 * 0.4 * 0.4 / 12.0,
            shank_mass: 0.5,
            shank_length: 0.4,
            shank_com: 0.2,
            shank_inertia: 0.5 * 0.4 * 0.4 / 12.0,
            gravity: 9.81,
            torque_limit: 30.0,
            copper_loss: 0.1,
        }
    }
}

impl RobotModel {
    pub fn total_mass(&self) -> f64 {
        self.torso_mass + 2.0 * (self.thigh_mass + self.shank_mass)
    }

    pub fn leg_length(&self) -> f64 {
        self.thigh_length + self.shank_length
    }

    /// Hip height when standing with both legs straight and vertical.
    pub fn standing_hip_height(&self) -> f64 {
        self.leg_length()
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive = [
            (self.torso_mass, "torso_mass"),
            (self.torso_length, "torso_length"),
            (self.torso_inertia, "torso_inertia"),
            (self.thigh_mass, "thigh_mass"),
            (self.thigh_length, "thigh_length"),
            (self.thigh_inertia, "thigh_inertia"),
            (self.shank_mass, "shank_mass"),
            (self.shank_length, "shank_length"),
            (self.shank_inertia, "shank_inertia"),
            (self.gravity, "gravity"),
            (self.torque_limit, "torque_limit"),
        ];
        for (v, name) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(DynamicsError::InvalidModel(name));
            }
        }
        if self.copper_loss < 0.0 || !self.copper_loss.is_finite() {
            return Err(DynamicsError::InvalidModel("copper_loss"));
        }
        if self.torso_com < 0.0 || self.torso_com > self.torso_length {
            return Err(DynamicsError::InvalidModel("torso_com"));
        }
        if self.thigh_com < 0.0 || self.thigh_com > self.thigh_length {
            return Err(DynamicsError::InvalidModel("thigh_com"));
        }
        if self.shank_com < 0.0 || self.shank_com > self.shank_length {
            return Err(DynamicsError::InvalidModel("shank_com"));
        }
        Ok(())
    }
}

/// Which physical leg is currently pinned to the ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StanceLeg {
    Left,
    Right,
}

impl StanceLeg {
    pub fn other(self) -> Self {
        match self {
            StanceLeg::Left => StanceLeg::Right,
            StanceLeg::Right => StanceLeg::Left,
        }
    }
}

/// Full continuous state of the biped plus stance bookkeeping.
///
/// `q = [x_stance_foot, torso_pitch, stance_hip, stance_knee, swing_hip, swing_knee]`,
/// with hip angles relative to the torso and knee flexion positive
/// (anthropomorphic: flexion moves the foot backward relative to the thigh).
/// `qd[0]` is identically zero while the stance foot is pinned.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub q: SVector<f64, 6>,
    pub qd: SVector<f64, 6>,
    pub stance: StanceLeg,
    /// Simulation time, s.
    pub t: f64,
    /// Accumulated electrical energy, J.
    pub e_elec: f64,
    /// Accumulated forward displacement of the hip pivot, m.
    pub hip_travel: f64,
}

impl RobotState {
    pub fn new(q: SVector<f64, 6>, qd: SVector<f64, 6>, stance: StanceLeg) -> Self {
        Self {
            q,
            qd,
            stance,
            t: 0.0,
            e_elec: 0.0,
            hip_travel: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().all(|v| v.is_finite())
            && self.qd.iter().all(|v| v.is_finite())
            && self.t.is_finite()
            && self.e_elec.is_finite()
            && self.hip_travel.is_finite()
    }

    /// Horizontal position of the hip pivot in world coordinates.
    pub fn hip_position(&self, model: &RobotModel) -> Vector2<f64> {
        kinematics::joint_points(model, &self.q).hip
    }
}

/// Joint torques after saturation, ordered stance hip, stance knee,
/// swing hip, swing knee.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotorCommand {
    pub stance_hip: f64,
    pub stance_knee: f64,
    pub swing_hip: f64,
    pub swing_knee: f64,
}

impl MotorCommand {
    pub fn as_array(&self) -> [f64; 4] {
        [self.stance_hip, self.stance_knee, self.swing_hip, self.swing_knee]
    }

    pub fn saturated(&self, limit: f64) -> Self {
        Self {
            stance_hip: self.stance_hip.clamp(-limit, limit),
            stance_knee: self.stance_knee.clamp(-limit, limit),
            swing_hip: self.swing_hip.clamp(-limit, limit),
            swing_knee: self.swing_knee.clamp(-limit, limit),
        }
    }
}
