//! Continuous pinned dynamics `M(q) q'' + b(q, q') + G(q) = B tau` and the
//! RK4 integrator with zero-order-hold torques.

use nalgebra::{SMatrix, SVector};

use super::kinematics::{self, AngVec, NA};
use super::{DynamicsError, MotorCommand, RobotModel, RobotState};

/// State time-derivative plus the instantaneous electrical power draw.
#[derive(Debug, Clone)]
pub struct Derivative {
    pub qd: SVector<f64, 6>,
    pub qdd: SVector<f64, 6>,
    pub power: f64,
}

/// Electrical power of the four motors: positive mechanical work plus a
/// Joule-type `c_loss * tau^2` term, no regeneration.
pub fn electrical_power(model: &RobotModel, cmd: &MotorCommand, joint_vel: [f64; 4]) -> f64 {
    cmd.as_array()
        .iter()
        .zip(joint_vel.iter())
        .map(|(&tau, &w)| (tau * w).max(0.0) + model.copper_loss * tau * tau)
        .sum()
}

/// Solves the manipulator equation for the pinned chain.
///
/// Torques are applied as given (callers saturate via the controller). The
/// stance-foot coordinate is carried along with zero derivative.
pub fn continuous_dynamics(
    model: &RobotModel,
    state: &RobotState,
    cmd: &MotorCommand,
) -> Result<Derivative, DynamicsError> {
    let a: AngVec = state.q.fixed_rows::<NA>(1).into_owned();
    let ad: AngVec = state.qd.fixed_rows::<NA>(1).into_owned();

    let mut mass = SMatrix::<f64, NA, NA>::zeros();
    let mut rhs = SVector::<f64, NA>::zeros();

    for link in &kinematics::link_table(model) {
        let jac = kinematics::link_jacobian(link, &a);
        mass += link.mass * jac.transpose() * jac;
        let spin = SVector::<f64, NA>::from_column_slice(&link.spin);
        mass += link.inertia * spin * spin.transpose();

        // bias force m*J^T*(Jdot*ad) and gravity m*g*dy/dq (= m*g * y-row of J)
        let bias = kinematics::link_bias_accel(link, &a, &ad);
        rhs -= link.mass * jac.transpose() * bias;
        rhs -= link.mass * model.gravity * jac.row(1).transpose();
    }

    // generalized forces: relative joint coordinates take the raw torques
    rhs[1] += cmd.stance_hip;
    rhs[2] += cmd.stance_knee;
    rhs[3] += cmd.swing_hip;
    rhs[4] += cmd.swing_knee;

    let chol = mass.cholesky().ok_or(DynamicsError::MassMatrixSingular)?;
    let add = chol.solve(&rhs);

    let mut qdd = SVector::<f64, 6>::zeros();
    qdd.fixed_rows_mut::<NA>(1).copy_from(&add);
    let mut qd = state.qd;
    qd[0] = 0.0;

    let joint_vel = [state.qd[2], state.qd[3], state.qd[4], state.qd[5]];
    let power = electrical_power(model, cmd, joint_vel);

    Ok(Derivative { qd, qdd, power })
}

/// One classical RK4 step with torques held constant; electrical energy is
/// integrated with the same quadrature.
pub fn step_integrate(
    model: &RobotModel,
    state: &RobotState,
    cmd: &MotorCommand,
    dt: f64,
) -> Result<RobotState, DynamicsError> {
    if !(dt > 0.0) {
        return Err(DynamicsError::NonPositiveStep(dt));
    }

    let eval = |q: SVector<f64, 6>, qd: SVector<f64, 6>| -> Result<Derivative, DynamicsError> {
        let probe = RobotState { q, qd, ..state.clone() };
        continuous_dynamics(model, &probe, cmd)
    };

    let k1 = eval(state.q, state.qd)?;
    let k2 = eval(state.q + 0.5 * dt * k1.qd, state.qd + 0.5 * dt * k1.qdd)?;
    let k3 = eval(state.q + 0.5 * dt * k2.qd, state.qd + 0.5 * dt * k2.qdd)?;
    let k4 = eval(state.q + dt * k3.qd, state.qd + dt * k3.qdd)?;

    let q = state.q + (dt / 6.0) * (k1.qd + 2.0 * k2.qd + 2.0 * k3.qd + k4.qd);
    let qd = state.qd + (dt / 6.0) * (k1.qdd + 2.0 * k2.qdd + 2.0 * k3.qdd + k4.qdd);
    let e_elec =
        state.e_elec + (dt / 6.0) * (k1.power + 2.0 * k2.power + 2.0 * k3.power + k4.power);

    let hip_before = kinematics::joint_points(model, &state.q).hip.x;
    let hip_after = kinematics::joint_points(model, &q).hip.x;

    let next = RobotState {
        q,
        qd,
        stance: state.stance,
        t: state.t + dt,
        e_elec,
        hip_travel: state.hip_travel + (hip_after - hip_before),
    };
    if !next.is_finite() {
        return Err(DynamicsError::NonFiniteState);
    }
    Ok(next)
}
