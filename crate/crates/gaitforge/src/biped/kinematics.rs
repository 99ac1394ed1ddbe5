//! Forward kinematics of the pinned chain.
//!
//! Every point of interest is a sum of terms `amp * (sin th, -cos th)` with
//! `th = offset + sel · a`, where `a = [pitch, q_sh, q_sk, q_wh, q_wk]` is the
//! angular part of the coordinate vector. Selectors are constant, so all
//! Jacobians and velocity products are analytic.

use nalgebra::{SMatrix, SVector, Vector2};

use super::RobotModel;

/// Number of angular degrees of freedom of the pinned chain.
pub const NA: usize = 5;

pub type AngVec = SVector<f64, NA>;

#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub amp: f64,
    pub offset: f64,
    pub sel: [f64; NA],
}

impl Term {
    fn angle(&self, a: &AngVec) -> f64 {
        let mut th = self.offset;
        for j in 0..NA {
            th += self.sel[j] * a[j];
        }
        th
    }

    fn rate(&self, ad: &AngVec) -> f64 {
        let mut w = 0.0;
        for j in 0..NA {
            w += self.sel[j] * ad[j];
        }
        w
    }
}

/// One rigid link: mass, rotational inertia, COM position terms and the
/// selector giving its absolute angular velocity.
#[derive(Debug, Clone)]
pub struct LinkGeom {
    pub mass: f64,
    pub inertia: f64,
    pub terms: [Term; 4],
    pub n_terms: usize,
    pub spin: [f64; NA],
}

const SEL_SSK: [f64; NA] = [1.0, 1.0, -1.0, 0.0, 0.0]; // stance shank
const SEL_STH: [f64; NA] = [1.0, 1.0, 0.0, 0.0, 0.0]; // stance thigh
const SEL_WTH: [f64; NA] = [1.0, 0.0, 0.0, 1.0, 0.0]; // swing thigh
const SEL_WSK: [f64; NA] = [1.0, 0.0, 0.0, 1.0, -1.0]; // swing shank
const SEL_TORSO_UP: [f64; NA] = [-1.0, 0.0, 0.0, 0.0, 0.0]; // with offset pi

const ZERO_TERM: Term = Term { amp: 0.0, offset: 0.0, sel: [0.0; NA] };

fn term(amp: f64, offset: f64, sel: [f64; NA]) -> Term {
    Term { amp, offset, sel }
}

/// Builds the five links' COM term tables for the pinned (stance-rooted) chain.
pub fn link_table(m: &RobotModel) -> [LinkGeom; 5] {
    use std::f64::consts::PI;
    let l_sk = m.shank_length;
    let l_th = m.thigh_length;
    // Chain up from the foot: knee = foot - l_sk*dir(th_ssk), hip = knee - l_th*dir(th_sth).
    let up_shank = term(-l_sk, 0.0, SEL_SSK);
    let up_thigh = term(-l_th, 0.0, SEL_STH);
    [
        // stance shank: COM at c_sk from the knee = foot + (c_sk - l_sk)*dir(th_ssk)
        LinkGeom {
            mass: m.shank_mass,
            inertia: m.shank_inertia,
            terms: [term(m.shank_com - l_sk, 0.0, SEL_SSK), ZERO_TERM, ZERO_TERM, ZERO_TERM],
            n_terms: 1,
            spin: SEL_SSK,
        },
        // stance thigh: COM at c_th from the hip = hip + c_th*dir(th_sth)
        LinkGeom {
            mass: m.thigh_mass,
            inertia: m.thigh_inertia,
            terms: [up_shank, term(m.thigh_com - l_th, 0.0, SEL_STH), ZERO_TERM, ZERO_TERM],
            n_terms: 2,
            spin: SEL_STH,
        },
        // torso: COM at c_to up from the hip; dir(pi - pitch) = (sin pitch, cos pitch)
        LinkGeom {
            mass: m.torso_mass,
            inertia: m.torso_inertia,
            terms: [up_shank, up_thigh, term(m.torso_com, PI, SEL_TORSO_UP), ZERO_TERM],
            n_terms: 3,
            spin: [1.0, 0.0, 0.0, 0.0, 0.0],
        },
        // swing thigh
        LinkGeom {
            mass: m.thigh_mass,
            inertia: m.thigh_inertia,
            terms: [up_shank, up_thigh, term(m.thigh_com, 0.0, SEL_WTH), ZERO_TERM],
            n_terms: 3,
            spin: SEL_WTH,
        },
        // swing shank
        LinkGeom {
            mass: m.shank_mass,
            inertia: m.shank_inertia,
            terms: [up_shank, up_thigh, term(l_th, 0.0, SEL_WTH), term(m.shank_com, 0.0, SEL_WSK)],
            n_terms: 4,
            spin: SEL_WSK,
        },
    ]
}

/// COM position of a link relative to the stance foot.
pub fn link_com(link: &LinkGeom, a: &AngVec) -> Vector2<f64> {
    let mut p = Vector2::zeros();
    for t in &link.terms[..link.n_terms] {
        let th = t.angle(a);
        p.x += t.amp * th.sin();
        p.y -= t.amp * th.cos();
    }
    p
}

/// COM velocity of a link.
pub fn link_com_velocity(link: &LinkGeom, a: &AngVec, ad: &AngVec) -> Vector2<f64> {
    let mut v = Vector2::zeros();
    for t in &link.terms[..link.n_terms] {
        let th = t.angle(a);
        let w = t.rate(ad);
        v.x += t.amp * w * th.cos();
        v.y += t.amp * w * th.sin();
    }
    v
}

/// 2x5 Jacobian of a link's COM with respect to the angular coordinates.
pub fn link_jacobian(link: &LinkGeom, a: &AngVec) -> SMatrix<f64, 2, NA> {
    let mut jac = SMatrix::<f64, 2, NA>::zeros();
    for t in &link.terms[..link.n_terms] {
        let th = t.angle(a);
        let (s, c) = th.sin_cos();
        for j in 0..NA {
            jac[(0, j)] += t.amp * c * t.sel[j];
            jac[(1, j)] += t.amp * s * t.sel[j];
        }
    }
    jac
}

/// Velocity-product acceleration `Jdot * ad` of a link's COM.
pub fn link_bias_accel(link: &LinkGeom, a: &AngVec, ad: &AngVec) -> Vector2<f64> {
    let mut acc = Vector2::zeros();
    for t in &link.terms[..link.n_terms] {
        let th = t.angle(a);
        let w = t.rate(ad);
        acc.x -= t.amp * w * w * th.sin();
        acc.y += t.amp * w * w * th.cos();
    }
    acc
}

fn angles(q: &SVector<f64, 6>) -> (f64, f64, f64, f64) {
    let pitch = q[1];
    let th_sth = pitch + q[2];
    let th_ssk = pitch + q[2] - q[3];
    let th_wth = pitch + q[4];
    let th_wsk = pitch + q[4] - q[5];
    (th_ssk, th_sth, th_wth, th_wsk)
}

fn dir(th: f64) -> Vector2<f64> {
    Vector2::new(th.sin(), -th.cos())
}

/// Joint positions of the chain in world coordinates.
#[derive(Debug, Clone, Copy)]
pub struct JointPoints {
    pub stance_foot: Vector2<f64>,
    pub stance_knee: Vector2<f64>,
    pub hip: Vector2<f64>,
    pub swing_knee: Vector2<f64>,
    pub swing_foot: Vector2<f64>,
    pub torso_top: Vector2<f64>,
}

pub fn joint_points(model: &RobotModel, q: &SVector<f64, 6>) -> JointPoints {
    let (th_ssk, th_sth, th_wth, th_wsk) = angles(q);
    let pitch = q[1];
    let foot = Vector2::new(q[0], 0.0);
    let knee = foot - model.shank_length * dir(th_ssk);
    let hip = knee - model.thigh_length * dir(th_sth);
    let swing_knee = hip + model.thigh_length * dir(th_wth);
    let swing_foot = swing_knee + model.shank_length * dir(th_wsk);
    let torso_top = hip + model.torso_length * Vector2::new(pitch.sin(), pitch.cos());
    JointPoints {
        stance_foot: foot,
        stance_knee: knee,
        hip,
        swing_knee,
        swing_foot,
        torso_top,
    }
}

pub fn hip_velocity(model: &RobotModel, q: &SVector<f64, 6>, qd: &SVector<f64, 6>) -> Vector2<f64> {
    let (th_ssk, th_sth, _, _) = angles(q);
    let w_ssk = qd[1] + qd[2] - qd[3];
    let w_sth = qd[1] + qd[2];
    let perp = |th: f64| Vector2::new(th.cos(), th.sin());
    -model.shank_length * w_ssk * perp(th_ssk) - model.thigh_length * w_sth * perp(th_sth)
}

pub fn swing_foot_velocity(
    model: &RobotModel,
    q: &SVector<f64, 6>,
    qd: &SVector<f64, 6>,
) -> Vector2<f64> {
    let (_, _, th_wth, th_wsk) = angles(q);
    let w_wth = qd[1] + qd[4];
    let w_wsk = qd[1] + qd[4] - qd[5];
    let perp = |th: f64| Vector2::new(th.cos(), th.sin());
    hip_velocity(model, q, qd)
        + model.thigh_length * w_wth * perp(th_wth)
        + model.shank_length * w_wsk * perp(th_wsk)
}

/// Total mechanical energy (kinetic + gravitational potential, ground datum).
pub fn mechanical_energy(model: &RobotModel, q: &SVector<f64, 6>, qd: &SVector<f64, 6>) -> f64 {
    let a = q.fixed_rows::<NA>(1).into_owned();
    let ad = qd.fixed_rows::<NA>(1).into_owned();
    let foot_y = 0.0;
    let mut e = 0.0;
    for link in &link_table(model) {
        let com = link_com(link, &a);
        let v = link_com_velocity(link, &a, &ad);
        let mut w = 0.0;
        for j in 0..NA {
            w += link.spin[j] * ad[j];
        }
        e += 0.5 * link.mass * v.norm_squared() + 0.5 * link.inertia * w * w;
        e += link.mass * model.gravity * (com.y + foot_y);
    }
    e
}
