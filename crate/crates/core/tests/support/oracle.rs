//! Naive one-step reference updates, written straight from the governing
//! equations with textbook difference quotients. Deliberately independent of
//! the library: no shared helpers, its own disturbance formulas, and the time
//! derivative is solved for the new level at the end.

#![allow(dead_code)]

use std::f64::consts::PI;

pub struct Grid {
    pub h: f64,
    pub k: f64,
    pub length: f64,
}

impl Grid {
    fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Solves `(w - 2 w1 + w2) / k^2 = acc` for `w`.
    fn advance(&self, w1: f64, w2: f64, acc: f64) -> f64 {
        acc * self.k * self.k + 2.0 * w1 - w2
    }
}

fn dx_back(w: &[f64], i: usize, h: f64) -> f64 {
    (w[i] - w[i - 1]) / h
}

fn dxx(w: &[f64], i: usize, h: f64) -> f64 {
    (w[i - 1] - 2.0 * w[i] + w[i + 1]) / (h * h)
}

pub fn timoshenko_tip_pair(x: f64, t: f64) -> (f64, f64) {
    let s = (PI * x * t).sin() + (2.0 * PI * x * t).sin() + (3.0 * PI * x * t).sin();
    (1.0 + s, s)
}

pub fn timoshenko_load(x: f64, t: f64, length: f64) -> f64 {
    let a = 0.1 * PI * x * t;
    x / (1000.0 * length) * (1.0 + a.sin() + (2.0 * a).sin() + (3.0 * a).sin())
}

pub fn string_tip(t: f64) -> f64 {
    1.0 + 0.2 * (0.2 * t).sin() + 0.3 * (0.3 * t).sin() + 0.5 * (0.5 * t).sin()
}

pub fn string_load(x: f64, t: f64) -> f64 {
    x * (3.0 + (PI * x * t).sin() + (2.0 * PI * x * t).sin() + (3.0 * PI * x * t).sin())
}

/// `u_t = alpha u_xx`, forward in time, Dirichlet zero ends.
pub fn heat(alpha: f64, g: &Grid, u: &[f64]) -> Vec<f64> {
    let n = u.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        out[i] = u[i] + g.k * alpha * dxx(u, i, g.h);
    }
    out
}

pub struct Beam {
    pub rho: f64,
    pub ei: f64,
    pub tension: f64,
    pub damping: f64,
}

/// `rho w_tt = -EI w_xxxx + T w_xx - c w_t + f`, w = 0 at both ends, odd
/// reflection at x = 0 and linear continuation past x = L.
pub fn eb_beam(
    p: &Beam,
    g: &Grid,
    w2: &[f64],
    w1: &[f64],
    load: Option<&dyn Fn(f64, f64) -> f64>,
    t: f64,
) -> Vec<f64> {
    let n = w1.len() - 1;
    let ext = |i: isize| -> f64 {
        if i < 0 {
            -w1[(-i) as usize]
        } else if i as usize > n {
            let m = i as usize - n;
            w1[n] + m as f64 * (w1[n] - w1[n - 1])
        } else {
            w1[i as usize]
        }
    };
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        let c = i as isize;
        let w4 = (ext(c - 2) + ext(c + 2) - 4.0 * (ext(c - 1) + ext(c + 1)) + 6.0 * ext(c))
            / g.h.powi(4);
        let wt = (w1[i] - w2[i]) / g.k;
        let f = load.map_or(0.0, |f| f(g.x(i), t));
        let acc = (-p.ei * w4 + p.tension * dxx(w1, i, g.h) - p.damping * wt + f) / p.rho;
        out[i] = g.advance(w1[i], w2[i], acc);
    }
    out
}

pub struct Timo {
    pub rho: f64,
    pub i_rho: f64,
    pub ei: f64,
    pub shear_k: f64,
    pub mass: f64,
    pub inertia: f64,
}

/// Interior:
///   rho w_tt = K (w_xx - phi_x) + f
///   I phi_tt = EI phi_xx - K (phi - w_x)
/// Tip:
///   M w_tt   = K (phi - w_x) + d + u,   u   = -k1 w - k2 w_t
///   J phi_tt = -EI phi_x + theta + tau, tau = -k3 phi - k4 phi_t
/// Node 0 of both fields is clamped.
#[allow(clippy::too_many_arguments)]
pub fn timoshenko(
    p: &Timo,
    g: &Grid,
    w2: &[f64],
    p2: &[f64],
    w1: &[f64],
    p1: &[f64],
    tip_dist: bool,
    load: bool,
    gains: [f64; 4],
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = w1.len() - 1;
    let mut w = vec![0.0; n + 1];
    let mut phi = vec![0.0; n + 1];
    for i in 1..n {
        let f = if load {
            timoshenko_load(g.x(i), t, g.length)
        } else {
            0.0
        };
        let acc_w = (p.shear_k * (dxx(w1, i, g.h) - dx_back(p1, i, g.h)) + f) / p.rho;
        let acc_p = (p.ei * dxx(p1, i, g.h) - p.shear_k * (p1[i] - dx_back(w1, i, g.h))) / p.i_rho;
        w[i] = g.advance(w1[i], w2[i], acc_w);
        phi[i] = g.advance(p1[i], p2[i], acc_p);
    }
    let (d, theta) = if tip_dist {
        timoshenko_tip_pair(g.length, t)
    } else {
        (0.0, 0.0)
    };
    let [k1, k2, k3, k4] = gains;
    let u = -k1 * w1[n] - k2 * (w1[n] - w2[n]) / g.k;
    let tau = -k3 * p1[n] - k4 * (p1[n] - p2[n]) / g.k;
    let acc_w = (p.shear_k * (p1[n] - dx_back(w1, n, g.h)) + d + u) / p.mass;
    let acc_p = (-p.ei * dx_back(p1, n, g.h) + theta + tau) / p.inertia;
    w[n] = g.advance(w1[n], w2[n], acc_w);
    phi[n] = g.advance(p1[n], p2[n], acc_p);
    (w, phi)
}

pub struct Str {
    pub mass: f64,
    pub t0: (f64, f64),
    pub lambda: (f64, f64),
    pub rho: (f64, f64),
}

/// Exact-model law `u = T0(L) w_x - M w_xt - k1 w_t - k2 w_x - sgn(w_t + w_x) d_bar`.
pub struct ExactModel {
    pub k1: f64,
    pub k2: f64,
    pub d_bar: f64,
}

/// Interior:
///   rho w_tt = T w_xx + T0' w_x + lambda' w_x^3 + 3 lambda w_x^2 w_xx + f,
///   T = T0 + lambda w_x^2
/// Tip:
///   M w_tt + T(L) w_x + lambda(L) w_x^3 = u + d
#[allow(clippy::too_many_arguments)]
pub fn string(
    p: &Str,
    g: &Grid,
    w2: &[f64],
    w1: &[f64],
    tip_dist: bool,
    load: bool,
    control: Option<&ExactModel>,
    t: f64,
) -> Vec<f64> {
    let lin = |c: (f64, f64), x: f64| c.0 + c.1 * x;
    let n = w1.len() - 1;
    let mut w = vec![0.0; n + 1];
    for i in 1..n {
        let x = g.x(i);
        let wx = dx_back(w1, i, g.h);
        let wxx = dxx(w1, i, g.h);
        let lam = lin(p.lambda, x);
        let tension = lin(p.t0, x) + lam * wx * wx;
        let f = if load { string_load(x, t) } else { 0.0 };
        let rhs =
            tension * wxx + p.t0.1 * wx + p.lambda.1 * wx.powi(3) + 3.0 * lam * wx * wx * wxx + f;
        w[i] = g.advance(w1[i], w2[i], rhs / lin(p.rho, x));
    }
    let l = g.length;
    let wx = dx_back(w1, n, g.h);
    let tension = lin(p.t0, l) + lin(p.lambda, l) * wx * wx;
    let d = if tip_dist { string_tip(t) } else { 0.0 };
    let u = match control {
        None => 0.0,
        Some(c) => {
            let wt = (w1[n] - w2[n]) / g.k;
            let wx_old = dx_back(w2, n, g.h);
            let wxt = (wx - wx_old) / g.k;
            let s = wt + wx;
            let sgn = if s > 0.0 {
                1.0
            } else if s < 0.0 {
                -1.0
            } else {
                0.0
            };
            lin(p.t0, l) * wx - p.mass * wxt - c.k1 * wt - c.k2 * wx - sgn * c.d_bar
        }
    };
    let acc = (u + d - tension * wx - lin(p.lambda, l) * wx.powi(3)) / p.mass;
    w[n] = g.advance(w1[n], w2[n], acc);
    w
}
