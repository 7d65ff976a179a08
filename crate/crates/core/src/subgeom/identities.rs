//! Identities relating the tangent/normal parts of `phi` to the second
//! fundamental form.
//!
//! The covariant derivatives of `T`, `N`, `t`, `n` are taken as
//!
//! ```text
//! (nabla_X T)Y = nabla_X(TY) - T nabla_X Y      (nabla_X N)Y = nabla^perp_X(NY) - N nabla_X Y
//! (nabla_X t)V = nabla_X(tV) - t nabla^perp_X V  (nabla_X n)V = nabla^perp_X(nV) - n nabla^perp_X V
//! ```
//!
//! Splitting `(nabla-bar_X phi)Y + (nabla-bar_Y phi)X` and `(nabla-bar_X phi)V`
//! into tangent and normal parts gives four identities whose right-hand sides
//! carry the ambient term. The forms without it are also reported, as
//! information only: they agree with the full forms exactly when the ambient
//! term has no tangent (resp. normal) part.

use alloc::vec::Vec;

use super::{Immersion, PointGeometry};
use crate::ambient::checks::nabla_phi;
use crate::ambient::{christoffel_symbols, dense, Tolerances};
use crate::check::{max_abs, CheckResult};
use crate::error::Result;
use crate::jet::Jet;

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| c * x).collect()
}

fn vals(v: &[Jet]) -> Vec<f64> {
    v.iter().map(Jet::value).collect()
}

/// Per-point residuals, one entry per identity, in the order of [`LABELS`].
pub fn submanifold_point_checks(imm: &Immersion, p: &[f64]) -> Result<Vec<f64>> {
    let geo = imm.geometry(p)?;
    point_residuals(imm, &geo)
}

struct Label {
    name: &'static str,
    reference: &'static str,
    derivative: bool,
    info: bool,
}

const fn l(name: &'static str, reference: &'static str, derivative: bool, info: bool) -> Label {
    Label { name, reference, derivative, info }
}

const LABELS: [Label; 20] = [
    l("decomposition", "phiX = TX + NX", false, false),
    l("T squared", "T^2 = -I + sum eta^k (x) xi_k - tN", false, false),
    l("NT + nN", "NT + nN = 0", false, false),
    l("Tt + tn", "Tt + tn = 0", false, false),
    l("Nt + n^2", "Nt + n^2 = -I", false, false),
    l("T skew", "g(TX,Y) + g(X,TY) = 0", false, false),
    l("n skew", "g(nU,V) + g(U,nV) = 0", false, false),
    l("N and t", "g(NX,V) = -g(X,tV)", false, false),
    l("frame orthonormality", "tangent and normal frames are g-orthonormal", false, false),
    l("sff symmetry", "h(X,Y) = h(Y,X)", true, false),
    l("sff two routes", "h from frame derivatives = h from nor(d^2 chi + Gamma(d chi, d chi))", true, false),
    l("gauss split", "nabla-bar_X Y = nabla_X Y + h(X,Y) with nabla from the induced metric", true, false),
    l("weingarten duality", "g(A_V X, Y) = g(h(X,Y), V)", true, false),
    l(
        "nabla T",
        "(nabla_X T)Y + (nabla_Y T)X - A_NX Y - A_NY X - 2t h(X,Y) = -tan sum_k { eta^k(X) phiY + eta^k(Y) phiX }",
        true,
        false,
    ),
    l(
        "nabla N",
        "(nabla_X N)Y + (nabla_Y N)X - 2n h(X,Y) + h(X,TY) + h(Y,TX) = -nor sum_k { eta^k(X) phiY + eta^k(Y) phiX }",
        true,
        false,
    ),
    l("nabla t", "(nabla_X t)V - A_nV X + T A_V X = tan((nabla-bar_X phi)V)", true, false),
    l("nabla n", "(nabla_X n)V + h(tV,X) + N A_V X = nor((nabla-bar_X phi)V)", true, false),
    l("nabla T without ambient term", "(nabla_X T)Y + (nabla_Y T)X = A_NX Y + A_NY X + 2t h(X,Y)", true, true),
    l("nabla N without ambient term", "(nabla_X N)Y + (nabla_Y N)X = 2n h(X,Y) - h(X,TY) - h(Y,TX)", true, true),
    l(
        "nabla t, n without ambient term",
        "(nabla_X t)V = A_nV X - T A_V X; (nabla_X n)V = -h(tV,X) - N A_V X",
        true,
        true,
    ),
];

fn point_residuals(imm: &Immersion, geo: &PointGeometry) -> Result<Vec<f64>> {
    let (m, n) = (geo.m, geo.n);
    let e = geo.tangent_frame();
    let nf = geo.normal_frame();
    let xi = geo.xi();
    let eta = geo.eta();
    let sff = geo.second_fundamental_form();
    let mut r = alloc::vec![0.0f64; LABELS.len()];
    let mut bump = |i: usize, v: f64| {
        if v.is_nan() || r[i].is_nan() {
            r[i] = f64::NAN;
        } else {
            r[i] = r[i].max(v);
        }
    };
    let t_ = |v: &[f64]| geo.big_t(v);
    let n_ = |v: &[f64]| geo.big_n(v);

    // Algebraic identities over frame vectors.
    for x in &e {
        let phix = geo.phi(x);
        bump(0, max_abs(&sub(&phix, &add(&t_(x), &n_(x)))));
        let mut rhs = scale(x, -1.0);
        for k in 0..xi.len() {
            rhs = add(&rhs, &scale(&xi[k], dense::dot(&eta[k], x)));
        }
        rhs = sub(&rhs, &t_(&n_(x)));
        bump(1, max_abs(&sub(&t_(&t_(x)), &rhs)));
        bump(2, max_abs(&add(&n_(&t_(x)), &n_(&n_(x)))));
        for y in &e {
            bump(5, (geo.g(&t_(x), y) + geo.g(x, &t_(y))).abs());
        }
        for v in &nf {
            bump(7, (geo.g(&n_(x), v) + geo.g(x, &t_(v))).abs());
        }
    }
    for v in &nf {
        bump(3, max_abs(&add(&t_(&t_(v)), &t_(&n_(v)))));
        bump(4, max_abs(&add(&add(&n_(&t_(v)), &n_(&n_(v))), v)));
        for w in &nf {
            bump(6, (geo.g(&n_(v), w) + geo.g(v, &n_(w))).abs());
        }
    }
    let all: Vec<&Vec<f64>> = e.iter().chain(nf.iter()).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let d = if i == j { 1.0 } else { 0.0 };
            bump(8, (geo.g(a, b) - d).abs());
        }
    }

    // Second fundamental form consistency.
    bump(9, sff.symmetry_defect());
    let h2 = geo.sff_frame_from_hessian();
    for a in 0..m {
        for b in 0..m {
            bump(10, max_abs(&sub(&sff.h[a][b], &h2[a][b])));
            let full = geo.derivative(&e[a], &geo.tangent[b]);
            let ind = geo.induced_derivative(a, b)?;
            bump(11, max_abs(&sub(&sub(&full, &ind), &sff.h[a][b])));
        }
    }
    for v in &nf {
        let (_, dual) = geo.shape_operator(&sff, v)?;
        bump(12, dual);
    }

    // Covariant derivatives of T, N, t, n.
    let at_chi = imm.ambient.at(&geo.chi)?;
    let conn = christoffel_symbols(&at_chi.g, n)?;
    let np = nabla_phi(&at_chi, &conn);
    let nabla_phi_xv = |x: &[f64], v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for a in 0..n {
                    if x[a] == 0.0 {
                        continue;
                    }
                    for b in 0..n {
                        s += x[a] * np[(a * n + k) * n + b] * v[b];
                    }
                }
                s
            })
            .collect()
    };
    let sigma: Vec<f64> = (0..n).map(|l| eta.iter().map(|et| et[l]).sum()).collect();

    let phi_e: Vec<Vec<Jet>> = geo.tangent.iter().map(|y| geo.phi_jet(y)).collect();
    let te: Vec<Vec<Jet>> = phi_e.iter().map(|v| geo.tan_jet(v)).collect();
    let ne: Vec<Vec<Jet>> = phi_e.iter().map(|v| geo.nor_jet(v)).collect();
    let nab = |a: usize, b: usize| geo.tan(&geo.derivative(&e[a], &geo.tangent[b]));
    let nabla_t = |a: usize, b: usize| sub(&geo.tan(&geo.derivative(&e[a], &te[b])), &t_(&nab(a, b)));
    let nabla_n = |a: usize, b: usize| sub(&geo.nor(&geo.derivative(&e[a], &ne[b])), &n_(&nab(a, b)));
    let shape_ne = |a: usize, b: usize| geo.shape(&ne[a], &e[b]);
    for a in 0..m {
        for b in 0..m {
            let hab = &sff.h[a][b];
            let r11 = {
                let pa = geo.phi(&e[a]);
                let pb = geo.phi(&e[b]);
                scale(&add(&scale(&pb, dense::dot(&sigma, &e[a])), &scale(&pa, dense::dot(&sigma, &e[b]))), -1.0)
            };
            let lhs25 = {
                let mut v = add(&nabla_t(a, b), &nabla_t(b, a));
                v = sub(&v, &shape_ne(a, b));
                v = sub(&v, &shape_ne(b, a));
                sub(&v, &scale(&t_(hab), 2.0))
            };
            let lhs26 = {
                let mut v = add(&nabla_n(a, b), &nabla_n(b, a));
                v = sub(&v, &scale(&n_(hab), 2.0));
                v = add(&v, &geo.h(&sff, &e[a], &t_(&e[b])));
                add(&v, &geo.h(&sff, &e[b], &t_(&e[a])))
            };
            bump(13, max_abs(&sub(&lhs25, &geo.tan(&r11))));
            bump(14, max_abs(&sub(&lhs26, &geo.nor(&r11))));
            bump(17, max_abs(&lhs25));
            bump(18, max_abs(&lhs26));
        }
    }
    for (r_idx, vj) in geo.normal.iter().enumerate() {
        let v = &nf[r_idx];
        let pv = geo.phi_jet(vj);
        let tv = geo.tan_jet(&pv);
        let nv = geo.nor_jet(&pv);
        let tvv = vals(&tv);
        for a in 0..m {
            let x = &e[a];
            let perp = geo.nor(&geo.derivative(x, vj));
            let nabla_tv = sub(&geo.tan(&geo.derivative(x, &tv)), &t_(&perp));
            let nabla_nv = sub(&geo.nor(&geo.derivative(x, &nv)), &n_(&perp));
            let a_v_x = geo.shape(vj, x);
            let a_nv_x = geo.shape(&nv, x);
            let lhs27 = add(&sub(&nabla_tv, &a_nv_x), &t_(&a_v_x));
            let lhs28 = add(&add(&nabla_nv, &geo.h(&sff, &tvv, x)), &n_(&a_v_x));
            let amb = nabla_phi_xv(x, v);
            bump(15, max_abs(&sub(&lhs27, &geo.tan(&amb))));
            bump(16, max_abs(&sub(&lhs28, &geo.nor(&amb))));
            bump(19, max_abs(&lhs27).max(max_abs(&lhs28)));
        }
    }
    Ok(r)
}

/// All submanifold identities over the tangent and normal frames at each
/// sample point.
pub fn check_submanifold_identities(imm: &Immersion, points: &[Vec<f64>], tol: Tolerances) -> Result<Vec<CheckResult>> {
    let mut cols: Vec<Vec<f64>> = (0..LABELS.len()).map(|_| Vec::with_capacity(points.len())).collect();
    for p in points {
        let r = submanifold_point_checks(imm, p)?;
        for (c, v) in cols.iter_mut().zip(r) {
            c.push(v);
        }
    }
    Ok(LABELS
        .iter()
        .zip(cols)
        .map(|(lab, col)| {
            if lab.info {
                let v = col.iter().fold(0.0f64, |m, x| m.max(*x));
                let mut c = CheckResult::info(lab.name, lab.reference, v)
                    .with_note("reported for comparison; the checked form includes the ambient term");
                c.per_sample = col;
                c
            } else {
                let t = if lab.derivative { tol.curvature } else { tol.algebraic };
                CheckResult::residual(lab.name, lab.reference, col, t)
            }
        })
        .collect())
}
