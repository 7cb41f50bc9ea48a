//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Library results are compared against oracles computed here from
//! scratch: matrices rebuilt with nalgebra from the block formula, SVD-based
//! commutant nullity, f64 sign-change scans for the roots and i128
//! polynomial arithmetic for the exact identities.

use std::process::{Command, ExitCode};

use ar_braid::irred::{
    block_criterion_check, common_eigenvectors, commutant_dimension, invariant_subspace_search,
    Verdict,
};
use ar_braid::linalg::{max_entry_distance, CMatrix};
use ar_braid::proofchain::{
    accepted_roots, case_nonvanishing, chain_values, closed_form_quadratics,
    contradiction_components, eigen_relation_residual, imaginary_part_factor, imaginary_part_poly,
    real_part_poly, route_agreement, sample_c_values, split_identities, theorem_verdict, Equation,
    ProofVerdict, Quadratics,
};
use ar_braid::rep::{
    build_general, entry_symbols, images, pure_closed_form, random_valid_params, sigma_closed_form,
    verify_relations, ARSpecialization, BetaChoice,
};
use nalgebra::{Complex, DMatrix, Matrix3};

type C = Complex<f64>;
type M3 = Matrix3<C>;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn beta(choice: BetaChoice) -> C {
    let im = 3f64.sqrt() / 2.0;
    match choice {
        BetaChoice::Plus => C::new(-0.5, im),
        BetaChoice::Minus => C::new(-0.5, -im),
    }
}

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

/// The 3×3 specialization rebuilt from the general block formula
/// `U = 2[[A - 1/2, B, C], [B*, B*A⁻¹B - 1/2, B*A⁻¹C], [C*, C*A⁻¹B, C*A⁻¹C - 1/2]]`
/// with `A = 1/2`, `B = √(1/4 - c²)`, `C = c`.
struct Oracle {
    u: M3,
    v: M3,
    s1: M3,
    s2: M3,
    a12: M3,
    a23: M3,
    a13: M3,
    be: C,
}

impl Oracle {
    fn new(c: f64, choice: BetaChoice) -> Self {
        let a = 0.5;
        let b = (0.25 - c * c).sqrt();
        let ai = 1.0 / a;
        let u = M3::new(
            r(2.0 * (a - 0.5)),
            r(2.0 * b),
            r(2.0 * c),
            r(2.0 * b),
            r(2.0 * (b * ai * b - 0.5)),
            r(2.0 * b * ai * c),
            r(2.0 * c),
            r(2.0 * c * ai * b),
            r(2.0 * (c * ai * c - 0.5)),
        );
        let be = beta(choice);
        let v = M3::from_diagonal(&nalgebra::Vector3::new(r(1.0), be, be * be));
        let vi = v.try_inverse().unwrap();
        let ui = u.try_inverse().unwrap();
        let s1 = u * vi;
        let s2 = v * ui * v;
        let a12 = s1 * s1;
        let a23 = s2 * s2;
        let a13 = s2 * s1 * s1 * s2.try_inverse().unwrap();
        Self {
            u,
            v,
            s1,
            s2,
            a12,
            a23,
            a13,
            be,
        }
    }
}

fn to_m3(m: &CMatrix) -> M3 {
    M3::from_fn(|i, j| {
        let z = m[(i, j)];
        C::new(z.re, z.im)
    })
}

fn max_dev(a: &M3, b: &M3) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitarity(m: &M3) -> f64 {
    (m.adjoint() * m - M3::identity()).norm()
}

fn grid_50() -> Vec<f64> {
    sample_c_values(50, 2024)
}

fn grid_49() -> Vec<f64> {
    (1..=49)
        .flat_map(|k| [k as f64 / 100.0, -(k as f64) / 100.0])
        .collect()
}

fn criterion_1() -> Outcome {
    let mut worst_lib = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for c in grid_50() {
        for choice in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, choice).map_err(|e| e.to_string())?;
            let rep = verify_relations(&spec).map_err(|e| e.to_string())?;
            worst_lib = worst_lib.max(rep.max_residual());
            let o = Oracle::new(c, choice);
            let id = M3::identity();
            let checks = [
                (o.u - o.u.adjoint()).norm(),
                (o.u * o.u - id).norm(),
                (o.v * o.v * o.v - id).norm(),
                (o.u * o.u - o.v * o.v * o.v).norm(),
                (o.s1 * o.s2 * o.s1 - o.s2 * o.s1 * o.s2).norm(),
                unitarity(&o.s1),
                unitarity(&o.s2),
                unitarity(&o.a12),
                unitarity(&o.a23),
                unitarity(&o.a13),
            ];
            worst_oracle = checks.iter().cloned().fold(worst_oracle, f64::max);
            // π(S) = U and π(J) = V = σ1σ2
            worst_oracle = worst_oracle.max((o.s1 * o.s2 - o.v).norm());
        }
    }
    ensure!(worst_lib <= 1e-10, "library residual {worst_lib:e} > 1e-10");
    ensure!(
        worst_oracle <= 1e-10,
        "oracle residual {worst_oracle:e} > 1e-10"
    );
    Ok(format!(
        "100 points, max residual {worst_lib:.2e} (library) / {worst_oracle:.2e} (oracle)"
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for c in grid_50() {
        for choice in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, choice).map_err(|e| e.to_string())?;
            let im = images(&spec).map_err(|e| e.to_string())?;
            let (f1, f2) = sigma_closed_form(&spec);
            let (p12, p23) = pure_closed_form(&spec);
            for (prod, closed) in [
                (&im.sigma1, &f1),
                (&im.sigma2, &f2),
                (&im.a12, &p12),
                (&im.a23, &p23),
            ] {
                worst = worst.max(max_entry_distance(prod, closed).map_err(|e| e.to_string())?);
            }
            let o = Oracle::new(c, choice);
            for (oracle, closed) in [(&o.s1, &f1), (&o.s2, &f2), (&o.a12, &p12), (&o.a23, &p23)] {
                worst = worst.max(max_dev(oracle, &to_m3(closed)));
            }
            // entry symbols sit where the closed-form pattern puts them
            let s = entry_symbols(&spec);
            let be = o.be;
            let sym = |z: ar_braid::linalg::Complex| C::new(z.re, z.im);
            let a12 = &o.a12;
            let expect = [
                (a12[(0, 0)], sym(s.i)),
                (a12[(0, 1)], sym(s.jent)),
                (a12[(0, 2)], be * sym(s.p)),
                (a12[(1, 0)], be * sym(s.jent)),
                (a12[(1, 1)], sym(s.m)),
                (a12[(1, 2)], be * be * sym(s.q)),
                (a12[(2, 0)], sym(s.p)),
                (a12[(2, 1)], sym(s.q)),
                (a12[(2, 2)], sym(s.r)),
            ];
            for (got, want) in expect {
                worst = worst.max((got - want).norm());
            }
        }
    }
    ensure!(worst <= 1e-12, "closed-form deviation {worst:e} > 1e-12");
    Ok(format!("100 points, max entrywise deviation {worst:.2e}"))
}

/// Nullity of the stacked commutation system by complex SVD.
fn oracle_commutant_dim(mats: &[M3]) -> usize {
    let mut sys = DMatrix::<C>::zeros(9 * mats.len(), 9);
    for (k, m) in mats.iter().enumerate() {
        // row (i, j) of X·M - M·X with X = E_pq
        for p in 0..3 {
            for q in 0..3 {
                let col = p * 3 + q;
                for i in 0..3 {
                    for j in 0..3 {
                        let mut val = r(0.0);
                        if i == p {
                            val += m[(q, j)];
                        }
                        if j == q {
                            val -= m[(i, p)];
                        }
                        sys[(9 * k + i * 3 + j, col)] = val;
                    }
                }
            }
        }
    }
    let scale = mats
        .iter()
        .flat_map(|m| m.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let sv = sys.svd(false, false).singular_values;
    9 - sv.iter().filter(|&&s| s > 1e-8 * scale).count()
}

fn criterion_3() -> Outcome {
    let mut points = 0;
    for c in grid_49() {
        for choice in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, choice).map_err(|e| e.to_string())?;
            let im = images(&spec).map_err(|e| e.to_string())?;
            let mats = [im.a12.clone(), im.a23.clone()];
            let dim = commutant_dimension(3, &mats, 1e-8)
                .map_err(|e| e.to_string())?
                .dim;
            let o = Oracle::new(c, choice);
            let odim = oracle_commutant_dim(&[o.a12, o.a23]);
            ensure!(
                dim == 1 && odim == 1,
                "c = {c}: commutant {dim} (oracle {odim})"
            );
            let common = common_eigenvectors(&im.a12, &im.a23, 1e-8).map_err(|e| e.to_string())?;
            ensure!(
                common.is_empty(),
                "c = {c}: {} common eigenvectors",
                common.len()
            );
            let rep = invariant_subspace_search(&mats, 1e-8).map_err(|e| e.to_string())?;
            ensure!(
                rep.verdict == Verdict::Irreducible,
                "c = {c}: verdict {:?}",
                rep.verdict
            );
            points += 1;
        }
    }
    let spec =
        ARSpecialization::with_degenerate(0.0, BetaChoice::Plus).map_err(|e| e.to_string())?;
    let im = images(&spec).map_err(|e| e.to_string())?;
    let rep = invariant_subspace_search(&[im.a12.clone(), im.a23.clone()], 1e-8)
        .map_err(|e| e.to_string())?;
    let o = Oracle::new(0.0, BetaChoice::Plus);
    let odim = oracle_commutant_dim(&[o.a12, o.a23]);
    ensure!(
        rep.commutant_dim == 9 && odim == 9 && rep.verdict == Verdict::Reducible,
        "degenerate control: commutant {} (oracle {odim}), verdict {:?}",
        rep.commutant_dim,
        rep.verdict
    );
    Ok(format!("{points} points irreducible (commutant 1, no common eigenvector); c = 0 reducible, commutant 9"))
}

fn coeffs_i128(p: &ar_braid::poly::IntPolynomial) -> Vec<i128> {
    p.coeffs()
        .iter()
        .map(|c| c.to_string().parse().unwrap())
        .collect()
}

fn mul_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn criterion_4() -> Outcome {
    let ids = split_identities();
    ensure!(
        ids.imaginary_part.passed,
        "imaginary-part identity failed: {}",
        ids.imaginary_part.difference
    );
    ensure!(
        ids.real_part.passed,
        "real-part identity failed: {}",
        ids.real_part.difference
    );
    ensure!(
        ids.imaginary_part.difference.is_zero() && ids.real_part.difference.is_zero(),
        "nonzero difference polynomial"
    );
    // oracle: hand-entered coefficient tables, i128 arithmetic
    let pb: Vec<i128> = {
        let mut v = vec![0i128; 17];
        for (k, c) in [
            (2, -28),
            (4, 256),
            (6, -128),
            (8, -12032),
            (10, 75776),
            (12, -94208),
            (14, -229376),
            (16, 196608),
        ] {
            v[k] = c;
        }
        v
    };
    let pc: Vec<i128> = {
        let mut v = vec![0i128; 17];
        for (k, c) in [
            (0, -1),
            (4, 304),
            (6, -2432),
            (8, 5632),
            (10, 41984),
            (12, -208896),
            (14, 98304),
            (16, 196608),
        ] {
            v[k] = c;
        }
        v
    };
    let factor: Vec<i128> = {
        let mut v = vec![0i128; 13];
        for (k, c) in [
            (0, 7),
            (2, -36),
            (4, -112),
            (6, 2560),
            (8, -8704),
            (10, -11264),
            (12, 12288),
        ] {
            v[k] = c;
        }
        v
    };
    let pre = vec![0, 0, -4, 0, 16];
    let expanded = trim(mul_i128(&pre, &factor));
    ensure!(
        expanded == trim(pb.clone()),
        "oracle: 4C²(4C²-1)·factor != β-coefficient"
    );
    let re30: Vec<i128> = {
        let mut v = vec![0i128; 17];
        for (k, c) in [
            (0, -1),
            (2, 14),
            (4, 176),
            (6, -2368),
            (8, 11648),
            (10, 4096),
            (12, -161792),
            (14, 212992),
            (16, 98304),
        ] {
            v[k] = c;
        }
        v
    };
    let lhs: Vec<i128> = pc.iter().zip(&pb).map(|(c, b)| 2 * c - b).collect();
    let rhs: Vec<i128> = re30.iter().map(|x| 2 * x).collect();
    ensure!(
        lhs == rhs,
        "oracle: 2·P_const - P_beta != 2·real-part equation"
    );
    let (lc, lb) = contradiction_components();
    ensure!(
        coeffs_i128(&lb) == trim(pb) && coeffs_i128(&lc) == trim(pc),
        "library tables differ from oracle"
    );
    ensure!(
        coeffs_i128(&imaginary_part_poly()) == expanded,
        "library imaginary-part poly differs"
    );
    ensure!(
        coeffs_i128(&real_part_poly()) == trim(re30),
        "library real-part poly differs"
    );
    ensure!(
        coeffs_i128(&imaginary_part_factor()) == trim(factor),
        "library factor differs"
    );
    Ok("both identities exact (zero difference), confirmed by i128 oracle".into())
}

/// Sign-change scan plus f64 bisection on `(-1/2, 1/2)` away from 0.
fn oracle_roots(p: &ar_braid::poly::IntPolynomial) -> Vec<f64> {
    let f = |x: f64| p.evaluate_f64(x);
    let n = 200_000;
    let (lo, hi) = (-0.5 + 1e-9, 0.5 - 1e-9);
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo));
    for k in 1..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let y = f(x);
        if prev.1 * y < 0.0 {
            let (mut a, mut b) = (prev.0, x);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if f(a) * f(m) <= 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            let root = 0.5 * (a + b);
            if root.abs() > 1e-6 {
                roots.push(root);
            }
        }
        prev = (x, y);
    }
    roots
}

fn criterion_5() -> Outcome {
    let im = accepted_roots(Equation::ImaginaryPart, 1e-12).map_err(|e| e.to_string())?;
    let re = accepted_roots(Equation::RealPart, 1e-12).map_err(|e| e.to_string())?;
    ensure!(
        im.len() == 2 && re.len() == 2,
        "accepted counts {} and {}",
        im.len(),
        re.len()
    );
    let tiny = num_bigint::BigInt::from(1u64 << 40);
    for root in im.iter().chain(&re) {
        // interval width ≤ 1e-12 (checked exactly: width · 2⁴⁰ < 1.1)
        let w = root.width() * num_rational::BigRational::from_integer(tiny.clone());
        ensure!(
            w < num_rational::BigRational::new(11.into(), 10.into()),
            "interval wider than 1e-12"
        );
    }
    let r1 = im[1].refined;
    let r2 = re[1].refined;
    ensure!(
        (im[0].refined + r1).abs() < 1e-12 && (re[0].refined + r2).abs() < 1e-12,
        "roots not ± pairs"
    );
    ensure!(
        (0.42..=0.45).contains(&r1),
        "r1 = {r1} outside [0.42, 0.45]"
    );
    ensure!(
        (0.225..=0.235).contains(&r2),
        "r2 = {r2} outside [0.225, 0.235]"
    );
    let o1 = oracle_roots(&imaginary_part_poly());
    let o2 = oracle_roots(&real_part_poly());
    ensure!(
        o1.len() == 2 && o2.len() == 2,
        "oracle found {} and {} roots",
        o1.len(),
        o2.len()
    );
    ensure!(
        (o1[1] - r1).abs() < 1e-9 && (o2[1] - r2).abs() < 1e-9,
        "oracle roots {o1:?} {o2:?}"
    );
    Ok(format!("r1 = ±{r1:.12}, r2 = ±{r2:.12} (oracle agrees)"))
}

fn criterion_6() -> Outcome {
    let mut gaps = Vec::new();
    for precision in [1e-6, 1e-12] {
        let rep = theorem_verdict(precision).map_err(|e| e.to_string())?;
        ensure!(
            rep.verdict == ProofVerdict::ContradictionEstablished,
            "precision {precision:e}: verdict {:?}",
            rep.verdict
        );
        ensure!(
            rep.min_gap > 0.15,
            "precision {precision:e}: min gap {}",
            rep.min_gap
        );
        gaps.push(rep.min_gap);
    }
    Ok(format!(
        "contradiction_established at 1e-6 and 1e-12, min gap {:.6}",
        gaps[1]
    ))
}

/// Elimination route computed from the product matrices: entry symbols
/// are read off `φ(A12)`, the cubics combined, `α1` by Cramer, then back
/// substitution.
struct RouteOracle {
    q: [C; 6],
    alpha1: C,
    alpha2: C,
    n1: C,
    eigen_relation: C,
}

fn route_oracle(c: f64, choice: BetaChoice) -> RouteOracle {
    let o = Oracle::new(c, choice);
    let be = o.be;
    let (i, j, p, m, q, rr) = (
        o.a12[(0, 0)],
        o.a12[(0, 1)],
        o.a12[(2, 0)],
        o.a12[(1, 1)],
        o.a12[(2, 1)],
        o.a12[(2, 2)],
    );
    let be2 = be * be;
    let k1 = [
        (p * p + j * j) * q,
        (-be2 * p * p + r(2.0) * q * q - be2 * j * j) * p,
        (r(-2.0) * be2 * p * p + be2 * j * j + q * q) * q,
        -be * p * (be * q * q + j * j),
    ];
    let k2 = [
        -be2 * p * q,
        (m - i) * (m - rr),
        j * (rr - r(2.0) * m + i),
        j * j,
    ];
    let k3 = [
        be2 * j * j,
        be * j * (rr - r(2.0) * i + m),
        (i - m) * (i - rr),
        -be * p * q,
    ];
    let first: Vec<C> = (0..4).map(|t| j * j * k2[t] + p * q * k3[t]).collect();
    let w = q * (p * p + j * j);
    let second: Vec<C> = (0..4).map(|t| w * k3[t] - be2 * j * j * k1[t]).collect();
    let (a1, b1, c1, a2, b2, c2) = (
        first[1], first[2], first[3], second[1], second[2], second[3],
    );
    let alpha1 = (a2 * c1 - a1 * c2) / (a1 * b2 - a2 * b1);
    let alpha2 = (be * j * alpha1 * alpha1 + (m - i) * alpha1) / q;
    let n1 = alpha1 * j * (be + r(1.0)) + alpha2 * be * p;
    RouteOracle {
        q: [a1, b1, c1, a2, b2, c2],
        alpha1,
        alpha2,
        n1,
        eigen_relation: be * j - alpha2 * be * q - n1 * alpha1,
    }
}

fn rel(a: C, b: C) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn criterion_7() -> Outcome {
    let names = ["a1", "b1", "c1", "a2", "b2", "c2", "alpha1", "alpha2", "n1"];
    let mut worst = [0.0f64; 9];
    let mut fails = [0usize; 9];
    let mut min_eq = f64::INFINITY;
    let mut evaluations = 0;
    for c in sample_c_values(100, 42) {
        for choice in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, choice).map_err(|e| e.to_string())?;
            let lib: Quadratics = closed_form_quadratics(&spec);
            let cv = chain_values(&spec).map_err(|e| e.to_string())?;
            let o = route_oracle(c, choice);
            let conv = |z: ar_braid::linalg::Complex| C::new(z.re, z.im);
            let mut closed: Vec<C> = lib.values().iter().map(|&z| conv(z)).collect();
            closed.extend([conv(cv.alpha1), conv(cv.alpha2), conv(cv.n1)]);
            let mut route: Vec<C> = o.q.to_vec();
            route.extend([o.alpha1, o.alpha2, o.n1]);
            for k in 0..9 {
                let e = rel(closed[k], route[k]);
                worst[k] = worst[k].max(e);
                if e > 1e-9 {
                    fails[k] += 1;
                }
            }
            let r8 = eigen_relation_residual(&spec)
                .map_err(|e| e.to_string())?
                .norm();
            min_eq = min_eq.min(r8).min(o.eigen_relation.norm());
            evaluations += 1;
        }
    }
    // the library's own sweep must report the same picture
    let lib = route_agreement(100, 42).map_err(|e| e.to_string())?;
    let failing: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|(k, _)| fails[*k] > 0)
        .map(|(k, n)| format!("{n} ({}/{evaluations}, max rel {:.3})", fails[k], worst[k]))
        .collect();
    let lib_first = lib.first_discrepancy.as_ref().map(|d| d.formula);
    let agreeing_max = names
        .iter()
        .enumerate()
        .filter(|(k, _)| fails[*k] == 0)
        .map(|(k, _)| worst[k])
        .fold(0.0, f64::max);
    ensure!(
        min_eq > 1e-10,
        "eigenvalue relation residual {min_eq:e} <= 1e-10"
    );
    ensure!(
        failing.is_empty(),
        "closed form disagrees with its elimination route: {}; library reports first discrepancy {:?}; \
         all other formulas agree to {agreeing_max:.1e}; min |relation residual| {min_eq:.3e}",
        failing.join(", "),
        lib_first
    );
    Ok(format!("{evaluations} evaluations, max rel error {agreeing_max:.1e}, min |relation residual| {min_eq:.3e}"))
}

fn criterion_8() -> Outcome {
    let mut smallest = f64::INFINITY;
    for c in grid_49() {
        for choice in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, choice).map_err(|e| e.to_string())?;
            let nv = case_nonvanishing(&spec);
            ensure!(nv.passed, "c = {c}: {:?}", nv.magnitudes);
            smallest = nv.magnitudes.values().cloned().fold(smallest, f64::min);
            // oracle: the same magnitudes read off the product matrix
            let o = Oracle::new(c, choice);
            for (name, z) in [
                ("I", o.a12[(0, 0)]),
                ("Jent", o.a12[(0, 1)]),
                ("P", o.a12[(2, 0)]),
                ("Q", o.a12[(2, 1)]),
            ] {
                ensure!(
                    z.norm() > 1e-6,
                    "oracle: |{name}| = {} at c = {c}",
                    z.norm()
                );
            }
        }
    }
    let spec =
        ARSpecialization::with_degenerate(0.0, BetaChoice::Plus).map_err(|e| e.to_string())?;
    let nv = case_nonvanishing(&spec);
    ensure!(!nv.passed, "degenerate control passed");
    for name in ["Jent", "P", "Q"] {
        ensure!(
            nv.magnitudes[name] == 0.0,
            "degenerate |{name}| = {}",
            nv.magnitudes[name]
        );
    }
    // I = β² at c = 0
    ensure!(
        (nv.magnitudes["I"] - 1.0).abs() < 1e-15,
        "degenerate |I| = {}",
        nv.magnitudes["I"]
    );
    Ok(format!(
        "smallest magnitude on grid {smallest:.3e}; Jent = P = Q = 0 and |I| = 1 at c = 0"
    ))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    let mut hold = 0;
    let mut total = 0;
    for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)] {
        for seed in 0..20 {
            let params = random_valid_params(n, m, seed).map_err(|e| e.to_string())?;
            for choice in BetaChoice::BOTH {
                let (u, _) = build_general(&params, choice).map_err(|e| e.to_string())?;
                // oracle: nalgebra products
                let d = u.rows();
                let um = DMatrix::<C>::from_fn(d, d, |i, j| C::new(u[(i, j)].re, u[(i, j)].im));
                let herm = (&um - um.adjoint()).norm();
                let sq = (&um * &um - DMatrix::<C>::identity(d, d)).norm();
                worst = worst.max(herm).max(sq);
            }
            let a = block_criterion_check(&params, 1e-8);
            let again = random_valid_params(n, m, seed).map_err(|e| e.to_string())?;
            ensure!(
                a == block_criterion_check(&again, 1e-8),
                "checklist not reproducible at ({n},{m},{seed})"
            );
            hold += a.all_hypotheses_hold() as usize;
            total += 1;
        }
    }
    ensure!(worst <= 1e-9, "U residual {worst:e} > 1e-9");
    Ok(format!(
        "{total} parameter sets, max residual {worst:.2e}, {hold} meet every block hypothesis"
    ))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ar-braid");
    let cases: &[&[&str]] = &[
        &["matrices", "--c", "0.3"],
        &[
            "matrices",
            "--c",
            "0",
            "--allow-degenerate",
            "--format",
            "csv",
        ],
        &["check", "--sweep", "-0.45:0.45:0.05"],
        &["irreducible", "--sweep", "0.01:0.49:0.01"],
        &["irreducible", "--c", "0.2", "--format", "text"],
        &["verify-proof", "--samples", "100", "--seed", "42"],
        &["roots", "--eq", "29"],
        &["roots", "--eq", "30", "--format", "csv"],
        &["general", "--n", "3", "--m", "2", "--seed", "7"],
    ];
    for args in cases {
        let run = || {
            Command::new(bin)
                .args(*args)
                .env_remove("AR_BRAID_OUTPUT_DIR")
                .output()
                .map_err(|e| e.to_string())
        };
        let a = run()?;
        let b = run()?;
        ensure!(!a.stdout.is_empty(), "{args:?}: empty output");
        ensure!(
            a.stdout == b.stdout && a.status.code() == b.status.code(),
            "{args:?}: runs differ"
        );
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("relation suite", criterion_1),
        ("closed-form fidelity", criterion_2),
        ("irreducibility on grid", criterion_3),
        ("exact split identities", criterion_4),
        ("root inventory", criterion_5),
        ("disjointness verdict", criterion_6),
        ("route agreement", criterion_7),
        ("nonvanishing facts", criterion_8),
        ("general construction", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS  {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL  {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
