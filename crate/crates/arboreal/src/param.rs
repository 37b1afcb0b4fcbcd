//! The parametrizing curves C_n and V_n, membership of rationals in
//! S_gamma^(3), integer scans, generator-based enumeration, and the
//! elliptic-surface fiber data in gamma.

use crate::arith::{Budget, FactorCache};
use crate::curves::{
    model_c, model_c3, model_e1, model_e1_integral, model_e2, model_gamma1_c1, model_gamma1_c2,
    model_gamma1_c3, model_gamma1_e, model_min, on_model, scalar_mul, CurveModel, CurvePoint,
    invert_e2_chain,
};
use crate::dynamics::{iterate_value_poly, QuadMap};
use crate::galois::{certificate_json, g_set, small_iterate, LevelCertificate, LevelStatus};
use crate::poly::ParamPoly;
use crate::{rat, ratio};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

/// Outcome of testing one rational c at depth n.
#[derive(Clone, Debug)]
pub struct MembershipRecord {
    pub gamma: BigRational,
    pub c: BigRational,
    pub depth: usize,
    pub in_s: Option<bool>,
    pub reason: Option<String>,
    pub witness_curve: Option<String>,
    pub y: Option<BigRational>,
    pub trail: Vec<LevelCertificate>,
}

/// Fiber of the gamma-surface: y^2 = x^3 + a2 x^2 + a4 x + a6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFiber {
    pub gamma: BigRational,
    pub a2: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

// ---------------------------------------------------------------------------
// curve construction

/// C_n: y^2 = f_t^n(gamma).
pub fn build_c_n(gamma: &BigRational, n: usize) -> CurveModel {
    assert!(n <= 6, "depth out of range");
    CurveModel::even(iterate_value_poly(gamma, n), &format!("C{}", n))
}

/// V_n = C_n together with the twists g(t) y^2 = f_t^n(gamma), g in G_{n-1};
/// 2^{n-1} components.
pub fn build_v_n(gamma: &BigRational, n: usize) -> Vec<CurveModel> {
    assert!((2..=4).contains(&n), "depth out of range");
    let h = iterate_value_poly(gamma, n);
    let mut out = vec![CurveModel::even(h.clone(), &format!("C{}", n))];
    for g in g_set(gamma, n - 1).polys {
        let label = format!("V{}:({})y^2", n, g);
        out.push(CurveModel::twisted(g, h.clone(), &label));
    }
    out
}

/// The normalized V_3 components for the two fully classified critical
/// points, keyed by the level-3 witness subset over the generators
/// {-c, f^2(gamma)}.
fn locate_witness(
    gamma_is_zero: bool,
    c: &BigRational,
    witness: &[usize],
    sqrt: &BigRational,
) -> (CurveModel, BigRational) {
    let f2 = if gamma_is_zero {
        c * c + c // c^2 + c
    } else {
        c * c - c + rat(1)
    };
    match (gamma_is_zero, witness) {
        (true, []) => (model_c3(), sqrt.clone()),
        (true, [0]) => (model_e1(), sqrt / -c),
        (true, [1]) => (model_e2(), sqrt / &f2),
        (true, [0, 1]) => (model_c(), sqrt / -&f2),
        (false, []) => (model_gamma1_e(), sqrt.clone()),
        (false, [0]) => (model_gamma1_c2(), sqrt / -c),
        (false, [1]) => (model_gamma1_c1(), sqrt.clone()),
        (false, [0, 1]) => (model_gamma1_c3(), sqrt / -c),
        _ => unreachable!("level-3 witness over two generators"),
    }
}

// ---------------------------------------------------------------------------
// classification

/// Decide whether c lies in S_gamma^(3) for gamma in {0, 1}, locating the
/// witness point on a normalized V_3 component when it does.
pub fn classify(
    gamma: &BigRational,
    c: &BigRational,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> MembershipRecord {
    let gamma_is_zero = gamma.is_zero();
    assert!(
        gamma_is_zero || gamma.is_one(),
        "exact classification needs gamma in {{0, 1}}"
    );
    let m = QuadMap::new(gamma.clone(), c.clone());
    let mut rec = MembershipRecord {
        gamma: gamma.clone(),
        c: c.clone(),
        depth: 3,
        in_s: None,
        reason: None,
        witness_curve: None,
        y: None,
        trail: vec![],
    };
    if m.critical_orbit(3).iter().any(|v| v.is_zero()) {
        rec.in_s = Some(false);
        rec.reason = Some("orbit-hits-zero".into());
        return rec;
    }
    let (small, trail) = small_iterate(&m, 3, budget, cache);
    rec.trail = trail;
    rec.in_s = small;
    match small {
        None => rec.reason = Some("unknown-under-budget".into()),
        Some(false) => {
            let k = rec
                .trail
                .iter()
                .position(|cert| !cert.is_maximal())
                .map(|i| i + 1);
            rec.reason = Some(match k {
                Some(3) | None => "level-3-maximal".into(),
                Some(k) => format!("level-{}-non-maximal", k),
            });
        }
        Some(true) => {
            if let LevelStatus::NonMaximal { witness, sqrt } = &rec.trail[2].status {
                let (model, y) = locate_witness(gamma_is_zero, c, witness, sqrt);
                let p = CurvePoint::Affine(c.clone(), y.clone());
                debug_assert!(on_model(&model, &p), "witness point off {}", model.label);
                rec.witness_curve = Some(model.label);
                rec.y = Some(y);
            }
        }
    }
    rec
}

/// All integers in [lo, hi] that land in S_gamma^(depth); deterministic
/// order, parallel over c.
pub fn scan_integers(
    gamma: &BigRational,
    lo: i64,
    hi: i64,
    depth: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> Vec<MembershipRecord> {
    assert_eq!(depth, 3, "only depth 3 is fully classified");
    if lo > hi {
        return vec![];
    }
    let mut hits: Vec<MembershipRecord> = (lo..=hi)
        .into_par_iter()
        .map(|c| classify(gamma, &rat(c), budget, cache))
        .filter(|r| r.in_s == Some(true))
        .collect();
    hits.sort_by(|a, b| a.c.cmp(&b.c));
    hits
}

/// t-coordinates of +/- k * gen for k <= n on E1 (generator (-2,1)) and E2
/// (generator pulled back from (1,1) on y^2 = x^3 - x + 1), excluding the
/// degenerate values {0, -2}; every survivor is certified small by the
/// Galois oracle.
pub fn enumerate_s_via_generators(
    n: u64,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> Vec<BigRational> {
    let e1 = model_e1_integral();
    let gen1 = CurvePoint::affine_i64(2, 1);
    let w = model_min();
    let genw = CurvePoint::affine_i64(1, 1);
    let mut ts: Vec<BigRational> = vec![];
    for k in 1..=n as i64 {
        for s in [k, -k] {
            // E1 sits under x = -t
            if let Some((x, _)) = scalar_mul(&e1, s, &gen1).xy() {
                ts.push(-x);
            }
            for pre in invert_e2_chain(&scalar_mul(&w, s, &genw)) {
                if let Some((t, _)) = pre.xy() {
                    ts.push(t.clone());
                }
            }
        }
    }
    ts.retain(|t| !t.is_zero() && *t != rat(-2));
    ts.sort();
    ts.dedup();
    for t in &ts {
        let m = QuadMap::new(rat(0), t.clone());
        let (small, _) = small_iterate(&m, 3, budget, cache);
        assert_eq!(small, Some(true), "generator image {} escaped S", t);
    }
    ts
}

// ---------------------------------------------------------------------------
// the gamma-surface

/// The printed fiber coefficients as exact polynomials in gamma.
pub fn surface_polys() -> (ParamPoly, ParamPoly, ParamPoly) {
    let a2 = ParamPoly::new(vec![ratio(67, 52), ratio(-147, 13), ratio(144, 13)]);
    let a4 = ParamPoly::new(vec![
        ratio(6003, 2704),
        ratio(-4635, 338),
        ratio(8811, 169),
        ratio(-14112, 169),
        ratio(6912, 169),
    ]);
    let a6 = ParamPoly::new(vec![
        ratio(169073, 140608),
        ratio(-307667, 35152),
        ratio(365399, 8788),
        ratio(-228889, 2197),
        ratio(384336, 2197),
        ratio(-338688, 2197),
        ratio(110592, 2197),
    ]);
    (a2, a4, a6)
}

/// Exact evaluation of the fiber coefficients at gamma.
pub fn surface_fiber(gamma: &BigRational) -> SurfaceFiber {
    let (a2, a4, a6) = surface_polys();
    SurfaceFiber {
        gamma: gamma.clone(),
        a2: a2.eval(gamma),
        a4: a4.eval(gamma),
        a6: a6.eval(gamma),
    }
}

/// r(gamma) = x^3 + a2 x^2 + a4 x + a6 at the claimed section
/// x = -2 gamma^2 + 2 gamma, as an exact polynomial; identically zero iff
/// the printed section lies on the printed model.
pub fn section_residual() -> ParamPoly {
    let (a2, a4, a6) = surface_polys();
    let x = ParamPoly::new(vec![rat(0), rat(2), rat(-2)]);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    &(&x3 + &(&a2 * &x2)) + &(&(&a4 * &x) + &a6)
}

/// f^3_{gamma,0}(gamma) as a polynomial in gamma, and the square of
/// gamma^2 - gamma; equal iff (0, gamma^2 - gamma) lies on C_{3,gamma}.
pub fn c3_gamma_point_identity() -> (ParamPoly, ParamPoly) {
    let g = ParamPoly::var();
    let mut p = g.clone();
    for _ in 0..3 {
        let d = &p - &g;
        p = &d * &d; // c = 0
    }
    let s = &(&g * &g) - &g;
    (p, &s * &s)
}

// ---------------------------------------------------------------------------
// report formats

pub fn record_json(r: &MembershipRecord) -> serde_json::Value {
    let m = QuadMap::new(r.gamma.clone(), r.c.clone());
    json!({
        "gamma": r.gamma.to_string(),
        "c": r.c.to_string(),
        "depth": r.depth,
        "in_s": r.in_s,
        "reason": r.reason,
        "witness_curve": r.witness_curve,
        "y": r.y.as_ref().map(|y| y.to_string()),
        "trail": r.trail.iter().map(|c| certificate_json(&m, c)).collect::<Vec<_>>(),
    })
}

pub fn records_json(rs: &[MembershipRecord]) -> serde_json::Value {
    serde_json::Value::Array(rs.iter().map(record_json).collect())
}

pub const CSV_HEADER: &str = "c,in_s,witness_curve,y";

pub fn record_csv(r: &MembershipRecord) -> String {
    format!(
        "{},{},{},{}",
        r.c,
        match r.in_s {
            Some(b) => b.to_string(),
            None => "unknown".into(),
        },
        r.witness_curve.as_deref().unwrap_or(""),
        r.y.as_ref().map(|y| y.to_string()).unwrap_or_default()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::rational_point_search;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn component_counts() {
        for gamma in [rat(0), rat(1), ratio(2, 3)] {
            for n in 2..=4 {
                assert_eq!(build_v_n(&gamma, n).len(), 1 << (n - 1));
            }
        }
    }

    #[test]
    fn c_n_models() {
        let c3 = build_c_n(&rat(0), 3);
        assert!(on_model(&c3, &CurvePoint::affine_i64(0, 0)));
        // f^3(0)(3) = 147 is not a square, so no point over t = 3
        assert!(!on_model(&c3, &CurvePoint::Affine(rat(3), rat(12))));
        let e = build_c_n(&rat(1), 3);
        assert!(on_model(&e, &CurvePoint::affine_i64(0, 0)));
        let c4 = build_c_n(&rat(0), 4);
        assert!(on_model(&c4, &CurvePoint::affine_i64(0, 0)));
        assert!(on_model(&c4, &CurvePoint::affine_i64(-1, 0)));
    }

    #[test]
    fn classify_c_equals_3() {
        let r = classify(&rat(0), &rat(3), &b(), None);
        assert_eq!(r.in_s, Some(true));
        assert_eq!(r.witness_curve.as_deref(), Some("E2"));
        assert_eq!(r.y, Some(ratio(7, 2)));
    }

    #[test]
    fn classify_excluded_values() {
        let r = classify(&rat(0), &rat(-2), &b(), None);
        assert_eq!(r.in_s, Some(false));
        assert_eq!(r.reason.as_deref(), Some("level-2-non-maximal"));
        // (-2, 1) does sit on E1: the excluded t-coordinate
        assert!(on_model(&model_e1(), &CurvePoint::affine_i64(-2, 1)));
        let r = classify(&rat(0), &rat(0), &b(), None);
        assert_eq!(r.in_s, Some(false));
        assert_eq!(r.reason.as_deref(), Some("orbit-hits-zero"));
        let r = classify(&rat(1), &rat(1), &b(), None);
        assert_eq!(r.in_s, Some(false));
        assert_eq!(r.reason.as_deref(), Some("level-2-non-maximal"));
        let r = classify(&rat(1), &rat(0), &b(), None);
        assert_eq!(r.reason.as_deref(), Some("orbit-hits-zero"));
    }

    #[test]
    fn classify_e1_value() {
        // t = -17/4 on E1 comes from the witness subset {-c}
        let r = classify(&rat(0), &ratio(-17, 4), &b(), None);
        assert_eq!(r.in_s, Some(true));
        assert_eq!(r.witness_curve.as_deref(), Some("E1"));
        assert_eq!(r.y.as_ref().map(|y| y.abs()), Some(ratio(53, 8)));
    }

    #[test]
    fn scan_small_windows() {
        let hits = scan_integers(&rat(0), -50, 50, 3, &b(), None);
        let cs: Vec<_> = hits.iter().map(|r| r.c.clone()).collect();
        assert_eq!(cs, vec![rat(3)]);
        let hits = scan_integers(&rat(1), -50, 50, 3, &b(), None);
        assert!(hits.is_empty());
        assert!(scan_integers(&rat(0), 5, 4, 3, &b(), None).is_empty());
    }

    #[test]
    fn enumerate_from_generators() {
        assert!(enumerate_s_via_generators(0, &b(), None).is_empty());
        let ts = enumerate_s_via_generators(5, &b(), None);
        assert!(ts.contains(&ratio(-17, 4)), "ts = {:?}", ts);
        assert!(ts.contains(&ratio(-2, 3)), "ts = {:?}", ts);
        assert!(ts.contains(&ratio(6, 19)), "ts = {:?}", ts);
        assert!(!ts.contains(&rat(0)));
        assert!(!ts.contains(&rat(-2)));
    }

    #[test]
    fn theorem3_cross_validation() {
        // every rational t under the search height on E1 or E2 is small
        // unless t is 0 or -2, and vice versa
        for m in [model_e1(), model_e2()] {
            for p in rational_point_search(&m, 30) {
                let (t, _) = p.xy().unwrap();
                let qm = QuadMap::new(rat(0), t.clone());
                let (small, _) = small_iterate(&qm, 3, &b(), None);
                let excluded = t.is_zero() || *t == rat(-2);
                assert_eq!(small, Some(!excluded), "t = {} on {}", t, m.label);
            }
        }
    }

    #[test]
    fn fiber_at_two() {
        let f = surface_fiber(&rat(2));
        assert_eq!(f.a2, ratio(576 - 294, 13) + ratio(67, 52));
        let (a2, _, _) = surface_polys();
        assert_eq!(a2.eval(&rat(2)), f.a2);
    }

    #[test]
    fn section_residual_two_paths() {
        let r = section_residual();
        for g in [rat(2), rat(-1), ratio(5, 7), rat(10), ratio(-3, 2)] {
            let f = surface_fiber(&g);
            let x = rat(-2) * &g * &g + rat(2) * &g;
            let direct = &x * &x * &x + f.a2 * &x * &x + f.a4 * &x + f.a6;
            assert_eq!(r.eval(&g), direct);
        }
        // the printed section does not satisfy the printed model
        assert!(!r.is_zero());
    }

    #[test]
    fn c3_gamma_rational_point() {
        let (lhs, rhs) = c3_gamma_point_identity();
        assert_eq!(lhs, rhs);
        // so (0, gamma^2 - gamma) is on C_{3,gamma} for every gamma
        let g = ratio(7, 3);
        let h = iterate_value_poly(&g, 3);
        let y = &g * &g - &g;
        assert_eq!(h.eval(&BigRational::zero()), &y * &y);
    }

    #[test]
    fn report_formats() {
        let r = classify(&rat(0), &rat(3), &b(), None);
        let v = record_json(&r);
        assert_eq!(v["in_s"], serde_json::Value::Bool(true));
        assert_eq!(v["witness_curve"], "E2");
        assert_eq!(record_csv(&r), "3,true,E2,7/2");
        let _ = BigInt::from(0);
        let arr = records_json(&[r]);
        assert_eq!(arr.as_array().unwrap().len(), 1);
    }
}
