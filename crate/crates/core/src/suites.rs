//! Seeded randomized axiom suites.
//!
//! Shared by the unit tests and the `verify-axioms` command: every suite
//! draws its inputs from a deterministic generator (coefficients in
//! `{-3..3}`, degrees at most 4), so a failure reproduces exactly from the
//! reported seed and trial index.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::avmod::{
    compatibility_check, derived_ze_direct, derived_ze_witness, dual_pair, field_apply_localized,
    vf_embed, w_generator, TMElement,
};
use crate::glmod::GLWeight;
use crate::rational::{rat_i, Rat};
use crate::ring::{
    partial, valuation, Chart, Coord, LocalizedFun, SphereFun, SpherePoint, DEFAULT_VALUATION_CAP,
};
use crate::vectorfields::{DeltaCombination, VField};

/// A failed law with enough detail to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub law: String,
    pub seed: u64,
    pub trial: usize,
    pub detail: String,
}

/// Outcome of a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub seed: u64,
    pub trials: usize,
    pub laws_checked: usize,
    pub failures: Vec<Counterexample>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random coefficient in `{-3..3} \ {0}`.
fn coeff(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            return rat_i(c);
        }
    }
}

/// Random canonical ring element: up to `terms` monomials of total degree
/// at most `deg`.
pub fn random_sphere_fun(rng: &mut ChaCha8Rng, deg: u32, terms: usize) -> SphereFun {
    let n = rng.gen_range(1..=terms);
    let mut acc = SphereFun::zero();
    for _ in 0..n {
        let e = rng.gen_range(0..=1u32);
        let rest = deg - e;
        let a = rng.gen_range(0..=rest);
        let b = rng.gen_range(0..=rest - a);
        acc = acc.add(&SphereFun::monomial(coeff(rng), a, b, e));
    }
    acc
}

/// Random z-localized element: a ring element over `z^k`, `k <= 2`.
pub fn random_localized(rng: &mut ChaCha8Rng, deg: u32, terms: usize) -> LocalizedFun {
    let num = random_sphere_fun(rng, deg, terms);
    let k = rng.gen_range(0..=2u32);
    LocalizedFun::new(num, (0, 0, k))
}

/// Random vector field as a combination of the rotation generators.
pub fn random_field(rng: &mut ChaCha8Rng, deg: u32, terms: usize) -> VField {
    let combo = DeltaCombination {
        a: random_sphere_fun(rng, deg, terms),
        b: random_sphere_fun(rng, deg, terms),
        c: random_sphere_fun(rng, deg, terms),
    };
    VField::from_deltas(&combo)
}

/// Random module element with z-local coefficients.
pub fn random_element(rng: &mut ChaCha8Rng, weight: &GLWeight, deg: u32) -> TMElement {
    let coeffs = (0..weight.dim())
        .map(|_| random_localized(rng, deg, 2))
        .collect();
    TMElement::new(weight.clone(), coeffs).expect("z-local by construction")
}

/// Random weight with `m <= max_m` and integer `|alpha| <= 4`.
fn random_weight(rng: &mut ChaCha8Rng, max_m: usize) -> GLWeight {
    GLWeight::new(rng.gen_range(0..=max_m), rat_i(rng.gen_range(-4i64..=4)))
}

struct SuiteRunner {
    seed: u64,
    laws_checked: usize,
    failures: Vec<Counterexample>,
}

impl SuiteRunner {
    fn new(seed: u64) -> Self {
        Self {
            seed,
            laws_checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, law: &str, trial: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.laws_checked += 1;
        if !ok {
            self.failures.push(Counterexample {
                law: law.to_string(),
                seed: self.seed,
                trial,
                detail: detail(),
            });
        }
    }

    fn into_outcome(self, trials: usize) -> SuiteOutcome {
        SuiteOutcome {
            seed: self.seed,
            trials,
            laws_checked: self.laws_checked,
            failures: self.failures,
        }
    }
}

/// Ring laws: canonical-form homomorphism, ring axioms, degree additivity,
/// coordinate division, the Leibniz rule and commuting chart partials, and
/// the valuation/evaluation dichotomy.
pub fn ring_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let mut rng = rng_for(seed);
    let mut runner = SuiteRunner::new(seed);
    for trial in 0..trials {
        let f = random_sphere_fun(&mut rng, 4, 3);
        let g = random_sphere_fun(&mut rng, 4, 3);
        let h = random_sphere_fun(&mut rng, 3, 2);

        let assoc = f.mul(&g).mul(&h) == f.mul(&g.mul(&h));
        runner.check("ring.mul_associative", trial, assoc, || {
            format!("f={f}, g={g}, h={h}")
        });
        let distr = f.mul(&g.add(&h)) == f.mul(&g).add(&f.mul(&h));
        runner.check("ring.distributive", trial, distr, || {
            format!("f={f}, g={g}, h={h}")
        });
        let comm = f.mul(&g) == g.mul(&f);
        runner.check("ring.mul_commutative", trial, comm, || {
            format!("f={f}, g={g}")
        });

        // degree additivity (the ring is a domain)
        let fl = LocalizedFun::new(f.clone(), (0, 0, rng.gen_range(0..=2)));
        let gl = LocalizedFun::new(g.clone(), (0, 0, rng.gen_range(0..=2)));
        if !fl.is_zero() && !gl.is_zero() {
            let additive =
                fl.mul(&gl).degree_z().unwrap() == fl.degree_z().unwrap() + gl.degree_z().unwrap();
            runner.check("ring.degree_additive", trial, additive, || {
                format!("f={fl}, g={gl}")
            });
        }

        // divide_by_coordinate inverts multiplication
        for c in Coord::ALL {
            let multiple = f.mul(&SphereFun::coordinate(c));
            let back = multiple.divide_by_coordinate(c);
            runner.check(
                "ring.divide_round_trip",
                trial,
                back.as_ref() == Ok(&f),
                || format!("f={f}, coordinate {c}"),
            );
        }

        // Leibniz rule and commuting partials, in every chart
        for chart in Chart::ALL {
            let (t1, t2) = chart.parameters();
            let fl = LocalizedFun::from_sphere(f.clone());
            let gl = LocalizedFun::from_sphere(g.clone());
            let lhs = partial(&fl.mul(&gl), t1, chart);
            let rhs = partial(&fl, t1, chart)
                .mul(&gl)
                .add(&fl.mul(&partial(&gl, t1, chart)));
            runner.check("ring.partial_leibniz", trial, lhs == rhs, || {
                format!("chart {chart}, f={f}, g={g}")
            });
            let mixed = partial(&partial(&fl, t1, chart), t2, chart)
                == partial(&partial(&fl, t2, chart), t1, chart);
            runner.check("ring.partials_commute", trial, mixed, || {
                format!("chart {chart}, f={f}")
            });
        }

        // valuation is zero exactly on chart units
        if !f.is_zero() {
            let u = rat_i(rng.gen_range(-2i64..=2));
            let v = rat_i(rng.gen_range(-2i64..=2));
            let p = SpherePoint::from_stereographic(&u, &v);
            if !p.z().is_zero() {
                let fl = LocalizedFun::from_sphere(f.clone());
                let val = valuation(&fl, &p, Chart::Z, DEFAULT_VALUATION_CAP).unwrap();
                let nonzero = !fl.eval(&p).unwrap().is_zero();
                runner.check(
                    "ring.valuation_vs_evaluation",
                    trial,
                    (val == 0) == nonzero,
                    || format!("f={f}, P={p}"),
                );
            }
        }
    }
    runner.into_outcome(trials)
}

/// Vector-field laws: Jacobi, Leibniz over the ring action, injectivity of
/// the chart expression, and agreement of ambient and chart actions.
pub fn vectorfields_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let mut rng = rng_for(seed);
    let mut runner = SuiteRunner::new(seed);
    if trials > 0 {
        let [d12, d23, d31] = VField::deltas();
        let table_ok =
            d12.bracket(&d23) == d31 && d23.bracket(&d31) == d12 && d31.bracket(&d12) == d23;
        runner.check("vf.bracket_table", 0, table_ok, || {
            "rotation bracket table".into()
        });
        let relation = VField::from_deltas(&DeltaCombination {
            a: SphereFun::coordinate(Coord::X),
            b: SphereFun::coordinate(Coord::Y),
            c: SphereFun::coordinate(Coord::Z),
        });
        runner.check("vf.module_relation", 0, relation.is_zero(), || {
            "x*D23 + y*D31 + z*D12".into()
        });
    }
    for trial in 0..trials {
        let eta = random_field(&mut rng, 2, 2);
        let mu = random_field(&mut rng, 2, 2);
        let nu = random_field(&mut rng, 2, 2);
        let a = random_sphere_fun(&mut rng, 3, 2);

        let jacobi = eta
            .bracket(&mu.bracket(&nu))
            .add(&mu.bracket(&nu.bracket(&eta)))
            .add(&nu.bracket(&eta.bracket(&mu)));
        runner.check("vf.jacobi", trial, jacobi.is_zero(), || {
            format!("eta={eta}, mu={mu}, nu={nu}")
        });

        let lhs = eta.bracket(&mu.scale_fun(&a));
        let rhs = mu
            .scale_fun(&eta.apply(&a))
            .add(&eta.bracket(&mu).scale_fun(&a));
        runner.check("vf.bracket_leibniz", trial, lhs == rhs, || {
            format!("eta={eta}, mu={mu}, a={a}")
        });

        // chart round trip through the delta combination
        let back = VField::from_deltas(&eta.to_deltas());
        runner.check("vf.delta_round_trip", trial, back == eta, || {
            format!("eta={eta}")
        });

        // chart expression reproduces the ambient action
        let f = random_sphere_fun(&mut rng, 3, 2);
        for chart in Chart::ALL {
            let (c1, c2) = eta.to_chart(chart);
            let (t1, t2) = chart.parameters();
            let fl = LocalizedFun::from_sphere(f.clone());
            let via_chart = partial(&fl, t1, chart)
                .mul(&c1)
                .add(&partial(&fl, t2, chart).mul(&c2));
            let ambient = LocalizedFun::from_sphere(eta.apply(&f));
            runner.check("vf.chart_embedding", trial, via_chart == ambient, || {
                format!("chart {chart}, eta={eta}, f={f}")
            });
        }
    }
    runner.into_outcome(trials)
}

/// Module laws: Eq-style action is a Lie action, the compatibility law,
/// both routes to `z ⊗ E_pq`, the adjoint property of the field embedding,
/// and invariance of the dual pairing.
pub fn avmod_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let mut rng = rng_for(seed);
    let mut runner = SuiteRunner::new(seed);
    for trial in 0..trials {
        let weight = random_weight(&mut rng, 3);
        let eta = random_field(&mut rng, 2, 2);
        let mu = random_field(&mut rng, 2, 2);
        let v = random_element(&mut rng, &weight, 2);
        let a = random_sphere_fun(&mut rng, 2, 2);

        let lie = v.vf_act(&mu).vf_act(&eta).sub(&v.vf_act(&eta).vf_act(&mu));
        let direct = v.vf_act(&eta.bracket(&mu));
        runner.check("avmod.lie_action", trial, lie == direct, || {
            format!("eta={eta}, mu={mu}, v={v}")
        });

        runner.check(
            "avmod.compatibility",
            trial,
            compatibility_check(&eta, &a, &v),
            || format!("eta={eta}, a={a}, v={v}"),
        );

        for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let agree = derived_ze_direct(p, q, &v) == derived_ze_witness(p, q, &v);
            runner.check("avmod.derived_ze", trial, agree, || {
                format!("E{p}{q} on v={v}")
            });
        }

        let adjoint = vf_embed(&mu).vf_act(&eta) == vf_embed(&eta.bracket(&mu));
        runner.check("avmod.vf_embed_adjoint", trial, adjoint, || {
            format!("eta={eta}, mu={mu}")
        });

        // dual pairing invariance on random pairs
        let w_dual = weight.dual();
        let w2 = random_element(&mut rng, &w_dual, 2);
        let lhs = field_apply_localized(&eta, &dual_pair(&v, &w2).unwrap());
        let rhs = dual_pair(&v.vf_act(&eta), &w2)
            .unwrap()
            .add(&dual_pair(&v, &w2.vf_act(&eta)).unwrap());
        runner.check("avmod.dual_pair_invariance", trial, lhs == rhs, || {
            format!("eta={eta}, v={v}, w={w2}")
        });

        // first-layer boundedness of the generators
        if trial < 7 {
            let table = [
                (0usize, -2i64),
                (0, 2),
                (1, 1),
                (1, -1),
                (2, 0),
                (2, 2),
                (3, 1),
            ];
            let (m, alpha) = table[trial];
            let w = w_generator(m, &rat_i(alpha)).unwrap();
            let d = w.deg().unwrap();
            for delta in VField::deltas() {
                let acted = w.vf_act(&delta);
                let ok = acted.is_zero() || acted.deg().unwrap() >= d;
                runner.check("avmod.w_first_layer", trial, ok, || {
                    format!("(m, alpha) = ({m}, {alpha})")
                });
            }
        }
    }
    runner.into_outcome(trials)
}

/// Runs all three suites and merges the outcomes.
pub fn run_all(seed: u64, trials: usize) -> SuiteOutcome {
    let ring = ring_suite(seed, trials);
    let vf = vectorfields_suite(seed.wrapping_add(1), trials);
    let avm = avmod_suite(seed.wrapping_add(2), trials);
    let mut failures = ring.failures;
    failures.extend(vf.failures);
    failures.extend(avm.failures);
    SuiteOutcome {
        seed,
        trials,
        laws_checked: ring.laws_checked + vf.laws_checked + avm.laws_checked,
        failures,
    }
}
