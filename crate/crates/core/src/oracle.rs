//! Seeded property runs: closed forms against exhaustive oracles, structural
//! lemmas, and the closed-form core results on random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::games::{
    private_requeueing_game, public_requeueing_game, queueing_cost_game, reduced_cost_game, relaxed_public_game,
    GameTable, RearrangementVariant,
};
use crate::model::{Coalition, QueueingProblem, RequeueingProblem};
use crate::scalar::Scalar;
use crate::scheduling::{brute_force_waiting_costs, fixed_machine_cost, optimal_machine_count, threshold, thresholds};
use crate::solutions::{
    convexity_violation, core_bounds, core_nonempty, is_concave, is_convex, is_in_core, private_single_machine_bound,
    single_machine_bound, theorem1_allocation, theorem1_uniqueness_check, theorem3_allocation, CoreCertificate,
};

/// `C(S, k)` as used by the scheduling checks; replaceable to test the harness.
pub type FixedCostFn = dyn Fn(&QueueingProblem, Coalition, usize) -> Scalar + Sync;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub instances: usize,
    pub max_n: usize,
    pub max_weight: i64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seed: 1, instances: 100, max_n: 5, max_weight: 20 }
    }
}

/// An instance in problem-file form, for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub weights: Vec<Scalar>,
    pub machine_cost: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialRecord {
    pub machines: usize,
    /// 1-based agents in priority order
    pub order: Vec<usize>,
}

impl Instance {
    fn of(problem: &QueueingProblem) -> Self {
        Instance { weights: problem.weights().to_vec(), machine_cost: problem.machine_cost().clone(), initial: None }
    }

    fn of_requeueing(rq: &RequeueingProblem) -> Self {
        let pi = crate::games::priority_order(rq);
        Instance {
            initial: Some(InitialRecord {
                machines: rq.initial_machines(),
                order: pi.order().iter().map(|a| a + 1).collect(),
            }),
            ..Instance::of(rq.base())
        }
    }

    fn size(&self) -> (usize, Scalar) {
        (self.weights.len(), self.weights.iter().sum())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub instance: Instance,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub instances: usize,
    pub cases: usize,
    pub mismatches: usize,
    /// Smallest failing instance, if any.
    pub counterexample: Option<Mismatch>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub checks: Vec<CheckSummary>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "seed {} | {} instances | n <= {} | weights <= {}\n",
            self.config.seed, self.config.instances, self.config.max_n, self.config.max_weight
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out += &format!("{status}  {:<width$} {:>5} instances {:>8} cases {:>4} mismatches\n", c.name, c.instances, c.cases, c.mismatches);
            if let Some(m) = &c.counterexample {
                out += &format!(
                    "      {}\n      replay: {}\n",
                    m.detail,
                    serde_json::to_string(&m.instance).expect("serializable")
                );
            }
        }
        out
    }
}

/// Accumulates one check's outcome.
pub struct Check {
    name: String,
    instances: usize,
    cases: usize,
    mismatches: usize,
    best: Option<Mismatch>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), instances: 0, cases: 0, mismatches: 0, best: None }
    }

    pub fn instance(&mut self) {
        self.instances += 1;
    }

    /// Records one case; `detail` is evaluated only on failure.
    pub fn expect(&mut self, ok: bool, instance: impl FnOnce() -> Instance, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            return;
        }
        self.mismatches += 1;
        let m = Mismatch { instance: instance(), detail: detail() };
        if self.best.as_ref().is_none_or(|b| m.instance.size() < b.instance.size()) {
            self.best = Some(m);
        }
    }

    pub fn finish(self) -> CheckSummary {
        CheckSummary {
            name: self.name,
            instances: self.instances,
            cases: self.cases,
            mismatches: self.mismatches,
            counterexample: self.best,
        }
    }
}

/// Random non-increasing integer weights in `1..=max_weight`.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize, max_weight: i64) -> Vec<i64> {
    let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, max_weight: i64, b: Scalar) -> QueueingProblem {
    let w = random_weights(rng, n, max_weight);
    QueueingProblem::new(w.into_iter().map(Scalar::from_int).collect(), b).expect("valid random problem")
}

/// Random initial machine count and priority order over `problem`'s agents.
pub fn random_requeueing(rng: &mut ChaCha8Rng, problem: QueueingProblem) -> RequeueingProblem {
    let n = problem.n();
    let m0 = rng.gen_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    RequeueingProblem::from_order(problem, m0, &order).expect("valid random schedule")
}

/// Machine costs crossing every threshold of every coalition: each threshold,
/// the midpoints between consecutive ones, 0 and one beyond the largest.
pub fn threshold_grid(problem: &QueueingProblem) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> =
        Coalition::all_nonempty(problem.n()).flat_map(|c| thresholds(problem, c)).filter(|t| !t.is_negative()).collect();
    pts.push(Scalar::zero());
    pts.sort();
    pts.dedup();
    let mut grid = Vec::with_capacity(2 * pts.len() + 1);
    for (i, p) in pts.iter().enumerate() {
        grid.push(p.clone());
        if let Some(q) = pts.get(i + 1) {
            grid.push(Scalar::midpoint(p, q));
        }
    }
    grid.push(pts.last().expect("contains 0") + &Scalar::one());
    grid
}

fn instance_size(rng: &mut ChaCha8Rng, lo: usize, max_n: usize) -> usize {
    rng.gen_range(lo.min(max_n)..=max_n)
}

fn lowest_argmin(costs: impl Iterator<Item = Scalar>) -> (usize, Scalar) {
    let mut best: Option<(usize, Scalar)> = None;
    for (i, c) in costs.enumerate() {
        if best.as_ref().is_none_or(|(_, b)| c < *b) {
            best = Some((i + 1, c));
        }
    }
    best.expect("at least one machine count")
}

/// Exhaustive semi-active schedules against `min_k C(S, k)` and `m(S)`.
pub fn scheduling_oracle(cfg: &OracleConfig, closed: &FixedCostFn) -> CheckSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut check = Check::new("schedule oracle vs closed form");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, cfg.max_n);
        let base = random_problem(&mut rng, n, cfg.max_weight, Scalar::zero());
        check.instance();
        let waiting: Vec<(Coalition, Vec<Scalar>)> = Coalition::all_nonempty(n)
            .map(|s| {
                let per_m = brute_force_waiting_costs(&base, s, s.len()).expect("within cap");
                (s, per_m.into_iter().map(|(c, _)| c).collect())
            })
            .collect();
        for b in threshold_grid(&base) {
            let p = base.with_machine_cost(b.clone()).expect("b >= 0");
            for (s, per_m) in &waiting {
                let (brute_m, brute) = lowest_argmin(per_m.iter().enumerate().map(|(i, w)| w + &(&b * (i as i64 + 1))));
                let (closed_m, closed_min) = lowest_argmin((1..=s.len()).map(|k| closed(&p, *s, k)));
                let m = optimal_machine_count(&p, *s).expect("non-empty");
                check.expect(
                    brute == closed_min && brute_m == closed_m && brute_m == m,
                    || Instance::of(&p),
                    || {
                        format!(
                            "S={{{s}}} b={b}: exhaustive {brute} at m={brute_m}, closed form {closed_min} at m={closed_m}, m(S)={m}"
                        )
                    },
                );
            }
        }
    }
    check.finish()
}

/// `r_S(k) = C(S, k-1) - C(S, k) + b` with the two sides computed separately.
pub fn threshold_identity(cfg: &OracleConfig, closed: &FixedCostFn) -> CheckSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut check = Check::new("threshold = cost difference + b");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, cfg.max_n);
        let b = Scalar::from_int(rng.gen_range(0..=3 * cfg.max_weight));
        let p = random_problem(&mut rng, n, cfg.max_weight, b);
        check.instance();
        for s in Coalition::all_nonempty(n) {
            for k in 2..=s.len() {
                let r = threshold(&p, s, k).expect("valid k");
                let diff = closed(&p, s, k - 1) - closed(&p, s, k) + p.machine_cost();
                check.expect(r == diff, || Instance::of(&p), || format!("S={{{s}}} k={k}: r={r}, difference={diff}"));
            }
        }
    }
    check.finish()
}

/// Threshold and machine-count monotonicity over all coalition pairs.
pub fn lemma_suite(cfg: &OracleConfig) -> Vec<CheckSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let mut in_k = Check::new("threshold non-increasing in k");
    let mut in_s = Check::new("threshold monotone in coalition");
    let mut m_sub = Check::new("machine count monotone in coalition");
    let mut m_swap = Check::new("heavier newcomer needs more machines");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, cfg.max_n);
        let base = random_problem(&mut rng, n, cfg.max_weight, Scalar::zero());
        for c in [&mut in_k, &mut in_s, &mut m_sub, &mut m_swap] {
            c.instance();
        }
        let all: Vec<Coalition> = Coalition::all_nonempty(n).collect();
        let r: Vec<Vec<Scalar>> = all.iter().map(|&s| thresholds(&base, s)).collect();
        for (si, s) in all.iter().enumerate() {
            for k in 1..r[si].len() {
                in_k.expect(r[si][k] <= r[si][k - 1], || Instance::of(&base), || {
                    format!("S={{{s}}}: r({})={} > r({})={}", k + 2, r[si][k], k + 1, r[si][k - 1])
                });
            }
            for (ti, t) in all.iter().enumerate() {
                if s == t || !s.is_subset_of(*t) {
                    continue;
                }
                for (k, (rs, rt)) in r[si].iter().zip(&r[ti]).enumerate() {
                    in_s.expect(rs <= rt, || Instance::of(&base), || {
                        format!("r_{{{s}}}({})={rs} > r_{{{t}}}={rt}", k + 2)
                    });
                }
            }
        }
        for b in threshold_grid(&base) {
            let p = base.with_machine_cost(b.clone()).expect("b >= 0");
            let m: Vec<usize> = all.iter().map(|&s| optimal_machine_count(&p, s).expect("non-empty")).collect();
            let idx = |c: Coalition| c.bits() as usize - 1;
            for &s in &all {
                for &t in &all {
                    if s != t && s.is_subset_of(t) {
                        m_sub.expect(m[idx(s)] <= m[idx(t)], || Instance::of(&p), || {
                            format!("b={b}: m({{{s}}})={} > m({{{t}}})={}", m[idx(s)], m[idx(t)])
                        });
                    }
                }
            }
            for j in 0..n {
                for i in j + 1..n {
                    for s in p.grand().without(i).without(j).subsets() {
                        let (si, sj) = (s.with(i), s.with(j));
                        m_swap.expect(m[idx(si)] <= m[idx(sj)], || Instance::of(&p), || {
                            format!("b={b}: m({{{si}}})={} > m({{{sj}}})={}", m[idx(si)], m[idx(sj)])
                        });
                    }
                }
            }
        }
    }
    vec![in_k.finish(), in_s.finish(), m_sub.finish(), m_swap.finish()]
}

/// Certificate re-check used by [`theorem_suite`].
pub fn recheck_certificate(game: &GameTable, cert: &CoreCertificate) -> bool {
    cert.verify(game)
        && match cert {
            CoreCertificate::Empty { collection } => collection.integer_form().verify(game),
            CoreCertificate::Nonempty { .. } => true,
        }
}

/// Callback judging one core verdict of the game it was computed for.
pub type CertificateAudit<'a> = &'a mut dyn FnMut(&GameTable, &CoreCertificate) -> bool;

struct Auditor<'a> {
    check: Check,
    judge: CertificateAudit<'a>,
}

impl Auditor<'_> {
    fn core(&mut self, game: &GameTable, instance: impl Fn() -> Instance) -> CoreCertificate {
        let cert = core_nonempty(game).expect("within solver cap");
        let ok = (self.judge)(game, &cert);
        self.check.expect(ok, instance, || {
            format!("certificate failed re-check: {}", serde_json::to_string(&cert).unwrap_or_default())
        });
        cert
    }
}

/// Closed-form core results on random instances. Every core call is audited
/// in the final summary.
pub fn theorem_suite(cfg: &OracleConfig) -> Vec<CheckSummary> {
    theorem_suite_audited(cfg, &mut recheck_certificate)
}

/// [`theorem_suite`] with a caller-supplied certificate audit.
pub fn theorem_suite_audited(cfg: &OracleConfig, judge: CertificateAudit<'_>) -> Vec<CheckSummary> {
    let mut audit = Auditor { check: Check::new("certificate soundness"), judge };
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let n_max = cfg.max_n;
    let w_max = cfg.max_weight;

    // cheap machines: membership
    let mut c = Check::new("cheap machines: allocation in core");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let w = random_weights(&mut rng, n, w_max);
        let bound = w[n.div_ceil(2) - 1];
        let b = Scalar::ratio(rng.gen_range(0..=2 * bound), 2);
        let p = QueueingProblem::new(w.into_iter().map(Scalar::from_int).collect(), b).expect("valid");
        c.instance();
        let game = queueing_cost_game(&p).expect("small");
        let y = theorem1_allocation(&p).expect("hypothesis holds");
        c.expect(is_in_core(&game, &y).expect("dimension"), || Instance::of(&p), || format!("{y:?} not in core"));
        let cert = audit.core(&game, || Instance::of(&p));
        c.expect(cert.is_nonempty(), || Instance::of(&p), || "solver reports empty core".into());
    }
    out.push(c.finish());

    // cheap machines: uniqueness
    let mut c = Check::new("cheap machines: unique core point");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let w = random_weights(&mut rng, n, w_max);
        let bound = w[(2 * n + 1).div_ceil(4).min(n) - 1];
        let b = Scalar::ratio(rng.gen_range(0..=2 * bound), 2);
        let p = QueueingProblem::new(w.into_iter().map(Scalar::from_int).collect(), b).expect("valid");
        c.instance();
        let game = queueing_cost_game(&p).expect("small");
        let y = theorem1_uniqueness_check(&p).expect("hypothesis holds");
        audit.core(&game, || Instance::of(&p));
        let bounds = core_bounds(&game).expect("small");
        let pinned = bounds.as_ref().is_some_and(|b| b.iter().zip(&y).all(|((lo, hi), v)| lo == v && hi == v));
        c.expect(pinned, || Instance::of(&p), || format!("core extent {bounds:?} is not the point {y:?}"));
    }
    out.push(c.finish());

    // expensive machines: reduced game
    let mut c = Check::new("expensive machines: reduced game");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let base = random_problem(&mut rng, n, w_max, Scalar::zero());
        let extra = if rng.gen_bool(0.25) { 0 } else { rng.gen_range(0..=2 * w_max) };
        let p = base.with_machine_cost(single_machine_bound(&base) + Scalar::ratio(extra, 2)).expect("b >= 0");
        c.instance();
        let game = queueing_cost_game(&p).expect("small");
        let reduced = reduced_cost_game(&p).expect("small");
        c.expect(reduced.single_machine_regime, || Instance::of(&p), || "single-machine flag unset".into());
        c.expect(is_concave(&reduced.table), || Instance::of(&p), || "reduced game not concave".into());
        let a = audit.core(&game, || Instance::of(&p));
        let r = audit.core(&reduced.table, || Instance::of(&p));
        let cross = match (a.allocation(), r.allocation()) {
            (Some(ya), Some(yr)) => {
                is_in_core(&reduced.table, ya).unwrap_or(false) && is_in_core(&game, yr).unwrap_or(false)
            }
            _ => false,
        };
        c.expect(cross, || Instance::of(&p), || "core witnesses do not cross-validate".into());
        let same = core_bounds(&game).expect("small") == core_bounds(&reduced.table).expect("small");
        c.expect(same, || Instance::of(&p), || "core extents differ".into());
    }
    out.push(c.finish());

    // the empty band
    let mut c = Check::new("empty band between r(2) and sum (i-1) w_i");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 3, n_max.max(3));
        let base = random_problem(&mut rng, n, w_max, Scalar::zero());
        let lo = threshold(&base, base.grand(), 2).expect("n >= 3");
        let hi = single_machine_bound(&base);
        c.instance();
        let near_top = &hi - &Scalar::ratio(1, 2);
        for b in [lo.clone(), Scalar::midpoint(&lo, &hi), near_top.max(lo.clone())] {
            let p = base.with_machine_cost(b.clone()).expect("b >= 0");
            let game = queueing_cost_game(&p).expect("small");
            let cert = audit.core(&game, || Instance::of(&p));
            c.expect(!cert.is_nonempty(), || Instance::of(&p), || format!("core non-empty at b={b}"));
        }
    }
    out.push(c.finish());

    // cheap machines, private requeueing
    let mut c = Check::new("private requeueing: cheap machines");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let w = random_weights(&mut rng, n, w_max);
        let b = Scalar::ratio(rng.gen_range(0..=2 * w[n - 1]), 2);
        let p = QueueingProblem::new(w.into_iter().map(Scalar::from_int).collect(), b).expect("valid");
        let rq = random_requeueing(&mut rng, p);
        c.instance();
        let y = theorem3_allocation(&rq).expect("hypothesis holds");
        for variant in [RearrangementVariant::Swaps, RearrangementVariant::NoSwaps] {
            let game = private_requeueing_game(&rq, variant).expect("small");
            c.expect(is_in_core(&game, &y).unwrap_or(false), || Instance::of_requeueing(&rq), || {
                format!("{variant}: {y:?} not in core")
            });
            for (s, v) in game.iter() {
                let sum: Scalar = s.members().map(|i| &y[i]).sum();
                c.expect(*v == sum, || Instance::of_requeueing(&rq), || format!("{variant}: V({{{s}}})={v}, closed form {sum}"));
            }
            audit.core(&game, || Instance::of_requeueing(&rq));
        }
    }
    out.push(c.finish());

    // expensive machines, private requeueing from one machine
    let mut c = Check::new("private requeueing: one machine, expensive");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let base = random_problem(&mut rng, n, w_max, Scalar::zero());
        let b = private_single_machine_bound(&base) + Scalar::from_int(rng.gen_range(0..=w_max) * i64::from(rng.gen_bool(0.7)));
        let p = base.with_machine_cost(b).expect("b >= 0");
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let rq = RequeueingProblem::from_order(p, 1, &order).expect("valid");
        c.instance();
        for variant in [RearrangementVariant::Swaps, RearrangementVariant::NoSwaps] {
            let game = private_requeueing_game(&rq, variant).expect("small");
            let cert = audit.core(&game, || Instance::of_requeueing(&rq));
            c.expect(cert.is_nonempty(), || Instance::of_requeueing(&rq), || format!("{variant}: empty core"));
        }
    }
    out.push(c.finish());

    // optimal initial order, public requeueing; one initial machine and several reported apart
    let mut single = Check::new("public requeueing: optimal order, one initial machine");
    let mut several = Check::new("public requeueing: optimal order, several initial machines");
    let mut convex_single = Check::new("relaxed public game convex, one initial machine");
    let mut convex_several = Check::new("relaxed public game convex, several initial machines");
    for idx in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, n_max);
        let base = random_problem(&mut rng, n, w_max, Scalar::zero());
        let b = Scalar::ratio(rng.gen_range(0..=4 * w_max * n as i64), 2);
        let p = base.with_machine_cost(b).expect("b >= 0");
        // every fifth instance serves everybody first, every fifth uses one machine
        let m0 = match idx % 5 {
            0 => n,
            1 => 1,
            _ => rng.gen_range(1..=n),
        };
        let rq = RequeueingProblem::from_order(p, m0, &(0..n).collect::<Vec<_>>()).expect("valid");
        let (c, convex) = if m0 == 1 { (&mut single, &mut convex_single) } else { (&mut several, &mut convex_several) };
        c.instance();
        let relaxed = relaxed_public_game(&rq).expect("small");
        let relaxed_cert = audit.core(&relaxed, || Instance::of_requeueing(&rq));
        if n <= 5 {
            convex.instance();
            convex.expect(is_convex(&relaxed), || Instance::of_requeueing(&rq), || {
                let v = convexity_violation(&relaxed).expect("not convex");
                format!("agent {} adds less to {{{}}} than to {{{}}}", v.agent + 1, v.larger, v.smaller)
            });
        }
        for variant in [RearrangementVariant::Swaps, RearrangementVariant::NoSwaps] {
            let game = public_requeueing_game(&rq, variant).expect("small");
            let cert = audit.core(&game, || Instance::of_requeueing(&rq));
            c.expect(cert.is_nonempty(), || Instance::of_requeueing(&rq), || format!("{variant}: empty core"));
            let inherits = relaxed_cert.allocation().is_some_and(|y| is_in_core(&game, y).unwrap_or(false));
            c.expect(inherits, || Instance::of_requeueing(&rq), || format!("{variant}: relaxed core point not in core"));
        }
    }
    out.extend([single.finish(), several.finish(), convex_single.finish(), convex_several.finish()]);
    out.push(audit.check.finish());
    out
}

/// Concavity of the reduced game and convexity of the relaxed public game.
pub fn shape_suite(cfg: &OracleConfig) -> Vec<CheckSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
    let mut concave = Check::new("reduced game concave (expensive machines)");
    let mut convex = Check::new("relaxed public game convex (one initial machine)");
    for _ in 0..cfg.instances {
        let n = instance_size(&mut rng, 1, cfg.max_n);
        let base = random_problem(&mut rng, n, cfg.max_weight, Scalar::zero());
        let p = base.with_machine_cost(single_machine_bound(&base) + Scalar::from_int(rng.gen_range(0..=cfg.max_weight))).expect("b >= 0");
        concave.instance();
        let r = reduced_cost_game(&p).expect("small");
        concave.expect(is_concave(&r.table), || Instance::of(&p), || "reduced game not concave".into());

        for b in threshold_grid(&base) {
            let p = base.with_machine_cost(b).expect("b >= 0");
            let rq = RequeueingProblem::from_order(p, 1, &(0..n).collect::<Vec<_>>()).expect("valid");
            let g = relaxed_public_game(&rq).expect("small");
            convex.expect(is_convex(&g), || Instance::of_requeueing(&rq), || "relaxed game not convex".into());
        }
        convex.instance();
    }
    vec![concave.finish(), convex.finish()]
}

/// The command-line oracle run: schedule oracle, threshold identity, lemmas and shapes.
pub fn run_oracle_checks(cfg: &OracleConfig) -> OracleReport {
    run_oracle_checks_with(cfg, &fixed_machine_cost)
}

pub fn run_oracle_checks_with(cfg: &OracleConfig, closed: &FixedCostFn) -> OracleReport {
    let mut checks = vec![scheduling_oracle(cfg, closed), threshold_identity(cfg, closed)];
    checks.extend(lemma_suite(cfg));
    checks.extend(shape_suite(cfg));
    OracleReport { config: cfg.clone(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> OracleConfig {
        OracleConfig { seed: 7, instances: 12, max_n: 4, max_weight: 9 }
    }

    #[test]
    fn clean_run_passes_and_is_deterministic() {
        let a = run_oracle_checks(&small());
        assert!(a.passed(), "{}", a.render_text());
        assert_eq!(a, run_oracle_checks(&small()));
    }

    #[test]
    fn off_by_one_ceiling_is_caught() {
        let mutant = |p: &QueueingProblem, s: Coalition, k: usize| -> Scalar {
            let w: Scalar = s
                .members()
                .enumerate()
                .map(|(i, a)| p.weight(a) * ((i + 1) / k + 1) as i64)
                .sum();
            p.machine_cost() * k as i64 + w
        };
        let cfg = OracleConfig { max_n: 3, ..small() };
        let r = run_oracle_checks_with(&cfg, &mutant);
        assert!(!r.passed());
        let bad = r.checks.iter().find(|c| !c.passed()).unwrap();
        let cx = bad.counterexample.as_ref().unwrap();
        assert!(cx.instance.weights.len() <= 3);
    }

    #[test]
    fn single_agent_instances_pass() {
        let cfg = OracleConfig { max_n: 1, ..small() };
        assert!(run_oracle_checks(&cfg).passed());
    }

    #[test]
    fn grid_crosses_thresholds() {
        let p = QueueingProblem::from_ints(&[20, 15, 10, 5], 0).unwrap();
        let g = threshold_grid(&p);
        assert!(g.contains(&Scalar::from_int(35)) && g.contains(&Scalar::ratio(35 + 25, 2)));
        assert_eq!(g.last(), Some(&Scalar::from_int(36)));
    }
}
