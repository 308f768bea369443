//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test -p gestura-core --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::time::Instant;

use gestura_core::affine::{rat_int, AffineExpr, AffineStore, Rat, VarPool};
use gestura_core::config::DEFAULT_CORPUS;
use gestura_core::dynamics::{relative_distance, render, step, OscState};
use gestura_core::lattice::TypeLattice;
use gestura_core::phonology::build_word;
use gestura_core::pipeline::{
    check_corpus, load_knowledge, parse_corpus, synthesize_word, Knowledge, RunConfig,
};
use gestura_core::score_json::score_to_json;
use gestura_core::solve::{brute_force_satisfiable, solve, Constraint};
use gestura_core::term::{and, at, not, or, ty, FeatureTerm};
use gestura_core::timing::{assemble_score, ClipMode, GestureKind, GesturalScore, ScoreGesture};
use gestura_core::tract::TractVar;

/// Deterministic generator for the randomized criteria (splitmix64).
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

fn knowledge() -> Knowledge {
    load_knowledge(&RunConfig::default()).unwrap()
}

fn corpus_scores(k: &Knowledge) -> Vec<GesturalScore> {
    parse_corpus(DEFAULT_CORPUS)
        .unwrap()
        .iter()
        .map(|entry| {
            let ids: Vec<&str> = entry.ids.iter().map(String::as_str).collect();
            let (_, _, score) = synthesize_word(k, &ids).unwrap();
            score
        })
        .collect()
}

const EBBT: [&str; 5] = ["ʔ", "ɛ", "b", "t", "postphonatory_opening"];
const EBBE: [&str; 4] = ["ʔ", "ɛ", "b", "ə"];

#[test]
fn criterion_01_final_devoicing_corpus() {
    let k = knowledge();
    let entries = parse_corpus(DEFAULT_CORPUS).unwrap();
    assert_eq!(entries.len(), 10, "the corpus lists the ten paper forms");
    let t0 = Instant::now();
    let rows = check_corpus(&k, &entries).unwrap();
    let elapsed = t0.elapsed();
    let passed = rows.iter().filter(|r| r.pass).count();
    for row in &rows {
        assert!(row.pass, "{}: {}", row.name, row.detail);
    }
    assert_eq!(passed, 10);
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "corpus took {:?}, limit 1 s",
        elapsed
    );
    println!(
        "criterion 1 (final-devoicing corpus, 10/10 in {:.0} ms): PASS",
        elapsed.as_secs_f64() * 1000.0
    );
}

#[test]
fn criterion_02_endpoint_equation_residual() {
    let k = knowledge();
    let mut checked = 0usize;
    for score in corpus_scores(&k) {
        for g in &score.gestures {
            let residual =
                (g.end_ms - (g.start_ms + g.eigenperiod_ms * g.release_deg / 360.0)).abs();
            assert!(
                residual <= 1e-9,
                "{}@{}: residual {residual}",
                g.segment,
                g.segment_index
            );
            checked += 1;
        }
    }
    assert!(checked > 0);
    println!("criterion 2 (endpoint equation residual <= 1e-9, {checked} gestures): PASS");
}

#[test]
fn criterion_03_order_free_solving() {
    let k = knowledge();
    let problem = build_word(&k.lattice, &k.inventory, &k.table, &EBBT).unwrap();
    let reference = {
        let solution = solve(&k.lattice, &problem.constraints).unwrap();
        let score = assemble_score(
            &problem.plan,
            &solution,
            &k.lattice,
            &k.table,
            &problem.word.ids,
        )
        .unwrap();
        score_to_json(&score)
    };
    let mut rng = Rng::new(0x5eed_0003);
    for round in 0..100 {
        let mut permuted = problem.constraints.clone();
        rng.shuffle(&mut permuted);
        let solution = solve(&k.lattice, &permuted).unwrap();
        let score = assemble_score(
            &problem.plan,
            &solution,
            &k.lattice,
            &k.table,
            &problem.word.ids,
        )
        .unwrap();
        let json = score_to_json(&score);
        assert_eq!(json, reference, "permutation {round} changed the score");
    }
    println!("criterion 3 (100 posting-order permutations, byte-identical score.json): PASS");
}

/// Random consistent affine equation over a ground-truth assignment.
fn consistent_equation(
    rng: &mut Rng,
    truth: &[Rat],
    pool: &[gestura_core::affine::ArithVar],
) -> (AffineExpr, AffineExpr) {
    let n_terms = 1 + rng.below(3) as usize;
    let mut lhs = AffineExpr::constant(rat_int(0));
    let mut value = Rat::from_integer(0.into());
    for _ in 0..n_terms {
        let vi = rng.below(pool.len() as u64) as usize;
        let coef = loop {
            let c = rng.range_i64(-3, 3);
            if c != 0 {
                break c;
            }
        };
        lhs = lhs.add(&AffineExpr::var(pool[vi]).scale(&rat_int(coef)));
        value += &truth[vi] * rat_int(coef);
    }
    (lhs, AffineExpr::constant(value))
}

#[test]
fn criterion_04_monotonic_stores() {
    let mut rng = Rng::new(0x5eed_0004);
    for system in 0..1000 {
        let n_vars = 2 + rng.below(7) as usize; // up to 8 variables
        let mut pool = VarPool::new();
        let vars: Vec<_> = (0..n_vars).map(|i| pool.var(&format!("x{i}"))).collect();
        // Ground truth on a small rational grid (halves from -4 to 4).
        let truth: Vec<Rat> = (0..n_vars)
            .map(|_| Rat::new(rng.range_i64(-8, 8).into(), 2.into()))
            .collect();

        let mut store = AffineStore::new();
        let mut entailed: BTreeMap<_, _> = BTreeMap::new();
        let n_eqs = 1 + rng.below(8) as usize;
        for _ in 0..n_eqs {
            let (lhs, rhs) = consistent_equation(&mut rng, &truth, &vars);
            store.post(&lhs, &rhs).expect("consistent by construction");
            let now = store.entailed();
            for (v, val) in &entailed {
                assert_eq!(
                    now.get(v),
                    Some(val),
                    "system {system}: consistent post changed an entailed binding"
                );
            }
            entailed = now;
        }
        // Every entailed binding agrees with the ground truth.
        for (v, val) in &entailed {
            let idx = vars.iter().position(|w| w == v).unwrap();
            assert_eq!(val, &truth[idx], "system {system}: wrong entailment");
        }
        // A contradictory equation fails and changes nothing: once lhs = rhs
        // is entailed, lhs = rhs + δ (δ ≠ 0) is a contradiction.
        let (lhs, rhs) = consistent_equation(&mut rng, &truth, &vars);
        store.post(&lhs, &rhs).expect("consistent by construction");
        let entailed = store.entailed();
        let off = rhs.add(&AffineExpr::constant(rat_int(rng.range_i64(1, 5))));
        assert!(store.post(&lhs, &off).is_err(), "system {system}");
        assert_eq!(
            store.entailed(),
            entailed,
            "system {system}: failed post must not change bindings"
        );
    }
    println!("criterion 4 (1000 randomized stores, monotone entailment): PASS");
}

fn random_lattice(rng: &mut Rng) -> TypeLattice {
    let n_atoms = 2 + rng.below(5) as usize; // 2..=6
    let mut l = TypeLattice::new();
    let atoms: Vec<String> = (0..n_atoms).map(|i| format!("a{i}")).collect();
    for a in &atoms {
        l.add_atom(a).unwrap();
    }
    for u in 0..rng.below(4) {
        let mut members: Vec<&str> = Vec::new();
        for a in &atoms {
            if rng.below(2) == 1 {
                members.push(a);
            }
        }
        if members.is_empty() {
            members.push(&atoms[0]);
        }
        l.define_union(&format!("u{u}"), &members).unwrap();
    }
    l
}

fn random_term(rng: &mut Rng, lattice: &TypeLattice, depth: usize) -> FeatureTerm {
    let type_names: Vec<String> = lattice.type_names().map(str::to_string).collect();
    let leaf = |rng: &mut Rng| {
        let name = &type_names[rng.below(type_names.len() as u64) as usize];
        ty(name.clone())
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.below(5) {
        0 => leaf(rng),
        1 => not(random_term(rng, lattice, depth - 1)),
        2 => {
            let attr = ["p", "q", "r"][rng.below(3) as usize];
            at(attr, random_term(rng, lattice, depth - 1))
        }
        3 => {
            let n = 2 + rng.below(2) as usize;
            and((0..n).map(|_| random_term(rng, lattice, depth - 1)).collect())
        }
        _ => {
            let n = 2 + rng.below(2) as usize;
            or((0..n).map(|_| random_term(rng, lattice, depth - 1)).collect())
        }
    }
}

fn constrained_path_count(term: &FeatureTerm) -> usize {
    fn walk(t: &FeatureTerm, path: String, out: &mut std::collections::BTreeSet<String>) {
        match t {
            FeatureTerm::Ty(_) => {
                out.insert(path);
            }
            FeatureTerm::At(a, inner) => walk(inner, format!("{path}.{a}"), out),
            FeatureTerm::And(ts) | FeatureTerm::Or(ts) => {
                for t in ts {
                    walk(t, path.clone(), out);
                }
            }
            FeatureTerm::Not(inner) => walk(inner, path, out),
            _ => {}
        }
    }
    let mut set = std::collections::BTreeSet::new();
    walk(term, String::new(), &mut set);
    set.len()
}

#[test]
fn criterion_05_solver_matches_brute_force() {
    let mut rng = Rng::new(0x5eed_0005);
    let mut cases = 0usize;
    let mut satisfiable = 0usize;
    while cases < 10_000 {
        let lattice = random_lattice(&mut rng);
        let term = random_term(&mut rng, &lattice, 4);
        // Keep the oracle's assignment space small.
        if constrained_path_count(&term) > 4 {
            continue;
        }
        let brute = brute_force_satisfiable(&lattice, &term).unwrap();
        let solver = solve(&lattice, &[Constraint::new("t", term.clone())]);
        assert_eq!(
            brute,
            solver.is_ok(),
            "case {cases}: solver and oracle disagree on {term:?}"
        );
        satisfiable += brute as usize;
        cases += 1;
    }
    // The generator must exercise both verdicts.
    assert!(satisfiable > 100 && satisfiable < 9_900);
    println!(
        "criterion 5 (solver vs brute force, {cases} cases, {satisfiable} satisfiable, 0 mismatches): PASS"
    );
}

#[test]
fn criterion_06_vocalic_tier_and_overlap() {
    let k = knowledge();
    for score in corpus_scores(&k) {
        let vocalic: Vec<&ScoreGesture> = score
            .gestures
            .iter()
            .filter(|g| g.kind == GestureKind::Vocalic)
            .collect();
        assert!(!vocalic.is_empty());
        for w in vocalic.windows(2) {
            assert_eq!(
                w[0].end_ms, w[1].start_ms,
                "vocalic gap in {:?}",
                score.utterance
            );
        }
        for g in score
            .gestures
            .iter()
            .filter(|g| g.kind == GestureKind::Consonantal)
        {
            let overlaps = vocalic
                .iter()
                .any(|v| g.start_ms <= v.end_ms && v.start_ms <= g.end_ms);
            assert!(
                overlaps,
                "{}@{} has no vocalic overlap in {:?}",
                g.segment, g.segment_index, score.utterance
            );
        }
    }
    println!("criterion 6 (gap-free vocalic tier, consonant-vowel overlap): PASS");
}

fn single_gesture_score(eigenperiod: f64, target: f64) -> GesturalScore {
    let release = 450.0;
    GesturalScore {
        utterance: vec!["test".into()],
        span_ms: [0.0, eigenperiod * release / 360.0],
        gestures: vec![ScoreGesture {
            tract_var: TractVar::LA,
            code: 2,
            class: "stop".into(),
            kind: GestureKind::Consonantal,
            target,
            cd_category: "closed".into(),
            cl_category: "bilabial".into(),
            start_ms: 0.0,
            end_ms: eigenperiod * release / 360.0,
            eigenperiod_ms: eigenperiod,
            assoc_deg: 240.0,
            release_deg: release,
            segment: "test".into(),
            segment_index: 0,
            role: "pure_onset".into(),
            clip: ClipMode::None,
        }],
    }
}

#[test]
fn criterion_07_phase_distance_law() {
    let k = knowledge();
    let target = 0.9;
    let neutral = 0.35; // LA neutral; motion stays inside the bounds
    for eigenperiod in [120.0, 240.0, 480.0] {
        let score = single_gesture_score(eigenperiod, target);
        let traj = render(&score, 1000.0, &k.table).unwrap();
        let la = traj.of(TractVar::LA);
        for phase in [90.0, 180.0, 270.0, 360.0] {
            let t = eigenperiod * phase / 360.0;
            let i = t as usize;
            assert_eq!(traj.time_at(i), t, "phase time lands on the grid");
            let measured = (la[i] - target).abs() / (neutral - target).abs();
            let law = relative_distance(phase);
            assert!(
                (measured - law).abs() < 1e-6,
                "T={eigenperiod} phase={phase}: measured {measured}, law {law}"
            );
        }
    }
    println!("criterion 7 (phase-distance law at 90/180/270/360 deg, 3 eigenperiods, <=1e-6): PASS");
}

#[test]
fn criterion_08_grid_independence() {
    let k = knowledge();
    let (_, _, score) = synthesize_word(&k, &EBBT).unwrap();
    let coarse = render(&score, 200.0, &k.table).unwrap();
    let fine = render(&score, 2000.0, &k.table).unwrap();
    let mut worst = 0.0f64;
    for i in 0..coarse.len() {
        let j = i * 10;
        assert!(j < fine.len());
        assert_eq!(coarse.time_at(i), fine.time_at(j));
        for var in TractVar::ALL {
            let d = (coarse.of(var)[i] - fine.of(var)[j]).abs();
            worst = worst.max(d);
        }
    }
    assert!(worst <= 1e-9, "max divergence {worst}");
    println!("criterion 8 (200 Hz vs 2000 Hz agree at shared times, max {worst:e}): PASS");
}

/// Time from rest to a given remaining fraction, by bisection on the closed
/// form; independent of the sampling grid.
fn time_to_fraction(eigenperiod: f64, fraction: f64) -> f64 {
    let w = std::f64::consts::TAU / eigenperiod;
    let from_rest = OscState::at_rest(1.0);
    let remaining = |t: f64| step(from_rest, 0.0, w, t).x;
    let (mut lo, mut hi) = (0.0, 4.0 * eigenperiod);
    assert!(remaining(hi) < fraction);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if remaining(mid) > fraction {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_09_eigenperiod_speed_law() {
    let base = 100.0;
    let t_base = time_to_fraction(base, 0.1);
    for factor in [2.0, 4.0] {
        let t = time_to_fraction(base * factor, 0.1);
        let ratio = t / (factor * t_base);
        assert!(
            (ratio - 1.0).abs() < 1e-6,
            "factor {factor}: ratio {ratio}"
        );
    }
    println!("criterion 9 (time-to-0.1 distance scales linearly over a 4x eigenperiod range): PASS");
}

#[test]
fn criterion_10_minimal_pair_contrast() {
    let k = knowledge();
    let (_, _, ebbt) = synthesize_word(&k, &EBBT).unwrap();
    let (_, _, ebbe) = synthesize_word(&k, &EBBE).unwrap();

    // Presence/absence of the devoicing gesture on /b/, not magnitudes.
    let b_opening = |score: &GesturalScore| -> Option<(f64, f64)> {
        score
            .gestures
            .iter()
            .find(|g| {
                g.segment == "b" && g.tract_var == TractVar::GA && g.kind == GestureKind::Opening
            })
            .map(|g| (g.start_ms, g.end_ms))
    };
    let (b_start, b_end) = b_opening(&ebbt).expect("ebbt devoices /b/");
    assert!(b_opening(&ebbe).is_none(), "Ebbe must not devoice /b/");

    // ebbt: the voiced annotation has a gap during the opening gesture.
    let traj = render(&ebbt, 1000.0, &k.table).unwrap();
    let gap = (0..traj.len())
        .filter(|&i| traj.time_at(i) >= b_start && traj.time_at(i) <= b_end)
        .any(|i| !traj.voiced[i]);
    assert!(gap, "no voicing gap during the /b/ opening in ebbt");

    // Ebbe: voiced throughout the primary activation of /b/.
    let b_primary = ebbe
        .gestures
        .iter()
        .find(|g| g.segment == "b" && g.kind == GestureKind::Consonantal)
        .unwrap();
    let traj = render(&ebbe, 1000.0, &k.table).unwrap();
    let all_voiced = (0..traj.len())
        .filter(|&i| {
            traj.time_at(i) >= b_primary.start_ms && traj.time_at(i) <= b_primary.end_ms
        })
        .all(|i| traj.voiced[i]);
    assert!(all_voiced, "Ebbe /b/ must stay voiced");
    println!("criterion 10 (ebbt vs Ebbe: glottal opening and voicing gap only in ebbt): PASS");
}
