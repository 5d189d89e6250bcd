//! Randomized structural properties, driven through the seeded generator so
//! every failure shrinks to concrete generation parameters.

use proptest::prelude::*;
use quasivar::cauchy::{classify_cauchy, SeqSample};
use quasivar::descent::{audit_phi_order, audit_s_properties, s_set};
use quasivar::gen::{gen_instance, gen_instance_file, GenParams, PreorderKind};
use quasivar::io::{self, InstanceFile, MetricSpec, PreorderSpec};
use quasivar::oracle::{check_equivalences, oracle_wek};
use quasivar::picard::{picard_iterate, SelectionRule};
use quasivar::preorder::check_d_ord;
use quasivar::principles::check_endpoint;
use quasivar::witness::build_witness;
use quasivar::{ExtValue, Instance, PointId, Rat};

const KINDS: [PreorderKind; 4] = [
    PreorderKind::Total,
    PreorderKind::Pairs,
    PreorderKind::Reachability,
    PreorderKind::SpecializationConjugate,
];

fn params(max_n: usize) -> impl Strategy<Value = GenParams> {
    (1..=max_n, any::<u64>(), 0usize..4, 0usize..4, 0usize..3).prop_map(
        |(n, seed, kind, zero, inf)| {
            let zeros = [Rat::zero(), Rat::new(1, 4), Rat::new(1, 2), Rat::one()];
            let infs = [Rat::zero(), Rat::new(1, 8), Rat::new(1, 2)];
            GenParams {
                n,
                seed,
                zero_edge_prob: zeros[zero].clone(),
                inf_phi_prob: infs[inf].clone(),
                preorder_kind: KINDS[kind],
            }
        },
    )
}

fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    params(max_n).prop_map(|p| gen_instance(&p).expect("generator emits valid instances"))
}

proptest! {
    #[test]
    fn generated_spaces_revalidate_and_classify_consistently(inst in instance(8)) {
        let s = inst.space();
        // The matrix re-passes full validation from scratch.
        let revalidated = quasivar::QSpace::validate(s.matrix().clone()).unwrap();
        prop_assert_eq!(&revalidated, s);
        // T1 and its counterexample never disagree.
        prop_assert_eq!(s.is_t1(), s.t1_counterexample().is_none());
        for x in s.points() {
            prop_assert!(s.closure_of_point(x).contains(x));
            prop_assert!(s.zero_successors(x).contains(x));
        }
    }

    #[test]
    fn conjugation_is_an_involution_and_symmetrize_a_pointwise_max(inst in instance(8)) {
        let s = inst.space();
        let conj = s.conjugate();
        prop_assert_eq!(&conj.conjugate(), s);
        let sym = s.symmetrize();
        prop_assert!(sym.is_symmetric());
        prop_assert_eq!(&sym, &conj.symmetrize());
        for x in s.points() {
            for y in s.points() {
                prop_assert_eq!(conj.dist(x, y), s.dist(y, x));
                let max = std::cmp::max(s.dist(x, y), s.dist(y, x));
                prop_assert_eq!(sym.dist(x, y), max);
            }
        }
    }

    #[test]
    fn cauchy_moduli_swap_sides_under_conjugation(
        (inst, terms, cycle) in instance(6).prop_flat_map(|inst| {
            let n = inst.n();
            (
                Just(inst),
                prop::collection::vec(0..n, 1..8),
                prop::option::of(prop::collection::vec(0..n, 1..3)),
            )
        })
    ) {
        let ids = |v: &[usize]| v.iter().map(|&i| PointId(i)).collect::<Vec<_>>();
        let seq = match &cycle {
            None => SeqSample::prefix(ids(&terms)),
            Some(c) => SeqSample::periodic(ids(&terms), ids(c)),
        };
        let thresholds = vec![Rat::one(), Rat::new(1, 2), Rat::new(1, 4)];
        let here = classify_cauchy(inst.space(), &seq, &thresholds).unwrap();
        let there = classify_cauchy(&inst.space().conjugate(), &seq, &thresholds).unwrap();
        prop_assert_eq!(here.left, there.right);
        prop_assert_eq!(here.right, there.left);
        prop_assert_eq!(here.left_k, there.right_k);
        prop_assert_eq!(here.right_k, there.left_k);
    }

    #[test]
    fn potential_order_and_descent_sets_pass_every_audit(inst in instance(8)) {
        prop_assert!(audit_phi_order(&inst).all_pass());
        let s_audit = audit_s_properties(&inst).unwrap();
        prop_assert!(s_audit.all_pass(), "clause witness: {s_audit:?}");
        prop_assert!(check_d_ord(inst.space(), inst.order()).holds);
    }

    #[test]
    fn picard_terminates_at_oracle_endpoints_from_every_start(inst in instance(7)) {
        let endpoints = oracle_wek(&inst);
        let rules = [
            SelectionRule::ArgminPhi,
            SelectionRule::LowestIndex,
            SelectionRule::SeededRandom(17),
        ];
        for x0 in inst.dom().iter() {
            for rule in rules {
                let run = picard_iterate(&inst, x0, rule).unwrap();
                prop_assert!(run.is_case1());
                // Every move strictly lowers phi on the domain, so the
                // visit count is at most the domain size.
                prop_assert!(run.steps.len() <= inst.dom().len());
                prop_assert!(endpoints.contains(run.z), "z={:?} not an endpoint", run.z);
                let checks = check_endpoint(&inst, run.z);
                prop_assert!(checks.phi_constant_on_s);
                prop_assert!(checks.s_in_closures);
                prop_assert!(checks.strict_outside);
            }
        }
    }

    #[test]
    fn equivalence_reports_always_balance(inst in instance(8)) {
        let rep = check_equivalences(&inst).unwrap();
        prop_assert_eq!(rep.wek_holds, !rep.tak_negation);
        prop_assert!(rep.caristi_consistent);
        prop_assert_eq!(rep.wek_points.is_empty(), !rep.wek_holds);
        prop_assert_eq!(rep.adversarial_t.is_some(), !rep.wek_holds);
    }

    #[test]
    fn instance_files_round_trip_bit_exactly(p in params(8)) {
        let file = gen_instance_file(&p).unwrap();
        let text = io::serialize(&file);
        let reparsed = io::parse(&text).unwrap();
        prop_assert_eq!(&reparsed, &file);
        prop_assert_eq!(io::serialize(&reparsed), text);
        let compiled = io::compile(&file).unwrap();
        prop_assert_eq!(compiled.instance(), &gen_instance(&p).unwrap());
    }

    #[test]
    fn matrices_survive_description_as_complete_digraphs(inst in instance(6)) {
        // A validated matrix is already path-closed, so handing all its
        // off-diagonal entries to the digraph compiler must reproduce it.
        let s = inst.space();
        let labels: Vec<String> = (0..s.n()).map(|i| format!("q{i}")).collect();
        let mut edges = Vec::new();
        for x in s.points() {
            for y in s.points() {
                if x != y {
                    edges.push((labels[x.0].clone(), labels[y.0].clone(), s.dist(x, y).clone()));
                }
            }
        }
        prop_assume!(!edges.is_empty());
        let file = InstanceFile {
            version: io::FORMAT_VERSION,
            points: labels,
            metric: MetricSpec::Digraph(edges),
            preorder: PreorderSpec::Total,
            phi: inst.phi().values().to_vec(),
        };
        let compiled = io::compile(&file).unwrap();
        prop_assert_eq!(compiled.instance().space(), s);
    }

    #[test]
    fn witness_prefixes_keep_their_closed_forms(n in 2usize..=20) {
        let w = build_witness(n).unwrap();
        let inst = w.instance();
        // Steps follow the dyadic formula; phi halves strictly.
        for k in 1..n {
            let step = inst.space().dist(w.point(k + 1), w.point(k));
            prop_assert_eq!(step, &Rat::pow2(-(k as i32 + 2)));
            prop_assert!(inst.phi().get(w.point(k + 1)) < inst.phi().get(w.point(k)));
        }
        // Backward distances telescope exactly.
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let d = |m: usize, l: usize| inst.space().dist(w.point(m), w.point(l));
                    let sum = d(j, i) + d(k, j);
                    prop_assert_eq!(&sum, d(k, i));
                }
            }
        }
        // Descent sets are exactly the tails.
        for k in 1..=n {
            prop_assert_eq!(s_set(inst, w.point(k)).members, w.tail_from(k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rational_literals_round_trip(numer in -9999i64..=9999, denom in 1i64..=9999) {
        let r = Rat::new(numer, denom);
        let text = r.to_string();
        prop_assert_eq!(text.parse::<Rat>().unwrap(), r);
        let v = ExtValue::Finite(Rat::new(numer, denom));
        prop_assert_eq!(v.to_string().parse::<ExtValue>().unwrap(), v);
    }
}
