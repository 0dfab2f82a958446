use super::*;
use crate::exec_words::{parse_word, Label, Segment};

fn w(s: &str) -> ExecWord {
    parse_word(s).unwrap()
}

fn g_unit() -> SymbolicGst {
    let mut g = SymbolicGst::new("unit", "r");
    g.add_edge("e1", "r", "t", Segment::dense(Label::new("a").unwrap()));
    g
}

fn g_dense() -> SymbolicGst {
    let mut g = g_unit();
    let mut child = SymbolicGst::child();
    child.add_edge("f1", "@", "u", Segment::point(Label::new("b").unwrap()));
    g.attach("e1", child);
    g
}

fn finite(edges: &[(&str, &str, &str)]) -> KripkeStructure {
    let mut ks = KripkeStructure::new("h");
    for (s, word, t) in edges {
        let s = ks.add_state(*s);
        let t = ks.add_state(*t);
        ks.add_transition(s, w(word), t);
    }
    ks
}

#[test]
fn image_finite_witnesses() {
    assert_eq!(image_finite(&g_unit()).witness.num_states(), 2);
    assert_eq!(image_finite(&g_dense()).witness.num_states(), 3);
    let mut p = SymbolicGst::new("p", "r");
    p.add_edge("e1", "r", "t", Segment::point(Label::new("a").unwrap()));
    assert_eq!(image_finite(&p).witness.num_states(), 2);
}

#[test]
fn surrogates_satisfy_schemata() {
    for g in [g_unit(), g_dense()] {
        assert!(schemata_check(&build_surrogate(&g)).passes());
    }
}

#[test]
fn hand_written_schema_failures() {
    let ks = finite(&[("a", "P x, P y", "b")]);
    let r = schemata_check(&ks);
    assert!(r.transitivity.is_none());
    let c = r.weak_density.clone().unwrap();
    assert_eq!(c.split, (w("P x"), w("P y")));
    assert!(r.revalidate(&ks));

    let ks = finite(&[("a", "P x", "b"), ("b", "P y", "c")]);
    let r = schemata_check(&ks);
    assert!(r.weak_density.is_none());
    let c = r.transitivity.clone().unwrap();
    assert_eq!((c.s, c.t, c.u), (0, 1, 2));
    assert!(r.revalidate(&ks));
    assert!(r.describe(&ks).contains("transitivity: FAIL"));
}

#[test]
fn vhhm_on_finite_structures() {
    let m = finite(&[("s0", "D a", "s0"), ("s0", "D a", "s1")]);
    assert!(vhhm_check(&[m], 3).passes());
    let r = vhhm_check(&[build_surrogate(&g_unit()), build_surrogate(&g_dense())], 4);
    assert!(r.passes());
    assert!(r.pairs_checked > 0);
}

#[test]
fn fig3_names_round_trip() {
    for s in [Fig3State::U, Fig3State::V, Fig3State::Chain { n: 4, i: 2 }, Fig3State::Inf(7), Fig3State::Dead] {
        assert_eq!(s.to_string().parse::<Fig3State>().unwrap(), s);
    }
    assert!("c2_3".parse::<Fig3State>().is_err());
    for s in [GxState::R, GxState::I(3), GxState::A(0), GxState::F] {
        assert_eq!(s.to_string().parse::<GxState>().unwrap(), s);
    }
}

#[test]
fn fig3_pair_agrees_at_every_depth() {
    let (lz, u, v) = gen_fig3();
    assert_eq!(stratified_lazy(&lz, &u, &v, 8).unwrap(), Some(8));
    validate_hints(&lz, 2, 6, HINT_SAMPLES).unwrap();
}

#[test]
fn fig3_rank_and_chain() {
    let (lz, u, v) = gen_fig3();
    let (alpha, _, _) = fig3_words();
    let starts: Vec<_> = lz
        .expand(&u, |f| (0..8).chain(f.representatives(8)).collect())
        .into_iter()
        .filter(|(word, t)| *word == alpha && t.is_chain())
        .map(|(_, t)| t)
        .collect();
    assert!(rank_certificate_check(&lz, &starts, &alpha, Fig3State::is_chain, Fig3State::remaining, 12).unwrap());
    // No natural-valued rank survives the infinite chain within the bound.
    let w0 = [Fig3State::Inf(0)];
    let countdown = |s: &Fig3State| match s {
        Fig3State::Inf(i) => Some(10u64.saturating_sub(*i as u64)),
        _ => None,
    };
    assert!(!rank_certificate_check(&lz, &w0, &alpha, Fig3State::is_inf, countdown, 32).unwrap());
    assert!(!rank_certificate_check(&lz, &w0, &alpha, Fig3State::is_inf, |_| Some(3), 32).unwrap());
    assert!(matches!(
        rank_certificate_check(&lz, &w0, &alpha, Fig3State::is_inf, |_| None, 4),
        Err(Error::RankUndefined(_))
    ));
    let chain = chain_witness(&lz, &v, &alpha, Fig3State::is_inf, 32).unwrap();
    assert_eq!(chain.len(), 33);
    let short = Fig3State::Chain { n: 3, i: 1 };
    assert_eq!(chain_witness(&lz, &short, &alpha, Fig3State::is_chain, 2).unwrap().len(), 3);
    assert!(chain_witness(&lz, &short, &alpha, Fig3State::is_chain, 3).is_none());
}

#[test]
fn fig3_image_infinite() {
    let (lz, u, _) = gen_fig3();
    let r = image_finite_bounded(&lz, &u, 6).unwrap();
    assert_eq!(r, ImageFiniteBounded::NotImageFiniteUpTo { depth: 6, witness: fig3_words().0 });
}

#[test]
fn fig3_truncations() {
    let (lz, _, _) = gen_fig3();
    let small = truncate(&lz, 1, 2);
    // u, v, two chain starts, w0 and d.
    assert_eq!(small.num_states(), 6);
    let t = truncate(&lz, 4, 4);
    let report = schemata_check(&t);
    assert!(report.weak_density.is_none() || report.revalidate(&t));
    // Only α·β composites exist, so α;α has no composite.
    let c = report.transitivity.clone().expect("alpha;alpha composite absent");
    assert_eq!((c.w1.clone(), c.w2.clone()), (fig3_words().0, fig3_words().0));
    assert!(report.revalidate(&t));
}

#[test]
fn fig3_snapshot_is_inconclusive() {
    let (lz, _, _) = gen_fig3();
    let snap = truncate(&lz, 6, 6);
    let mut r = vhhm_check(std::slice::from_ref(&snap), 3);
    assert!(r.passes());
    r.annotate_certified("0.u", "0.v", 3);
    assert!(r.to_string().contains("inconclusive at depth 3"));
}

#[test]
fn gx_diagnostics() {
    let lz = gen_gx();
    let j = stratified_lazy(&lz, &GxState::A(2), &GxState::A(3), 8).unwrap();
    assert!(j.is_some_and(|j| j < 8), "{j:?}");
    validate_hints(&lz, 2, 6, HINT_SAMPLES).unwrap();
    assert_eq!(
        image_finite_bounded(&lz, &GxState::R, 6).unwrap(),
        ImageFiniteBounded::NotImageFiniteUpTo { depth: 6, witness: w("D a") }
    );
    let t = truncate(&lz, 4, 4);
    assert!(schemata_check(&t).passes(), "{}", schemata_check(&t).describe(&t));
    let zero = truncate(&lz, 0, 5);
    assert_eq!(zero.num_states(), 1);
    assert!(zero.transitions().is_empty());
    let t3 = LazyKripke::from_finite(&truncate(&lz, 3, 3));
    assert_eq!(image_finite_bounded(&t3, &"R".to_string(), 6).unwrap(), ImageFiniteBounded::ConsistentWithImageFinite);
}

#[test]
fn bad_hint_is_detected() {
    let lz = LazyKripke::new("bad", vec![0usize], |s: &usize| {
        if *s == 0 {
            vec![(w("P a"), Successor::Family(Family::new("chain", |n| n + 1, |_| vec![0])))]
        } else if *s > 1 {
            vec![(w("P a"), Successor::One(s - 1))]
        } else {
            Vec::new()
        }
    });
    assert!(matches!(validate_hints(&lz, 1, 3, HINT_SAMPLES), Err(Error::InvalidHint(_))));
    assert!(matches!(image_finite_bounded(&lz, &0, 3), Err(Error::InvalidHint(_))));
}

#[test]
fn budget_exhaustion_is_reported() {
    let (lz, u, v) = gen_fig3();
    let mut engine = StratifiedEngine::with_budget(&lz, 10);
    assert!(matches!(engine.agreement(&u, &v, 8), Err(Error::Exhausted(_))));
}
