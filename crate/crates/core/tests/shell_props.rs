mod common;

use common::*;
use sra_core::algebra::{Event, Value};
use sra_core::automaton::DEFAULT_CONFIGURATION_CAP;
use sra_core::forecast::{Classification, ForecastError, PstParams};
use sra_core::pattern::{accepts, Srem};
use sra_core::shell::*;

fn sample_jsonl() -> String {
    SAMPLE_STREAM.iter().map(|(k, i, v)| format!("{{\"type\": \"{k}\", \"id\": {i}, \"value\": {v}}}\n")).collect()
}

#[test]
fn jsonl_lines_become_events_or_diagnostics() {
    let text = format!("{}\n  \n{{\"type\": [1]}}\nnot json\n42\n{{\"x\": 1.5, \"y\": \"z\"}}\n", sample_jsonl());
    let got = parse_jsonl(&text);
    let lines = text.lines().count();
    assert_eq!(got.events.len() + got.diagnostics.len() + got.blank, lines);
    assert_eq!(got.events.len(), 7);
    assert_eq!(got.diagnostics.iter().map(|d| d.line).collect::<Vec<_>>(), vec![9, 10, 11]);
    assert_eq!(got.blank, 2);
    let events: Vec<Event> = got.into_events();
    assert_eq!(events[..6], sample_stream()[..]);
    assert_eq!(events[6], Event::new().with("x", 1.5).with("y", "z"));
}

#[test]
fn csv_cells_are_typed() {
    let text = "type,id,value\nT,1,22\nH, 2 ,7.5\n\nX,,abc\nT,1\n";
    let got = parse_csv(text);
    assert_eq!(got.events.len(), 3);
    assert_eq!(got.blank, 1);
    assert_eq!(got.diagnostics.len(), 1);
    assert_eq!(got.diagnostics[0].line, 6);
    let e: Vec<Event> = got.into_events();
    assert_eq!(e[0], Event::typed("T", 1, 22));
    assert_eq!(e[1].get("value"), Some(&Value::Real(7.5)));
    assert_eq!(e[1].get("id"), Some(&Value::Int(2)));
    assert_eq!(e[2].get("id"), None);
    assert_eq!(e[2].get("value"), Some(&Value::Text("abc".into())));

    let dup = parse_csv("a,a\n1,2\n");
    assert!(dup.events.is_empty());
    assert_eq!(dup.diagnostics.len(), 1);
}

#[test]
fn ingestion_is_total_on_arbitrary_lines() {
    let mut rng = Kit::rng(5);
    use rand::Rng;
    let pieces = ["{}", "{\"a\":1}", "[", "\"s\"", "", "{\"a\":null}", "{\"a\":{\"b\":1}}", "a,b", "1,2,3"];
    for _ in 0..200 {
        let text: Vec<&str> = (0..rng.gen_range(0..12)).map(|_| pieces[rng.gen_range(0..pieces.len())]).collect();
        let text = text.join("\n");
        let j = parse_jsonl(&text);
        assert_eq!(j.events.len() + j.diagnostics.len() + j.blank, text.lines().count());
        let c = parse_csv(&text);
        if c.diagnostics.first().is_none_or(|d| !d.message.contains("duplicate")) && text.lines().any(|l| !l.is_empty())
        {
            // One line is the header.
            assert_eq!(c.events.len() + c.diagnostics.len() + c.blank + 1, text.lines().count(), "{text:?}");
        }
    }
}

#[test]
fn recognition_over_the_table() {
    let pair = type_id_pattern(PAIR).expr;
    assert_eq!(recognize(&pair, sample_stream(), DEFAULT_CONFIGURATION_CAP).unwrap(), vec![4, 5]);
    assert!(recognize(&Srem::Empty, sample_stream(), DEFAULT_CONFIGURATION_CAP).unwrap().is_empty());
    let spaced = windowed(&type_id_pattern(SPACED_PAIR).expr, Some(3));
    let s = sample_stream();
    let oracle: Vec<usize> = (1..=s.len()).filter(|&k| (0..=k).any(|m| accepts(&spaced, &s[m..k]))).collect();
    assert_eq!(oracle, vec![4]);
    assert_eq!(recognize(&spaced, s, DEFAULT_CONFIGURATION_CAP).unwrap(), oracle);
}

#[test]
fn window_override() {
    let body = type_id_pattern(PAIR).expr;
    assert_eq!(windowed(&body, None), body);
    assert_eq!(windowed(&body, Some(2)), Srem::window(body.clone(), 2));
    assert_eq!(windowed(&Srem::window(body.clone(), 5), Some(2)), Srem::window(body, 2));
}

fn repeated_table(times: usize) -> Vec<Event> {
    (0..times).flat_map(|_| sample_stream()).collect()
}

#[test]
fn learning_on_a_repeated_table() {
    let spaced = Srem::window(type_id_pattern(SPACED_PAIR).expr, 3);
    let params = PstParams { max_order: 2, ..PstParams::default() };
    let art = learn(&spaced, &repeated_table(200), &params).unwrap();
    assert!(art.automaton.flags().deterministic && art.automaton.flags().complete);
    assert_eq!(art.pst.alphabet_size(), art.symbols.len());
    for (ctx, dist) in art.pst.nodes() {
        assert!(ctx.len() <= 2);
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9, "{ctx:?}");
        assert!(dist.iter().all(|p| *p > 0.0));
    }
    let back = LearnedArtifact::from_json(&art.to_json()).unwrap();
    assert_eq!(back, art);
    for (ctx, dist) in art.pst.nodes() {
        let other = &back.pst.nodes()[ctx];
        assert!(dist.iter().zip(other).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn learning_needs_enough_data() {
    let spaced = Srem::window(type_id_pattern(SPACED_PAIR).expr, 3);
    let params = PstParams { max_order: 10, ..PstParams::default() };
    match learn(&spaced, &sample_stream(), &params) {
        Err(ShellError::Forecast(ForecastError::InsufficientData { .. })) => {}
        other => panic!("{other:?}"),
    }
    let unwindowed = type_id_pattern(PAIR).expr;
    assert!(matches!(learn(&unwindowed, &sample_stream(), &PstParams::default()), Err(ShellError::Compile(_))));
}

fn reference_artifact() -> LearnedArtifact {
    let (automaton, symbols) = ab_automaton();
    LearnedArtifact {
        automaton,
        symbols,
        pst: order_two_tree(),
        params: PstParams { max_order: 2, ..PstParams::default() },
    }
}

#[test]
fn forecasting_with_the_reference_model() {
    let art = reference_artifact();
    let mut session = ForecastSession::new(&art, 8, 2, 0.4, true).unwrap();
    session.step(sym_event("a")).unwrap();
    let r = session.step(sym_event("a")).unwrap();
    assert_eq!((session.state(), session.history()), (1, &[0u32, 0][..]));
    assert_eq!(r.index, 2);
    assert_eq!(r.regression, 1);
    assert_eq!(r.classification, Classification::Positive);
    let dist = r.dist.unwrap();
    assert!((dist[0] - 0.25).abs() < 1e-9 && (dist[1] - 0.1875).abs() < 1e-9);

    let mut strict = ForecastSession::new(&art, 8, 2, 0.5, false).unwrap();
    strict.step(sym_event("a")).unwrap();
    let r = strict.step(sym_event("a")).unwrap();
    assert_eq!(r.classification, Classification::Negative);
    assert!(r.dist.is_none());
}

#[test]
fn one_step_horizon_far_from_final() {
    let art = reference_artifact();
    let mut session = ForecastSession::new(&art, 1, 1, 1e-6, true).unwrap();
    let r = session.step(sym_event("b")).unwrap();
    assert_eq!(session.state(), 0);
    assert_eq!(r.dist.unwrap(), vec![0.0]);
    assert_eq!(r.classification, Classification::Negative);
}

#[test]
fn forecasts_replay_identically() {
    let art = LearnedArtifact::from_json(&reference_artifact().to_json()).unwrap();
    let stream: Vec<Event> = "abaabbbaab".chars().map(|c| sym_event(&c.to_string())).collect();
    let run = || {
        let mut s = ForecastSession::new(&art, 6, 2, 0.3, true).unwrap();
        stream.iter().map(|t| serde_json::to_string(&s.step(t.clone()).unwrap()).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn session_arguments_are_validated() {
    let art = reference_artifact();
    assert!(ForecastSession::new(&art, 0, 1, 0.5, false).is_err());
    assert!(ForecastSession::new(&art, 3, 4, 0.5, false).is_err());
    assert!(ForecastSession::new(&art, 3, 1, 1.5, false).is_err());
}

#[test]
fn run_configuration() {
    let c = RunConfig::from_json("{}").unwrap();
    assert_eq!(c, RunConfig::default());
    assert_eq!((c.horizon, c.classification_window, c.threshold), (32, 1, 0.5));
    let c = RunConfig::from_json(
        r#"{"window": 3, "pst": {"max_order": 2, "p_min": 0.001, "r": 1.05, "gamma": 0.01, "alpha": 0.0}}"#,
    )
    .unwrap();
    assert_eq!((c.window, c.pst.max_order), (Some(3), 2));
    for bad in [
        r#"{"window": 0}"#,
        r#"{"threshold": 2}"#,
        r#"{"horizon": 0}"#,
        r#"{"classification_window": 40}"#,
        r#"{"surprise": 1}"#,
    ] {
        assert!(matches!(RunConfig::from_json(bad), Err(ShellError::Config(_))), "{bad}");
    }
}
