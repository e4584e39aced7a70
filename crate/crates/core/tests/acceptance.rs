//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any of them fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use formbench::agent::{
    drive_episode, random_clicks, replay, run_oracle_episode, DriveOptions, EpisodeLog,
    NoiseProfile, NoisyResponder,
};
use formbench::datagen::{build_dataset, Dataset, GoldRecord};
use formbench::env::{create_session, Action, EnvState};
use formbench::render::{
    builtin_themes, compute_layout, LayoutTree, Rect, Theme, Viewport, Widget, WidgetKind,
};
use formbench::scoring::bleu;
use formbench::{builtin_catalog, FieldType, FormSchema};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct Fixture {
    catalog: Vec<FormSchema>,
    themes: Vec<Theme>,
}

impl Fixture {
    fn new() -> Fixture {
        Fixture {
            catalog: builtin_catalog(),
            themes: builtin_themes(),
        }
    }

    fn schema(&self, form_id: &str) -> Arc<FormSchema> {
        Arc::new(
            self.catalog
                .iter()
                .find(|f| f.form_id == form_id)
                .unwrap()
                .clone(),
        )
    }

    fn session(&self, record: &GoldRecord, theme: &Theme, seed: u64) -> EnvState {
        create_session(
            self.schema(&record.form_id),
            Arc::new(record.clone()),
            theme.clone(),
            Viewport::DEFAULT,
            false,
            seed,
        )
        .expect("session")
    }
}

fn dataset_accounting(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let dataset = build_dataset(&fx.catalog, 50, 0, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let m = dataset.manifest();
    let fields: usize = fx.catalog.iter().map(|f| f.fields.len()).sum();
    check(
        m.form_count == 25
            && fields == 279
            && m.record_count == 1250
            && m.pair_count == 13_800
            && elapsed < Duration::from_secs(60),
        format!(
            "{} forms, {fields} fields, {} records, {} pairs in {:.2?}",
            m.form_count, m.record_count, m.pair_count, elapsed
        ),
    )
}

fn oracle_ceiling(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for seed in [11u64, 22, 33] {
        let dataset = build_dataset(&fx.catalog, 1, seed, None).map_err(|e| e.to_string())?;
        for record in dataset.records {
            for theme in &fx.themes {
                jobs.push((record.clone(), theme.clone(), seed));
            }
        }
    }
    let workers = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(8);
    let chunk = jobs.len().div_ceil(workers);
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            jobs.chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let mut failed = Vec::new();
                        for (record, theme, seed) in part {
                            let env = fx.session(record, theme, *seed);
                            let options = DriveOptions {
                                record_step_digests: false,
                            };
                            match run_oracle_episode(env, options) {
                                Ok(out) => {
                                    let r = &out.report.state_strict;
                                    if r.episodic_click != 1.0 || r.episodic_value != 1.0 {
                                        failed.push(format!(
                                            "{}/{}: click {} value {}",
                                            record.sample_id,
                                            theme.theme_id,
                                            r.episodic_click,
                                            r.episodic_value
                                        ));
                                    }
                                }
                                Err(e) => failed
                                    .push(format!("{}/{}: {e}", record.sample_id, theme.theme_id)),
                            }
                        }
                        failed
                    })
                })
                .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    let elapsed = start.elapsed();
    check(
        jobs.len() == 225 && failures.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "{} episodes, {} below ceiling in {:.2?}{}",
            jobs.len(),
            failures.len(),
            elapsed,
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

const KINDS: [WidgetKind; 8] = [
    WidgetKind::TextBox,
    WidgetKind::DropdownHead,
    WidgetKind::CheckboxSquare,
    WidgetKind::RadioDot,
    WidgetKind::CalendarCell,
    WidgetKind::NextButton,
    WidgetKind::Label,
    WidgetKind::RulerTick,
];

fn random_rect<R: Rng>(rng: &mut R, size: i32) -> Rect {
    let left = rng.gen_range(-20..size);
    let top = rng.gen_range(-20..size);
    Rect::new(left, top, rng.gen_range(1..90), rng.gen_range(1..90))
}

fn random_widgets<R: Rng>(rng: &mut R, n: usize, size: i32, prefix: &str) -> Vec<Widget> {
    (0..n)
        .map(|i| Widget {
            widget_id: format!("{prefix}{i}"),
            owner_field_id: None,
            kind: *KINDS.choose(rng).unwrap(),
            bounds: random_rect(rng, size),
            payload: None,
            option_index: None,
        })
        .collect()
}

fn inside(r: &Rect, x: i32, y: i32) -> bool {
    x >= r.left && y >= r.top && (x - r.left) < r.width as i32 && (y - r.top) < r.height as i32
}

/// Paints every box in stacking order onto a pixel grid; the last interactive
/// box painted over a pixel owns it.
fn painted(layout: &LayoutTree, size: i32) -> Vec<Option<usize>> {
    let mut grid = vec![None; (size * size) as usize];
    let paint = |grid: &mut Vec<Option<usize>>, range: std::ops::Range<usize>| {
        for i in range {
            let w = &layout.widgets[i];
            if matches!(w.kind, WidgetKind::Label | WidgetKind::RulerTick) {
                continue;
            }
            for y in 0..size {
                for x in 0..size {
                    if inside(&w.bounds, x, y) {
                        grid[(y * size + x) as usize] = Some(i);
                    }
                }
            }
        }
    };
    paint(&mut grid, 0..layout.overlay_start);
    if let Some(panel) = layout.overlay_region {
        for y in 0..size {
            for x in 0..size {
                if inside(&panel, x, y) {
                    grid[(y * size + x) as usize] = None;
                }
            }
        }
    }
    paint(&mut grid, layout.overlay_start..layout.widgets.len());
    grid
}

fn hit_test_equivalence() -> Outcome {
    const SIZE: i32 = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut mismatches = 0usize;
    let mut with_overlay = 0;
    for layout_index in 0..20 {
        let count = rng.gen_range(5..40);
        let mut widgets = random_widgets(&mut rng, count, SIZE, "w");
        let overlay_start = widgets.len();
        let overlay_region = if layout_index % 2 == 1 {
            with_overlay += 1;
            let panel = random_rect(&mut rng, SIZE);
            let inner = (0..rng.gen_range(1..8))
                .map(|i| {
                    let w = rng.gen_range(1..=panel.width);
                    let h = rng.gen_range(1..=panel.height);
                    Widget {
                        widget_id: format!("o{i}"),
                        owner_field_id: None,
                        kind: *KINDS.choose(&mut rng).unwrap(),
                        bounds: Rect::new(
                            panel.left + rng.gen_range(0..=(panel.width - w)) as i32,
                            panel.top + rng.gen_range(0..=(panel.height - h)) as i32,
                            w,
                            h,
                        ),
                        payload: None,
                        option_index: None,
                    }
                })
                .collect::<Vec<_>>();
            widgets.extend(inner);
            Some(panel)
        } else {
            None
        };
        let layout = LayoutTree {
            viewport: Viewport::new(SIZE as u32, SIZE as u32),
            page_index: 0,
            widgets,
            overlay_region,
            overlay_start,
        };
        let expected = painted(&layout, SIZE);
        for y in 0..SIZE {
            for x in 0..SIZE {
                let got = layout.hit_test(x, y).map(|w| w.widget_id.as_str());
                let want =
                    expected[(y * SIZE + x) as usize].map(|i| layout.widgets[i].widget_id.as_str());
                if got != want {
                    mismatches += 1;
                }
            }
        }
    }
    check(
        mismatches == 0,
        format!("20 layouts ({with_overlay} with an open overlay), 800000 pixels, {mismatches} mismatches"),
    )
}

fn noisy_episode(
    fx: &Fixture,
    record: &GoldRecord,
    theme: &Theme,
    seed: u64,
    digests: bool,
) -> Result<EpisodeLog, String> {
    let mut responder = NoisyResponder {
        profile: NoiseProfile::default(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let options = DriveOptions {
        record_step_digests: digests,
    };
    drive_episode(&mut responder, fx.session(record, theme, seed), options)
        .map(|out| out.log)
        .map_err(|e| format!("{}: {e}", record.sample_id))
}

fn determinism_and_replay(fx: &Fixture) -> Outcome {
    let dataset = build_dataset(&fx.catalog, 1, 7, None).map_err(|e| e.to_string())?;
    let mut unfaithful = Vec::new();
    let mut steps = 0;
    for (i, record) in dataset.records.iter().step_by(2).take(10).enumerate() {
        let theme = &fx.themes[i % fx.themes.len()];
        let log = noisy_episode(fx, record, theme, i as u64, true)?;
        let reread = EpisodeLog::from_jsonl(&log.to_jsonl()).map_err(|e| e.to_string())?;
        let schema = fx.schema(&record.form_id);
        let replayed = replay(&reread, &schema, record, theme).map_err(|e| e.to_string())?;
        steps += reread.steps().count();
        if !replayed.is_faithful() || reread.steps().any(|s| s.screenshot_digest.is_none()) {
            unfaithful.push(format!(
                "{}: {:?}",
                record.sample_id,
                replayed.mismatches.first()
            ));
        }
    }
    let first = build_dataset(&fx.catalog, 50, 42, None).map_err(|e| e.to_string())?;
    let second = build_dataset(&fx.catalog, 50, 42, None).map_err(|e| e.to_string())?;
    let identical = first.to_jsonl() == second.to_jsonl()
        && serde_json::to_string(&first.manifest()).unwrap()
            == serde_json::to_string(&second.manifest()).unwrap();
    check(
        unfaithful.is_empty() && identical,
        format!(
            "10 episodes / {steps} steps replayed, {} unfaithful; regenerated dataset identical: {identical}",
            unfaithful.len()
        ),
    )
}

/// Straightforward BLEU-4 over whitespace tokens: clipped n-gram precisions
/// by counting with plain vectors, their geometric mean as a product root,
/// and the brevity penalty.
fn reference_bleu(candidate: &[&str], reference: &[&str]) -> f64 {
    let grams = |tokens: &[&str], n: usize| -> Vec<Vec<String>> {
        (0..=tokens.len().saturating_sub(n))
            .filter(|i| i + n <= tokens.len())
            .map(|i| tokens[i..i + n].iter().map(|t| t.to_string()).collect())
            .collect()
    };
    let mut product = 1.0f64;
    for n in 1..=4 {
        let cand = grams(candidate, n);
        let mut pool = grams(reference, n);
        let mut matched = 0usize;
        for g in &cand {
            if let Some(pos) = pool.iter().position(|r| r == g) {
                pool.swap_remove(pos);
                matched += 1;
            }
        }
        product *= matched as f64 / cand.len() as f64;
    }
    let c = candidate.len() as f64;
    let r = reference.len() as f64;
    let bp = if c > r { 1.0 } else { f64::exp(1.0 - r / c) };
    bp * product.powf(0.25)
}

fn bleu_correctness() -> Outcome {
    const VOCAB: [&str; 12] = [
        "form", "field", "date", "value", "agent", "click", "page", "the", "a", "of", "grant",
        "river",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut nonzero = 0;
    for _ in 0..20 {
        let len = rng.gen_range(4..18);
        let cand: Vec<&str> = (0..len).map(|_| *VOCAB.choose(&mut rng).unwrap()).collect();
        let mut reference = cand.clone();
        for _ in 0..rng.gen_range(0..4) {
            let at = rng.gen_range(0..reference.len());
            match rng.gen_range(0..3) {
                0 => reference[at] = VOCAB.choose(&mut rng).unwrap(),
                1 if reference.len() > 1 => {
                    reference.remove(at);
                }
                _ => reference.insert(at, VOCAB.choose(&mut rng).unwrap()),
            }
        }
        let want = reference_bleu(&cand, &reference);
        let got = bleu(&cand.join(" "), &reference.join(" "), 4);
        if want > 0.0 {
            nonzero += 1;
        }
        worst = worst.max((want - got).abs());
    }
    let identity = bleu("the quick brown fox jumps", "the quick brown fox jumps", 4);
    let disjoint = bleu("alpha beta gamma delta", "one two three four", 4);
    check(
        worst <= 1e-9 && identity == 1.0 && disjoint == 0.0,
        format!("20 pairs ({nonzero} non-zero), max deviation {worst:.1e}; bleu(x,x)={identity}, disjoint={disjoint}"),
    )
}

fn clipped_area(r: &Rect, viewport: Viewport) -> u64 {
    let x0 = r.left.max(0) as i64;
    let y0 = r.top.max(0) as i64;
    let x1 = (r.left as i64 + r.width as i64).min(viewport.width as i64);
    let y1 = (r.top as i64 + r.height as i64).min(viewport.height as i64);
    ((x1 - x0).max(0) * (y1 - y0).max(0)) as u64
}

fn random_floor(fx: &Fixture) -> Outcome {
    const CLICKS_PER_FORM: usize = 10_000;
    let viewport = Viewport::DEFAULT;
    let theme = &fx.themes[0];
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut worst = 0.0f64;
    let mut fields = 0;
    let mut by_type: BTreeMap<FieldType, (f64, usize)> = BTreeMap::new();
    for schema in &fx.catalog {
        let per_page = CLICKS_PER_FORM / schema.page_count;
        for page in 0..schema.page_count {
            let layout =
                compute_layout(schema, theme, viewport, page, None).map_err(|e| e.to_string())?;
            let clicks = random_clicks(viewport, per_page, &mut rng);
            for field in schema.fields_on_page(page) {
                let area: u64 = layout
                    .field_widgets(&field.field_id)
                    .filter(|w| w.is_interactive())
                    .map(|w| clipped_area(&w.bounds, viewport))
                    .sum();
                let expected =
                    area as f64 / (viewport.width as u64 * viewport.height as u64) as f64;
                let hits = clicks
                    .iter()
                    .filter_map(Action::point)
                    .filter(|&(x, y)| {
                        layout
                            .hit_test(x, y)
                            .is_some_and(|w| w.owned_by(&field.field_id))
                    })
                    .count();
                let rate = hits as f64 / per_page as f64;
                worst = worst.max((rate - expected).abs());
                fields += 1;
                let entry = by_type.entry(field.field_type).or_default();
                entry.0 += rate;
                entry.1 += 1;
            }
        }
    }
    let mean = |t: FieldType| by_type.get(&t).map_or(0.0, |(sum, n)| sum / *n as f64);
    let description = mean(FieldType::Description);
    let string = mean(FieldType::StringInput);
    check(
        worst <= 0.02 && fields == 279,
        format!(
            "{fields} fields, max |rate - area ratio| {worst:.4}; mean random click rate Description {description:.4} vs String {string:.4}"
        ),
    )
}

fn value_accuracy(per_field: &[formbench::scoring::FieldVerdict]) -> f64 {
    if per_field.is_empty() {
        return 0.0;
    }
    per_field.iter().filter(|v| v.value_correct).count() as f64 / per_field.len() as f64
}

fn protocol_dominance(fx: &Fixture) -> Outcome {
    let dataset: Dataset = build_dataset(&fx.catalog, 4, 99, None).map_err(|e| e.to_string())?;
    let mut violations = Vec::new();
    let (mut strict_sum, mut scan_sum) = (0.0, 0.0);
    for (i, record) in dataset.records.iter().enumerate().take(100) {
        let theme = &fx.themes[i % fx.themes.len()];
        let mut responder = NoisyResponder {
            profile: NoiseProfile::default(),
            rng: ChaCha8Rng::seed_from_u64(1000 + i as u64),
        };
        let options = DriveOptions {
            record_step_digests: false,
        };
        let out = drive_episode(&mut responder, fx.session(record, theme, i as u64), options)
            .map_err(|e| format!("{}: {e}", record.sample_id))?;
        let strict = value_accuracy(&out.report.state_strict.per_field);
        let scan = value_accuracy(&out.report.output_scan.per_field);
        strict_sum += strict;
        scan_sum += scan;
        if strict > scan
            || out.report.state_strict.episodic_value > out.report.output_scan.episodic_value
        {
            violations.push(record.sample_id.clone());
        }
    }
    check(
        dataset.records.len() >= 100 && violations.is_empty(),
        format!(
            "100 episodes, {} violations; mean value accuracy state-strict {:.3} vs output-scan {:.3}",
            violations.len(),
            strict_sum / 100.0,
            scan_sum / 100.0
        ),
    )
}

fn field_type_composition(fx: &Fixture) -> Outcome {
    let dataset = build_dataset(&fx.catalog, 1, 3, None).map_err(|e| e.to_string())?;
    let mut covered = Vec::new();
    let mut problems = Vec::new();
    for field_type in FieldType::ALL {
        let Some(schema) = fx
            .catalog
            .iter()
            .find(|f| f.fields.iter().any(|s| s.field_type == field_type))
        else {
            problems.push(format!("{field_type:?}: no form"));
            continue;
        };
        let record = dataset.samples_for(&schema.form_id).next().unwrap();
        let out = match run_oracle_episode(
            fx.session(record, &fx.themes[0], 0),
            DriveOptions::default(),
        ) {
            Ok(out) => out,
            Err(e) => {
                problems.push(format!("{field_type:?}: {e}"));
                continue;
            }
        };
        let basic = out
            .log
            .actions()
            .iter()
            .all(|a| matches!(a, Action::Click { .. } | Action::Type { .. }));
        let extracted = out.env.extract_form_values();
        let filled = schema
            .fields
            .iter()
            .filter(|s| s.field_type == field_type)
            .all(|s| {
                record
                    .gold
                    .get(&s.field_id)
                    .is_some_and(|g| extracted.get(&s.field_id) == Some(g))
            });
        if basic && filled && extracted == record.gold {
            covered.push(format!("{field_type:?}"));
        } else {
            problems.push(format!(
                "{field_type:?} on {}: basic {basic}, filled {filled}",
                schema.form_id
            ));
        }
    }
    check(
        covered.len() == 9 && problems.is_empty(),
        format!(
            "{}/9 field types filled by Click/Type only{}",
            covered.len(),
            problems
                .first()
                .map(|p| format!(" (first problem: {p})"))
                .unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let fx = Fixture::new();
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("dataset accounting", &|| dataset_accounting(&fx)),
        ("oracle ceiling", &|| oracle_ceiling(&fx)),
        ("hit-test equivalence", &hit_test_equivalence),
        ("determinism and replay", &|| determinism_and_replay(&fx)),
        ("bleu correctness", &bleu_correctness),
        ("random-click floor", &|| random_floor(&fx)),
        ("protocol dominance", &|| protocol_dominance(&fx)),
        ("field-type composition", &|| field_type_composition(&fx)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
