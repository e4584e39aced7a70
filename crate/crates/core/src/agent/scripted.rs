//! Agents that need no model: the gold-knowing oracle, a noisy scripted
//! agent built on it, and a uniform random clicker.
//!
//! The oracle and the noisy agent plan against a clone of the session, so
//! every click targets the geometry the real session will have at that step.

use chrono::{Datelike, Duration};
use rand::seq::SliceRandom;
use rand::Rng;

use super::dsl::{render_actions, ActionSequence};
use super::AgentError;
use crate::env::{Action, EnvState};
use crate::render::{LayoutTree, Overlay, Viewport};
use crate::schema::{FieldSpec, FieldType};
use crate::values::{format_date, parse_date, FieldValue, MULTI_SEPARATOR};

/// A point no widget or overlay panel claims, if the page has one.
pub fn background_point(layout: &LayoutTree) -> Option<(i32, i32)> {
    let (w, h) = (layout.viewport.width as i32, layout.viewport.height as i32);
    let free = |x: i32, y: i32| {
        layout.hit_test(x, y).is_none() && !layout.overlay_region.is_some_and(|r| r.contains(x, y))
    };
    (0..h)
        .rev()
        .step_by(7)
        .flat_map(|y| (0..w).rev().step_by(13).map(move |x| (x, y)))
        .find(|&(x, y)| free(x, y))
}

/// Records actions while applying them to a planning copy of the session.
struct Planner {
    sim: EnvState,
    actions: Vec<Action>,
}

impl Planner {
    fn new(env: &EnvState) -> Planner {
        Planner {
            sim: env.clone(),
            actions: Vec::new(),
        }
    }

    fn apply(&mut self, action: Action) {
        // Planning never outlives the session, so a step error means the
        // session ended (e.g. the step cap); the action is still emitted.
        let _ = self.sim.step(&action);
        self.actions.push(action);
    }

    fn click_widget(&mut self, field: &str, widget_id: &str) -> Result<(), AgentError> {
        let at = self
            .sim
            .layout()
            .widget(widget_id)
            .map(|w| w.bounds.center())
            .ok_or_else(|| AgentError::UnfillableField {
                field_id: field.to_string(),
                reason: format!("widget `{widget_id}` is not on the page"),
            })?;
        self.apply(Action::click_at(at));
        Ok(())
    }

    fn double_click_widget(&mut self, field: &str, widget_id: &str) -> Result<(), AgentError> {
        let layout = self.sim.layout();
        let w = layout
            .widget(widget_id)
            .ok_or_else(|| AgentError::UnfillableField {
                field_id: field.to_string(),
                reason: format!("widget `{widget_id}` is not on the page"),
            })?;
        let (x, y) = w.bounds.center();
        self.apply(Action::DoubleClick { x, y });
        Ok(())
    }

    fn click_background(&mut self) {
        if let Some(p) = background_point(&self.sim.layout()) {
            self.apply(Action::click_at(p));
        }
    }

    fn type_text(&mut self, text: &str) {
        if !text.is_empty() {
            self.apply(Action::type_text(text));
        }
    }

    fn click_navigation(&mut self) {
        if self.sim.overlay().is_some() {
            self.click_background();
        }
        let at = self.sim.layout().navigation().bounds.center();
        self.apply(Action::click_at(at));
    }

    /// Enters `value` into `field` the way a careful person would.
    fn fill(&mut self, field: &FieldSpec, value: &str) -> Result<(), AgentError> {
        let fid = field.field_id.as_str();
        match field.field_type {
            FieldType::StringInput | FieldType::Description | FieldType::NumericInput => {
                let input = format!("input:{fid}");
                if self.sim.values().contains_key(fid) {
                    self.double_click_widget(fid, &input)?;
                } else {
                    self.click_widget(fid, &input)?;
                }
                self.type_text(value);
            }
            FieldType::Date => self.pick_date(field, value)?,
            FieldType::Dropdown => {
                let i = option(field, value)?;
                self.click_widget(fid, &format!("head:{fid}"))?;
                self.click_widget(fid, &format!("opt:{fid}:{i}"))?;
            }
            FieldType::BinaryChoice => {
                let i = option(field, value)?;
                self.click_widget(fid, &format!("radio:{fid}:{i}"))?;
            }
            FieldType::MultipleChoice => {
                let wanted: Vec<usize> = value
                    .split(MULTI_SEPARATOR)
                    .map(|v| option(field, v))
                    .collect::<Result<_, _>>()?;
                for i in 0..field.options.len() {
                    let on = matches!(self.sim.values().get(fid), Some(FieldValue::Choices(s)) if s.contains(&i));
                    if on != wanted.contains(&i) {
                        self.click_widget(fid, &format!("check:{fid}:{i}"))?;
                    }
                }
            }
            FieldType::CheckboxInput => {
                if !matches!(self.sim.values().get(fid), Some(FieldValue::Checked(true))) {
                    self.click_widget(fid, &format!("check:{fid}"))?;
                }
            }
            FieldType::FileUpload => {
                let button = format!("file:{fid}");
                self.click_widget(fid, &button)?;
                self.type_text(value);
                self.click_widget(fid, &button)?;
            }
        }
        Ok(())
    }

    /// Opens the calendar, walks to the month (years first), clicks the day.
    fn pick_date(&mut self, field: &FieldSpec, value: &str) -> Result<(), AgentError> {
        let fid = field.field_id.as_str();
        let target = parse_date(value).ok_or_else(|| AgentError::UnfillableField {
            field_id: fid.to_string(),
            reason: format!("{value:?} is not a date"),
        })?;
        if !matches!(self.sim.overlay(), Some(Overlay::Calendar { field_id, .. }) if field_id == fid)
        {
            self.click_widget(fid, &format!("input:{fid}"))?;
        }
        let Some(Overlay::Calendar { year, month, .. }) = self.sim.overlay().cloned() else {
            return Err(AgentError::UnfillableField {
                field_id: fid.to_string(),
                reason: "calendar did not open".into(),
            });
        };
        let mut delta = (target.year() - year) * 12 + target.month() as i32 - month as i32;
        while delta != 0 {
            let step = match delta {
                d if d >= 12 => 12,
                d if d <= -12 => -12,
                d => d.signum(),
            };
            self.click_widget(fid, &format!("cal:{fid}:nav:{step:+}"))?;
            delta -= step;
        }
        self.click_widget(fid, &format!("cal:{fid}:day:{}", target.day()))
    }

    fn finish(self) -> ActionSequence {
        ActionSequence::new(self.actions)
    }
}

fn option(field: &FieldSpec, value: &str) -> Result<usize, AgentError> {
    field
        .option_index(value)
        .ok_or_else(|| AgentError::UnfillableField {
            field_id: field.field_id.clone(),
            reason: format!("{value:?} is not an option"),
        })
}

/// Actions that fill every scored field on the current page with its gold
/// value and then turn the page (or submit).
pub fn oracle_agent(env: &EnvState) -> Result<ActionSequence, AgentError> {
    let schema = env.schema_arc();
    let gold = env.sample().gold.clone();
    let page = env.current_page();
    let mut plan = Planner::new(env);
    for field in schema.fields_on_page(page).filter(|f| f.scored) {
        if let Some(value) = gold.get(&field.field_id) {
            plan.fill(field, value)?;
        }
    }
    let extracted = plan.sim.extract_form_values();
    for field in schema.fields_on_page(page).filter(|f| f.scored) {
        if let Some(value) = gold.get(&field.field_id) {
            if extracted.get(&field.field_id) != Some(value) {
                return Err(AgentError::UnfillableField {
                    field_id: field.field_id.clone(),
                    reason: format!(
                        "planned value {:?} differs from gold",
                        extracted.get(&field.field_id)
                    ),
                });
            }
        }
    }
    plan.click_navigation();
    Ok(plan.finish())
}

/// Per-field behaviour mix of the noisy agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseProfile {
    pub skip: f64,
    pub wrong_value: f64,
    pub miss_click: f64,
    pub mention_only: f64,
    /// Chance of leaving the page without clicking Next/Submit.
    pub forget_navigation: f64,
}

impl Default for NoiseProfile {
    fn default() -> Self {
        NoiseProfile {
            skip: 0.15,
            wrong_value: 0.15,
            miss_click: 0.15,
            mention_only: 0.1,
            forget_navigation: 0.2,
        }
    }
}

fn corrupt_text<R: Rng + ?Sized>(value: &str, rng: &mut R) -> String {
    let words: Vec<&str> = value.split(' ').collect();
    match rng.gen_range(0..3) {
        0 if words.len() > 1 => words[..words.len() - 1].join(" "),
        1 => format!(
            "{value} {}",
            ["Jr", "Ltd", "approx", "tbd"].choose(rng).unwrap()
        ),
        _ => {
            let mut chars: Vec<char> = value.chars().collect();
            chars.pop();
            if chars.is_empty() {
                "n/a".to_string()
            } else {
                chars.into_iter().collect()
            }
        }
    }
}

fn wrong_value<R: Rng + ?Sized>(field: &FieldSpec, value: &str, rng: &mut R) -> Option<String> {
    match field.field_type {
        FieldType::Dropdown | FieldType::BinaryChoice => {
            let others: Vec<&String> = field.options.iter().filter(|o| *o != value).collect();
            others.choose(rng).map(|o| o.to_string())
        }
        FieldType::MultipleChoice => {
            let gold: Vec<&str> = value.split(MULTI_SEPARATOR).collect();
            let flip = rng.gen_range(0..field.options.len());
            let picked: Vec<&str> = field
                .options
                .iter()
                .enumerate()
                .filter(|(i, o)| (gold.contains(&o.as_str())) != (*i == flip))
                .map(|(_, o)| o.as_str())
                .collect();
            (!picked.is_empty()).then(|| picked.join(";"))
        }
        FieldType::Date => {
            let d = parse_date(value)?;
            Some(format_date(d + Duration::days(rng.gen_range(1..40))))
        }
        FieldType::CheckboxInput => None,
        _ => Some(corrupt_text(value, rng)),
    }
}

/// Whether the field's value would reach the session by typing alone.
fn typed_entry(field_type: FieldType) -> bool {
    matches!(
        field_type,
        FieldType::StringInput
            | FieldType::Description
            | FieldType::NumericInput
            | FieldType::FileUpload
    )
}

/// A scripted imperfect agent for one page. It fills some fields correctly,
/// skips some, enters wrong values into some, misses the target with some
/// clicks, and only mentions others. Whenever it selects or picks a value by
/// clicking, it first names that value in a `#` comment, so everything it
/// enters also appears in its output.
pub fn noisy_agent<R: Rng + ?Sized>(
    env: &EnvState,
    profile: &NoiseProfile,
    rng: &mut R,
) -> Result<(ActionSequence, String), AgentError> {
    let schema = env.schema_arc();
    let gold = env.sample().gold.clone();
    let mut plan = Planner::new(env);
    let mut output = String::new();
    let mut emitted = 0;
    let mut flush = |plan: &Planner, output: &mut String, comment: Option<String>| {
        if let Some(c) = comment {
            output.push_str(&format!("# {c}\n"));
        }
        output.push_str(&render_actions(&plan.actions[emitted..]));
        emitted = plan.actions.len();
    };
    for field in schema
        .fields_on_page(env.current_page())
        .filter(|f| f.scored)
    {
        let Some(value) = gold.get(&field.field_id) else {
            continue;
        };
        let label = &field.label;
        let roll: f64 = rng.gen();
        let p = profile;
        let comment = if roll < p.skip {
            None
        } else if roll < p.skip + p.wrong_value {
            match wrong_value(field, value, rng) {
                Some(wrong) => {
                    let named =
                        (!typed_entry(field.field_type)).then(|| format!("{label}: {wrong}"));
                    plan.fill(field, &wrong)?;
                    named
                }
                None => None,
            }
        } else if roll < p.skip + p.wrong_value + p.miss_click {
            // Aim at the field but hit empty page: nothing is entered.
            match field.field_type {
                FieldType::Dropdown => {
                    plan.click_widget(&field.field_id, &format!("head:{}", field.field_id))?
                }
                FieldType::Date => {
                    plan.click_widget(&field.field_id, &format!("input:{}", field.field_id))?
                }
                _ => {}
            }
            plan.click_background();
            if typed_entry(field.field_type) {
                plan.type_text(value);
            }
            Some(format!("{label}: {value}"))
        } else if roll < p.skip + p.wrong_value + p.miss_click + p.mention_only {
            Some(format!("{label} should be {value}"))
        } else {
            plan.fill(field, value)?;
            (!typed_entry(field.field_type)).then(|| format!("{label}: {value}"))
        };
        flush(&plan, &mut output, comment);
    }
    if !rng.gen_bool(profile.forget_navigation) {
        plan.click_navigation();
        flush(&plan, &mut output, None);
    }
    Ok((plan.finish(), output))
}

/// `n` clicks uniformly distributed over the viewport.
pub fn random_clicks<R: Rng + ?Sized>(viewport: Viewport, n: usize, rng: &mut R) -> Vec<Action> {
    (0..n)
        .map(|_| {
            Action::click(
                rng.gen_range(0..viewport.width as i32),
                rng.gen_range(0..viewport.height as i32),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::datagen::build_sample;
    use crate::env::create_session;
    use crate::render::Theme;
    use std::sync::Arc;

    fn session(form: usize, theme: Theme) -> EnvState {
        let catalog = builtin_catalog();
        let schema = catalog[form].clone();
        let sample = build_sample(&schema, 3, 0, None).unwrap();
        create_session(
            Arc::new(schema),
            Arc::new(sample),
            theme,
            Viewport::DEFAULT,
            false,
            0,
        )
        .unwrap()
    }

    fn run_oracle(mut env: EnvState) -> EnvState {
        while !env.submitted() {
            let page = env.current_page();
            for a in oracle_agent(&env).unwrap().actions {
                env.step(&a).unwrap();
            }
            assert!(env.submitted() || env.current_page() == page + 1);
        }
        env
    }

    #[test]
    fn oracle_fills_every_form() {
        for form in 0..25 {
            let env = run_oracle(session(form, Theme::plain()));
            let extracted = env.extract_form_values();
            for (k, v) in &env.sample().gold {
                assert_eq!(extracted.get(k), Some(v), "{} {k}", env.schema().form_id);
            }
        }
    }

    #[test]
    fn calendar_walk_matches_worked_example() {
        use crate::schema::{DomainCategory, FormSchema};
        let schema = FormSchema {
            form_id: "d".into(),
            name: "D".into(),
            domain_category: DomainCategory::ProfessionalBusiness,
            page_count: 1,
            theme_id: "plain".into(),
            fields: vec![FieldSpec::new("when", "When", FieldType::Date)],
        };
        let mut sample = crate::datagen::GoldRecord::blank("d");
        sample.gold.insert("when".into(), "2024-05-01".into());
        let env = create_session(
            Arc::new(schema),
            Arc::new(sample),
            Theme::plain(),
            Viewport::DEFAULT,
            false,
            0,
        )
        .unwrap();
        let seq = oracle_agent(&env).unwrap();
        // Date box, four next-month arrows, the day, then Submit.
        assert_eq!(seq.actions.len(), 7);
        let mut e = env.clone();
        let mut ids = Vec::new();
        for a in &seq.actions {
            let (x, y) = a.point().unwrap();
            ids.push(e.layout().hit_test(x, y).unwrap().widget_id.clone());
            e.step(a).unwrap();
        }
        assert_eq!(
            ids,
            [
                "input:when",
                "cal:when:nav:+1",
                "cal:when:nav:+1",
                "cal:when:nav:+1",
                "cal:when:nav:+1",
                "cal:when:day:1",
                "nav:submit"
            ]
        );
        assert_eq!(e.extract_form_values()["when"], "2024-05-01");
    }

    #[test]
    fn background_point_is_free() {
        let env = session(0, Theme::compact());
        let l = env.layout();
        let (x, y) = background_point(&l).unwrap();
        assert!(l.hit_test(x, y).is_none());
    }

    #[test]
    fn noisy_agent_never_enters_unnamed_values() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for form in 0..25 {
            let mut env = session(form, Theme::dark());
            let mut output = String::new();
            let mut pages = 0;
            while !env.submitted() && pages < env.page_count() {
                let (seq, out) = noisy_agent(&env, &NoiseProfile::default(), &mut rng).unwrap();
                output.push_str(&out);
                for a in &seq.actions {
                    env.step(a).unwrap();
                }
                pages += 1;
            }
            let haystack = crate::scoring::value::scan_normalize(&output);
            for (k, v) in env.extract_form_values() {
                let field = env.schema().field(&k).unwrap();
                if field.field_type == FieldType::Description {
                    continue;
                }
                assert!(
                    crate::scoring::value::occurs(
                        &haystack,
                        &crate::scoring::value::scan_normalize(&v)
                    ),
                    "{k}={v} entered but not emitted"
                );
            }
        }
    }
}
