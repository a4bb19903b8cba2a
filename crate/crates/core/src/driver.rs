//! Running synthesis over whole files and rendering the results.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::eval::Verdict;
use crate::parser::Diagnostic;
use crate::prelude::prelude_source;
use crate::pretty::{show_constraints, show_expr, show_expr_inline, show_type};
use crate::program::{Goal, Program};
use crate::synth::{synthesize_goal, HoleResult, Mode, SearchBudget, SynthOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TraceKind {
    #[default]
    Off,
    Synth,
    Types,
    Eval,
}

#[derive(Debug, Clone, Default)]
pub struct FillConfig {
    pub budget: SearchBudget,
    pub trace: TraceKind,
    pub parallel_goals: bool,
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub struct GoalReport {
    pub name: String,
    pub holes: Vec<HoleResult>,
    pub elapsed: Duration,
    /// Lines for the selected trace, in order.
    pub trace: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FillReport {
    pub goals: Vec<GoalReport>,
}

/// The base program: builtins, plus the prelude when requested.
pub fn base_program(prelude: bool) -> Result<Program, String> {
    let empty = Program::empty();
    if !prelude {
        return Ok(empty);
    }
    let (name, src) = prelude_source().map_err(|e| format!("cannot read prelude: {e}"))?;
    empty.load(&src).map_err(|d| d.render(&name))
}

fn run_goal(prog: &Program, goal: &Goal, cfg: &FillConfig) -> Result<GoalReport, Diagnostic> {
    let start = Instant::now();
    let opts = SynthOptions {
        mode: cfg.mode,
        trace: cfg.trace == TraceKind::Synth,
    };
    let holes = synthesize_goal(prog, goal, &cfg.budget, &opts)?;
    let elapsed = start.elapsed();
    let mut trace = Vec::new();
    match cfg.trace {
        TraceKind::Off => {}
        TraceKind::Synth => {
            for h in &holes {
                trace.extend(h.trace.iter().cloned());
            }
        }
        TraceKind::Types => {
            for site in &goal.holes {
                let locals: Vec<String> = site
                    .locals
                    .visible()
                    .iter()
                    .map(|(x, t)| format!("{x} : {}", show_type(&site.solver.resolve(t))))
                    .collect();
                trace.push(format!(
                    "hole ?{} : {} | locals [{}] | constraints {}",
                    site.id,
                    show_type(&site.solver.resolve(&site.ty)),
                    locals.join(", "),
                    show_constraints(&site.solver.constraints())
                ));
            }
        }
        TraceKind::Eval => {
            for h in &holes {
                for c in &h.candidates {
                    let rows: Vec<&str> = c.per_row.iter().map(|v| verdict_name(*v)).collect();
                    trace.push(format!("?{} {} : [{}]", h.hole, show_expr_inline(&c.expr), rows.join(", ")));
                }
            }
        }
    }
    Ok(GoalReport {
        name: goal.name.clone(),
        holes,
        elapsed,
        trace,
    })
}

/// Elaborates `src` on top of `base` and fills every goal.
pub fn fill_source(base: &Program, src: &str, cfg: &FillConfig) -> Result<FillReport, Diagnostic> {
    let prog = base.load(src)?;
    let goals: Vec<Result<GoalReport, Diagnostic>> = if cfg.parallel_goals {
        prog.goals.par_iter().map(|g| run_goal(&prog, g, cfg)).collect()
    } else {
        prog.goals.iter().map(|g| run_goal(&prog, g, cfg)).collect()
    };
    Ok(FillReport {
        goals: goals.into_iter().collect::<Result<_, _>>()?,
    })
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Unknown => "unknown",
        Verdict::Contradicted => "contradicted",
    }
}

impl FillReport {
    /// 0 when every hole got a candidate, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        let all = self.goals.iter().flat_map(|g| &g.holes).all(|h| !h.candidates.is_empty());
        if all {
            0
        } else {
            2
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for g in &self.goals {
            for h in &g.holes {
                out.push_str(&format!("{} ?{} :: {}\n", g.name, h.hole, show_type(&h.goal)));
                if h.candidates.is_empty() {
                    out.push_str(">   no candidates\n");
                }
                for c in &h.candidates {
                    let tag = format!("({})", c.verdict.tag());
                    let pad = " ".repeat(tag.len() + 1);
                    for (i, line) in show_expr(&c.expr).lines().enumerate() {
                        if i == 0 {
                            out.push_str(&format!("> {tag} {line}\n"));
                        } else {
                            out.push_str(&format!("> {pad}{line}\n"));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> JsonReport {
        JsonReport {
            goals: self
                .goals
                .iter()
                .map(|g| JsonGoal {
                    goal: g.name.clone(),
                    holes: g
                        .holes
                        .iter()
                        .map(|h| JsonHole {
                            hole: h.hole,
                            goal_type: show_type(&h.goal),
                            heads_examined: h.heads_examined,
                            candidates: h
                                .candidates
                                .iter()
                                .map(|c| JsonCandidate {
                                    verdict: c.verdict.tag(),
                                    expr: show_expr_inline(&c.expr),
                                    per_row: c.per_row.iter().map(|v| verdict_name(*v)).collect(),
                                })
                                .collect(),
                        })
                        .collect(),
                    timings: JsonTimings {
                        wall_ms: g.elapsed.as_secs_f64() * 1000.0,
                    },
                })
                .collect(),
        }
    }

    /// One line per candidate: `goal<TAB>verdict<TAB>α-canonical term`.
    /// This is the format of `.expected` sidecars.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.goals {
            for h in &g.holes {
                for c in &h.candidates {
                    out.push(format!(
                        "{}\t{}\t{}",
                        g.name,
                        c.verdict.tag(),
                        show_expr_inline(&c.expr.alpha_canonical())
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub goals: Vec<JsonGoal>,
}

#[derive(Debug, Serialize)]
pub struct JsonGoal {
    pub goal: String,
    pub holes: Vec<JsonHole>,
    pub timings: JsonTimings,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonHole {
    pub hole: u32,
    pub goal_type: String,
    pub heads_examined: u64,
    pub candidates: Vec<JsonCandidate>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonCandidate {
    pub verdict: &'static str,
    pub expr: String,
    pub per_row: Vec<&'static str>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonTimings {
    pub wall_ms: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    const FROM_MAYBE: &str = "\
data Maybe a = Nothing | Just a
{@
  fromMaybe :: a -> Maybe a -> a
  fromMaybe a1 Nothing = a1
  fromMaybe a1 (Just a2) = a2
  @@
  ctx=(Just, Nothing)
@}
fromMaybe :: a -> Maybe a -> a
fromMaybe s1 m1 = _
";

    #[test]
    fn text_listing() {
        let r = fill_source(&Program::empty(), FROM_MAYBE, &FillConfig::default()).unwrap();
        assert_eq!(
            r.render_text(),
            "fromMaybe ?0 :: a\n> (ok) case m1 of\n>        Nothing -> s1\n>        Just a1 -> a1\n"
        );
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn json_matches_text() {
        let r = fill_source(&Program::empty(), FROM_MAYBE, &FillConfig::default()).unwrap();
        let j = serde_json::to_value(r.to_json()).unwrap();
        let c = &j["goals"][0]["holes"][0]["candidates"][0];
        assert_eq!(c["verdict"], "ok");
        assert_eq!(c["expr"], "case m1 of { Nothing -> s1; Just a1 -> a1 }");
        assert_eq!(c["perRow"], serde_json::json!(["satisfied", "satisfied"]));
    }

    #[test]
    fn empty_hole_exit_code() {
        let src = "f :: Int\nf = _\n";
        let r = fill_source(&Program::empty(), src, &FillConfig::default()).unwrap();
        assert_eq!(r.exit_code(), 2);
        assert!(r.render_text().contains("no candidates"));
    }

    #[test]
    fn prelude_loads() {
        let p = base_program(true).unwrap();
        assert!(p.ctx.ctor("Plus").is_some());
    }
}
