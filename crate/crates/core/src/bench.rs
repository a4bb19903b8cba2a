//! Constraint-threaded versus naive generation over a corpus directory.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::program::Program;
use crate::synth::{synthesize_goal, CandidateVerdict, HoleResult, Mode, SearchBudget, SynthOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub goal: String,
    pub mode: &'static str,
    pub wall_ms: f64,
    pub heads_examined: u64,
    pub candidates_emitted: usize,
    pub agreement: bool,
}

#[derive(Debug, Default)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub warnings: Vec<String>,
}

/// `.syn` files of `dir` in name order.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "syn"))
        .collect();
    out.sort();
    Ok(out)
}

fn ok_set(holes: &[HoleResult]) -> BTreeSet<(u32, crate::syntax::Expr)> {
    holes
        .iter()
        .flat_map(|h| {
            h.candidates
                .iter()
                .filter(|c| c.verdict == CandidateVerdict::Ok)
                .map(move |c| (h.hole, c.expr.alpha_canonical()))
        })
        .collect()
}

pub fn run_bench(dir: &Path, base: &Program, budget: &SearchBudget) -> Result<BenchOutcome, String> {
    let mut outcome = BenchOutcome::default();
    let files = corpus_files(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for path in files {
        if !path.with_extension("expected").exists() {
            outcome.warnings.push(format!("{}: no .expected sidecar, skipped", path.display()));
            continue;
        }
        let src = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let prog = base.load(&src).map_err(|d| d.render(&path.display().to_string()))?;
        for goal in &prog.goals {
            let mut runs = Vec::new();
            for (mode, label) in [(Mode::Constraint, "constraint"), (Mode::Naive, "naive")] {
                let opts = SynthOptions { mode, trace: false };
                let start = Instant::now();
                let holes = synthesize_goal(&prog, goal, budget, &opts).map_err(|d| d.render(&path.display().to_string()))?;
                let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
                runs.push((label, wall_ms, holes));
            }
            let agreement = ok_set(&runs[0].2) == ok_set(&runs[1].2);
            for (label, wall_ms, holes) in runs {
                outcome.rows.push(BenchRow {
                    goal: format!("{stem}/{}", goal.name),
                    mode: label,
                    wall_ms,
                    heads_examined: holes.iter().map(|h| h.heads_examined).sum(),
                    candidates_emitted: holes.iter().map(|h| h.candidates.len()).sum(),
                    agreement,
                });
            }
        }
    }
    Ok(outcome)
}

/// CSV with a header row, even when `rows` is empty.
pub fn write_csv<W: Write>(rows: &[BenchRow], w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(["goal", "mode", "wall_ms", "heads_examined", "candidates_emitted", "agreement"])?;
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_gives_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let o = run_bench(dir.path(), &Program::empty(), &SearchBudget::default()).unwrap();
        assert!(o.rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&o.rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "goal,mode,wall_ms,heads_examined,candidates_emitted,agreement\n"
        );
    }

    #[test]
    fn missing_sidecar_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.syn"), "f :: Int\nf = _\n").unwrap();
        let o = run_bench(dir.path(), &Program::empty(), &SearchBudget::default()).unwrap();
        assert!(o.rows.is_empty());
        assert_eq!(o.warnings.len(), 1);
    }
}
