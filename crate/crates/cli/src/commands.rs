use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use bidsched_core::graph::DotStyle;
use bidsched_core::grid::{cell_name, generate_grid, grid_to_graph, parse_cell, GridSpec};
use bidsched_core::rational::{self, Rational};
use bidsched_core::runtime::{
    adversary_tender, budget_series_csv, default_split, run_composition, trace_csv, trace_jsonl, Adversary,
    AdversaryKind, RunSummary, TenderPolicy,
};
use bidsched_core::synthesis::{make_tender, synthesize};
use bidsched_core::threshold::solve_objective;
use bidsched_core::{
    Graph, Objective, RuntimeError, SolverConfig, SynthMode, SynthesisOutcome, Tender, ThresholdMap, TraceRecord,
    Verdict,
};

use crate::files::{
    input, read_contract, read_graph, read_objectives, read_pair, read_tender, solver_failure, synthesis_failure,
    Failure, Output, RunManifest, SYNTH_FAIL,
};
use crate::{AdversaryArg, Cli, Command, ModeArg};

pub fn run(cli: &Cli) -> Result<u8, Failure> {
    let config = cli.solver.config();
    config.validate().map_err(input)?;
    let ctx = Ctx {
        config,
        out: &cli.out,
        emit_dot: cli.emit_dot,
    };
    match &cli.command {
        Command::Solve { graph, objectives } => ctx.solve(graph, objectives),
        Command::Synth {
            graph,
            objectives,
            mode,
            contract,
        } => ctx.synth(graph, objectives, *mode, contract.as_deref()),
        Command::Simulate {
            graph,
            tenders,
            objectives,
            split,
            steps,
            adversary,
            seed,
        } => ctx.simulate(SimulateArgs {
            graph,
            tenders,
            objectives: objectives.as_deref(),
            split: split.as_deref(),
            steps: *steps,
            adversary: *adversary,
            seed: *seed,
        }),
        Command::Grid {
            spec,
            rows,
            cols,
            density,
            seed,
            mode,
            steps,
            split,
        } => {
            let spec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(input)?;
                    GridSpec::from_json(&text).map_err(input)?
                }
                None => generate_grid(*rows, *cols, *density, *seed).map_err(input)?,
            };
            ctx.grid(&spec, *mode, *steps, split.as_deref(), *seed)
        }
    }
}

struct Ctx<'a> {
    config: SolverConfig,
    out: &'a Path,
    emit_dot: bool,
}

struct SimulateArgs<'a> {
    graph: &'a Path,
    tenders: &'a [PathBuf],
    objectives: Option<&'a Path>,
    split: Option<&'a str>,
    steps: Option<usize>,
    adversary: Option<AdversaryArg>,
    seed: u64,
}

fn synth_mode(m: ModeArg) -> SynthMode {
    match m {
        ModeArg::Strong => SynthMode::Strong,
        ModeArg::Aa => SynthMode::Aa,
        ModeArg::Ag => SynthMode::Ag,
    }
}

fn parse_split(s: &str) -> Result<Rational, Failure> {
    let q = rational::parse(s).map_err(input)?;
    if !rational::in_unit_interval(&q) {
        return Err(input(anyhow!("split {s} is outside [0, 1]")));
    }
    Ok(q)
}

fn runtime_failure(e: RuntimeError) -> Failure {
    match e {
        RuntimeError::Solver(inner) => solver_failure(inner),
        other => input(other),
    }
}

fn target_mask(graph: &Graph, objective: &Objective) -> BTreeSet<usize> {
    match objective.set_mask(graph) {
        Ok(mask) => (0..graph.len()).filter(|&v| mask[v]).collect(),
        Err(_) => BTreeSet::new(),
    }
}

fn action_edges(graph: &Graph, action: &BTreeMap<String, String>) -> BTreeSet<(usize, usize)> {
    action
        .iter()
        .filter_map(|(v, u)| Some((graph.index_of(v)?, graph.index_of(u)?)))
        .collect()
}

fn path_of(graph: &Graph, trace: &[TraceRecord]) -> Vec<usize> {
    let mut names: Vec<&str> = trace.first().map(|r| r.config_before.vertex.as_str()).into_iter().collect();
    names.extend(trace.iter().map(|r| r.next_vertex.as_str()));
    if names.is_empty() {
        return vec![graph.initial()];
    }
    names.iter().filter_map(|v| graph.index_of(v)).collect()
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Satisfied => "satisfied".into(),
        Verdict::Violated => "violated".into(),
        Verdict::Undetermined { horizon } => format!("undetermined after {horizon} steps"),
    }
}

fn tender_for(graph: &Graph, map: &ThresholdMap, objective: &Objective) -> Option<Tender> {
    let t = make_tender(graph, map).ok()?;
    match objective {
        Objective::Buchi { .. } | Objective::Parity { .. } => t.with_pursuit(graph, objective).ok(),
        _ => Some(t),
    }
}

impl Ctx<'_> {
    fn manifest(&self, out: &Output, command: &str, inputs: Vec<PathBuf>, seed: u64) -> Result<(), Failure> {
        let m = RunManifest {
            command: command.into(),
            inputs,
            config: self.config.clone(),
            seed,
            output: self.out.to_path_buf(),
        };
        out.write("manifest.json", &m.to_json())?;
        Ok(())
    }

    fn solve(&self, graph_path: &Path, objectives_path: &Path) -> Result<u8, Failure> {
        let graph = read_graph(graph_path)?;
        let objectives = read_objectives(objectives_path, &graph)?;
        let maps = objectives
            .iter()
            .map(|o| solve_objective(&graph, o, &self.config).map_err(solver_failure))
            .collect::<Result<Vec<_>, _>>()?;

        let width = graph.names().iter().map(String::len).max().unwrap_or(0).max(6);
        let mut header = format!("{:<width$}", "vertex");
        for i in 1..=maps.len() {
            header += &format!("  {:>10}", format!("th_{i}"));
        }
        println!("{header}");
        let mut sorted: Vec<&String> = graph.names().iter().collect();
        sorted.sort();
        for v in sorted {
            let mut row = format!("{v:<width$}");
            for m in &maps {
                row += &format!("  {:>10}", rational::format(&m.values[v]));
            }
            println!("{row}");
        }

        let out = Output::create(self.out)?;
        let mut style = DotStyle::default();
        for (i, (map, objective)) in maps.iter().zip(&objectives).enumerate() {
            out.write(&format!("thresholds_{}.json", i + 1), &map.to_json())?;
            if let Some(t) = tender_for(&graph, map, objective) {
                out.write(&format!("tender_{}.json", i + 1), &t.to_json())?;
            }
            let chosen: BTreeMap<String, String> = map.witness.iter().map(|(v, (lo, _))| (v.clone(), lo.clone())).collect();
            match i {
                0 => {
                    style.targets_1 = target_mask(&graph, objective);
                    style.chosen_1 = action_edges(&graph, &chosen);
                }
                1 => {
                    style.targets_2 = target_mask(&graph, objective);
                    style.chosen_2 = action_edges(&graph, &chosen);
                }
                _ => {}
            }
        }
        if self.emit_dot {
            out.write("graph.dot", &graph.to_dot(&style))?;
        }
        self.manifest(&out, "solve", vec![graph_path.into(), objectives_path.into()], 0)?;
        Ok(0)
    }

    fn synth(&self, graph_path: &Path, objectives_path: &Path, mode: ModeArg, contract_path: Option<&Path>) -> Result<u8, Failure> {
        let graph = read_graph(graph_path)?;
        let (o1, o2) = read_pair(objectives_path, &graph)?;
        let contract = contract_path.map(read_contract).transpose()?;
        if matches!(mode, ModeArg::Ag) && contract.is_none() {
            return Err(input(anyhow!("--mode ag needs --contract")));
        }
        let outcome =
            synthesize(&graph, &o1, &o2, synth_mode(mode), contract.as_ref(), &self.config).map_err(synthesis_failure)?;
        let out = Output::create(self.out)?;
        self.write_outcome(&out, &graph, &outcome, (&o1, &o2), &[])?;
        let mut inputs = vec![graph_path.to_path_buf(), objectives_path.to_path_buf()];
        inputs.extend(contract_path.map(Path::to_path_buf));
        self.manifest(&out, "synth", inputs, 0)?;
        Ok(if outcome.is_success() { 0 } else { SYNTH_FAIL })
    }

    fn write_outcome(
        &self,
        out: &Output,
        graph: &Graph,
        outcome: &SynthesisOutcome,
        objectives: (&Objective, &Objective),
        path: &[usize],
    ) -> Result<(), Failure> {
        println!(
            "{} synthesis: {:?}; thresholds {} and {}{}",
            outcome.mode,
            outcome.status,
            outcome.threshold_1,
            outcome.threshold_2,
            outcome.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
        );
        out.write("outcome.json", &outcome.to_json())?;
        let mut style = DotStyle {
            targets_1: target_mask(graph, objectives.0),
            targets_2: target_mask(graph, objectives.1),
            path: path.to_vec(),
            ..DotStyle::default()
        };
        if let Some((t1, t2)) = &outcome.tenders {
            out.write("tender_1.json", &t1.to_json())?;
            out.write("tender_2.json", &t2.to_json())?;
            style.chosen_1 = action_edges(graph, &t1.action);
            style.chosen_2 = action_edges(graph, &t2.action);
        }
        if self.emit_dot {
            out.write("graph.dot", &graph.to_dot(&style))?;
        }
        Ok(())
    }

    fn write_run(
        &self,
        out: &Output,
        graph: &Graph,
        start: &Rational,
        trace: &[TraceRecord],
        verdicts: Vec<Verdict>,
    ) -> Result<(), Failure> {
        let names: Vec<&str> = path_of(graph, trace).into_iter().map(|v| graph.name(v)).collect();
        println!("path: {}", names.join(" "));
        for (i, v) in verdicts.iter().enumerate() {
            println!("objective {}: {}", i + 1, verdict_text(v));
        }
        out.write("trace.jsonl", &trace_jsonl(trace))?;
        out.write("trace.csv", &trace_csv(trace))?;
        out.write("budget.csv", &budget_series_csv(trace))?;
        let summary = RunSummary::new(graph.name(graph.initial()), start, trace, verdicts);
        out.write("summary.json", &summary.to_json())?;
        Ok(())
    }

    fn simulate(&self, args: SimulateArgs<'_>) -> Result<u8, Failure> {
        let graph = read_graph(args.graph)?;
        let objectives = match args.objectives {
            Some(p) => read_objectives(p, &graph)?,
            None => Vec::new(),
        };
        let tenders = args
            .tenders
            .iter()
            .map(|p| read_tender(p, &graph))
            .collect::<Result<Vec<_>, _>>()?;
        let adversary: Option<Adversary> = match (args.adversary, tenders.len()) {
            (None, 2) => None,
            (None, n) => return Err(input(anyhow!("expected two --tender files, got {n}"))),
            (Some(_), n) if n != 1 => return Err(input(anyhow!("--adversary replaces the second tender; give one --tender"))),
            (Some(kind), _) => {
                let kind = match kind {
                    AdversaryArg::Random => AdversaryKind::Random,
                    AdversaryArg::Zero => AdversaryKind::Zero,
                    AdversaryArg::Greedy => AdversaryKind::Greedy,
                    AdversaryArg::Spoiler => {
                        let victim = objectives
                            .first()
                            .ok_or_else(|| input(anyhow!("the spoiler needs --objectives naming its victim's objective")))?;
                        AdversaryKind::Spoiler(victim.clone())
                    }
                };
                Some(adversary_tender(&graph, &kind, args.seed, &self.config).map_err(runtime_failure)?)
            }
        };
        let start = match (args.split, &adversary) {
            (Some(s), _) => parse_split(s)?,
            (None, Some(_)) => default_split(&tenders[0].threshold_budget, &Rational::from_integer(0.into())),
            (None, None) => default_split(&tenders[0].threshold_budget, &tenders[1].threshold_budget),
        };
        let second: &dyn TenderPolicy = match &adversary {
            Some(a) => a,
            None => &tenders[1],
        };
        let steps = args.steps.unwrap_or(10 * graph.len());
        let judged: Vec<&Objective> = objectives.iter().collect();
        let (trace, verdicts) =
            run_composition(&graph, &tenders[0], second, &start, steps, &judged).map_err(runtime_failure)?;
        let out = Output::create(self.out)?;
        self.write_run(&out, &graph, &start, &trace, verdicts)?;
        if self.emit_dot {
            let style = DotStyle {
                targets_1: judged.first().map(|o| target_mask(&graph, o)).unwrap_or_default(),
                targets_2: judged.get(1).map(|o| target_mask(&graph, o)).unwrap_or_default(),
                chosen_1: action_edges(&graph, &tenders[0].action),
                chosen_2: tenders.get(1).map(|t| action_edges(&graph, &t.action)).unwrap_or_default(),
                path: path_of(&graph, &trace),
            };
            out.write("graph.dot", &graph.to_dot(&style))?;
        }
        let mut inputs = vec![args.graph.to_path_buf()];
        inputs.extend(args.tenders.iter().cloned());
        inputs.extend(args.objectives.map(Path::to_path_buf));
        self.manifest(&out, "simulate", inputs, args.seed)?;
        Ok(0)
    }

    fn grid(&self, spec: &GridSpec, mode: ModeArg, steps: Option<usize>, split: Option<&str>, seed: u64) -> Result<u8, Failure> {
        let inst = grid_to_graph(spec).map_err(input)?;
        let graph = &inst.graph;
        let (o1, o2) = (&inst.objective_1, &inst.objective_2);
        let out = Output::create(self.out)?;
        out.write("grid.json", &spec.to_json())?;
        out.write("graph.json", &graph.to_json())?;
        out.write(
            "objectives.json",
            &serde_json::to_string_pretty(&[o1, o2]).expect("objectives serialize"),
        )?;
        if !inst.dead_cells.is_empty() {
            log::warn!("cells without a move: {}", inst.dead_cells.join(", "));
        }
        let outcome = synthesize(graph, o1, o2, synth_mode(mode), None, &self.config).map_err(synthesis_failure)?;
        let mut trace = Vec::new();
        if let Some((t1, t2)) = &outcome.tenders {
            let start = match split {
                Some(s) => parse_split(s)?,
                None => default_split(&outcome.threshold_1, &outcome.threshold_2),
            };
            let run = run_composition(graph, t1, t2, &start, steps.unwrap_or(10 * graph.len()), &[o1, o2])
                .map_err(runtime_failure)?;
            trace = run.0;
            self.write_run(&out, graph, &start, &trace, run.1)?;
        }
        let path = if trace.is_empty() { Vec::new() } else { path_of(graph, &trace) };
        self.write_outcome(&out, graph, &outcome, (o1, o2), &path)?;
        out.write("cells.csv", &cells_csv(spec, &trace))?;
        out.write("grid.dot", &grid_dot(spec, &trace))?;
        self.manifest(&out, "grid", Vec::new(), seed)?;
        Ok(if outcome.is_success() { 0 } else { SYNTH_FAIL })
    }
}

/// Who won the auction on each visited cell, and when.
fn cell_winners(trace: &[TraceRecord]) -> BTreeMap<(usize, usize), (usize, u8)> {
    let mut out = BTreeMap::new();
    for r in trace {
        if let Some(cell) = parse_cell(&r.config_before.vertex) {
            out.entry(cell).or_insert((r.step, r.winner.number()));
        }
    }
    out
}

fn cell_kind(spec: &GridSpec, cell: (usize, usize)) -> &'static str {
    if spec.obstacles.contains(&cell) {
        return "obstacle";
    }
    match (spec.targets_1.contains(&cell), spec.targets_2.contains(&cell)) {
        (true, true) => "target_both",
        (true, false) => "target_1",
        (false, true) => "target_2",
        _ if cell == spec.start => "start",
        _ => "free",
    }
}

fn visited(trace: &[TraceRecord]) -> BTreeSet<(usize, usize)> {
    trace
        .iter()
        .flat_map(|r| [&r.config_before.vertex, &r.next_vertex])
        .filter_map(|v| parse_cell(v))
        .collect()
}

fn cells_csv(spec: &GridSpec, trace: &[TraceRecord]) -> String {
    let winners = cell_winners(trace);
    let on_path = visited(trace);
    let mut s = String::from("row,col,cell,kind,on_path,step,winner\n");
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let (step, winner) = match winners.get(&(r, c)) {
                Some((step, w)) => (step.to_string(), w.to_string()),
                None => (String::new(), String::new()),
            };
            s += &format!(
                "{r},{c},{},{},{},{step},{winner}\n",
                cell_name((r, c)),
                cell_kind(spec, (r, c)),
                on_path.contains(&(r, c))
            );
        }
    }
    s
}

/// Cells laid out on a grid (for `neato -n`), colored by role and by the
/// winner of the auction held there.
fn grid_dot(spec: &GridSpec, trace: &[TraceRecord]) -> String {
    let winners = cell_winners(trace);
    let on_path = visited(trace);
    let mut s = String::from("graph grid {\n  node [shape=square, style=filled, fixedsize=true, width=0.6];\n");
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let fill = match (cell_kind(spec, (r, c)), winners.get(&(r, c))) {
                ("obstacle", _) => "gray30",
                (_, Some((_, 1))) => "lightblue",
                (_, Some((_, _))) => "lightpink",
                ("target_both", _) => "plum",
                ("target_1", _) => "lightskyblue",
                ("target_2", _) => "pink",
                _ => "white",
            };
            let pen = if on_path.contains(&(r, c)) { 3 } else { 1 };
            s += &format!(
                "  \"{}\" [pos=\"{},{}\", fillcolor={fill}, penwidth={pen}];\n",
                cell_name((r, c)),
                c * 50,
                (spec.rows - 1 - r) * 50
            );
        }
    }
    s += "}\n";
    s
}
