//! Command implementations behind the `nashpoly` binary. Each command returns
//! a [`RunReport`] holding the text report, a JSON document and an exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nashpoly::bounds::{facet_stable_set_bound, greedy_clique_cover, clique_bound, stable_set_bound, BoundResult};
use nashpoly::census::{census, check_t49, diff_golden, parse_golden, Census, CensusRow};
use nashpoly::equilibrium::{enumerate_equilibria, lemke_howson, report_line, verify_parity};
use nashpoly::oracle::{support_enumeration, support_enumeration_strict};
use nashpoly::verify::verify_game;
use nashpoly::{BimatrixGame, Error, Graph};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub exit_code: i32,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Degenerate(_) | Error::DegenerateSupport(_) => EXIT_DEGENERATE,
        Error::Contract(_) => EXIT_VERIFY,
        _ => EXIT_PARSE,
    }
}

/// Turns an error into a report carrying the message and its exit code.
pub fn error_report(command: &str, digest: String, e: &Error) -> RunReport {
    let kind = match exit_code(e) {
        EXIT_DEGENERATE => "degenerate",
        EXIT_VERIFY => "verification",
        _ => "input",
    };
    RunReport {
        command: command.into(),
        inputs_digest: digest,
        results: json!({ "error": kind, "message": e.to_string() }),
        text: format!("error: {e}\n"),
        exit_code: exit_code(e),
        elapsed_ms: 0,
    }
}

/// SHA-256 over the arguments and the bytes of each input, in order.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        InputDigest(h)
    }

    pub fn arg(&mut self, a: impl std::fmt::Display) -> &mut Self {
        self.0.update(b"\0");
        self.0.update(a.to_string().as_bytes());
        self
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.0.update(b"\x01");
        self.0.update((b.len() as u64).to_le_bytes());
        self.0.update(b);
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn run(command: &str, digest: InputDigest, body: impl FnOnce() -> Result<(String, Value, i32), Error>) -> RunReport {
    let t = Instant::now();
    let inputs_digest = digest.finish();
    let mut r = match body() {
        Ok((text, results, exit_code)) => {
            RunReport { command: command.into(), inputs_digest, results, text, exit_code, elapsed_ms: 0 }
        }
        Err(e) => error_report(command, inputs_digest, &e),
    };
    r.elapsed_ms = t.elapsed().as_millis();
    r
}

fn load_game(path: &Path, digest: &mut InputDigest) -> Result<(String, BimatrixGame), Error> {
    let text = read(path)?;
    digest.bytes(text.as_bytes());
    let game = BimatrixGame::parse(&text)?;
    Ok((text, game))
}

/// Enumerates all equilibria of the (positivized) game.
pub fn cmd_enumerate_game(game: &BimatrixGame) -> Result<(String, Value, i32), Error> {
    let shifted = game.positivize();
    let pair = shifted.best_response_pair()?;
    let eqs = enumerate_equilibria(&pair)?;
    let parity = verify_parity(&eqs);
    let nash = eqs.iter().filter(|e| !e.artificial).count();
    let mut text = String::new();
    if &shifted != game {
        text.push_str("# payoffs shifted to be positive\n");
    }
    text.push_str("# index x y labels(x) labels(y) mixed(x) mixed(y)\n");
    let mut lines = Vec::new();
    for e in &eqs {
        let line = report_line(&pair, e);
        let _ = writeln!(text, "{line}");
        lines.push(line);
    }
    let _ = writeln!(
        text,
        "{} equilibria, {} Nash, index split {}/{}",
        eqs.len(),
        nash,
        parity.positive,
        parity.negative
    );
    let _ = writeln!(text, "parity: {}", if parity.passes { "pass" } else { "FAIL" });
    let results = json!({
        "m": game.m(),
        "n": game.n(),
        "equilibria": eqs.len(),
        "nash": nash,
        "index_positive": parity.positive,
        "index_negative": parity.negative,
        "parity": parity,
        "lines": lines,
    });
    Ok((text, results, if parity.passes { EXIT_OK } else { EXIT_VERIFY }))
}

pub fn cmd_enumerate(path: &Path) -> RunReport {
    let mut digest = InputDigest::new("enumerate");
    let loaded = load_game(path, &mut digest);
    run("enumerate", digest, || cmd_enumerate_game(&loaded?.1))
}

pub fn cmd_lh(path: &Path, missing: usize, start: usize) -> RunReport {
    let mut digest = InputDigest::new("lh");
    digest.arg(missing).arg(start);
    let loaded = load_game(path, &mut digest);
    run("lh", digest, || {
        let game = loaded?.1.positivize();
        let pair = game.best_response_pair()?;
        let eqs = enumerate_equilibria(&pair)?;
        let from = eqs
            .get(start)
            .ok_or_else(|| Error::Invalid(format!("start {start} outside 0..{}", eqs.len())))?;
        let path = lemke_howson(&pair, from, missing)?;
        let end_ordinal = eqs.iter().position(|e| *e == path.end);
        let mut text = format!("# missing label {missing}, start equilibrium {start}\n");
        for (k, &(x, y)) in path.steps.iter().enumerate() {
            let xv = &pair.p().vertices[x];
            let yv = &pair.q().vertices[y];
            let _ = writeln!(text, "{k} x={} y={}", xv.display_coords(), yv.display_coords());
        }
        let _ = writeln!(
            text,
            "start index {:+}, end equilibrium {} index {:+}, {} steps",
            path.start.index,
            end_ordinal.map_or("?".into(), |o| o.to_string()),
            path.end.index,
            path.steps.len() - 1
        );
        let ok = path.start.index != path.end.index && end_ordinal.is_some();
        let results = json!({
            "missing": missing,
            "start": start,
            "end": end_ordinal,
            "start_index": path.start.index,
            "end_index": path.end.index,
            "steps": path.steps.len() - 1,
            "opposite_index": ok,
        });
        Ok((text, results, if ok { EXIT_OK } else { EXIT_VERIFY }))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

fn bound_text(label: &str, r: &BoundResult) -> String {
    let fmt = |s: &[usize]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut t = format!("{label}V={} b={} obstructions={}", r.vertex_count, r.bound, r.obstructions());
    if let Some(c) = r.clique_bound {
        let _ = write!(t, " clique_bound={c}");
    }
    let _ = write!(t, "\nS1: {}\nS2: {}\n", fmt(&r.first), fmt(&r.second));
    t
}

fn with_clique_bound(g: &Graph, mut r: BoundResult) -> Result<BoundResult, Error> {
    r.clique_bound = Some(clique_bound(g, &greedy_clique_cover(g)?)?);
    Ok(r)
}

/// Bound of a graph file, or of a polytope graph (optionally one facet) of a game.
pub fn cmd_bound(path: &Path, side: Option<Side>, facet: Option<usize>) -> RunReport {
    let mut digest = InputDigest::new("bound");
    digest.arg(format!("{side:?}")).arg(format!("{facet:?}"));
    let text = read(path);
    if let Ok(t) = &text {
        digest.bytes(t.as_bytes());
    }
    run("bound", digest, || {
        let text = text?;
        let (g, facet_vertices, label) = match side {
            None => {
                if facet.is_some() {
                    return Err(Error::Invalid("--facet needs --polytope".into()));
                }
                (Graph::parse(&text)?, None, String::new())
            }
            Some(side) => {
                let game = BimatrixGame::parse(&text)?.positivize();
                let pair = game.best_response_pair()?;
                let d = pair.m() + pair.n();
                let (vs, name) = match side {
                    Side::P => (pair.p(), "P"),
                    Side::Q => (pair.q(), "Q"),
                };
                let fv = match facet {
                    None => None,
                    Some(l) if l == 0 || l > d => {
                        return Err(Error::Invalid(format!("unknown facet label {l}, expected 1..={d}")))
                    }
                    Some(l) => {
                        let ineq = if side == Side::P { pair.p_inequality(l) } else { pair.q_inequality(l) };
                        let fv = vs.facet_vertex_set(ineq);
                        if fv.is_empty() {
                            return Err(Error::Invalid(format!("label {l} is not a facet of {name}")));
                        }
                        Some(fv)
                    }
                };
                let label = match facet {
                    Some(l) => format!("{name} facet {l}: "),
                    None => format!("{name}: "),
                };
                (vs.graph.clone(), fv, label)
            }
        };
        let r = match &facet_vertices {
            Some(fv) => facet_stable_set_bound(&g, fv)?,
            None => with_clique_bound(&g, stable_set_bound(&g)?)?,
        };
        let ok = r.witness_valid(&g);
        Ok((bound_text(&label, &r), serde_json::to_value(&r).expect("serializes"), if ok { EXIT_OK } else { EXIT_VERIFY }))
    })
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
}

fn census_row_text(r: &CensusRow) -> String {
    let cubes: Vec<String> = r.facets.iter().filter(|f| f.is_cube).map(|f| f.facet.to_string()).collect();
    format!(
        "{} V={} b={} obstructions={} dual_neighborly={} cube_facets=[{}]",
        r.id,
        r.vertex_count,
        r.bound,
        r.obstructions,
        if r.dual_neighborly { "yes" } else { "no" },
        cubes.join(",")
    )
}

/// Census over one or more files, with optional golden diff and the
/// four checks for simple 4-polytopes with 9 facets.
pub fn cmd_census(paths: &[PathBuf], golden: Option<&Path>, check: bool, jobs: Option<usize>) -> RunReport {
    let mut digest = InputDigest::new("census");
    digest.arg(check);
    let texts: Vec<Result<String, Error>> = paths.iter().map(|p| read(p)).collect();
    for t in texts.iter().flatten() {
        digest.bytes(t.as_bytes());
    }
    let golden_text = golden.map(read);
    if let Some(Ok(t)) = &golden_text {
        digest.bytes(t.as_bytes());
    }
    run("census", digest, || {
        let pool = pool(jobs)?;
        let mut polytopes = Vec::new();
        for (p, t) in paths.iter().zip(texts) {
            let c = Census::parse(&t?).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            polytopes.extend(c.polytopes);
        }
        let rows = pool.install(|| census(&polytopes))?;
        let mut text = String::new();
        for r in &rows {
            let _ = writeln!(text, "{}", census_row_text(r));
        }
        let mut code = EXIT_OK;
        let mut results = json!({ "rows": rows });
        if let Some(g) = golden_text {
            let table = parse_golden(&g?)?;
            let diff = diff_golden(&rows, &table);
            for r in diff.rows.iter().filter(|r| r.golden.is_none()) {
                let _ = writeln!(text, "unmatched: {} ({},{})", r.id, r.vertex_count, r.bound);
            }
            for g in &diff.unmatched_golden {
                let _ = writeln!(text, "missing: {}({},{})", g.id.as_deref().map(|i| format!("{i}:")).unwrap_or_default(), g.vertex_count, g.bound);
            }
            let _ = writeln!(text, "{}/{} match", diff.matched, diff.expected);
            if !diff.all_match() {
                code = EXIT_VERIFY;
            }
            results["golden"] = serde_json::to_value(&diff).expect("serializes");
        }
        if check {
            let rep = check_t49(&rows);
            let verdict: String = ['a', 'b', 'c', 'd']
                .iter()
                .map(|&c| format!("({c}) {}", if rep.passes(c) { "pass" } else { "FAIL" }))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(text, "{verdict}, {} types at b=20, max V={}", rep.bound_20, rep.max_vertices);
            if !rep.all_pass() {
                code = EXIT_VERIFY;
            }
            results["t49"] = serde_json::to_value(&rep).expect("serializes");
        }
        Ok((text, results, code))
    })
}

#[derive(Clone, Copy, Debug)]
pub enum GenSpec {
    Coordination(usize),
    Random { m: usize, n: usize, seed: u64 },
}

pub fn generate(spec: GenSpec) -> Result<BimatrixGame, Error> {
    match spec {
        GenSpec::Coordination(n) => BimatrixGame::coordination(n),
        GenSpec::Random { m, n, seed } => BimatrixGame::random_nondegenerate(m, n, seed),
    }
}

pub fn cmd_gen(spec: GenSpec) -> RunReport {
    let mut digest = InputDigest::new("gen");
    digest.arg(format!("{spec:?}"));
    run("gen", digest, || {
        let g = generate(spec)?;
        let text = g.to_text();
        Ok((text.clone(), json!({ "game": text }), EXIT_OK))
    })
}

pub fn cmd_oracle(path: &Path, strict: bool) -> RunReport {
    let mut digest = InputDigest::new("oracle");
    digest.arg(strict);
    let loaded = load_game(path, &mut digest);
    run("oracle", digest, || {
        let game = loaded?.1;
        let profiles = if strict { support_enumeration_strict(&game)? } else { support_enumeration(&game)? };
        let mut text = String::from("# x y u v\n");
        let join = |v: &[nashpoly::Scalar]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        for p in &profiles {
            let _ = writeln!(text, "{} {} {} {}", join(&p.x), join(&p.y), p.u, p.v);
        }
        let _ = writeln!(text, "{} Nash", profiles.len());
        Ok((text, json!({ "nash": profiles.len(), "profiles": profiles }), EXIT_OK))
    })
}

/// A game to verify: a file or a generated instance.
#[derive(Clone, Debug)]
pub enum GameSource {
    File(PathBuf),
    Generated(GenSpec),
}

impl GameSource {
    fn name(&self) -> String {
        match self {
            GameSource::File(p) => p.display().to_string(),
            GameSource::Generated(GenSpec::Coordination(n)) => format!("coordination({n})"),
            GameSource::Generated(GenSpec::Random { m, n, seed }) => format!("random({m}x{n},seed={seed})"),
        }
    }
}

/// Full invariant suite over each game, in parallel, reported in input order.
pub fn cmd_verify(sources: &[GameSource], jobs: Option<usize>) -> RunReport {
    let mut digest = InputDigest::new("verify");
    let loaded: Vec<Result<BimatrixGame, Error>> = sources
        .iter()
        .map(|s| match s {
            GameSource::File(p) => {
                let t = read(p)?;
                Ok((t.clone(), BimatrixGame::parse(&t)?))
            }
            GameSource::Generated(spec) => generate(*spec).map(|g| (g.to_text(), g)),
        })
        .map(|r| {
            r.map(|(t, g)| {
                digest.bytes(t.as_bytes());
                g
            })
        })
        .collect();
    run("verify", digest, || {
        let games: Vec<BimatrixGame> = loaded.into_iter().collect::<Result<_, _>>()?;
        let pool = pool(jobs)?;
        let outcomes: Vec<_> = pool.install(|| games.par_iter().map(verify_game).collect::<Vec<_>>());
        let mut text = String::new();
        let mut all_pass = true;
        let mut items = Vec::new();
        let mut max_nash = 0;
        for (src, out) in sources.iter().zip(outcomes) {
            let v = out?;
            let pass = v.passes();
            all_pass &= pass;
            max_nash = max_nash.max(v.nash);
            let _ = writeln!(
                text,
                "{}: {} equilibria, {} Nash (oracle {}), index split {}/{}, P b={} Q b={}, lh paths={}, facets={}: {}",
                src.name(),
                v.equilibria,
                v.nash,
                v.oracle_nash,
                v.parity.positive,
                v.parity.negative,
                v.p_bound,
                v.q_bound,
                v.lh_paths,
                v.facet_checks,
                if pass { "pass" } else { "FAIL" }
            );
            items.push(json!({ "game": src.name(), "pass": pass, "report": v }));
        }
        let _ = writeln!(
            text,
            "{} games, max {} Nash: {}",
            items.len(),
            max_nash,
            if all_pass { "all pass" } else { "FAIL" }
        );
        let results = json!({ "games": items, "all_pass": all_pass, "max_nash": max_nash });
        Ok((text, results, if all_pass { EXIT_OK } else { EXIT_VERIFY }))
    })
}
