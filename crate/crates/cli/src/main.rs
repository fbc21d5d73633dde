use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ghom::correspondence::{from_action, from_homomorphism, homology_maps, EtaleCorrespondence};
use ghom::gmodule::GModule;
use ghom::groupoid::{FiniteGroupoid, Functor, GSet};
use ghom::homology::{homology, homology_with};
use ghom::intalg::{FGAbelianGroup, IntMatrix, SubquotientMap};
use ghom::invsemi::{chain_iso_check, omega_s, FiniteInverseSemigroup};
use ghom::schema::{self, CorrespondenceData, FunctorData, GSetData, ModuleData, SemigroupData};
use ghom::verify::{replay, run_suite, Suite, VerifyOptions};
use ghom::Error;

#[derive(Parser)]
#[command(name = "ghom", version, about = "Homology of finite groupoids and maps induced by etale correspondences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print H_0 .. H_N of a groupoid.
    Homology(HomologyArgs),
    /// Print the maps on homology induced by a correspondence.
    InducedMap(InducedMapArgs),
    /// Run randomized verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct HomologyArgs {
    /// Groupoid JSON file.
    groupoid: PathBuf,
    /// Module JSON file; trivial coefficients when absent.
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct InducedMapArgs {
    /// Correspondence JSON file.
    #[arg(conflicts_with_all = ["from_homomorphism", "from_action", "omega_s"])]
    correspondence: Option<PathBuf>,
    /// Groupoid files referenced by name, as NAME=PATH or PATH (name is the file stem).
    #[arg(long = "groupoid", value_name = "NAME=PATH")]
    groupoids: Vec<String>,
    /// Functor JSON file.
    #[arg(long, conflicts_with_all = ["from_action", "omega_s"])]
    from_homomorphism: Option<PathBuf>,
    /// G-set JSON file.
    #[arg(long, conflicts_with = "omega_s")]
    from_action: Option<PathBuf>,
    /// Inverse semigroup JSON file.
    #[arg(long)]
    omega_s: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    min_degree: usize,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 24)]
    size_bound: usize,
    /// Overrides the number of cases per suite.
    #[arg(long)]
    cases: Option<usize>,
    /// Directory for counterexample files; printed to stdout otherwise.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    /// Recheck a dumped counterexample instead of running suites.
    #[arg(long, conflicts_with_all = ["suite", "seed", "size_bound", "cases"])]
    replay: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_face_sign_bug: bool,
}

/// Failures carry the exit code they map to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::Invalid(_) | Error::Unresolved(_) | Error::GroupoidMismatch(_) => 1,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    schema::from_str(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    Ok(FiniteGroupoid::from_data(&read(path)?)?)
}

/// Groupoids loaded from files, by name.
struct Workspace {
    groupoids: BTreeMap<String, FiniteGroupoid>,
}

impl Workspace {
    fn load(specs: &[String]) -> Result<Self, Failure> {
        let mut groupoids = BTreeMap::new();
        for spec in specs {
            let (name, path) = match spec.split_once('=') {
                Some((n, p)) => (n.to_string(), PathBuf::from(p)),
                None => (stem(Path::new(spec)), PathBuf::from(spec)),
            };
            let g = load_groupoid(&path)?;
            if groupoids.insert(name.clone(), g).is_some() {
                return Err(validation(format!("groupoid name {name:?} given twice")));
            }
        }
        Ok(Workspace { groupoids })
    }

    fn get(&self, name: &str) -> Result<&FiniteGroupoid, Failure> {
        self.groupoids
            .get(name)
            .ok_or_else(|| Failure::from(Error::Unresolved(format!("groupoid {name:?} (pass --groupoid {name}=PATH)"))))
    }
}

fn group_json(n: usize, a: &FGAbelianGroup) -> Value {
    json!({
        "degree": n,
        "group": a.to_string(),
        "free_rank": a.free_rank,
        "torsion": a.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_homology(args: &HomologyArgs) -> Outcome {
    let g = load_groupoid(&args.groupoid)?;
    let groups = match &args.coefficients {
        None => homology(&g, args.max_degree)?,
        Some(path) => {
            let data: ModuleData = read(path)?;
            let name = stem(&args.groupoid);
            if data.groupoid != name {
                return Err(Error::Unresolved(format!(
                    "module refers to groupoid {:?}, but the groupoid file is {name:?}",
                    data.groupoid
                ))
                .into());
            }
            let m = GModule::from_data(&g, &data)?;
            homology_with(&g, &m, args.max_degree)?
        }
    };
    let out = match args.format {
        Format::Table => groups.iter().enumerate().fold(String::new(), |mut s, (n, a)| {
            let _ = writeln!(s, "H{n}: {a}");
            s
        }),
        Format::Json => {
            let v = json!({ "homology": groups.iter().enumerate().map(|(n, a)| group_json(n, a)).collect::<Vec<_>>() });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    Ok((out, 0))
}

fn rows(m: &IntMatrix) -> Vec<Vec<String>> {
    let mut r = vec![vec!["0".to_string(); m.cols()]; m.rows()];
    for (i, j, v) in m.entries() {
        r[i][j] = v.to_string();
    }
    r
}

fn entry_json(s: &str) -> Value {
    s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s))
}

fn render_maps(maps: &[(usize, SubquotientMap)], notes: &[(usize, String)], format: Format) -> String {
    match format {
        Format::Table => {
            let mut s = String::new();
            for (n, f) in maps {
                let _ = writeln!(s, "H{n}: {} -> {}", f.source.presentation, f.target.presentation);
                for row in rows(&f.matrix) {
                    let _ = writeln!(s, "  [{}]", row.join(" "));
                }
                if let Some((_, note)) = notes.iter().find(|(d, _)| d == n) {
                    let _ = writeln!(s, "  {note}");
                }
            }
            s
        }
        Format::Json => {
            let v: Vec<Value> = maps
                .iter()
                .map(|(n, f)| {
                    let mut e = json!({
                        "degree": n,
                        "source": group_json(*n, &f.source.presentation)["group"],
                        "target": group_json(*n, &f.target.presentation)["group"],
                        "source_orders": f.source.orders.iter().map(|o| o.as_ref().map(|d| d.to_string())).collect::<Vec<_>>(),
                        "target_orders": f.target.orders.iter().map(|o| o.as_ref().map(|d| d.to_string())).collect::<Vec<_>>(),
                        "matrix": rows(&f.matrix).iter().map(|r| r.iter().map(|x| entry_json(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    });
                    if let Some((_, note)) = notes.iter().find(|(d, _)| d == n) {
                        e["chain_map"] = Value::from(note.as_str());
                    }
                    e
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({ "maps": v })).expect("json"))
        }
    }
}

fn cmd_induced_map(args: &InducedMapArgs) -> Outcome {
    if args.min_degree > args.max_degree {
        return Err(validation("--min-degree exceeds --max-degree"));
    }
    let ws = Workspace::load(&args.groupoids)?;
    let mut notes = Vec::new();
    let omega: EtaleCorrespondence = if let Some(path) = &args.from_homomorphism {
        let data: FunctorData = read(path)?;
        let (g, h) = (ws.get(&data.source)?, ws.get(&data.target)?);
        let phi = Functor::from_data(g, h, &data)?;
        from_homomorphism(g, h, &phi)?.correspondence
    } else if let Some(path) = &args.from_action {
        let data: GSetData = read(path)?;
        let g = ws.get(&data.groupoid)?;
        let x = GSet::from_data(g, &data)?;
        from_action(g, &x)?.correspondence
    } else if let Some(path) = &args.omega_s {
        let data: SemigroupData = read(path)?;
        let s = FiniteInverseSemigroup::from_data(&data)?;
        let report = chain_iso_check(&s, args.max_degree)?;
        for d in &report.degrees {
            let verdict = if d.unimodular() { "unimodular" } else { "not unimodular" };
            notes.push((d.degree, format!("chain map: {verdict} ({}x{})", d.size, d.size)));
        }
        omega_s(&s)?.composite
    } else if let Some(path) = &args.correspondence {
        let data: CorrespondenceData = read(path)?;
        let (g, h) = (ws.get(&data.source)?, ws.get(&data.target)?);
        EtaleCorrespondence::from_data(g, h, &data)?
    } else {
        return Err(validation(
            "give a correspondence file or one of --from-homomorphism, --from-action, --omega-s",
        ));
    };
    let maps: Vec<(usize, SubquotientMap)> = homology_maps(&omega, args.max_degree)?
        .into_iter()
        .enumerate()
        .skip(args.min_degree)
        .collect();
    Ok((render_maps(&maps, &notes, args.format), 0))
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
        })?;
        return Ok(match replay(&text)? {
            Some(detail) => (format!("replay: fail: {detail}\n"), 1),
            None => ("replay: pass\n".to_string(), 0),
        });
    }
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse().map_err(|_| Failure {
            code: 2,
            message: format!("unknown suite {:?}", args.suite),
        })?]
    };
    let opts = VerifyOptions {
        seed: args.seed,
        size_bound: args.size_bound,
        cases: args.cases,
        face_sign_bug: args.inject_face_sign_bug,
    };
    if let Some(dir) = &args.dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::from(Error::Io(e)))?;
    }
    let mut out = String::new();
    let mut code = 0;
    for suite in suites {
        let report = run_suite(suite, &opts)?;
        if report.passed() {
            let _ = writeln!(out, "{suite}: pass ({} cases)", report.cases);
            continue;
        }
        code = 1;
        let _ = writeln!(out, "{suite}: FAIL ({} of {} cases)", report.failures.len(), report.cases);
        for (i, c) in report.failures.iter().enumerate() {
            let _ = writeln!(out, "  {}", c.detail);
            let dump = serde_json::to_string_pretty(c).expect("counterexample serializes");
            match &args.dump_dir {
                Some(dir) => {
                    let path = dir.join(format!("{suite}-{i}.json"));
                    std::fs::write(&path, dump + "\n").map_err(|e| Failure::from(Error::Io(e)))?;
                    let _ = writeln!(out, "  counterexample: {}", path.display());
                }
                None => {
                    let _ = writeln!(out, "{dump}");
                }
            }
        }
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Homology(a) => cmd_homology(a),
        Command::InducedMap(a) => cmd_induced_map(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
