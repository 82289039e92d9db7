//! Built-in benchmark instances and the parameterized families used for
//! bias-size and scalability sweeps.

mod puzzle;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Constraint, Instance, ModelError, Relation, RelationKind, Value, Var, Vocabulary};

pub use puzzle::{GtSudokuFile, Puzzle};

#[derive(Debug, thiserror::Error)]
pub enum BenchmarkError {
    #[error("unknown benchmark `{0}` (known: {known})", known = NAMES.join(", "))]
    UnknownBenchmark(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("bad benchmark data: {0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub const NAMES: &[&str] = &[
    "sudoku", "sudoku4", "gtsudoku", "latin", "zebra", "murder", "purdey", "allergy", "golomb", "examtt", "rlfap",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    /// Family size: order for Latin, courses for Exam TT, variables for
    /// RLFAP, marks for Golomb. Ignored by the fixed puzzles.
    pub size: Option<usize>,
    /// Seed for generated families (RLFAP).
    pub seed: u64,
    /// How many groups of [`extended_language`] to add to the bias.
    pub extra_relations: usize,
}

/// Builds a benchmark by name.
pub fn build(name: &str, params: &Params) -> Result<Instance, BenchmarkError> {
    let fixed = |inst: Result<Instance, BenchmarkError>| -> Result<Instance, BenchmarkError> {
        if params.size.is_some() {
            return Err(BenchmarkError::InvalidParams(format!("{name} has no size parameter")));
        }
        inst
    };
    let inst = match name {
        "sudoku" => fixed(sudoku()),
        "sudoku4" => fixed(sudoku4()),
        "gtsudoku" => fixed(gtsudoku()),
        "zebra" => fixed(zebra()),
        "murder" => fixed(murder()),
        "purdey" => fixed(purdey()),
        "allergy" => fixed(allergy()),
        "latin" => latin(params.size.unwrap_or(10)),
        "golomb" => golomb(params.size.unwrap_or(12)),
        "examtt" => exam_tt(params.size.unwrap_or(24)),
        "rlfap" => rlfap(params.size.unwrap_or(50), params.seed),
        other => Err(BenchmarkError::UnknownBenchmark(other.to_string())),
    }?;
    if params.extra_relations == 0 {
        return Ok(inst);
    }
    widen(inst, params.extra_relations)
}

/// `{=, ≠, >, <}`.
pub fn basic_language() -> Vec<Relation> {
    [RelationKind::Eq, RelationKind::Neq, RelationKind::Gt, RelationKind::Lt].map(Relation::plain).to_vec()
}

/// Distance thresholds used by the parameterized relations of the sweep language.
pub const SWEEP_Y: [Value; 5] = [0, 1, 2, 3, 4];

/// Relation groups added one at a time when growing a bias.
pub fn extended_language() -> Vec<Vec<Relation>> {
    let plain = |k| vec![Relation::plain(k)];
    let with_y = |k| SWEEP_Y.iter().map(|&y| Relation::with_param(k, y)).collect::<Vec<_>>();
    vec![
        plain(RelationKind::Eq),
        plain(RelationKind::Neq),
        plain(RelationKind::Gt),
        plain(RelationKind::Lt),
        vec![Relation::plain(RelationKind::Geq), Relation::plain(RelationKind::Leq)],
        plain(RelationKind::DiffEq1),
        plain(RelationKind::AbsDiffEq1),
        with_y(RelationKind::AbsDiffGtY),
        with_y(RelationKind::AbsDiffEqY),
        with_y(RelationKind::FloorDistGtY),
    ]
}

/// Adds the first `k` groups of [`extended_language`] that are not already
/// in the instance language, and rebuilds the bias.
fn widen(inst: Instance, k: usize) -> Result<Instance, BenchmarkError> {
    let mut language = inst.language.clone();
    let mut added = 0;
    for group in extended_language() {
        if added == k {
            break;
        }
        let fresh: Vec<Relation> = group.into_iter().filter(|r| !language.contains(r)).collect();
        if fresh.is_empty() {
            continue;
        }
        language.extend(fresh);
        added += 1;
    }
    if added < k {
        return Err(BenchmarkError::InvalidParams(format!("only {added} relation groups can be added")));
    }
    Ok(Instance::new(inst.name, inst.vocab, language, inst.target, None)?)
}

fn neq(a: Var, b: Var) -> Constraint {
    Constraint::binary(RelationKind::Neq, a, b)
}

fn clique(vars: &[Var], out: &mut Vec<Constraint>) {
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            out.push(neq(a, b));
        }
    }
}

/// `≠` on every pair sharing a row, column or box of a `side × side` grid
/// with `box_h × box_w` boxes.
fn grid_alldiff(side: usize, box_h: usize, box_w: usize) -> Vec<Constraint> {
    let mut pairs = std::collections::BTreeSet::new();
    let cell = |r: usize, c: usize| r * side + c;
    for a in 0..side * side {
        for b in a + 1..side * side {
            let (ra, ca, rb, cb) = (a / side, a % side, b / side, b % side);
            let same_box = box_h > 0 && ra / box_h == rb / box_h && ca / box_w == cb / box_w;
            if ra == rb || ca == cb || same_box {
                pairs.insert((cell(ra, ca), cell(rb, cb)));
            }
        }
    }
    pairs.into_iter().map(|(a, b)| neq(a, b)).collect()
}

pub fn sudoku() -> Result<Instance, BenchmarkError> {
    let vocab = Vocabulary::uniform(81, 1, 9)?;
    Ok(Instance::new("sudoku", vocab, basic_language(), Some(grid_alldiff(9, 3, 3)), None)?)
}

/// 4×4 Sudoku with 2×2 boxes.
pub fn sudoku4() -> Result<Instance, BenchmarkError> {
    let vocab = Vocabulary::uniform(16, 1, 4)?;
    Ok(Instance::new("sudoku4", vocab, basic_language(), Some(grid_alldiff(4, 2, 2)), None)?)
}

/// Sudoku where the shipped greater-than edges replace `≠` on their pairs.
pub fn gtsudoku() -> Result<Instance, BenchmarkError> {
    let file: GtSudokuFile = serde_json::from_str(include_str!("../../data/gtsudoku.json"))
        .map_err(|e| BenchmarkError::Data(e.to_string()))?;
    gtsudoku_from_edges(&file.edges)
}

/// Greater-than Sudoku from `(a, b)` edges meaning `x_a > x_b`.
pub fn gtsudoku_from_edges(edges: &[(Var, Var)]) -> Result<Instance, BenchmarkError> {
    let mut target = grid_alldiff(9, 3, 3);
    for &(a, b) in edges {
        if a >= 81 || b >= 81 {
            return Err(BenchmarkError::Data(format!("edge ({a}, {b}) leaves the grid")));
        }
        let pos = target
            .iter()
            .position(|c| *c == neq(a, b))
            .ok_or_else(|| BenchmarkError::Data(format!("edge ({a}, {b}) joins unrelated cells")))?;
        target[pos] = Constraint::binary(RelationKind::Gt, a, b);
    }
    let vocab = Vocabulary::uniform(81, 1, 9)?;
    Ok(Instance::new("gtsudoku", vocab, basic_language(), Some(target), None)?)
}

pub fn latin(n: usize) -> Result<Instance, BenchmarkError> {
    if n < 2 {
        return Err(BenchmarkError::InvalidParams("latin needs n >= 2".into()));
    }
    let vocab = Vocabulary::uniform(n * n, 1, n as Value)?;
    Ok(Instance::new(format!("latin{n}"), vocab, basic_language(), Some(grid_alldiff(n, 0, 0)), None)?)
}

pub fn zebra() -> Result<Instance, BenchmarkError> {
    let language = [
        RelationKind::Eq,
        RelationKind::Neq,
        RelationKind::Gt,
        RelationKind::Lt,
        RelationKind::DiffEq1,
        RelationKind::AbsDiffEq1,
    ]
    .map(Relation::plain)
    .to_vec();
    Puzzle::parse(include_str!("../../data/zebra.json"))?.instance(language)
}

pub fn murder() -> Result<Instance, BenchmarkError> {
    Puzzle::parse(include_str!("../../data/murder.json"))?.instance(basic_language())
}

pub fn purdey() -> Result<Instance, BenchmarkError> {
    Puzzle::parse(include_str!("../../data/purdey.json"))?.instance(basic_language())
}

pub fn allergy() -> Result<Instance, BenchmarkError> {
    Puzzle::parse(include_str!("../../data/allergy.json"))?.instance(basic_language())
}

/// Largest mark position for a Golomb instance with `marks` marks.
pub fn golomb_length(marks: usize) -> Value {
    (marks * marks) as Value
}

/// Simplified Golomb ruler: `|x_a - x_b| ≠ |x_c - x_d|` for every
/// `a < b < c < d`, over marks `0..=golomb_length(marks)`.
pub fn golomb(marks: usize) -> Result<Instance, BenchmarkError> {
    if marks < 4 {
        return Err(BenchmarkError::InvalidParams("golomb needs at least 4 marks".into()));
    }
    let vocab = Vocabulary::uniform(marks, 0, golomb_length(marks))?;
    let pair_neq = Relation::plain(RelationKind::AbsDiffPairNeq);
    let mut target = Vec::new();
    for a in 0..marks {
        for b in a + 1..marks {
            for c in b + 1..marks {
                for d in c + 1..marks {
                    target.push(Constraint::new(pair_neq, &[a, b, c, d])?);
                }
            }
        }
    }
    let mut language = basic_language();
    language.push(Relation::plain(RelationKind::AbsDiffPairEq));
    language.push(pair_neq);
    Ok(Instance::new(format!("golomb{marks}"), vocab, language, Some(target), None)?)
}

/// Thresholds of the floor-distance relations in the Exam TT language.
pub const EXAM_Y: [Value; 5] = [0, 1, 2, 3, 4];

/// Exam timetabling: one slot per course, three slots a day, no two
/// courses in one slot and no two courses of a semester on one day.
/// Semesters are runs of three consecutive courses.
pub fn exam_tt(courses: usize) -> Result<Instance, BenchmarkError> {
    if courses < 2 {
        return Err(BenchmarkError::InvalidParams("examtt needs at least 2 courses".into()));
    }
    let days = courses.div_ceil(3) + 2;
    let vocab = Vocabulary::uniform(courses, 0, (3 * days - 1) as Value)?;
    let same_day = Relation::with_param(RelationKind::FloorDistGtY, 0);
    let mut target = Vec::new();
    for a in 0..courses {
        for b in a + 1..courses {
            if a / 3 == b / 3 {
                target.push(Constraint::new(same_day, &[a, b])?);
            } else {
                target.push(neq(a, b));
            }
        }
    }
    let mut language = basic_language();
    language.extend(EXAM_Y.iter().map(|&y| Relation::with_param(RelationKind::FloorDistGtY, y)));
    Ok(Instance::new(format!("examtt{courses}"), vocab, language, Some(target), None)?)
}

/// Distance thresholds of the RLFAP language.
pub const RLFAP_Y: [Value; 5] = [1, 2, 4, 8, 16];

/// Number of frequencies per link.
pub const RLFAP_DOMAIN: Value = 40;

/// Target size of an RLFAP instance with `vars` links.
pub fn rlfap_target_size(vars: usize) -> usize {
    match vars {
        40 => 52,
        45 => 88,
        50 => 125,
        55 => 148,
        60 => 170,
        n => n * 5 / 2,
    }
}

/// Seeded frequency-assignment instance: distance constraints between
/// random pairs of links, all satisfied by a hidden assignment.
pub fn rlfap(vars: usize, seed: u64) -> Result<Instance, BenchmarkError> {
    if vars < 2 {
        return Err(BenchmarkError::InvalidParams("rlfap needs at least 2 variables".into()));
    }
    let want = rlfap_target_size(vars);
    let all_pairs = vars * (vars - 1) / 2;
    if want > all_pairs {
        return Err(BenchmarkError::InvalidParams(format!("{vars} variables cannot carry {want} constraints")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = Vocabulary::uniform(vars, 1, RLFAP_DOMAIN)?;
    let mut language = Vec::new();
    for kind in [RelationKind::AbsDiffGtY, RelationKind::AbsDiffEqY] {
        language.extend(RLFAP_Y.iter().map(|&y| Relation::with_param(kind, y)));
    }
    // redraw the hidden assignment until enough pairs admit a constraint
    loop {
        let hidden: Vec<Value> = (0..vars).map(|_| rng.gen_range(1..=RLFAP_DOMAIN)).collect();
        let mut pairs: Vec<(Var, Var)> = (0..vars).flat_map(|a| (a + 1..vars).map(move |b| (a, b))).collect();
        pairs.shuffle(&mut rng);
        let mut target = Vec::with_capacity(want);
        for (a, b) in pairs {
            if target.len() == want {
                break;
            }
            let d = (hidden[a] - hidden[b]).abs();
            let exact: Vec<Value> = RLFAP_Y.iter().copied().filter(|&y| y == d).collect();
            let above: Vec<Value> = RLFAP_Y.iter().copied().filter(|&y| y < d).collect();
            let rel = match (exact.first(), above.is_empty()) {
                (Some(&y), true) => Relation::with_param(RelationKind::AbsDiffEqY, y),
                (Some(&y), false) if rng.gen_bool(0.5) => Relation::with_param(RelationKind::AbsDiffEqY, y),
                (_, false) => Relation::with_param(RelationKind::AbsDiffGtY, *above.choose(&mut rng).expect("non-empty")),
                (None, true) => continue,
            };
            target.push(Constraint::new(rel, &[a, b])?);
        }
        if target.len() == want {
            return Ok(Instance::new(format!("rlfap{vars}"), vocab, language, Some(target), None)?);
        }
    }
}
