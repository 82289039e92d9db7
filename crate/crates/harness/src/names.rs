//! Command-line spellings of the acquisition settings.

use acqlab_core::acquisition::{Algorithm, FindScopeVariant};
use acqlab_core::solver::{QGenMode, ValHeuristic, VarHeuristic};

pub fn algorithm(a: Algorithm) -> &'static str {
    match a {
        Algorithm::QuAcq => "quacq",
        Algorithm::MultiAcq => "multiacq",
        Algorithm::MQuAcq => "mquacq",
    }
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    match s.to_ascii_lowercase().as_str() {
        "quacq" => Ok(Algorithm::QuAcq),
        "multiacq" => Ok(Algorithm::MultiAcq),
        "mquacq" => Ok(Algorithm::MQuAcq),
        _ => Err(format!("unknown algorithm `{s}` (quacq, multiacq, mquacq)")),
    }
}

pub fn findscope(f: FindScopeVariant) -> u8 {
    match f {
        FindScopeVariant::V1 => 1,
        FindScopeVariant::V2 => 2,
    }
}

pub fn parse_findscope(s: &str) -> Result<FindScopeVariant, String> {
    match s {
        "1" => Ok(FindScopeVariant::V1),
        "2" => Ok(FindScopeVariant::V2),
        _ => Err(format!("findscope must be 1 or 2, got `{s}`")),
    }
}

pub fn qgen(m: QGenMode) -> &'static str {
    match m {
        QGenMode::MaxComplete => "max",
        QGenMode::MaxBPartial => "maxb",
    }
}

pub fn parse_qgen(s: &str) -> Result<QGenMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "max" => Ok(QGenMode::MaxComplete),
        "maxb" | "max_b" => Ok(QGenMode::MaxBPartial),
        _ => Err(format!("unknown query generator `{s}` (max, maxb)")),
    }
}

pub fn var_heuristic(v: VarHeuristic) -> &'static str {
    match v {
        VarHeuristic::DomWdeg => "domwdeg",
        VarHeuristic::Bdeg => "bdeg",
        VarHeuristic::Dom => "dom",
        VarHeuristic::Lex => "lex",
    }
}

pub fn parse_var_heuristic(s: &str) -> Result<VarHeuristic, String> {
    match s.to_ascii_lowercase().replace(['/', '_', '-'], "").as_str() {
        "domwdeg" => Ok(VarHeuristic::DomWdeg),
        "bdeg" => Ok(VarHeuristic::Bdeg),
        "dom" => Ok(VarHeuristic::Dom),
        "lex" => Ok(VarHeuristic::Lex),
        _ => Err(format!("unknown variable heuristic `{s}` (domwdeg, bdeg, dom, lex)")),
    }
}

pub fn val_heuristic(v: ValHeuristic) -> &'static str {
    match v {
        ValHeuristic::Random => "random",
        ValHeuristic::Lex => "lex",
        ValHeuristic::MaxV => "maxv",
    }
}

pub fn parse_val_heuristic(s: &str) -> Result<ValHeuristic, String> {
    match s.to_ascii_lowercase().replace('_', "").as_str() {
        "random" => Ok(ValHeuristic::Random),
        "lex" => Ok(ValHeuristic::Lex),
        "maxv" => Ok(ValHeuristic::MaxV),
        _ => Err(format!("unknown value heuristic `{s}` (random, lex, maxv)")),
    }
}
