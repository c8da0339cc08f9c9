use std::fs;

use anyhow::{Context, Result};
use forkalg::frame::{cofork, fork, parse_frame, single_point, w_frame};
use forkalg::{cm, ClosureAlgebra, Frame};

/// Loads a builtin (`@fork`, `@w`, `@cofork`, `@point`) or a frame file.
pub fn load_frame(spec: &str, close: bool) -> Result<Frame> {
    if let Some(name) = spec.strip_prefix('@') {
        return match name {
            "fork" | "F" => Ok(fork()),
            "w" | "W" => Ok(w_frame()),
            "cofork" => Ok(cofork()),
            "point" | "two" => Ok(single_point()),
            _ => anyhow::bail!("unknown builtin `{spec}` (try @fork, @w, @cofork, @point)"),
        };
    }
    let text = fs::read_to_string(spec).with_context(|| format!("cannot read {spec}"))?;
    parse_frame(&text, close).with_context(|| spec.to_string())
}

/// The complex algebra of a loaded frame, which must be a quasiorder.
pub fn load_algebra(spec: &str, close: bool) -> Result<(Frame, ClosureAlgebra)> {
    let f = load_frame(spec, close)?;
    let a = cm(&f).with_context(|| format!("{spec} (pass --close to close the relation)"))?;
    Ok((f, a))
}
