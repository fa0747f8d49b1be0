//! Text specifications: `circle:R`, `sphere:R`, `torus:d:R`, each optionally
//! followed by `:embed:D:seed` (repeatable).

use super::{ChartedManifold, ManifoldKind};
use crate::error::{Error, Result};

impl ChartedManifold {
    pub fn from_spec(text: &str) -> Result<ChartedManifold> {
        let parts: Vec<&str> = text.trim().split(':').map(str::trim).collect();
        let bad = |what: &str| Error::Parse(format!("{what} in manifold spec '{text}'"));
        let float = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(&format!("bad number '{s}'")))
        };
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(&format!("bad integer '{s}'")))
        };
        let (mut m, mut rest) = match parts.as_slice() {
            ["circle", r, rest @ ..] => (ChartedManifold::circle(float(r)?)?, rest),
            ["sphere", r, rest @ ..] => (ChartedManifold::sphere(float(r)?)?, rest),
            ["torus", d, r, rest @ ..] => {
                let d = int(d)?;
                if d > 6 {
                    return Err(bad("torus dimension above 6"));
                }
                (ChartedManifold::flat_torus(d, float(r)?)?, rest)
            }
            _ => {
                return Err(bad(
                    "unknown manifold (expected circle:R, sphere:R or torus:d:R)",
                ))
            }
        };
        while !rest.is_empty() {
            match rest {
                ["embed", dim, seed, tail @ ..] => {
                    let dim = int(dim)?;
                    if dim > 256 {
                        return Err(bad("embedding dimension above 256"));
                    }
                    let seed = seed
                        .parse::<u64>()
                        .map_err(|_| bad(&format!("bad seed '{seed}'")))?;
                    m = m.ambient_embed(dim, seed)?;
                    rest = tail;
                }
                _ => return Err(bad("trailing fields (expected :embed:D:seed)")),
            }
        }
        Ok(m)
    }
}

pub(super) fn format_kind(kind: &ManifoldKind) -> String {
    match kind {
        ManifoldKind::Circle { radius } => format!("circle:{radius}"),
        ManifoldKind::Sphere { radius } => format!("sphere:{radius}"),
        ManifoldKind::FlatTorus { dim, radius } => format!("torus:{dim}:{radius}"),
        ManifoldKind::EmbeddedRotation {
            inner,
            ambient_dim,
            seed,
        } => {
            format!("{}:embed:{ambient_dim}:{seed}", format_kind(inner))
        }
    }
}
