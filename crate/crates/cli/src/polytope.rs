use std::fmt::Write as _;

use anyhow::{Context, Result};
use tropfit::Polytope64;

use crate::eval::read_poly;
use crate::report::join;
use crate::PolytopeArgs;

fn section(out: &mut String, title: &str, p: &Polytope64) {
    match p.hull_vertices() {
        Some(v) => {
            writeln!(out, "{title}: {} vertices", v.len()).unwrap();
            for x in v {
                writeln!(out, "  {}", join(x)).unwrap();
            }
        }
        None => {
            let g = p.generators();
            writeln!(out, "{title}: {} generators", g.len()).unwrap();
            writeln!(out, "  notice: hull vertices are computed for n <= 2 only; listing generators").unwrap();
            for x in g {
                writeln!(out, "  {}", join(x)).unwrap();
            }
        }
    }
}

/// Newton polytope of each file; with several files also their join and
/// Minkowski sum, folded left to right.
pub fn run(args: &PolytopeArgs) -> Result<String> {
    let mut polys = Vec::with_capacity(args.polys.len());
    for path in &args.polys {
        let p = read_poly(path)?;
        polys.push(p.newton_polytope().with_context(|| path.display().to_string())?);
    }
    let mut out = String::new();
    for (path, p) in args.polys.iter().zip(&polys) {
        section(&mut out, &format!("newton {}", path.display()), p);
    }
    if polys.len() > 1 {
        let mut join_all = polys[0].clone();
        let mut sum_all = polys[0].clone();
        for p in &polys[1..] {
            join_all = join_all.join(p)?;
            sum_all = sum_all.minkowski_sum(p)?;
        }
        section(&mut out, "join", &join_all);
        section(&mut out, "minkowski_sum", &sum_all);
    }
    Ok(out)
}
