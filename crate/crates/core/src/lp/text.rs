//! Plain-text LP matrix format.
//!
//! ```text
//! # comments start with '#'
//! vars <n> constraints <m> sense min|max
//! obj <c_0> <c_1> ... <c_{n-1}>
//! <i>: <j>:<a_ij> <j>:<a_ij> ... <=|>=|= <b_i>      (m lines, i = 0..m)
//! bound <j> <lower> <upper>                          (one per variable)
//! ```
//!
//! Numbers are written with the shortest representation that parses back
//! to the same value, so `parse(write(lp)) == lp` bit for bit and
//! re-writing a parsed canonical file reproduces it byte for byte.
//! Infinite upper bounds are written `inf`. Bound lines may be omitted on
//! input, in which case the variable keeps `[0, inf)`.

use std::fmt::Write as _;

use super::{LinearProgram, LpError, Relation, Sense};
use crate::scalar::Scalar;

pub fn write_lp<T: Scalar>(lp: &LinearProgram<T>) -> String {
    let mut out = String::new();
    let sense = match lp.sense() {
        Sense::Minimize => "min",
        Sense::Maximize => "max",
    };
    let _ = writeln!(
        out,
        "vars {} constraints {} sense {}",
        lp.num_vars(),
        lp.num_constraints(),
        sense
    );
    out.push_str("obj");
    for c in lp.objective() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    for (i, c) in lp.constraints().iter().enumerate() {
        let _ = write!(out, "{i}:");
        for (j, a) in &c.coeffs {
            let _ = write!(out, " {j}:{a}");
        }
        let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
    }
    for j in 0..lp.num_vars() {
        let _ = writeln!(
            out,
            "bound {} {} {}",
            j,
            lp.lower_bounds()[j],
            lp.upper_bounds()[j]
        );
    }
    out
}

fn num<T: Scalar>(tok: &str, line: usize) -> Result<T, LpError> {
    tok.parse::<T>().map_err(|_| LpError::Parse {
        line,
        msg: format!("bad number `{tok}`"),
    })
}

fn idx(tok: &str, line: usize) -> Result<usize, LpError> {
    tok.parse::<usize>().map_err(|_| LpError::Parse {
        line,
        msg: format!("bad index `{tok}`"),
    })
}

pub fn parse_lp<T: Scalar>(text: &str) -> Result<LinearProgram<T>, LpError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let perr = |line: usize, msg: &str| LpError::Parse {
        line,
        msg: msg.to_string(),
    };

    let (ln, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 6 || h[0] != "vars" || h[2] != "constraints" || h[4] != "sense" {
        return Err(perr(
            ln,
            "expected `vars <n> constraints <m> sense min|max`",
        ));
    }
    let n = idx(h[1], ln)?;
    let m = idx(h[3], ln)?;
    let sense = match h[5] {
        "min" => Sense::Minimize,
        "max" => Sense::Maximize,
        other => return Err(perr(ln, &format!("unknown sense `{other}`"))),
    };
    let mut lp = LinearProgram::new(n, sense);

    let (ln, obj) = lines
        .next()
        .ok_or_else(|| perr(ln, "missing objective row"))?;
    let mut toks = obj.split_whitespace();
    if toks.next() != Some("obj") {
        return Err(perr(ln, "expected `obj` row"));
    }
    let c: Vec<T> = toks.map(|t| num(t, ln)).collect::<Result<_, _>>()?;
    if c.len() != n {
        return Err(perr(
            ln,
            &format!("objective has {} entries, expected {n}", c.len()),
        ));
    }
    lp.set_objective(c).map_err(|e| perr(ln, &e.to_string()))?;

    for expect in 0..m {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| perr(ln, &format!("missing constraint {expect}")))?;
        let (label, body) = row
            .split_once(':')
            .ok_or_else(|| perr(ln, "expected `<i>: ...`"))?;
        if idx(label.trim(), ln)? != expect {
            return Err(perr(ln, &format!("expected constraint {expect}")));
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(perr(
                ln,
                "constraint needs a relation and a right-hand side",
            ));
        }
        let rel = match toks[toks.len() - 2] {
            "<=" => Relation::Le,
            ">=" => Relation::Ge,
            "=" => Relation::Eq,
            other => return Err(perr(ln, &format!("unknown relation `{other}`"))),
        };
        let rhs = num(toks[toks.len() - 1], ln)?;
        let mut coeffs = Vec::with_capacity(toks.len() - 2);
        for t in &toks[..toks.len() - 2] {
            let (j, a) = t
                .split_once(':')
                .ok_or_else(|| perr(ln, &format!("expected `<j>:<coeff>`, got `{t}`")))?;
            coeffs.push((idx(j, ln)?, num(a, ln)?));
        }
        lp.add_constraint(coeffs, rel, rhs)
            .map_err(|e| perr(ln, &e.to_string()))?;
    }

    for (ln, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 4 || t[0] != "bound" {
            return Err(perr(ln, "expected `bound <j> <lower> <upper>`"));
        }
        let j = idx(t[1], ln)?;
        lp.set_bounds(j, num(t[2], ln)?, num(t[3], ln)?)
            .map_err(|e| perr(ln, &e.to_string()))?;
    }
    Ok(lp)
}
