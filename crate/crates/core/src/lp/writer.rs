//! Debug dump of a [`LinearProgram`] in CPLEX LP interchange format.

use std::io::{self, Write};

use super::{Integrality, LinearProgram, Relation};

pub(super) fn write_lp<W: Write>(lp: &LinearProgram, w: &mut W) -> io::Result<()> {
    writeln!(w, "\\ generated by gridplan")?;
    writeln!(w, "Minimize")?;
    write!(w, " obj:")?;
    let mut first = true;
    for j in 0..lp.n_vars() {
        let c = lp.objective_coeff(j);
        if c == 0.0 {
            continue;
        }
        write_term(w, c, &lp.var_name(j), first)?;
        first = false;
    }
    if first {
        write!(w, " 0 {}", lp.var_name(0))?;
    }
    writeln!(w)?;
    writeln!(w, "Subject To")?;
    for r in 0..lp.n_rows() {
        let (terms, rel, rhs) = lp.row(r);
        write!(w, " c{r}:")?;
        let mut first = true;
        for &(j, v) in terms {
            write_term(w, v, &lp.var_name(j), first)?;
            first = false;
        }
        if first {
            write!(w, " 0 {}", lp.var_name(0))?;
        }
        let op = match rel {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        writeln!(w, " {op} {rhs}")?;
    }
    writeln!(w, "Bounds")?;
    for j in 0..lp.n_vars() {
        let (lo, up) = lp.bounds(j);
        let name = lp.var_name(j);
        match (lo.is_finite(), up.is_finite()) {
            (true, true) => writeln!(w, " {lo} <= {name} <= {up}")?,
            (true, false) => writeln!(w, " {name} >= {lo}")?,
            (false, true) => writeln!(w, " -inf <= {name} <= {up}")?,
            (false, false) => writeln!(w, " {name} free")?,
        }
    }
    let binaries: Vec<usize> = (0..lp.n_vars())
        .filter(|&j| lp.integrality(j) == Integrality::Binary)
        .collect();
    if !binaries.is_empty() {
        writeln!(w, "Binaries")?;
        for j in binaries {
            writeln!(w, " {}", lp.var_name(j))?;
        }
    }
    writeln!(w, "End")
}

fn write_term<W: Write>(w: &mut W, coeff: f64, name: &str, first: bool) -> io::Result<()> {
    if first {
        if coeff < 0.0 {
            write!(w, " -{} {name}", fmt_mag(coeff))
        } else {
            write!(w, " {} {name}", fmt_mag(coeff))
        }
    } else if coeff < 0.0 {
        write!(w, " - {} {name}", fmt_mag(coeff))
    } else {
        write!(w, " + {} {name}", fmt_mag(coeff))
    }
}

fn fmt_mag(v: f64) -> String {
    format!("{}", v.abs())
}

#[cfg(test)]
mod tests {
    use super::super::{LinearProgram, Relation};

    #[test]
    fn renders_objective_rows_and_bounds() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 2.0);
        lp.set_objective(1, -1.5);
        lp.set_bounds(0, 0.0, 1.0);
        lp.mark_binary(0);
        lp.add_row(&[(0, 1.0), (1, -3.0)], Relation::Le, 4.0);
        let mut buf = Vec::new();
        lp.write_lp_format(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Minimize"));
        assert!(text.contains("2 x0 - 1.5 x1"));
        assert!(text.contains("c0: 1 x0 - 3 x1 <= 4"));
        assert!(text.contains("Binaries"));
        assert!(text.ends_with("End\n"));
    }
}
