//! Deterministic text encodings of [`LpProblem`]: fixed-format MPS and a
//! human-readable LP format.
//!
//! Rows and columns are emitted in declaration order, and all number
//! rendering is locale-free, so identical problems produce byte-identical
//! files.

use std::fmt::Write as _;

use crate::lp::{LpProblem, Rel, Sense};

/// Formats a value for the 12-character MPS value field: fixed notation
/// with nine decimals in the common range, scientific outside it.
fn fmt_mps_value(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    let a = v.abs();
    if v == v.trunc() && a < 1e10 {
        format!("{v:.1}")
    } else if (1e-4..1e10).contains(&a) {
        format!("{v:.9}")
    } else {
        format!("{v:.6e}")
    }
}

/// Shortest round-trip rendering for the LP text format.
fn fmt_lp_value(v: f64) -> String {
    format!("{v}")
}

fn push_mps_line(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    // Classic field positions 2-3 / 5-12 / 15-22 / 25-36; long names push
    // later fields right, which free-format readers accept.
    let line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4}");
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Renders the problem in MPS form.  Minimization is the MPS default; a
/// maximizing problem carries an `OBJSENSE` section.
pub fn to_mps(prob: &LpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", prob.name());
    if prob.sense() == Sense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n");
    push_mps_line(&mut out, "N", "OBJ", "", "");
    for con in prob.constraints() {
        let kind = match con.rel {
            Rel::Le => "L",
            Rel::Eq => "E",
            Rel::Ge => "G",
        };
        push_mps_line(&mut out, kind, &con.name, "", "");
    }
    out.push_str("COLUMNS\n");
    for (j, var) in prob.variables().iter().enumerate() {
        if var.objective != 0.0 {
            push_mps_line(&mut out, "", &var.name, "OBJ", &fmt_mps_value(var.objective));
        }
        for con in prob.constraints() {
            for &(id, coeff) in &con.terms {
                if id.0 == j && coeff != 0.0 {
                    push_mps_line(&mut out, "", &var.name, &con.name, &fmt_mps_value(coeff));
                }
            }
        }
    }
    out.push_str("RHS\n");
    for con in prob.constraints() {
        if con.rhs != 0.0 {
            push_mps_line(&mut out, "", "RHS", &con.name, &fmt_mps_value(con.rhs));
        }
    }
    out.push_str("BOUNDS\n");
    for var in prob.variables() {
        let (lo, up) = (var.lower, var.upper);
        if lo == 0.0 && up == f64::INFINITY {
            continue; // MPS default
        }
        if lo == f64::NEG_INFINITY && up == f64::INFINITY {
            push_mps_line(&mut out, "FR", "BND", &var.name, "");
        } else if lo.is_finite() && up.is_finite() && lo == up {
            push_mps_line(&mut out, "FX", "BND", &var.name, &fmt_mps_value(lo));
        } else {
            if lo.is_finite() {
                if lo != 0.0 {
                    push_mps_line(&mut out, "LO", "BND", &var.name, &fmt_mps_value(lo));
                }
            } else {
                push_mps_line(&mut out, "MI", "BND", &var.name, "");
            }
            if up.is_finite() {
                push_mps_line(&mut out, "UP", "BND", &var.name, &fmt_mps_value(up));
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn push_terms(out: &mut String, terms: &[(String, f64)]) {
    for (k, (name, coeff)) in terms.iter().enumerate() {
        if k == 0 {
            if *coeff < 0.0 {
                let _ = write!(out, "- {} {}", fmt_lp_value(coeff.abs()), name);
            } else {
                let _ = write!(out, "{} {}", fmt_lp_value(*coeff), name);
            }
        } else if *coeff < 0.0 {
            let _ = write!(out, " - {} {}", fmt_lp_value(coeff.abs()), name);
        } else {
            let _ = write!(out, " + {} {}", fmt_lp_value(*coeff), name);
        }
    }
}

/// Renders the problem in a CPLEX-style LP text form.
pub fn to_lp_text(prob: &LpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ Problem {}", prob.name());
    out.push_str(match prob.sense() {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    let obj_terms: Vec<(String, f64)> = prob
        .variables()
        .iter()
        .filter(|v| v.objective != 0.0)
        .map(|v| (v.name.clone(), v.objective))
        .collect();
    out.push_str(" obj: ");
    if obj_terms.is_empty() {
        out.push('0');
    } else {
        push_terms(&mut out, &obj_terms);
    }
    out.push_str("\nSubject To\n");
    for con in prob.constraints() {
        let _ = write!(out, " {}: ", con.name);
        let terms: Vec<(String, f64)> = con
            .terms
            .iter()
            .filter(|&&(_, c)| c != 0.0)
            .map(|&(id, c)| (prob.variables()[id.0].name.clone(), c))
            .collect();
        push_terms(&mut out, &terms);
        let _ = writeln!(out, " {} {}", con.rel.symbol(), fmt_lp_value(con.rhs));
    }
    out.push_str("Bounds\n");
    for var in prob.variables() {
        let (lo, up) = (var.lower, var.upper);
        if lo == 0.0 && up == f64::INFINITY {
            continue;
        }
        if lo == f64::NEG_INFINITY && up == f64::INFINITY {
            let _ = writeln!(out, " {} free", var.name);
        } else if lo.is_finite() && up.is_finite() && lo == up {
            let _ = writeln!(out, " {} = {}", var.name, fmt_lp_value(lo));
        } else if lo.is_finite() && up.is_finite() {
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                fmt_lp_value(lo),
                var.name,
                fmt_lp_value(up)
            );
        } else if lo.is_finite() {
            let _ = writeln!(out, " {} >= {}", var.name, fmt_lp_value(lo));
        } else {
            let _ = writeln!(out, " -inf <= {} <= {}", var.name, fmt_lp_value(up));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{build_dual_lp, build_flow_lp, DualForm};
    use crate::types::Instance;

    #[test]
    fn lp_text_names_the_flow_rows() {
        let inst = Instance::new(vec![0.5], vec![1.0]).unwrap();
        let text = to_lp_text(&build_flow_lp(&inst));
        assert!(text.contains("Cap_1:"));
        assert!(text.contains("Cons_1:"));
        assert!(text.contains("Source:"));
        assert!(text.contains(" z_0 free"));
        assert!(text.starts_with("\\ Problem ff_n1\nMaximize\n obj: 1 y_1\n"));
    }

    #[test]
    fn mps_sections_in_order() {
        let inst = Instance::new(vec![0.5], vec![1.0]).unwrap();
        let mps = to_mps(&build_flow_lp(&inst));
        let positions: Vec<usize> = ["NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"]
            .iter()
            .map(|s| mps.find(s).unwrap_or_else(|| panic!("missing {s}")))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dual_p_row_count() {
        let inst = Instance::secretary(3).unwrap();
        let mps = to_mps(&build_dual_lp(&inst, DualForm::P));
        let rows_section: &str = &mps[mps.find("ROWS").unwrap()..mps.find("COLUMNS").unwrap()];
        let n_rows = rows_section
            .lines()
            .filter(|l| l.starts_with(" L ") || l.starts_with(" G ") || l.starts_with(" E "))
            .count();
        assert_eq!(n_rows, 2 * 3 + 1);
        assert!(!mps.contains("OBJSENSE")); // minimization is the default
    }

    #[test]
    fn exports_are_bit_exact() {
        let inst = Instance::secretary(5).unwrap();
        let prob = build_flow_lp(&inst);
        assert_eq!(to_mps(&prob), to_mps(&prob));
        assert_eq!(to_lp_text(&prob), to_lp_text(&prob));
    }

    #[test]
    fn mps_value_formats() {
        assert_eq!(fmt_mps_value(0.0), "0.0");
        assert_eq!(fmt_mps_value(2.0), "2.0");
        assert_eq!(fmt_mps_value(-1.0), "-1.0");
        assert_eq!(fmt_mps_value(0.5), "0.500000000");
        assert_eq!(fmt_mps_value(1e-30), "1.000000e-30");
    }
}
