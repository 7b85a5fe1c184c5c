use std::collections::BTreeSet;
use std::fmt::Write;

use crate::term::Term;

const BASE_NAMES: [&str; 6] = ["y", "x", "z", "u", "v", "w"];

fn canonical_name(depth: usize, avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i: usize| {
            let base = BASE_NAMES[i % BASE_NAMES.len()];
            match i / BASE_NAMES.len() {
                0 => base.to_string(),
                k => format!("{base}{k}"),
            }
        })
        .filter(|n| !avoid.contains(n))
        .nth(depth)
        .expect("infinite name supply")
}

fn write_term(t: &Term, names: &mut Vec<String>, avoid: &BTreeSet<String>, out: &mut String) {
    match t {
        Term::Const(c) => {
            if c.primary {
                out.push('^');
            }
            out.push_str(&c.name);
        }
        Term::Free(v) => out.push_str(&v.name),
        Term::Bound(i) => match names.len().checked_sub(i + 1) {
            Some(k) => out.push_str(&names[k]),
            None => {
                let _ = write!(out, "#{i}");
            }
        },
        Term::Abs(b, body) => {
            let name = canonical_name(names.len(), avoid);
            let _ = write!(out, "lam {name}:{}. ", b.ty);
            names.push(name);
            write_term(body, names, avoid, out);
            names.pop();
        }
        Term::App(..) => {
            let (head, args) = t.head_args();
            if head.is_abs() {
                out.push('(');
                write_term(head, names, avoid, out);
                out.push(')');
            } else {
                write_term(head, names, avoid, out);
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(a, names, avoid, out);
            }
            out.push(')');
        }
    }
}

/// Prints a term in the surface syntax. Bound variables get canonical names
/// by binder depth (`y`, `x`, `z`, `u`, ...), skipping names of constants
/// and free variables that occur in the term.
pub fn format_term(t: &Term) -> String {
    let mut avoid = BTreeSet::new();
    t.symbol_names(&mut avoid);
    let mut out = String::new();
    write_term(t, &mut Vec::new(), &avoid, &mut out);
    out
}
