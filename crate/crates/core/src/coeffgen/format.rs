use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{Rational, SchemeTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(format!("unknown table format `{other}` (expected csv or text)")),
        }
    }
}

fn labelled_rows(t: &SchemeTables) -> Vec<(String, &[Rational])> {
    let mut rows: Vec<(String, &[Rational])> = vec![
        ("c_full".into(), &t.c_full),
        ("c_upwind_full".into(), &t.c_upwind_full),
    ];
    for (k, c) in t.c_sub.iter().enumerate() {
        rows.push((format!("c_sub[{k}]"), c));
    }
    rows.push(("d_central".into(), &t.d_central));
    rows.push(("d_upwind".into(), &t.d_upwind));
    if t.r >= 2 {
        for (k, b) in t.b.iter().enumerate() {
            let name = if k == t.r { "B_d".to_string() } else { format!("B_{k}") };
            for (i, row) in b.iter().enumerate() {
                rows.push((format!("{name}.row{}", i + 1), row));
            }
        }
    }
    rows.push(("c_tau".into(), &t.c_tau));
    rows.push(("c_tau_prime".into(), &t.c_tau_prime));
    rows
}

fn fraction(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// One row per vector or matrix row; first column is the label, entries
/// are exact `num/den` fractions.
pub fn write_csv<W: Write>(t: &SchemeTables, out: &mut W) -> io::Result<()> {
    for (label, row) in labelled_rows(t) {
        write!(out, "{label}")?;
        for x in row {
            write!(out, ",{}", fraction(x))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Human-readable dump with a common denominator pulled out of each row.
pub fn write_text<W: Write>(t: &SchemeTables, out: &mut W) -> io::Result<()> {
    writeln!(out, "# order {} central-upwind tables (r = {})", 2 * t.r, t.r)?;
    for (label, row) in labelled_rows(t) {
        let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums: Vec<String> = row
            .iter()
            .map(|x| (x.numer() * (&den / x.denom())).to_string())
            .collect();
        if den.is_one() {
            writeln!(out, "{label:<16} = ({})", nums.join(", "))?;
        } else {
            writeln!(out, "{label:<16} = 1/{den} * ({})", nums.join(", "))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffgen::tables;

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_csv(tables(3).unwrap(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("c_sub[3],11/6,-7/6,1/3\n"), "{s}");
        assert!(s.contains("B_d.row1,22/3,-73/6,29/6\n"));
        assert!(s.contains("c_tau,-1/1,5/1,-10/1,10/1,-5/1,1/1\n"));
    }

    #[test]
    fn text_factors_denominator() {
        let mut buf = Vec::new();
        write_text(tables(3).unwrap(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("c_full           = 1/60 * (1, -8, 37, 37, -8, 1)"), "{s}");
        assert!(s.contains("d_central        = 1/20 * (1, 9, 9, 1)"));
    }
}
