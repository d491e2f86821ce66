//! CSV tables. Reals are written with 17 significant digits, which is enough
//! for every `f64` to read back to the same bits.

use std::io::{Read, Write};

use nabla_green::{CauchyFunction, GreensFunction, GridFunction};

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn point(a: f64, offset: i64) -> String {
    fmt_real(a + offset as f64)
}

pub fn write_monomial<W: Write>(out: W, a: f64, nu: f64, len: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["offset", "t", "H"])?;
    for m in 0..len as i64 {
        let h = nabla_green::taylor_monomial(m, nu);
        w.write_record([m.to_string(), point(a, m), fmt_real(h)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_solution<W: Write>(out: W, x: &GridFunction) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["offset", "t", "x"])?;
    for (k, v) in x.iter() {
        w.write_record([k.to_string(), point(x.base(), k), fmt_real(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Long format, one row per `(t, s)`.
pub fn write_cauchy<W: Write>(out: W, a: f64, cauchy: &CauchyFunction) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t_offset", "t", "s_offset", "s", "x"])?;
    for s in cauchy.s_range() {
        let col = cauchy.extended_column(s).expect("s in range");
        for (t, v) in col.iter() {
            w.write_record([t.to_string(), point(a, t), s.to_string(), point(a, s), fmt_real(v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Long format, one row per `(t, s)`, with the branch each value came from.
pub fn write_greens<W: Write>(out: W, g: &GreensFunction) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t_offset", "t", "s_offset", "s", "G", "branch"])?;
    for t in g.t_range() {
        for s in g.s_range() {
            let value = g.value(t, s).expect("in range");
            w.write_record([
                t.to_string(),
                point(g.a(), t),
                s.to_string(),
                point(g.a(), s),
                fmt_real(value),
                g.branch(t, s).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV with a header row into its column names and string rows.
pub fn read_table<R: Read>(input: R) -> csv::Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<csv::Result<_>>()?;
    Ok((header, rows))
}

/// Reads a solution table written by [`write_solution`] as `(offset, x)` pairs.
pub fn read_solution<R: Read>(input: R) -> Result<Vec<(i64, f64)>, String> {
    let (header, rows) = read_table(input).map_err(|e| e.to_string())?;
    if header != ["offset", "t", "x"] {
        return Err(format!("unexpected header {header:?}"));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let k = row[0].parse().map_err(|e| format!("row {}: {e}", i + 1))?;
            let x = row[2].parse().map_err(|e| format!("row {}: {e}", i + 1))?;
            Ok((k, x))
        })
        .collect()
}
