//! CSV text formats.
//!
//! Grid function: header `n_r,n_theta`, rows `j,k,re,im`; rows with
//! `j = n_r` carry the boundary trace. Boundary function: header `n_theta`,
//! rows `k,re,im`. Point list: rows `re,im`.

use std::io::{Read, Write};
use std::sync::Arc;

use super::grid::{BoundaryFunction, DiscGrid, GridFunction};
use crate::error::{Error, Result};
use crate::linalg::C64;

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).flexible(true).from_reader(r)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(true).from_writer(w)
}

fn record_err(rec: &csv::StringRecord, field: usize, message: impl Into<String>) -> Error {
    let pos = rec.position();
    Error::Parse { line: pos.map_or(0, |p| p.line() as usize), column: field + 1, message: message.into() }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { line, column: 0, message: e.to_string() }
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, what: &str) -> Result<T> {
    rec.get(i)
        .ok_or_else(|| record_err(rec, i, format!("missing {what}")))?
        .parse()
        .map_err(|_| record_err(rec, i, format!("bad {what} '{}'", &rec[i])))
}

fn records<R: Read>(r: R) -> Result<Vec<csv::StringRecord>> {
    reader(r).records().map(|r| r.map_err(csv_err)).collect()
}

pub fn write_grid_function<W: Write>(u: &GridFunction, out: W) -> Result<()> {
    let mut w = writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    let g = &u.grid;
    w.write_record([g.n_r().to_string(), g.n_theta().to_string()]).map_err(io)?;
    for j in 0..g.n_r() {
        for k in 0..g.n_theta() {
            let v = u.at(j, k);
            w.write_record([j.to_string(), k.to_string(), v.re.to_string(), v.im.to_string()]).map_err(io)?;
        }
    }
    if let Some(b) = &u.boundary {
        for (k, v) in b.iter().enumerate() {
            w.write_record([g.n_r().to_string(), k.to_string(), v.re.to_string(), v.im.to_string()]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn read_grid_function<R: Read>(input: R) -> Result<GridFunction> {
    let recs = records(input)?;
    let head = recs.first().ok_or_else(|| Error::Parse { line: 1, column: 1, message: "empty file".into() })?;
    let n_r: usize = field(head, 0, "n_r")?;
    let n_theta: usize = field(head, 1, "n_theta")?;
    let grid: Arc<DiscGrid> = DiscGrid::new(n_r, n_theta)?;
    let mut values = vec![None; grid.len()];
    let mut boundary = vec![None; n_theta];
    for rec in &recs[1..] {
        let j: usize = field(rec, 0, "j")?;
        let k: usize = field(rec, 1, "k")?;
        let v = C64::new(field(rec, 2, "re")?, field(rec, 3, "im")?);
        if k >= n_theta || j > n_r {
            return Err(record_err(rec, 0, format!("index ({j},{k}) outside {n_r}x{n_theta}")));
        }
        if j == n_r {
            boundary[k] = Some(v);
        } else {
            values[grid.index(j, k)] = Some(v);
        }
    }
    let values: Option<Vec<C64>> = values.into_iter().collect();
    let values = values.ok_or_else(|| Error::Parse { line: 0, column: 0, message: "missing node rows".into() })?;
    let mut u = GridFunction::new(grid, values)?;
    if boundary.iter().all(Option::is_some) {
        u.boundary = Some(boundary.into_iter().flatten().collect());
    }
    Ok(u)
}

pub fn write_boundary<W: Write>(phi: &BoundaryFunction, out: W) -> Result<()> {
    let mut w = writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record([phi.len().to_string()]).map_err(io)?;
    for (k, v) in phi.values.iter().enumerate() {
        w.write_record([k.to_string(), v.re.to_string(), v.im.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn read_boundary<R: Read>(input: R) -> Result<BoundaryFunction> {
    let recs = records(input)?;
    let head = recs.first().ok_or_else(|| Error::Parse { line: 1, column: 1, message: "empty file".into() })?;
    let n: usize = field(head, 0, "n_theta")?;
    let mut values = vec![None; n];
    for rec in &recs[1..] {
        let k: usize = field(rec, 0, "k")?;
        if k >= n {
            return Err(record_err(rec, 0, format!("index {k} outside 0..{n}")));
        }
        let im: f64 = if rec.len() > 2 { field(rec, 2, "im")? } else { 0.0 };
        values[k] = Some(C64::new(field(rec, 1, "re")?, im));
    }
    let values: Option<Vec<C64>> = values.into_iter().collect();
    let values = values.ok_or_else(|| Error::Parse { line: 0, column: 0, message: "missing boundary samples".into() })?;
    let real = values.iter().all(|c| c.im == 0.0);
    Ok(BoundaryFunction { values, real })
}

pub fn read_points<R: Read>(input: R) -> Result<Vec<C64>> {
    records(input)?
        .iter()
        .map(|rec| Ok(C64::new(field(rec, 0, "re")?, if rec.len() > 1 { field(rec, 1, "im")? } else { 0.0 })))
        .collect()
}

pub fn write_points<W: Write>(points: &[C64], values: &[C64], out: W) -> Result<()> {
    let mut w = writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    for (z, v) in points.iter().zip(values) {
        w.write_record([z.re.to_string(), z.im.to_string(), v.re.to_string(), v.im.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Vector-valued grid samples: header `n,n_r,n_theta`, rows
/// `j,k,re_1,im_1,…,re_n,im_n`.
pub fn write_vector_grid<W: Write>(grid: &DiscGrid, components: &[&[C64]], boundary: Option<&[&[C64]]>, out: W) -> Result<()> {
    let mut w = writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    let n = components.len();
    w.write_record([n.to_string(), grid.n_r().to_string(), grid.n_theta().to_string()]).map_err(io)?;
    let row = |j: usize, k: usize, vals: Vec<C64>| {
        let mut r = vec![j.to_string(), k.to_string()];
        for v in vals {
            r.push(v.re.to_string());
            r.push(v.im.to_string());
        }
        r
    };
    for j in 0..grid.n_r() {
        for k in 0..grid.n_theta() {
            let i = grid.index(j, k);
            w.write_record(row(j, k, components.iter().map(|c| c[i]).collect())).map_err(io)?;
        }
    }
    if let Some(b) = boundary {
        for k in 0..grid.n_theta() {
            w.write_record(row(grid.n_r(), k, b.iter().map(|c| c[k]).collect())).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Inverse of [`write_vector_grid`]: per-component node values and the
/// boundary traces when all boundary rows are present.
pub type VectorGrid = (Arc<DiscGrid>, Vec<Vec<C64>>, Option<Vec<Vec<C64>>>);

pub fn read_vector_grid<R: Read>(input: R) -> Result<VectorGrid> {
    let recs = records(input)?;
    let head = recs.first().ok_or_else(|| Error::Parse { line: 1, column: 1, message: "empty file".into() })?;
    let n: usize = field(head, 0, "n")?;
    let n_r: usize = field(head, 1, "n_r")?;
    let n_theta: usize = field(head, 2, "n_theta")?;
    let grid = DiscGrid::new(n_r, n_theta)?;
    let mut comps = vec![vec![C64::new(f64::NAN, 0.0); grid.len()]; n];
    let mut bnd = vec![vec![C64::new(f64::NAN, 0.0); n_theta]; n];
    let mut have_boundary = 0;
    for rec in &recs[1..] {
        let j: usize = field(rec, 0, "j")?;
        let k: usize = field(rec, 1, "k")?;
        if k >= n_theta || j > n_r {
            return Err(record_err(rec, 0, format!("index ({j},{k}) outside {n_r}x{n_theta}")));
        }
        for c in 0..n {
            let v = C64::new(field(rec, 2 + 2 * c, "re")?, field(rec, 3 + 2 * c, "im")?);
            if j == n_r {
                bnd[c][k] = v;
            } else {
                comps[c][grid.index(j, k)] = v;
            }
        }
        if j == n_r {
            have_boundary += 1;
        }
    }
    if comps.iter().flatten().any(|v| v.re.is_nan()) {
        return Err(Error::Parse { line: 0, column: 0, message: "missing node rows".into() });
    }
    let boundary = (have_boundary == n_theta).then_some(bnd);
    Ok((grid, comps, boundary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_function_round_trip() {
        let g = DiscGrid::new(4, 8).unwrap();
        let u = GridFunction::from_fn(&g, |z| z * z + C64::new(0.1, -1.0 / 3.0));
        let mut buf = Vec::new();
        write_grid_function(&u, &mut buf).unwrap();
        let v = read_grid_function(buf.as_slice()).unwrap();
        assert_eq!(u, v);
    }

    #[test]
    fn boundary_round_trip_and_errors() {
        let phi = BoundaryFunction::cutoff(16);
        let mut buf = Vec::new();
        write_boundary(&phi, &mut buf).unwrap();
        assert_eq!(read_boundary(buf.as_slice()).unwrap(), phi);
        let bad = "4\n0,0.0\n1,zz\n";
        match read_boundary(bad.as_bytes()) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("{other:?}"),
        }
    }
}
