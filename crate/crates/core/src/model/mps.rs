//! MPS reading and writing.
//!
//! Accepts free-form (whitespace-separated) MPS with the sections NAME,
//! OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND markers), RHS, RANGES and
//! BOUNDS. Fixed-form files parse as well since fields are separated by
//! blanks. Parse errors carry the offending line number.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{MilpInstance, ModelError, Row, RowSense};

/// Values at or beyond this magnitude are treated as infinite bounds.
const MPS_INFINITY: f64 = 1e30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    Done,
}

struct ParseState {
    name: String,
    minimize: bool,
    obj_row: Option<String>,
    // row name -> index into rows
    row_index: HashMap<String, usize>,
    rows: Vec<Row>,
    // column name -> index
    col_index: HashMap<String, usize>,
    col_names: Vec<String>,
    objective: Vec<f64>,
    integrality: Vec<bool>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    // (row, col) pairs already seen, to reject duplicates
    seen_entries: HashMap<(usize, usize), ()>,
    seen_obj: HashMap<usize, ()>,
    rhs_seen: Vec<bool>,
    range_seen: Vec<bool>,
    in_integer_block: bool,
    saw_columns_entry: bool,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError::Parse { line, msg: msg.into() })
}

fn parse_value(tok: &str, line: usize) -> Result<f64, ModelError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_nan() => perr(line, format!("NaN value `{tok}`")),
        Ok(v) => Ok(v),
        Err(_) => perr(line, format!("expected a number, found `{tok}`")),
    }
}

/// Parse an MPS document into a [`MilpInstance`].
///
/// Variables without bound entries default to `0 <= x < +inf`; integrality
/// comes from INTORG/INTEND markers or BV bounds. A RANGES entry turns its
/// row into a two-sided pair of rows.
pub fn parse_mps(text: &str) -> Result<MilpInstance, ModelError> {
    let mut st = ParseState {
        name: String::new(),
        minimize: true,
        obj_row: None,
        row_index: HashMap::new(),
        rows: Vec::new(),
        col_index: HashMap::new(),
        col_names: Vec::new(),
        objective: Vec::new(),
        integrality: Vec::new(),
        lower: Vec::new(),
        upper: Vec::new(),
        seen_entries: HashMap::new(),
        seen_obj: HashMap::new(),
        rhs_seen: Vec::new(),
        range_seen: Vec::new(),
        in_integer_block: false,
        saw_columns_entry: false,
    };
    let mut section = Section::None;
    // Deferred range expansions: (row, range value, line).
    let mut ranges: Vec<(usize, f64, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        let starts_flush = !raw.starts_with(|c: char| c.is_whitespace());
        let fields: Vec<&str> = line.split_whitespace().collect();

        if starts_flush {
            // Section header line.
            let head = fields[0].to_ascii_uppercase();
            section = match head.as_str() {
                "NAME" => {
                    if let Some(tok) = fields.get(1) {
                        st.name = (*tok).to_string();
                    }
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(tok) = fields.get(1) {
                        st.minimize = parse_objsense(tok, lineno)?;
                        Section::Name // sense consumed inline
                    } else {
                        Section::ObjSense
                    }
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Done,
                other => return perr(lineno, format!("unknown section header `{other}`")),
            };
            continue;
        }

        match section {
            Section::None => return perr(lineno, "data before any section header"),
            Section::Name | Section::Done => {}
            Section::ObjSense => {
                st.minimize = parse_objsense(fields[0], lineno)?;
            }
            Section::Rows => parse_row_line(&mut st, &fields, lineno)?,
            Section::Columns => parse_column_line(&mut st, &fields, lineno)?,
            Section::Rhs => parse_rhs_line(&mut st, &fields, lineno)?,
            Section::Ranges => parse_ranges_line(&mut st, &mut ranges, &fields, lineno)?,
            Section::Bounds => parse_bounds_line(&mut st, &fields, lineno)?,
        }
    }

    if st.obj_row.is_none() {
        return perr(0, "no objective (N) row declared");
    }
    if !st.saw_columns_entry {
        return perr(0, "empty COLUMNS section");
    }

    apply_ranges(&mut st, &ranges)?;

    let inst = MilpInstance {
        name: st.name,
        objective: st.objective,
        var_names: st.col_names,
        rows: st.rows,
        lower: st.lower,
        upper: st.upper,
        integrality: st.integrality,
        minimize: st.minimize,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_objsense(tok: &str, line: usize) -> Result<bool, ModelError> {
    match tok.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" => Ok(true),
        "MAX" | "MAXIMIZE" => Ok(false),
        other => perr(line, format!("unknown objective sense `{other}`")),
    }
}

fn parse_row_line(st: &mut ParseState, fields: &[&str], line: usize) -> Result<(), ModelError> {
    if fields.len() != 2 {
        return perr(line, "ROWS entry must be `<type> <name>`");
    }
    let name = fields[1].to_string();
    let sense = match fields[0].to_ascii_uppercase().as_str() {
        "N" => {
            if st.obj_row.is_some() {
                return perr(line, format!("duplicate objective row `{name}`"));
            }
            st.obj_row = Some(name);
            return Ok(());
        }
        "L" => RowSense::Le,
        "G" => RowSense::Ge,
        "E" => RowSense::Eq,
        other => return perr(line, format!("unknown row type `{other}`")),
    };
    if st.row_index.contains_key(&name) || st.obj_row.as_deref() == Some(&name) {
        return perr(line, format!("duplicate row name `{name}`"));
    }
    st.row_index.insert(name.clone(), st.rows.len());
    st.rows.push(Row { name, coeffs: Vec::new(), sense, rhs: 0.0 });
    st.rhs_seen.push(false);
    st.range_seen.push(false);
    Ok(())
}

fn ensure_column(st: &mut ParseState, name: &str) -> usize {
    if let Some(&j) = st.col_index.get(name) {
        return j;
    }
    let j = st.col_names.len();
    st.col_index.insert(name.to_string(), j);
    st.col_names.push(name.to_string());
    st.objective.push(0.0);
    st.integrality.push(st.in_integer_block);
    st.lower.push(0.0);
    st.upper.push(f64::INFINITY);
    j
}

fn parse_column_line(st: &mut ParseState, fields: &[&str], line: usize) -> Result<(), ModelError> {
    // Marker lines toggle the integrality block.
    if fields.iter().any(|f| f.trim_matches('\'').eq_ignore_ascii_case("MARKER")) {
        if fields.iter().any(|f| f.trim_matches('\'').eq_ignore_ascii_case("INTORG")) {
            st.in_integer_block = true;
            return Ok(());
        }
        if fields.iter().any(|f| f.trim_matches('\'').eq_ignore_ascii_case("INTEND")) {
            st.in_integer_block = false;
            return Ok(());
        }
        return perr(line, "marker line without INTORG/INTEND");
    }
    if fields.len() < 3 || fields.len() % 2 == 0 {
        return perr(line, "COLUMNS entry must be `<col> (<row> <value>)+`");
    }
    let col = ensure_column(st, fields[0]);
    if st.in_integer_block {
        st.integrality[col] = true;
    }
    st.saw_columns_entry = true;
    for pair in fields[1..].chunks(2) {
        let row_name = pair[0];
        let value = parse_value(pair[1], line)?;
        if st.obj_row.as_deref() == Some(row_name) {
            if st.seen_obj.insert(col, ()).is_some() {
                return perr(line, format!("duplicate objective entry for column `{}`", fields[0]));
            }
            st.objective[col] = value;
        } else if let Some(&r) = st.row_index.get(row_name) {
            if st.seen_entries.insert((r, col), ()).is_some() {
                return perr(
                    line,
                    format!("duplicate entry for column `{}` in row `{row_name}`", fields[0]),
                );
            }
            if value != 0.0 {
                st.rows[r].coeffs.push((col, value));
            }
        } else {
            return perr(line, format!("unknown row `{row_name}`"));
        }
    }
    Ok(())
}

/// RHS and RANGES lines may or may not start with a set name; disambiguate
/// by field-count parity.
fn strip_set_name<'a>(fields: &'a [&'a str]) -> &'a [&'a str] {
    if fields.len() % 2 == 1 {
        &fields[1..]
    } else {
        fields
    }
}

fn parse_rhs_line(st: &mut ParseState, fields: &[&str], line: usize) -> Result<(), ModelError> {
    let pairs = strip_set_name(fields);
    if pairs.is_empty() {
        return perr(line, "empty RHS entry");
    }
    for pair in pairs.chunks(2) {
        let row_name = pair[0];
        let value = parse_value(pair[1], line)?;
        if st.obj_row.as_deref() == Some(row_name) {
            // Objective-row RHS (a constant offset) is not represented.
            continue;
        }
        let Some(&r) = st.row_index.get(row_name) else {
            return perr(line, format!("unknown row `{row_name}`"));
        };
        if st.rhs_seen[r] {
            return perr(line, format!("duplicate RHS entry for row `{row_name}`"));
        }
        st.rhs_seen[r] = true;
        st.rows[r].rhs = value;
    }
    Ok(())
}

fn parse_ranges_line(
    st: &mut ParseState,
    ranges: &mut Vec<(usize, f64, usize)>,
    fields: &[&str],
    line: usize,
) -> Result<(), ModelError> {
    let pairs = strip_set_name(fields);
    if pairs.is_empty() {
        return perr(line, "empty RANGES entry");
    }
    for pair in pairs.chunks(2) {
        let row_name = pair[0];
        let value = parse_value(pair[1], line)?;
        let Some(&r) = st.row_index.get(row_name) else {
            return perr(line, format!("unknown row `{row_name}`"));
        };
        if st.range_seen[r] {
            return perr(line, format!("duplicate RANGES entry for row `{row_name}`"));
        }
        st.range_seen[r] = true;
        ranges.push((r, value, line));
    }
    Ok(())
}

/// Expand each ranged row into a two-sided pair. An LE row with rhs `b` and
/// range `r` becomes the LE row `b` plus a GE partner at `b - |r|`; GE and EQ
/// rows follow the usual MPS conventions.
fn apply_ranges(st: &mut ParseState, ranges: &[(usize, f64, usize)]) -> Result<(), ModelError> {
    for &(r, range, _line) in ranges {
        if range == 0.0 {
            continue;
        }
        let (partner_sense, partner_rhs, own_sense) = {
            let row = &st.rows[r];
            match row.sense {
                RowSense::Le => (RowSense::Ge, row.rhs - range.abs(), RowSense::Le),
                RowSense::Ge => (RowSense::Le, row.rhs + range.abs(), RowSense::Ge),
                RowSense::Eq => {
                    if range > 0.0 {
                        (RowSense::Le, row.rhs + range, RowSense::Ge)
                    } else {
                        (RowSense::Ge, row.rhs + range, RowSense::Le)
                    }
                }
            }
        };
        st.rows[r].sense = own_sense;
        let partner = Row {
            name: format!("{}__rng", st.rows[r].name),
            coeffs: st.rows[r].coeffs.clone(),
            sense: partner_sense,
            rhs: partner_rhs,
        };
        st.rows.push(partner);
    }
    Ok(())
}

fn parse_bounds_line(st: &mut ParseState, fields: &[&str], line: usize) -> Result<(), ModelError> {
    if fields.len() < 2 {
        return perr(line, "truncated BOUNDS entry");
    }
    let kind = fields[0].to_ascii_uppercase();
    let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX" | "UI" | "LI");
    // With a value: `<kind> [set] <col> <value>`; without: `<kind> [set] <col>`.
    let (col_tok, val_tok) = if needs_value {
        match fields.len() {
            4 => (fields[2], Some(fields[3])),
            3 => (fields[1], Some(fields[2])),
            _ => return perr(line, "BOUNDS entry must be `<type> [set] <col> <value>`"),
        }
    } else {
        match fields.len() {
            3 => (fields[2], None),
            2 => (fields[1], None),
            _ => return perr(line, "BOUNDS entry must be `<type> [set] <col>`"),
        }
    };
    let Some(&j) = st.col_index.get(col_tok) else {
        return perr(line, format!("unknown column `{col_tok}`"));
    };
    let value = match val_tok {
        Some(t) => {
            let v = parse_value(t, line)?;
            if v >= MPS_INFINITY {
                f64::INFINITY
            } else if v <= -MPS_INFINITY {
                f64::NEG_INFINITY
            } else {
                v
            }
        }
        None => 0.0,
    };
    match kind.as_str() {
        "UP" | "UI" => st.upper[j] = value,
        "LO" | "LI" => st.lower[j] = value,
        "FX" => {
            st.lower[j] = value;
            st.upper[j] = value;
        }
        "FR" => {
            st.lower[j] = f64::NEG_INFINITY;
            st.upper[j] = f64::INFINITY;
        }
        "MI" => st.lower[j] = f64::NEG_INFINITY,
        "PL" => st.upper[j] = f64::INFINITY,
        "BV" => {
            st.lower[j] = 0.0;
            st.upper[j] = 1.0;
            st.integrality[j] = true;
        }
        other => return perr(line, format!("unknown bound type `{other}`")),
    }
    Ok(())
}

/// Serialize an instance as free-form MPS. Parsing the output reproduces the
/// instance field by field.
pub fn write_mps(inst: &MilpInstance) -> String {
    let mut out = String::new();
    let name = if inst.name.is_empty() { "UNNAMED" } else { &inst.name };
    writeln!(out, "NAME {}", name.replace(char::is_whitespace, "_")).unwrap();
    if !inst.minimize {
        writeln!(out, "OBJSENSE\n    MAX").unwrap();
    }
    writeln!(out, "ROWS").unwrap();
    writeln!(out, " N  OBJ").unwrap();
    for row in &inst.rows {
        writeln!(out, " {}  {}", row.sense.mps_code(), row.name).unwrap();
    }

    // COLUMNS is column-major: gather per-variable row entries.
    let n = inst.num_vars();
    let mut col_entries: Vec<Vec<(&str, f64)>> = vec![Vec::new(); n];
    for row in &inst.rows {
        for &(j, v) in &row.coeffs {
            col_entries[j].push((&row.name, v));
        }
    }
    writeln!(out, "COLUMNS").unwrap();
    let mut in_int = false;
    let mut marker_id = 0usize;
    for j in 0..n {
        if inst.integrality[j] != in_int {
            let tag = if inst.integrality[j] { "INTORG" } else { "INTEND" };
            writeln!(out, "    M{}  'MARKER'  '{}'", marker_id, tag).unwrap();
            marker_id += 1;
            in_int = inst.integrality[j];
        }
        let mut wrote_any = false;
        if inst.objective[j] != 0.0 {
            writeln!(out, "    {}  OBJ  {}", inst.var_names[j], inst.objective[j]).unwrap();
            wrote_any = true;
        }
        for &(row_name, v) in &col_entries[j] {
            writeln!(out, "    {}  {}  {}", inst.var_names[j], row_name, v).unwrap();
            wrote_any = true;
        }
        if !wrote_any {
            // Declare the column so bound entries can refer to it.
            writeln!(out, "    {}  OBJ  0", inst.var_names[j]).unwrap();
        }
    }
    if in_int {
        writeln!(out, "    M{}  'MARKER'  'INTEND'", marker_id).unwrap();
    }

    writeln!(out, "RHS").unwrap();
    for row in &inst.rows {
        if row.rhs != 0.0 {
            writeln!(out, "    RHS  {}  {}", row.name, row.rhs).unwrap();
        }
    }

    let mut bounds = String::new();
    for j in 0..n {
        let (l, u) = (inst.lower[j], inst.upper[j]);
        let name = &inst.var_names[j];
        if l == 0.0 && u == f64::INFINITY {
            continue;
        }
        if l == u {
            writeln!(bounds, " FX BND  {}  {}", name, l).unwrap();
            continue;
        }
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            writeln!(bounds, " FR BND  {}", name).unwrap();
            continue;
        }
        if l == f64::NEG_INFINITY {
            writeln!(bounds, " MI BND  {}", name).unwrap();
        } else if l != 0.0 {
            writeln!(bounds, " LO BND  {}  {}", name, l).unwrap();
        }
        if u != f64::INFINITY {
            writeln!(bounds, " UP BND  {}  {}", name, u).unwrap();
        }
    }
    if !bounds.is_empty() {
        writeln!(out, "BOUNDS").unwrap();
        out.push_str(&bounds);
    }
    writeln!(out, "ENDATA").unwrap();
    out
}
